# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-step lattice kernels.

Mirror of ``_fallback``; arithmetic order is kept identical so both backends
produce bit-identical trajectories.  Build without -ffast-math / FMA contraction.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef int DI[8]
cdef int DJ[8]
cdef double KW[8]
DI[:] = [-1, -1, -1, 0, 0, 1, 1, 1]
DJ[:] = [-1, 0, 1, -1, 1, -1, 0, 1]
KW[:] = [1.0, 4.0, 1.0, 4.0, 4.0, 1.0, 4.0, 1.0]


def diffuse(const double[:, ::1] sd, mask, valid, const double[:, ::1] cw):
    cdef const cnp.uint8_t[:, ::1] m = np.ascontiguousarray(mask, dtype=bool).view(np.uint8)
    cdef const cnp.uint8_t[:, :, ::1] v = np.ascontiguousarray(valid, dtype=bool).view(np.uint8)
    cdef Py_ssize_t h = sd.shape[0], w = sd.shape[1], i, j
    cdef int k
    cdef double acc
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(h):
        for j in range(w):
            if not m[i, j]:
                continue
            acc = cw[i, j] * sd[i, j]
            for k in range(8):
                if v[k, i, j]:
                    acc = acc + KW[k] * sd[i + DI[k], j + DJ[k]]
                else:
                    acc = acc + 0.0
            out[i, j] = acc / 36.0
    return out_arr


def sample_actions(const double[:, :, ::1] pv, const double[:, ::1] u):
    cdef Py_ssize_t h = u.shape[0], w = u.shape[1], i, j
    cdef int kk
    cdef double c
    k_arr = np.full((h, w), 7, dtype=np.int8)
    cdef cnp.int8_t[:, ::1] ks = k_arr
    for i in range(h):
        for j in range(w):
            c = 0.0
            for kk in range(8):
                c = c + pv[i, j, kk]
                if u[i, j] < c:
                    ks[i, j] = kk
                    break
    return k_arr


def transfer(const double[:, ::1] mass, const double[:, :, ::1] pv, mask, valid,
             const double[:, ::1] u, double fraction, double threshold):
    cdef const cnp.uint8_t[:, ::1] m = np.ascontiguousarray(mask, dtype=bool).view(np.uint8)
    cdef const cnp.uint8_t[:, :, ::1] v = np.ascontiguousarray(valid, dtype=bool).view(np.uint8)
    cdef Py_ssize_t h = mass.shape[0], w = mass.shape[1], i, j, di, dj
    cdef int k, kk
    cdef double dm, acc, x

    k_arr = sample_actions(pv, u)
    cdef cnp.int8_t[:, ::1] ks = k_arr
    dir_arr = np.full((h, w), -1, dtype=np.int8)
    cdef cnp.int8_t[:, ::1] dr = dir_arr
    req_arr = np.zeros((h, w))
    scale_arr = np.ones((h, w))
    amt_arr = np.zeros((h, w))
    new_arr = np.zeros((h, w))
    cdef double[:, ::1] req = req_arr
    cdef double[:, ::1] scale = scale_arr
    cdef double[:, ::1] amt = amt_arr
    cdef double[:, ::1] new = new_arr

    # phase 1: requests
    for i in range(h):
        for j in range(w):
            k = ks[i, j]
            if not v[k, i, j]:
                continue
            dm = mass[i + DI[k], j + DJ[k]]
            if dm >= threshold and dm > 0.0:
                req[i, j] = fraction * dm
                dr[i, j] = k

    # phase 2: proportional scaling per donor
    for i in range(h):
        for j in range(w):
            acc = 0.0
            for kk in range(8):
                di = i - DI[kk]
                dj = j - DJ[kk]
                if 0 <= di < h and 0 <= dj < w and dr[di, dj] == kk:
                    acc = acc + req[di, dj]
                else:
                    acc = acc + 0.0
            if acc > mass[i, j]:
                scale[i, j] = mass[i, j] / acc

    for i in range(h):
        for j in range(w):
            k = dr[i, j]
            if k >= 0:
                amt[i, j] = req[i, j] * scale[i + DI[k], j + DJ[k]]

    for i in range(h):
        for j in range(w):
            if not m[i, j]:
                continue
            acc = 0.0
            for kk in range(8):
                di = i - DI[kk]
                dj = j - DJ[kk]
                if 0 <= di < h and 0 <= dj < w and dr[di, dj] == kk:
                    acc = acc + amt[di, dj]
                else:
                    acc = acc + 0.0
            x = (mass[i, j] - acc) + amt[i, j]
            new[i, j] = x if x > 0.0 else 0.0
    return new_arr, dir_arr


cdef inline void _clamp(double* p, double cap) noexcept nogil:
    cdef int kk, idx = 0
    cdef double top = p[0], s = 0.0, excess
    for kk in range(1, 8):
        if p[kk] > top:
            top = p[kk]
            idx = kk
    if not top > cap:
        return
    excess = top - cap
    for kk in range(8):
        if kk != idx:
            s = s + p[kk]
        else:
            s = s + 0.0
    for kk in range(8):
        if kk == idx:
            continue
        if s > 0.0:
            p[kk] = p[kk] + excess * p[kk] / s
        else:
            p[kk] = p[kk] + excess / 7.0
    p[idx] = cap


cdef inline void _reward(double* p, int k, double r) noexcept nogil:
    cdef int kk
    for kk in range(8):
        if kk == k:
            p[kk] = p[kk] + r * (1.0 - p[kk])
        else:
            p[kk] = (1.0 - r) * p[kk]


cdef inline void _penalty(double* p, int k, double q) noexcept nogil:
    cdef int kk
    for kk in range(8):
        if kk == k:
            p[kk] = (1.0 - q) * p[kk]
        else:
            p[kk] = q / 7.0 + (1.0 - q) * p[kk]


def clamp_rows(pv, double cap):
    cdef double[:, ::1] a = np.array(pv, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n
    for n in range(a.shape[0]):
        _clamp(&a[n, 0], cap)
    return np.asarray(a)


def apply_flags(double[:, :, ::1] pv, cnp.int8_t[:, ::1] direction,
                cnp.int8_t[:, ::1] rf_smell, cnp.int8_t[:, ::1] rf_wave,
                double reward_smell, double penalty_smell,
                double reward_wave, double penalty_wave, double cap):
    cdef Py_ssize_t h = pv.shape[0], w = pv.shape[1], i, j
    cdef int k
    cdef double* p
    for i in range(h):
        for j in range(w):
            k = direction[i, j]
            if k < 0 or (rf_smell[i, j] == 0 and rf_wave[i, j] == 0):
                continue
            p = &pv[i, j, 0]
            if rf_smell[i, j] > 0:
                _reward(p, k, reward_smell)
            elif rf_smell[i, j] < 0:
                _penalty(p, k, penalty_smell)
            if rf_wave[i, j] > 0:
                _reward(p, k, reward_wave)
            elif rf_wave[i, j] < 0:
                _penalty(p, k, penalty_wave)
            _clamp(p, cap)


def compute_flags(const double[:, ::1] mass, const double[:, ::1] sd, wave,
                  const cnp.int8_t[:, ::1] direction, double mass_threshold,
                  double smell_threshold, long sentinel):
    cdef Py_ssize_t h = mass.shape[0], w = mass.shape[1], i, j, ai, aj
    cdef int k
    cdef bint has_wave = wave is not None
    cdef const cnp.int64_t[:, ::1] wv
    if has_wave:
        wv = np.ascontiguousarray(wave, dtype=np.int64)
    rs_arr = np.zeros((h, w), dtype=np.int8)
    rw_arr = np.zeros((h, w), dtype=np.int8)
    cdef cnp.int8_t[:, ::1] rs = rs_arr
    cdef cnp.int8_t[:, ::1] rw = rw_arr
    for i in range(h):
        for j in range(w):
            k = direction[i, j]
            if k < 0 or not mass[i, j] >= mass_threshold:
                continue
            ai = i + DI[k]
            aj = j + DJ[k]
            if sd[i, j] >= smell_threshold:
                if sd[i, j] > sd[ai, aj]:
                    rs[i, j] = 1
                elif sd[i, j] < sd[ai, aj]:
                    rs[i, j] = -1
            if has_wave and wv[i, j] != sentinel and wv[ai, aj] != sentinel:
                if wv[i, j] > wv[ai, aj]:
                    rw[i, j] = 1
                elif wv[i, j] < wv[ai, aj]:
                    rw[i, j] = -1
    return rs_arr, rw_arr
