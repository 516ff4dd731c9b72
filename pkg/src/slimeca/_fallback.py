"""Pure numpy implementations of the per-step lattice kernels.

Every kernel here has a compiled twin in ``_kernels.pyx``.  The two must stay
bit-identical: same arithmetic, same accumulation order (neighbour index 0..7,
centre term first).  Adding ``0.0`` for an invalid neighbour is exact, which is
what lets the vectorised code mirror the scalar loops.
"""

import numpy as np

OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
KERNEL_WEIGHTS = (1.0, 4.0, 1.0, 4.0, 4.0, 1.0, 4.0, 1.0)
CENTRE_WEIGHT = 16.0


def _shift(a, di, dj, fill):
    """Return b with b[i, j] = a[i + di, j + dj], ``fill`` outside the array."""
    h, w = a.shape
    out = np.full_like(a, fill)
    src_i = slice(max(di, 0), h + min(di, 0))
    dst_i = slice(max(-di, 0), h + min(-di, 0))
    src_j = slice(max(dj, 0), w + min(dj, 0))
    dst_j = slice(max(-dj, 0), w + min(-dj, 0))
    out[dst_i, dst_j] = a[src_i, src_j]
    return out


def neighbour_validity(mask):
    """(8, H, W) bool: cell and its neighbour k are both accessible and in bounds."""
    mask = np.asarray(mask, dtype=bool)
    valid = np.empty((8,) + mask.shape, dtype=bool)
    for k, (di, dj) in enumerate(OFFSETS):
        valid[k] = mask & _shift(mask, di, dj, False)
    return valid


def centre_weights(valid):
    """Centre kernel weight with blocked neighbour weights folded in."""
    cw = np.full(valid.shape[1:], CENTRE_WEIGHT)
    for k in range(8):
        cw += np.where(valid[k], 0.0, KERNEL_WEIGHTS[k])
    return cw


def diffuse(sd, mask, valid, cw):
    acc = cw * sd
    for k, (di, dj) in enumerate(OFFSETS):
        nb = _shift(sd, di, dj, 0.0)
        acc = acc + np.where(valid[k], KERNEL_WEIGHTS[k] * nb, 0.0)
    out = acc / 36.0
    out[~mask] = 0.0
    return out


def sample_actions(pv, u):
    """Inverse-CDF draw of one action per cell; sequential cumulative sum."""
    c = np.zeros(u.shape)
    k = np.full(u.shape, 7, dtype=np.int8)
    found = np.zeros(u.shape, dtype=bool)
    for kk in range(8):
        c = c + pv[:, :, kk]
        hit = ~found & (u < c)
        k[hit] = kk
        found |= hit
    return k


def transfer(mass, pv, mask, valid, u, fraction, threshold):
    """Two-phase synchronous mass transfer.

    Returns ``(new_mass, dir)`` where ``dir`` holds the sampled action of every
    cell that received mass this step and -1 elsewhere.
    """
    k = sample_actions(pv, u)
    req = np.zeros_like(mass)
    donor_ok = np.zeros(mass.shape, dtype=bool)
    for kk, (di, dj) in enumerate(OFFSETS):
        chose = (k == kk) & valid[kk]
        dm = _shift(mass, di, dj, 0.0)
        ok = chose & (dm >= threshold) & (dm > 0.0)
        req = np.where(ok, fraction * dm, req)
        donor_ok |= ok
    req = np.where(donor_ok, req, 0.0)

    # requested outflow per donor: receiver at n - off(k) that chose k
    out_req = np.zeros_like(mass)
    for kk, (di, dj) in enumerate(OFFSETS):
        contrib = np.where(donor_ok & (k == kk), req, 0.0)
        out_req = out_req + _shift(contrib, -di, -dj, 0.0)
    over = out_req > mass
    scale = np.where(over, mass / np.where(over, out_req, 1.0), 1.0)

    amt = np.zeros_like(mass)
    for kk, (di, dj) in enumerate(OFFSETS):
        sel = donor_ok & (k == kk)
        amt = np.where(sel, req * _shift(scale, di, dj, 1.0), amt)

    out = np.zeros_like(mass)
    for kk, (di, dj) in enumerate(OFFSETS):
        contrib = np.where(donor_ok & (k == kk), amt, 0.0)
        out = out + _shift(contrib, -di, -dj, 0.0)

    new = np.maximum((mass - out) + amt, 0.0)
    new[~mask] = 0.0
    direction = np.where(donor_ok, k, -1).astype(np.int8)
    return new, direction


def _reward(pv, onehot, r):
    return np.where(onehot, pv + r * (1.0 - pv), (1.0 - r) * pv)


def _penalty(pv, onehot, p):
    return np.where(onehot, (1.0 - p) * pv, p / 7.0 + (1.0 - p) * pv)


def clamp_rows(pv, cap):
    """Clamp every row of an (N, 8) array so its maximum is at most ``cap``."""
    pv = pv.copy()
    idx = np.argmax(pv, axis=1)
    rows = np.arange(pv.shape[0])
    top = pv[rows, idx]
    hot = top > cap
    if not hot.any():
        return pv
    sub = pv[hot]
    sidx = idx[hot]
    srows = np.arange(sub.shape[0])
    stop = top[hot]
    excess = stop - cap
    others = np.ones(sub.shape, dtype=bool)
    others[srows, sidx] = False
    s = np.zeros(sub.shape[0])
    for kk in range(8):
        s = s + np.where(others[:, kk], sub[:, kk], 0.0)
    pos = s > 0.0
    safe_s = np.where(pos, s, 1.0)
    spread = np.where(
        pos[:, None],
        sub + excess[:, None] * sub / safe_s[:, None],
        sub + excess[:, None] / 7.0,
    )
    sub = np.where(others, spread, sub)
    sub[srows, sidx] = cap
    pv[hot] = sub
    return pv


def apply_flags(pv, direction, rf_smell, rf_wave, reward_smell, penalty_smell,
                reward_wave, penalty_wave, cap):
    """Apply pending reward/penalty flags in place (smell first, then wave)."""
    flagged = (direction >= 0) & ((rf_smell != 0) | (rf_wave != 0))
    if not flagged.any():
        return
    sub = pv[flagged]
    d = direction[flagged].astype(np.intp)
    onehot = np.zeros(sub.shape, dtype=bool)
    onehot[np.arange(sub.shape[0]), d] = True
    fs = rf_smell[flagged][:, None]
    fw = rf_wave[flagged][:, None]
    sub = np.where(fs > 0, _reward(sub, onehot, reward_smell), sub)
    sub = np.where(fs < 0, _penalty(sub, onehot, penalty_smell), sub)
    sub = np.where(fw > 0, _reward(sub, onehot, reward_wave), sub)
    sub = np.where(fw < 0, _penalty(sub, onehot, penalty_wave), sub)
    pv[flagged] = clamp_rows(sub, cap)


def compute_flags(mass, sd, wave, direction, mass_threshold, smell_threshold, sentinel):
    """Reinforcement flags (+1 reward, -1 penalty, 0 none) for smell and wave."""
    h, w = mass.shape
    rf_smell = np.zeros((h, w), dtype=np.int8)
    rf_wave = np.zeros((h, w), dtype=np.int8)
    recv = (direction >= 0) & (mass >= mass_threshold)
    if not recv.any():
        return rf_smell, rf_wave
    ii, jj = np.nonzero(recv)
    k = direction[ii, jj].astype(np.intp)
    offs = np.asarray(OFFSETS)
    ai = ii + offs[k, 0]
    aj = jj + offs[k, 1]
    smell_ok = sd[ii, jj] >= smell_threshold
    rf_smell[ii, jj] = np.where(smell_ok, np.sign(sd[ii, jj] - sd[ai, aj]), 0).astype(np.int8)
    if wave is not None:
        wb, wa = wave[ii, jj], wave[ai, aj]
        known = (wb != sentinel) & (wa != sentinel)
        rf_wave[ii, jj] = np.where(known, np.sign(wb - wa), 0).astype(np.int8)
    return rf_smell, rf_wave
