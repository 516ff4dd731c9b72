"""Binary 8-bit portable graymap (PGM, ``P5``) output."""

import numpy as np


def to_gray(field, mask=None):
    """Scale ``field`` linearly from 0 to its maximum onto 0..255.

    Returns ``(pixels, scale)`` where ``pixel = round(value * scale)``; scale is
    0 for an all-zero field.  Cells outside ``mask`` are rendered black.
    """
    field = np.asarray(field, dtype=np.float64)
    if mask is not None:
        field = np.where(mask, field, 0.0)
    top = float(field.max()) if field.size else 0.0
    if top <= 0.0:
        return np.zeros(field.shape, dtype=np.uint8), 0.0
    scale = 255.0 / top
    px = np.floor(field * scale + 0.5)
    return np.clip(px, 0, 255).astype(np.uint8), scale


def encode_pgm(pixels):
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    h, w = pixels.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


def write_pgm(path, field, mask=None):
    pixels, scale = to_gray(field, mask)
    with open(path, "wb") as fh:
        fh.write(encode_pgm(pixels))
    return scale


def read_pgm(path):
    """Read back a ``P5`` file written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    maxval = int(parts[2])
    if maxval != 255:
        raise ValueError("only 8-bit PGM is supported")
    return np.frombuffer(parts[3], dtype=np.uint8, count=w * h).reshape(h, w)
