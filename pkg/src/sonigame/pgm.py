"""Binary PGM (P5) raster output for strip images."""

import numpy as np


class PgmError(ValueError):
    pass


def write_pgm(path: str, image: np.ndarray) -> None:
    """Write a 2-D uint8 array (rows top-first) as binary PGM, maxval 255."""
    img = np.asarray(image)
    if img.ndim != 2:
        raise PgmError("image must be 2-D")
    if img.dtype != np.uint8:
        raise PgmError("image must be uint8")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    parts = raw.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P5":
        raise PgmError(f"{path}: not a binary PGM")
    try:
        w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError as exc:
        raise PgmError(f"{path}: bad header") from exc
    if maxval != 255:
        raise PgmError(f"{path}: unsupported maxval {maxval}")
    data = parts[4][:w * h]
    if len(data) < w * h:
        raise PgmError(f"{path}: truncated pixel data")
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w)
