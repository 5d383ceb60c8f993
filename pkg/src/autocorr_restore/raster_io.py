"""File formats: float rasters (bit-exact) and 8-bit grayscale previews.

FloatRaster layout, little-endian throughout:

    offset 0   magic "FGR1" (4 bytes)
    offset 4   height, u32
    offset 8   width, u32
    offset 12  height*width float64 values, row-major

Previews are binary portable graymaps (PGM, magic P5), peak-normalized so
the largest raster value maps to 255.
"""

import struct
from pathlib import Path

import numpy as np

from .errors import MalformedFile
from .grids import as_grid

FLOAT_RASTER_MAGIC = b"FGR1"
_HEADER = struct.Struct("<4sII")


def write_float_raster(path, g) -> None:
    g = as_grid(g)
    h, w = g.shape
    payload = np.ascontiguousarray(g, dtype="<f8").tobytes()
    Path(path).write_bytes(_HEADER.pack(FLOAT_RASTER_MAGIC, h, w) + payload)


def read_float_raster(path) -> np.ndarray:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise MalformedFile(
            f"{path}: truncated header at offset 0 ({len(data)} bytes, need {_HEADER.size})"
        )
    magic, h, w = _HEADER.unpack_from(data, 0)
    if magic != FLOAT_RASTER_MAGIC:
        raise MalformedFile(f"{path}: bad magic {magic!r} at offset 0")
    if h < 1 or w < 1:
        raise MalformedFile(f"{path}: invalid dimensions {h}x{w} in header at offset 4")
    expected = h * w * 8
    actual = len(data) - _HEADER.size
    if actual != expected:
        raise MalformedFile(
            f"{path}: payload at offset {_HEADER.size} has {actual} bytes, expected {expected}"
        )
    g = (
        np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
        .reshape(h, w)
        .astype(np.float64)
    )
    if not np.isfinite(g).all():
        raise MalformedFile(f"{path}: non-finite values in payload")
    return g


def write_pgm_preview(path, g) -> None:
    """Write a peak-normalized 8-bit binary PGM preview of a grid."""
    g = as_grid(g)
    peak = g.max()
    if peak > 0:
        img = np.clip(np.rint(g * (255.0 / peak)), 0, 255).astype(np.uint8)
    else:
        img = np.zeros(g.shape, dtype=np.uint8)
    h, w = g.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes())
