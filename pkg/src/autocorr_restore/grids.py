"""Dense 2D raster helpers shared by every stage of the pipeline.

A "grid" is a plain 2D float64 ndarray. Conventions, fixed once for the
whole package: row-major storage, origin at the top-left, and index (0, 0)
is the zero-shift bin of correlation space. All solver arithmetic runs on
grids padded to twice the object support, so that circular FFT products
realize linear correlations (the correlation of an N-wide signal occupies
2N - 1 bins).
"""

import numpy as np

from .errors import ShapeError, ZeroMass

Shape = tuple[int, int]


def as_grid(a, *, nonneg: bool = False) -> np.ndarray:
    """Validate `a` as a finite 2D float64 grid and return it as such."""
    g = np.asarray(a, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2D grid, got shape {g.shape}")
    if not np.isfinite(g).all():
        raise ValueError("grid contains non-finite values")
    if nonneg and g.min() < 0.0:
        raise ValueError("grid contains negative values")
    return g


def solver_shape(shape: Shape) -> Shape:
    """Padded shape on which all solver arithmetic runs (doubled support)."""
    h, w = int(shape[0]), int(shape[1])
    if h < 1 or w < 1:
        raise ShapeError(f"invalid shape {shape}")
    return (2 * h, 2 * w)


def normalize_total(g) -> np.ndarray:
    """Scale a non-negative grid so it sums to one."""
    g = as_grid(g, nonneg=True)
    total = g.sum()
    if total <= 0.0:
        raise ZeroMass("cannot normalize a grid with non-positive total mass")
    return g / total


def embed_pad(g, target: Shape) -> np.ndarray:
    """Copy `g` into the top-left corner of a zero grid of shape `target`.

    Sum-preserving by construction; the zero-shift origin of `g` stays at
    index (0, 0).
    """
    g = as_grid(g)
    th, tw = int(target[0]), int(target[1])
    if th < g.shape[0] or tw < g.shape[1]:
        raise ShapeError(f"cannot embed {g.shape} into smaller target {(th, tw)}")
    out = np.zeros((th, tw), dtype=np.float64)
    out[: g.shape[0], : g.shape[1]] = g
    return out


def crop_center(g, target: Shape) -> np.ndarray:
    """Central `target`-sized window of `g`, offset floor((dim - target)/2)."""
    g = as_grid(g)
    th, tw = int(target[0]), int(target[1])
    if th > g.shape[0] or tw > g.shape[1] or th < 1 or tw < 1:
        raise ShapeError(f"cannot crop {g.shape} to {(th, tw)}")
    y0 = (g.shape[0] - th) // 2
    x0 = (g.shape[1] - tw) // 2
    return g[y0 : y0 + th, x0 : x0 + tw].copy()


def reverse_axes(g) -> np.ndarray:
    """Circular axis reversal fixing index 0: out[i, j] = g[-i mod H, -j mod W].

    Convolution with the reversal of a kernel equals correlation with the
    kernel under circular FFT arithmetic, which is why this flavor of flip
    (rather than a plain mirror) is used everywhere.
    """
    g = as_grid(g)
    return np.roll(g[::-1, ::-1], (1, 1), axis=(0, 1))
