"""Deterministic procedural test objects.

Every phantom is a non-negative float64 grid with peak value 1 and, except
for the two-delta pair, deliberately asymmetric features so that
mirror-ambiguity handling stays testable.
"""

import numpy as np

from .errors import InvalidParam
from .grids import Shape

PHANTOM_KINDS = ("two-deltas", "bars", "disks", "satellite-like", "stars")


def make_phantom(kind: str, shape: Shape, seed: int = 0) -> np.ndarray:
    """Build a named phantom; deterministic for fixed (kind, shape, seed)."""
    h, w = int(shape[0]), int(shape[1])
    if h < 8 or w < 8:
        raise InvalidParam(f"phantom shape must be at least 8x8, got {shape}")
    if kind == "two-deltas":
        return _two_deltas(h, w)
    if kind == "bars":
        return _bars(h, w)
    if kind == "disks":
        return _disks(h, w, seed)
    if kind == "satellite-like":
        return _satellite_like(h, w, seed)
    if kind == "stars":
        return _stars(h, w, seed)
    raise InvalidParam(f"unknown phantom kind {kind!r}")


def _two_deltas(h: int, w: int) -> np.ndarray:
    g = np.zeros((h, w))
    y = h // 3
    x = w // 4
    g[y, x] = 1.0
    g[y, x + max(2, w // 5)] = 1.0
    return g


def _bars(h: int, w: int) -> np.ndarray:
    g = np.zeros((h, w))
    # vertical bars of different widths and intensities, off-center
    g[h // 6 : 5 * h // 6, w // 6 : w // 6 + max(1, w // 32)] = 1.0
    g[h // 4 : 3 * h // 4, w // 3 : w // 3 + max(2, w // 16)] = 0.7
    g[h // 6 : h // 2, 2 * w // 3 : 2 * w // 3 + max(3, w // 10)] = 0.45
    # one horizontal bar near the bottom
    g[3 * h // 4 : 3 * h // 4 + max(2, h // 24), w // 5 : 4 * w // 5] = 0.85
    return g


def _disk(g: np.ndarray, cy: float, cx: float, radius: float, value: float) -> None:
    yy, xx = np.ogrid[: g.shape[0], : g.shape[1]]
    mask = (yy - cy) ** 2 + (xx - cx) ** 2 <= radius**2
    g[mask] += value


def _disks(h: int, w: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = np.zeros((h, w))
    for _ in range(6):
        cy = rng.uniform(0.15, 0.85) * h
        cx = rng.uniform(0.15, 0.85) * w
        radius = rng.uniform(0.04, 0.12) * min(h, w)
        _disk(g, cy, cx, radius, rng.uniform(0.4, 1.0))
    peak = g.max()
    return g / peak if peak > 0 else g


def _stars(h: int, w: int, seed: int) -> np.ndarray:
    """Asymmetric constellation of well-separated unequal point sources.

    The classic subject of autocorrelation imaging through turbulence;
    point features also make deblurring gains directly visible in SNR.
    """
    rng = np.random.default_rng(seed)
    g = np.zeros((h, w))
    positions: list[tuple[int, int]] = []
    min_dist2 = (0.12 * min(h, w)) ** 2
    while len(positions) < 7:
        y = int(rng.uniform(0.18, 0.82) * h)
        x = int(rng.uniform(0.18, 0.82) * w)
        if all((y - py) ** 2 + (x - px) ** 2 >= min_dist2 for py, px in positions):
            positions.append((y, x))
            g[y, x] = rng.uniform(0.4, 1.0)
    return g / g.max()


def _satellite_like(h: int, w: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = np.zeros((h, w))
    yy, xx = np.ogrid[:h, :w]

    # main body: bright ellipse with a hotter core
    cy, cx = 0.52 * h, 0.46 * w
    body = ((yy - cy) / (0.16 * h)) ** 2 + ((xx - cx) / (0.11 * w)) ** 2
    g[body <= 1.0] = 0.8
    g[body <= 0.35] = 1.0

    # solar panels with stripe texture; unequal spans keep the object chiral
    rows = slice(int(0.44 * h), int(0.60 * h))
    left = slice(int(0.08 * w), int(0.30 * w))
    right = slice(int(0.62 * w), int(0.78 * w))
    stripes = 0.55 + 0.25 * ((np.arange(h)[:, None] // 2) % 2)
    g[rows, left] = np.maximum(g[rows, left], stripes[rows, : 1])
    g[rows, right] = np.maximum(g[rows, right], stripes[rows, : 1] * 0.9)

    # antenna boom toward the top-right corner, ending in a small dish
    steps = max(h, w)
    ys = np.linspace(cy - 0.10 * h, 0.16 * h, steps).astype(int)
    xs = np.linspace(cx, 0.72 * w, steps).astype(int)
    g[np.clip(ys, 0, h - 1), np.clip(xs, 0, w - 1)] = 0.75
    _disk(g, 0.16 * h, 0.72 * w, 0.045 * min(h, w), 0.9)

    # a few dim instrument dots on the body
    for _ in range(4):
        y = int(rng.uniform(cy - 0.1 * h, cy + 0.1 * h))
        x = int(rng.uniform(cx - 0.06 * w, cx + 0.06 * w))
        g[np.clip(y, 0, h - 1), np.clip(x, 0, w - 1)] = 0.3
    return np.clip(g, 0.0, 1.0)
