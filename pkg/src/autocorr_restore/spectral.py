"""FFT-backed circular convolution, correlation and kernel construction.

All operations use circular (periodic) boundary semantics on the common
shape of their operands; callers guarantee linear-correlation correctness
by working on grids padded to the doubled object support (`grids.solver_shape`).
Transforms are delegated to numpy's pocketfft, whose forward/inverse pairs
round-trip well below 1e-10 relative error.

Sign conventions:

    convolve(f, g)[k]        = sum_x f(x) g(k - x)
    cross_correlate(f, g)[k] = sum_x f(x) g(x + k)      (non-commutative)

so `cross_correlate(f, g) == convolve(reverse_axes(f), g)` and the
autocorrelation of a real grid is symmetric under `reverse_axes`.
"""

import numpy as np

from .errors import InvalidParam, ShapeError
from .grids import Shape, as_grid, embed_pad, solver_shape


def _check_same_shape(f: np.ndarray, g: np.ndarray) -> None:
    if f.shape != g.shape:
        raise ShapeError(f"operands must share a shape, got {f.shape} and {g.shape}")


def convolve(f, g) -> np.ndarray:
    """Circular convolution of two equally shaped grids via spectra product."""
    f = as_grid(f)
    g = as_grid(g)
    _check_same_shape(f, g)
    return np.fft.irfft2(np.fft.rfft2(f) * np.fft.rfft2(g), s=f.shape)


def cross_correlate(f, g) -> np.ndarray:
    """Circular cross-correlation: inverse transform of conj(F{f}) * F{g}."""
    f = as_grid(f)
    g = as_grid(g)
    _check_same_shape(f, g)
    return np.fft.irfft2(np.conj(np.fft.rfft2(f)) * np.fft.rfft2(g), s=f.shape)


def autocorrelation(o) -> np.ndarray:
    """Self-correlation of `o` on the doubled-support grid.

    The input is zero-padded to `solver_shape(o.shape)` first, so the
    circular product realizes the linear autocorrelation; the zero-shift
    bin lands at index (0, 0) and the result is symmetric under
    `reverse_axes`.
    """
    o = as_grid(o)
    p = embed_pad(o, solver_shape(o.shape))
    spectrum = np.fft.rfft2(p)
    return np.fft.irfft2((spectrum * np.conj(spectrum)).real, s=p.shape)


def power_spectrum(o) -> np.ndarray:
    """Squared Fourier modulus of `o` on the doubled-support grid.

    Returned in the plain full-FFT frequency layout; its inverse transform
    equals `autocorrelation(o)` (power spectral theorem).
    """
    o = as_grid(o)
    p = embed_pad(o, solver_shape(o.shape))
    spectrum = np.fft.fft2(p)
    return (spectrum * np.conj(spectrum)).real


def gaussian_kernel(sigma_px: float, shape: Shape) -> np.ndarray:
    """Unit-mass isotropic Gaussian centered on the zero-shift bin.

    Sampled at pixel centers in wrapped layout (peak at index (0, 0),
    tails wrapping to the far edges), so convolving with it blurs without
    translating the image.
    """
    if not sigma_px > 0:
        raise InvalidParam(f"sigma_px must be positive, got {sigma_px}")
    h, w = int(shape[0]), int(shape[1])
    if h < 1 or w < 1:
        raise InvalidParam(f"invalid kernel shape {shape}")
    dy = np.fft.fftfreq(h) * h  # circular signed offsets 0, 1, ..., -1
    dx = np.fft.fftfreq(w) * w
    k = np.exp(-(dy[:, None] ** 2 + dx[None, :] ** 2) / (2.0 * sigma_px**2))
    return k / k.sum()


def delta_kernel(shape: Shape) -> np.ndarray:
    """Unit impulse at the zero-shift bin (identity element of convolution)."""
    h, w = int(shape[0]), int(shape[1])
    if h < 1 or w < 1:
        raise InvalidParam(f"invalid kernel shape {shape}")
    k = np.zeros((h, w), dtype=np.float64)
    k[0, 0] = 1.0
    return k
