"""Quality and objective functionals: SNR, I-divergence, alignment.

The dB signal-to-noise ratio is computed with L2 norms,
20*log10(||s_mu|| / ||s_mu - s||), which reproduces the usual intensity-SNR
trends while staying finite for zero-mean residuals (an integral-ratio form
would be degenerate there).
"""

import numpy as np

from .errors import DegenerateSignal, DomainError, ShapeError
from .grids import as_grid, reverse_axes
from .spectral import cross_correlate

# Residuals below 1e-15 of the signal norm are reported as this ceiling.
SNR_CAP_DB = 300.0

# Divergence denominators are floored at this fraction of max(q); the
# multiplicative iterates this metric monitors can hit exact zeros.
Q_FLOOR_REL = 1e-12


def snr_db(s_mu, s) -> float:
    """L2 signal-to-noise ratio of `s_mu` against reference `s`, in dB."""
    s_mu = as_grid(s_mu)
    s = as_grid(s)
    if s_mu.shape != s.shape:
        raise ShapeError(f"shape mismatch {s_mu.shape} vs {s.shape}")
    signal = float(np.linalg.norm(s_mu))
    if signal == 0.0:
        raise DegenerateSignal("signal grid has zero L2 norm")
    residual = float(np.linalg.norm(s_mu - s))
    if residual < 1e-15 * signal:
        return SNR_CAP_DB
    return float(20.0 * np.log10(signal / residual))


def i_divergence(p, q) -> float:
    """Csiszar I-divergence sum(p*ln(p/q) + q - p) of non-negative grids.

    Zero bins of `p` contribute nothing (0*ln 0 convention); `q` is floored
    at ``Q_FLOOR_REL * max(q)`` before use. Non-negative for all valid
    inputs, zero iff p equals the floored q.
    """
    p = as_grid(p, nonneg=True)
    q = as_grid(q, nonneg=True)
    if p.shape != q.shape:
        raise ShapeError(f"shape mismatch {p.shape} vs {q.shape}")
    qmax = q.max()
    if qmax <= 0.0:
        if p.sum() > 0.0:
            raise DomainError("p carries mass where q is identically zero")
        return 0.0
    qf = np.maximum(q, Q_FLOOR_REL * qmax)
    mask = p > 0.0
    value = float(np.sum(p[mask] * np.log(p[mask] / qf[mask])) + qf.sum() - p.sum())
    # mathematically >= 0 bin by bin; guard the last few ulps of cancellation
    return max(value, 0.0)


def align_to_reference(rec, ref):
    """Circularly shift (and possibly mirror) `rec` to best overlap `ref`.

    Autocorrelation-consistent reconstructions are defined only up to
    translation and axis reversal (the twin image), so both `rec` and its
    reversal are scored by their peak cross-correlation with `ref` and the
    better one is returned.

    Returns
    -------
    (aligned, (dy, dx), mirrored)
        `aligned` is the shifted candidate, `(dy, dx)` the circular shift
        applied to it (components in [-dim/2, dim/2)), `mirrored` whether
        the reversed candidate won.
    """
    rec = as_grid(rec)
    ref = as_grid(ref)
    if rec.shape != ref.shape:
        raise ShapeError(f"shape mismatch {rec.shape} vs {ref.shape}")

    best = None
    for candidate, mirrored in ((rec, False), (reverse_axes(rec), True)):
        corr = cross_correlate(candidate, ref)
        pos = np.unravel_index(int(np.argmax(corr)), corr.shape)
        peak = corr[pos]
        if best is None or peak > best[0]:
            best = (peak, pos, candidate, mirrored)

    _, pos, candidate, mirrored = best
    aligned = np.roll(candidate, pos, axis=(0, 1))
    shift = tuple(
        int((s + n // 2) % n - n // 2) for s, n in zip(pos, rec.shape)
    )
    return aligned, shift, mirrored
