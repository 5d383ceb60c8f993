"""Measurement simulation for the three autocorrelation-domain scenarios.

Each simulator produces the same kind of record: a preprocessed, unit-mass
autocorrelation observation `chi_mu` together with the effective
autocorrelation-domain blur `h_effective` for its scenario, both living on
the padded solver shape of the input object. The three scenarios:

* blurred autocorrelation: the autocorrelation itself is blurred and
  corrupted, chi_mu = chi (*) H + noise;
* autocorrelation of a blurred object: the object image is blurred and
  corrupted before the autocorrelation is taken, which transports the blur
  as H = h (star) h;
* band-limited Fourier measurement: the power spectrum is windowed and
  corrupted, equivalent to blurring by the inverse transform of the window.

Noise is additive with i.i.d. Poisson(lambda) counts applied to the clean
quantity after peak-normalizing it to the 16-bit ceiling; preprocessing
subtracts the scenario's constant noise-mean contribution, rectifies, and
normalizes to unit mass.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam, ShapeError, ZeroMass
from .grids import Shape, as_grid, embed_pad, normalize_total, solver_shape
from .metrics import snr_db
from .spectral import autocorrelation, convolve, cross_correlate, power_spectrum

SIXTEEN_BIT_PEAK = 65535.0

SCENARIO_KINDS = ("blurred_autocorr", "blurred_object_autocorr", "bandlimited")
WINDOW_KINDS = ("gaussian", "hard_circular")


@dataclass(frozen=True)
class Scenario:
    """Which measurement process produced an observation, plus its kernel spec."""

    kind: str
    sigma: float | None = None  # Gaussian PSF width in px (blur scenarios)
    window: str | None = None  # window kind (bandlimited scenario)
    cutoff: float | None = None  # window cutoff, 1.0 = axis Nyquist

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise InvalidParam(f"unknown scenario kind {self.kind!r}")
        if self.sigma is not None and not self.sigma > 0:
            raise InvalidParam(f"sigma must be positive, got {self.sigma}")
        if self.window is not None and self.window not in WINDOW_KINDS:
            raise InvalidParam(f"unknown window kind {self.window!r}")
        if self.cutoff is not None and not self.cutoff > 0:
            raise InvalidParam(f"cutoff must be positive, got {self.cutoff}")


@dataclass(frozen=True)
class Measurement:
    """A preprocessed autocorrelation-domain observation ready for inversion.

    `chi_mu` and `h_effective` share the padded solver shape; both are
    non-negative and sum to one. `raw_snr_db` is the SNR of the corrupted
    quantity against its clean counterpart, measured in the domain where
    the noise was applied. The blurred-object scenario additionally
    reports the corrupted object image `o_mu` and its own SNR.
    """

    chi_mu: np.ndarray
    h_effective: np.ndarray
    scenario: Scenario
    noise_lambda: float
    seed: int
    raw_snr_db: float
    o_mu: np.ndarray | None = None
    o_mu_snr_db: float | None = None


def scale_to_peak16(g) -> np.ndarray:
    """Peak-normalize a non-negative grid to the 16-bit ceiling (65535)."""
    g = as_grid(g, nonneg=True)
    peak = g.max()
    if peak <= 0.0:
        raise ZeroMass("cannot scale a grid with non-positive peak")
    return g * (SIXTEEN_BIT_PEAK / peak)


def add_poisson_noise(g, lam: float, seed: int) -> np.ndarray:
    """Add i.i.d. Poisson(lam) counts to every pixel of `g`.

    Deterministic for a fixed seed; lam = 0 returns the input unchanged.
    The caller is expected to have scaled `g` to the 16-bit range.
    """
    g = as_grid(g, nonneg=True)
    if lam < 0:
        raise InvalidParam(f"lambda must be >= 0, got {lam}")
    if lam == 0:
        return g.copy()
    rng = np.random.default_rng(seed)
    return g + rng.poisson(lam, size=g.shape).astype(np.float64)


def preprocess_measurement(chi_raw, lam: float) -> np.ndarray:
    """Subtract the constant noise mean, rectify, and normalize to unit mass.

    `lam` is the per-pixel constant noise-mean contribution of the scenario
    (the Poisson rate itself when noise was added directly to the
    autocorrelation). Negative correlation values are unphysical for an
    intensity object, hence the absolute value before normalization.
    """
    chi_raw = as_grid(chi_raw)
    return normalize_total(np.abs(chi_raw - lam))


def make_window(kind: str, cutoff: float, shape: Shape) -> np.ndarray:
    """Radially symmetric frequency window in [0, 1] with W(0) = 1.

    The radial coordinate is normalized per axis so that 1.0 sits at the
    axis Nyquist frequency (grid corners reach sqrt(2)); any cutoff beyond
    that passes everything. `gaussian` gives exp(-rho^2 / (2 cutoff^2)),
    `hard_circular` a sharp disc of radius `cutoff`.
    """
    if kind not in WINDOW_KINDS:
        raise InvalidParam(f"unknown window kind {kind!r}")
    if not cutoff > 0:
        raise InvalidParam(f"cutoff must be positive, got {cutoff}")
    h, w = int(shape[0]), int(shape[1])
    if h < 1 or w < 1:
        raise InvalidParam(f"invalid window shape {shape}")
    fy = 2.0 * np.fft.fftfreq(h)  # 1.0 at the axis Nyquist bin
    fx = 2.0 * np.fft.fftfreq(w)
    rho2 = fy[:, None] ** 2 + fx[None, :] ** 2
    if kind == "gaussian":
        return np.exp(-rho2 / (2.0 * cutoff**2))
    return (rho2 <= cutoff**2).astype(np.float64)


def _warn_if_peak_off_origin(chi_mu: np.ndarray) -> None:
    # sanity of a valid autocorrelation measurement: zero shift dominates
    if int(np.argmax(chi_mu)) != 0:
        warnings.warn(
            "measurement zero-shift bin is not the global maximum; "
            "the observation may not be a valid autocorrelation",
            stacklevel=3,
        )


def _require_padded(kernel: np.ndarray, o: np.ndarray, name: str) -> None:
    expected = solver_shape(o.shape)
    if kernel.shape != expected:
        raise ShapeError(
            f"{name} must be built on the padded solver shape {expected} "
            f"of the object, got {kernel.shape}"
        )


def simulate_blurred_autocorr(
    o, H, lam: float, seed: int, scenario: Scenario | None = None
) -> Measurement:
    """Corrupt the object's autocorrelation by blurring with H plus noise.

    `o` is the native-shape object; `H` the autocorrelation-domain blur in
    wrapped layout on the padded solver shape.
    """
    o = as_grid(o, nonneg=True)
    H = as_grid(H, nonneg=True)
    _require_padded(H, o, "H")
    chi = autocorrelation(o)
    # FFT round-off can leave values a few ulp below zero
    clean = scale_to_peak16(np.maximum(convolve(chi, H), 0.0))
    noisy = add_poisson_noise(clean, lam, seed)
    raw_snr = snr_db(noisy, clean)
    chi_mu = preprocess_measurement(noisy, lam)
    _warn_if_peak_off_origin(chi_mu)
    return Measurement(
        chi_mu=chi_mu,
        h_effective=normalize_total(H),
        scenario=scenario or Scenario("blurred_autocorr"),
        noise_lambda=float(lam),
        seed=int(seed),
        raw_snr_db=raw_snr,
    )


def simulate_blurred_object_autocorr(
    o, h, lam: float, seed: int, scenario: Scenario | None = None
) -> Measurement:
    """Blur and corrupt the object image, then take its autocorrelation.

    The blur transports into the autocorrelation domain as the
    self-correlation of the point-spread function, so the effective kernel
    is h (star) h. The mean of the noise transported into the
    autocorrelation is the constant 2*lam*sum(blurred) + npix*lam^2 off
    the zero-shift bin (plus a residual spike at zero shift itself, which
    preprocessing leaves in place).
    """
    o = as_grid(o, nonneg=True)
    h = as_grid(h, nonneg=True)
    _require_padded(h, o, "h")
    padded = embed_pad(o, solver_shape(o.shape))
    blurred = scale_to_peak16(np.maximum(convolve(padded, h), 0.0))
    o_mu = add_poisson_noise(blurred, lam, seed)
    o_mu_snr = snr_db(o_mu, blurred)
    chi_raw = cross_correlate(o_mu, o_mu)
    noise_mean = 2.0 * lam * blurred.sum() + o_mu.size * lam**2
    chi_mu = preprocess_measurement(chi_raw, noise_mean)
    _warn_if_peak_off_origin(chi_mu)
    h_eff = normalize_total(np.maximum(cross_correlate(h, h), 0.0))
    return Measurement(
        chi_mu=chi_mu,
        h_effective=h_eff,
        scenario=scenario or Scenario("blurred_object_autocorr"),
        noise_lambda=float(lam),
        seed=int(seed),
        raw_snr_db=o_mu_snr,
        o_mu=o_mu,
        o_mu_snr_db=o_mu_snr,
    )


def simulate_bandlimited(
    o, W, lam: float, seed: int, scenario: Scenario | None = None
) -> Measurement:
    """Window and corrupt the object's power spectrum, then transform back.

    `W` is a real window in [0, 1] in frequency layout on the padded solver
    shape. Windowing the power spectrum is equivalent to blurring the
    autocorrelation with the inverse transform of `W`; since that kernel can
    ring negative for sharp windows, it is floored at zero and renormalized
    before use as the effective kernel (multiplicative updates need a
    non-negative kernel). The i.i.d. Fourier-domain noise transports into
    autocorrelation space as a spike at zero shift, so no constant is
    subtracted here.
    """
    o = as_grid(o, nonneg=True)
    W = as_grid(W)
    _require_padded(W, o, "W")
    if W.min() < 0.0 or W.max() > 1.0 + 1e-12:
        raise InvalidParam("window values must lie in [0, 1]")
    m_clean = scale_to_peak16(power_spectrum(o) * W)
    m_noisy = add_poisson_noise(m_clean, lam, seed)
    raw_snr = snr_db(m_noisy, m_clean)
    chi_raw = np.abs(np.fft.ifft2(m_noisy))
    chi_mu = preprocess_measurement(chi_raw, 0.0)
    _warn_if_peak_off_origin(chi_mu)
    h_eff = normalize_total(np.maximum(np.fft.ifft2(W).real, 0.0))
    return Measurement(
        chi_mu=chi_mu,
        h_effective=h_eff,
        scenario=scenario or Scenario("bandlimited"),
        noise_lambda=float(lam),
        seed=int(seed),
        raw_snr_db=raw_snr,
    )
