"""Fixed-point reconstruction engine for autocorrelation inversion.

The observation model is chi_mu ~ o (*) K[o] with the self-referential
kernel K[o] = o (star) H, where H is the known autocorrelation-domain
blur. Minimizing the I-divergence between the observation and the model
by Picard iteration yields multiplicative updates that preserve
non-negativity and (after renormalization) unit total mass:

* anchor update: the kernel is re-anchored to the current estimate each
  step, K_t = o_t (star) H, and the object receives the familiar
  ratio-correlate correction o * (r (*) reversed(K_t));
* full model: adds the second variational term r (star) (H (*) o) that
  accounts for the kernel's own dependence on the object (the overall
  factor 2 is absorbed by renormalization);
* lambda2-only: the second term alone, kept as a diagnostic;
* fixed-kernel Richardson-Lucy: the classic multiplicative deconvolution
  update with a constant prior kernel, the regime in which the
  expectation-maximization monotonicity guarantee actually applies.

Kernel refreshing voids that guarantee, so progress is monitored instead:
the solver tracks SNR(chi_mu || o_t (*) K_t) and stops once it keeps
dropping, mirroring how these reconstructions are supervised in practice.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergedError, DomainError, InvalidParam, ShapeError, ZeroMass
from .forward import Measurement
from .grids import Shape, as_grid, embed_pad, normalize_total, solver_shape
from .metrics import align_to_reference, i_divergence, snr_db
from .spectral import convolve, cross_correlate

ANCHOR_UPDATE = "anchor_update"
FULL_MODEL = "full_model"
LAMBDA2_ONLY = "lambda2_only"
RICHARDSON_LUCY = "richardson_lucy"
UPDATE_RULES = (ANCHOR_UPDATE, FULL_MODEL, LAMBDA2_ONLY, RICHARDSON_LUCY)

STOP_MAX_ITERS = "MaxIters"
STOP_SNR_DROP = "SnrDrop"
STOP_DIVERGED = "Diverged"

_INIT_FLOOR = 1e-6  # strictly positive initial guesses


@dataclass(frozen=True)
class SolverConfig:
    rule: str = ANCHOR_UPDATE
    max_iters: int = 20000
    stop_on_snr_drop: bool = True
    snr_check_stride: int = 50
    patience: int = 3
    epsilon_floor: float = 1e-12
    seed: int = 0
    record_stride: int = 50

    def __post_init__(self):
        if self.rule not in UPDATE_RULES:
            raise InvalidParam(f"unknown update rule {self.rule!r}")
        if self.max_iters < 1:
            raise InvalidParam("max_iters must be >= 1")
        if self.snr_check_stride < 1 or self.record_stride < 1:
            raise InvalidParam("strides must be >= 1")
        if self.patience < 0:
            raise InvalidParam("patience must be >= 0")
        if not self.epsilon_floor > 0:
            raise InvalidParam("epsilon_floor must be > 0")


@dataclass(frozen=True)
class SnrSample:
    """One monitoring point of a reconstruction run."""

    iteration: int
    snr_db: float
    i_div: float


@dataclass
class IterationState:
    """Live solver state: current estimate, its paired kernel, history.

    `K_t` always corresponds to `o_t` (for kernel-refreshing rules it is
    cross_correlate(o_t, H) floored and renormalized; for fixed-kernel
    rules it is the constant prior). The history list is shared across
    steps and appended to by the driver.
    """

    o_t: np.ndarray
    K_t: np.ndarray
    t: int = 0
    history: list[SnrSample] = field(default_factory=list)


@dataclass
class ReconstructionReport:
    final_o: np.ndarray
    aligned_o: np.ndarray | None
    history: list[SnrSample]
    sample_wall_s: list[float]
    stop_reason: str
    wall_time: float
    shift: tuple[int, int] | None = None
    mirrored: bool | None = None


def init_guess(shape: Shape, seed: int) -> np.ndarray:
    """Strictly positive i.i.d. uniform guess, normalized to unit mass."""
    rng = np.random.default_rng(seed)
    g = rng.uniform(_INIT_FLOOR, 1.0, size=(int(shape[0]), int(shape[1])))
    return g / g.sum()


def refresh_kernel(o_t, H) -> np.ndarray:
    """Re-anchor the convolutional kernel to the current estimate.

    K = o_t (star) H, floored at zero (FFT round-off can leave tiny
    negatives) and renormalized to unit mass.
    """
    o_t = as_grid(o_t)
    H = as_grid(H)
    if o_t.shape != H.shape:
        raise ShapeError(f"shape mismatch {o_t.shape} vs {H.shape}")
    K = np.maximum(cross_correlate(o_t, H), 0.0)
    total = K.sum()
    if total <= 0.0:
        raise ZeroMass("refreshed kernel has no mass")
    return K / total


def _finish_step(
    state: IterationState, o_raw: np.ndarray, K_next: np.ndarray
) -> IterationState:
    if not np.isfinite(o_raw).all():
        raise DivergedError(f"non-finite values in iterate at t={state.t + 1}")
    o_next = np.maximum(o_raw, 0.0)
    total = o_next.sum()
    if total <= 0.0:
        raise DivergedError(f"iterate lost all mass at t={state.t + 1}")
    return IterationState(o_next / total, K_next, state.t + 1, state.history)


def _ratio(chi_mu: np.ndarray, state: IterationState, eps: float) -> np.ndarray:
    chi_model = convolve(state.o_t, state.K_t)
    return chi_mu / np.maximum(chi_model, eps)


def au_step(state: IterationState, chi_mu, H, eps: float = 1e-12) -> IterationState:
    """One anchor-update step: o <- normalize(o * (r (*) reversed(K)))."""
    r = _ratio(chi_mu, state, eps)
    update = cross_correlate(state.K_t, r)  # convolve(r, reverse_axes(K))
    new = _finish_step(state, state.o_t * update, state.K_t)
    return IterationState(new.o_t, refresh_kernel(new.o_t, H), new.t, new.history)


def full_model_step(
    state: IterationState, chi_mu, H, eps: float = 1e-12
) -> IterationState:
    """One complete-derivative step: o <- normalize(o * (lambda1 + lambda2))."""
    r = _ratio(chi_mu, state, eps)
    lam1 = cross_correlate(state.K_t, r)
    lam2 = cross_correlate(r, convolve(as_grid(H), state.o_t))
    new = _finish_step(state, state.o_t * (lam1 + lam2), state.K_t)
    return IterationState(new.o_t, refresh_kernel(new.o_t, H), new.t, new.history)


def lambda2_only_step(
    state: IterationState, chi_mu, H, eps: float = 1e-12
) -> IterationState:
    """Diagnostic step using only the kernel-variation term."""
    r = _ratio(chi_mu, state, eps)
    lam2 = cross_correlate(r, convolve(as_grid(H), state.o_t))
    new = _finish_step(state, state.o_t * lam2, state.K_t)
    return IterationState(new.o_t, refresh_kernel(new.o_t, H), new.t, new.history)


def rl_fixed_kernel_step(
    state: IterationState, chi_mu, K_fixed, eps: float = 1e-12
) -> IterationState:
    """Classic multiplicative deconvolution step with a constant kernel."""
    K_fixed = as_grid(K_fixed, nonneg=True)
    chi_model = convolve(state.o_t, K_fixed)
    r = np.asarray(chi_mu) / np.maximum(chi_model, eps)
    update = cross_correlate(K_fixed, r)
    return _finish_step(state, state.o_t * update, K_fixed)


def i_div_gradient(o, chi_mu, H, mode: str = "complete") -> np.ndarray:
    """Gradient of I(chi_mu || o (*) K) with respect to each pixel of o.

    The model kernel is K = o (star) H (kept unnormalized here so that the
    functional being differentiated is exactly the one evaluated). With
    w = 1 - chi_mu / chi_model:

    * ``fixed_kernel``: K treated as a constant, g = w (*) reversed(K);
    * ``complete``: K differentiated too, adding w (star) (H (*) o).
    """
    if mode not in ("fixed_kernel", "complete"):
        raise InvalidParam(f"unknown gradient mode {mode!r}")
    o = as_grid(o)
    chi_mu = as_grid(chi_mu)
    H = as_grid(H)
    K = cross_correlate(o, H)
    chi_model = convolve(o, K)
    if chi_model.sum() <= 0.0:
        raise DomainError("model autocorrelation has no mass")
    w = 1.0 - chi_mu / np.maximum(chi_model, np.finfo(np.float64).tiny)
    grad = cross_correlate(K, w)  # convolve(w, reverse_axes(K))
    if mode == "complete":
        grad = grad + cross_correlate(w, convolve(H, o))
    return grad


def _step_function(rule: str, chi_mu, H, K_fixed, eps):
    if rule == ANCHOR_UPDATE:
        return lambda st: au_step(st, chi_mu, H, eps)
    if rule == FULL_MODEL:
        return lambda st: full_model_step(st, chi_mu, H, eps)
    if rule == LAMBDA2_ONLY:
        return lambda st: lambda2_only_step(st, chi_mu, H, eps)
    return lambda st: rl_fixed_kernel_step(st, chi_mu, K_fixed, eps)


def run_solver(
    config: SolverConfig,
    measurement: Measurement,
    reference=None,
    o_init=None,
) -> ReconstructionReport:
    """Iterate the configured update rule on a measurement.

    Starts from a strictly positive random guess (or `o_init`, e.g. to
    inject a known prior), monitors SNR(chi_mu || o_t (*) K_t) and the
    I-divergence every `snr_check_stride` iterations, records history every
    `record_stride` iterations, and stops on `patience` consecutive SNR
    drops (when enabled), iteration exhaustion, or divergence. When a
    reference object is supplied (native or padded shape), the final
    estimate is realigned to it for reporting, since reconstructions float
    freely in shift-and-mirror space.
    """
    chi_mu = as_grid(measurement.chi_mu, nonneg=True)
    H = as_grid(measurement.h_effective, nonneg=True)
    if chi_mu.shape != H.shape:
        raise ShapeError(f"shape mismatch {chi_mu.shape} vs {H.shape}")
    eps = config.epsilon_floor

    if o_init is None:
        o0 = init_guess(chi_mu.shape, config.seed)
    else:
        o0 = normalize_total(o_init)
        if o0.shape != chi_mu.shape:
            raise ShapeError(
                f"o_init shape {o0.shape} does not match measurement {chi_mu.shape}"
            )
    K_fixed = normalize_total(H) if config.rule == RICHARDSON_LUCY else None
    K0 = K_fixed if K_fixed is not None else refresh_kernel(o0, H)
    state = IterationState(o_t=o0, K_t=K0, t=0, history=[])
    step = _step_function(config.rule, chi_mu, H, K_fixed, eps)

    def sample(st: IterationState) -> SnrSample:
        chi_model = np.maximum(convolve(st.o_t, st.K_t), 0.0)  # FFT round-off
        return SnrSample(st.t, snr_db(chi_mu, chi_model), i_divergence(chi_mu, chi_model))

    t_start = time.perf_counter()
    walls: list[float] = []
    history = state.history
    prev_snr = None
    drops = 0
    stop_reason = STOP_MAX_ITERS

    for t in range(1, config.max_iters + 1):
        try:
            state = step(state)
        except (DivergedError, ZeroMass):
            stop_reason = STOP_DIVERGED
            break
        check = t % config.snr_check_stride == 0
        record = t % config.record_stride == 0 or t == config.max_iters
        if not (check or record):
            continue
        s = sample(state)
        if record:
            history.append(s)
            walls.append(time.perf_counter() - t_start)
        if check and config.stop_on_snr_drop:
            if prev_snr is not None and s.snr_db < prev_snr:
                drops += 1
            else:
                drops = 0
            prev_snr = s.snr_db
            if drops >= max(1, config.patience):
                stop_reason = STOP_SNR_DROP
                if not record:
                    history.append(s)
                    walls.append(time.perf_counter() - t_start)
                break

    if not history or history[-1].iteration != state.t:
        history.append(sample(state))
        walls.append(time.perf_counter() - t_start)

    aligned = shift = mirrored = None
    if reference is not None:
        ref = as_grid(reference, nonneg=True)
        if ref.shape != chi_mu.shape:
            if solver_shape(ref.shape) != chi_mu.shape:
                raise ShapeError(
                    f"reference shape {ref.shape} fits neither the solver shape "
                    f"{chi_mu.shape} nor its native half"
                )
            ref = embed_pad(ref, chi_mu.shape)
        aligned, shift, mirrored = align_to_reference(state.o_t, normalize_total(ref))

    return ReconstructionReport(
        final_o=state.o_t,
        aligned_o=aligned,
        history=history,
        sample_wall_s=walls,
        stop_reason=stop_reason,
        wall_time=time.perf_counter() - t_start,
        shift=shift,
        mirrored=mirrored,
    )
