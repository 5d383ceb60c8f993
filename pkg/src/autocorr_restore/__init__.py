"""Joint autocorrelation inversion and deconvolution.

Reconstructs a non-negative object from blurred or band-limited
autocorrelation measurements by multiplicative I-divergence fixed-point
iterations, deconvolving while inverting. See the README for the library
tour and the `autocorr-restore` command-line pipeline.
"""

from .errors import (
    AutocorrError,
    ConfigError,
    DegenerateSignal,
    DivergedError,
    DomainError,
    InvalidParam,
    MalformedFile,
    ShapeError,
    ZeroMass,
)
from .forward import (
    Measurement,
    Scenario,
    add_poisson_noise,
    make_window,
    preprocess_measurement,
    scale_to_peak16,
    simulate_bandlimited,
    simulate_blurred_autocorr,
    simulate_blurred_object_autocorr,
)
from .grids import (
    Shape,
    as_grid,
    crop_center,
    embed_pad,
    normalize_total,
    reverse_axes,
    solver_shape,
)
from .metrics import align_to_reference, i_divergence, snr_db
from .phantoms import PHANTOM_KINDS, make_phantom
from .raster_io import read_float_raster, write_float_raster, write_pgm_preview
from .solvers import (
    ANCHOR_UPDATE,
    FULL_MODEL,
    LAMBDA2_ONLY,
    RICHARDSON_LUCY,
    UPDATE_RULES,
    IterationState,
    ReconstructionReport,
    SnrSample,
    SolverConfig,
    au_step,
    full_model_step,
    i_div_gradient,
    init_guess,
    lambda2_only_step,
    refresh_kernel,
    rl_fixed_kernel_step,
    run_solver,
)
from .spectral import (
    autocorrelation,
    convolve,
    cross_correlate,
    delta_kernel,
    gaussian_kernel,
    power_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AutocorrError",
    "ConfigError",
    "DegenerateSignal",
    "DivergedError",
    "DomainError",
    "InvalidParam",
    "MalformedFile",
    "ShapeError",
    "ZeroMass",
    "Measurement",
    "Scenario",
    "add_poisson_noise",
    "make_window",
    "preprocess_measurement",
    "scale_to_peak16",
    "simulate_bandlimited",
    "simulate_blurred_autocorr",
    "simulate_blurred_object_autocorr",
    "Shape",
    "as_grid",
    "crop_center",
    "embed_pad",
    "normalize_total",
    "reverse_axes",
    "solver_shape",
    "align_to_reference",
    "i_divergence",
    "snr_db",
    "PHANTOM_KINDS",
    "make_phantom",
    "read_float_raster",
    "write_float_raster",
    "write_pgm_preview",
    "ANCHOR_UPDATE",
    "FULL_MODEL",
    "LAMBDA2_ONLY",
    "RICHARDSON_LUCY",
    "UPDATE_RULES",
    "IterationState",
    "ReconstructionReport",
    "SnrSample",
    "SolverConfig",
    "au_step",
    "full_model_step",
    "i_div_gradient",
    "init_guess",
    "lambda2_only_step",
    "refresh_kernel",
    "rl_fixed_kernel_step",
    "run_solver",
    "autocorrelation",
    "convolve",
    "cross_correlate",
    "delta_kernel",
    "gaussian_kernel",
    "power_spectrum",
    "__version__",
]
