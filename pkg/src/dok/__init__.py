"""Discrete analogue of the operator d^4/dx^4 + 2 d^2/dx^2 + 1 on a uniform lattice."""
from ._accel import BACKEND
from .convolution import ConvolutionPlan, convolve_at, convolve_window
from .errors import (
    BranchMismatch,
    DegenerateRoots,
    DokError,
    EmptyInput,
    InconsistentA1,
    InvalidStepSize,
    NonDecayingKernel,
    PoleProximity,
    RadiusTooSmall,
    TolUnachievable,
    TooCloseToOrigin,
)
from .kernel import (
    LatticeFunction,
    delta_lattice,
    eval_D,
    eval_G_continuous,
    eval_G_discrete,
    ode_residual,
    sample_D,
    sample_G,
)
from .params import OperatorParams, StepSize, compute_params, stable_d, stable_s, stable_w
from .spectral import (
    PartialFractions,
    SymbolValue,
    fourier_coefficient,
    partial_fractions,
    reconstruct_symbol,
    symbol_closed,
    symbol_series,
)
from .verify import (
    CheckReport,
    SuiteConfig,
    check_annihilation,
    check_delta,
    check_evenness_decay,
    run_suite,
)

__version__ = "0.1.0"
