"""Eigenvalue-level machinery for m-subharmonic and m-plurisubharmonic
functions: symmetric-function cones, the M_m operator, A/B classification,
witness search and radial comparison experiments."""

from ._kernels import BACKEND
from .cones import (
    Classification,
    ConeVerdict,
    classify,
    gamma_membership,
    ksubset_min_sum,
    negative_split,
    sigma_chain_check,
    theorem1_ratio,
    theorem1_sweep,
)
from .errors import ConvergenceError, InternalInvariantError, NotAdmissibleError, PreconditionError
from .mm_operator import MmValue, mm_alpha, mm_eval, special_identity_check
from .symfunc import (
    SigmaTable,
    Spectrum,
    maclaurin_violation,
    newton_residual,
    sigma_all,
    sigma_deflated,
    summation_split,
    weak_newton_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Classification",
    "ConeVerdict",
    "ConvergenceError",
    "InternalInvariantError",
    "MmValue",
    "NotAdmissibleError",
    "PreconditionError",
    "SigmaTable",
    "Spectrum",
    "classify",
    "gamma_membership",
    "ksubset_min_sum",
    "maclaurin_violation",
    "mm_alpha",
    "mm_eval",
    "negative_split",
    "newton_residual",
    "sigma_all",
    "sigma_chain_check",
    "sigma_deflated",
    "special_identity_check",
    "summation_split",
    "theorem1_ratio",
    "theorem1_sweep",
    "weak_newton_residual",
]
