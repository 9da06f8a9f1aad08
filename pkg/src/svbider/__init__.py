"""Exact window computations for the deformative Schrodinger-Virasoro algebras L(lambda, mu, s)."""
from __future__ import annotations

from .algebra import (
    ZERO,
    BasisVector,
    Family,
    HalfInt,
    LinComb,
    Params,
    L,
    M,
    Y,
    bracket,
    bracket_basis,
    jacobi_residual,
    parse_basis,
)
from .classifier import (
    BiderCase,
    ClassificationReport,
    Mode,
    Verdict,
    classify_biderivations,
    classify_commuting,
    detect_case,
)
from .errors import (
    BadPrime,
    DimensionMismatch,
    InvalidBasisVector,
    ModularMismatch,
    NotCommuting,
    ParameterIncompatible,
    PreconditionViolated,
    SvbiderError,
    UndefinedSupport,
)
from .maps import bider_from_commuting, inner_bider, phi0, phi1, psi0, psi1, standard_commuting
from .structure import (
    Window,
    abelianization_dim,
    center_window,
    centralizer_of_derived,
    derived_window,
    jacobi_check_window,
)

__version__ = "0.1.0"

__all__ = [
    "ZERO", "BasisVector", "Family", "HalfInt", "LinComb", "Params", "L", "M", "Y",
    "bracket", "bracket_basis", "jacobi_residual", "parse_basis",
    "BiderCase", "ClassificationReport", "Mode", "Verdict",
    "classify_biderivations", "classify_commuting", "detect_case",
    "BadPrime", "DimensionMismatch", "InvalidBasisVector", "ModularMismatch", "NotCommuting",
    "ParameterIncompatible", "PreconditionViolated", "SvbiderError", "UndefinedSupport",
    "bider_from_commuting", "inner_bider", "phi0", "phi1", "psi0", "psi1", "standard_commuting",
    "Window", "abelianization_dim", "center_window", "centralizer_of_derived", "derived_window",
    "jacobi_check_window",
]
