from .exact import (
    SolveStats,
    SparseMatrix,
    SubspaceBasis,
    column_blocks,
    in_span,
    nullspace_exact,
    rank_exact,
    rank_mod_p,
    rref_exact,
    solve_exact,
)
from .modular import DEFAULT_CONFIG, ModularConfig

__all__ = [
    "DEFAULT_CONFIG",
    "ModularConfig",
    "SolveStats",
    "SparseMatrix",
    "SubspaceBasis",
    "column_blocks",
    "in_span",
    "nullspace_exact",
    "rank_exact",
    "rank_mod_p",
    "rref_exact",
    "solve_exact",
]
