"""Prime selection and rank computation over GF(p)."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import isprime, nextprime

from ..errors import BadPrime
from . import _kernels

PRIME_LOW = 2 ** 50
PRIME_HIGH = 2 ** 51
MAX_REDRAWS = 8


@dataclass(frozen=True)
class ModularConfig:
    prime: int
    seed: int = 0

    def __post_init__(self):
        if not PRIME_LOW < self.prime < PRIME_HIGH:
            raise ValueError(f"prime must lie in (2**50, 2**51), got {self.prime}")
        if not isprime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @classmethod
    def from_seed(cls, seed: int = 0) -> "ModularConfig":
        rng = random.Random(seed)
        start = rng.randrange(PRIME_LOW, PRIME_HIGH - 2 ** 20)
        return cls(int(nextprime(start)), seed)

    def redraw(self) -> "ModularConfig":
        return ModularConfig.from_seed(self.seed + 1)


DEFAULT_CONFIG = ModularConfig.from_seed(0)


def reduce_mod_p(q: Fraction, p: int) -> int:
    den = q.denominator
    if den % p == 0:
        raise BadPrime(f"denominator {den} is divisible by {p}")
    return (q.numerator % p) * pow(den, -1, p) % p


def dense_mod_p(rows: list[dict], cols: list[int], p: int) -> np.ndarray:
    """Dense int64 residue matrix of ``rows`` restricted to ``cols``."""
    where = {c: j for j, c in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, row in enumerate(rows):
        for c, v in row.items():
            mat[i, where[c]] = v % p if isinstance(v, int) else reduce_mod_p(v, p)
    return mat


def echelon_rows_mod_p(rows: list[dict], cols: list[int], p: int, backend: str | None = None):
    """Rank, pivot columns (as column labels) and independent row indices."""
    if not rows or not cols:
        return 0, [], []
    mat = dense_mod_p(rows, cols, p)
    rank, piv, sel = _kernels.echelon_mod_p(mat, p, backend)
    return rank, [cols[int(j)] for j in piv], [int(i) for i in sel]
