"""Seeded random instances shared by the linear-algebra tests."""
from __future__ import annotations

import random
from fractions import Fraction

from svbider.linalg import SparseMatrix

NUMERATORS = list(range(-9, 10))
DENOMINATORS = [1, 1, 1, 2, 3, 5, 7]


def rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(NUMERATORS), rng.choice(DENOMINATORS))


def random_sparse(rng: random.Random, nrows: int, ncols: int, density: float) -> SparseMatrix:
    entries = {}
    for i in range(nrows):
        for j in range(ncols):
            if rng.random() < density:
                q = rational(rng)
                if q:
                    entries[i, j] = q
    return SparseMatrix.from_entries(nrows, ncols, entries)


def planted_rank(rng: random.Random, nrows: int, ncols: int, rank: int, density: float) -> SparseMatrix:
    """A product (nrows x rank)(rank x ncols) of sparse factors: rank at most ``rank``."""
    left = random_sparse(rng, nrows, rank, density).to_dense()
    right = random_sparse(rng, rank, ncols, density).to_dense()
    dense = [[sum((left[i][k] * right[k][j] for k in range(rank)), Fraction(0)) for j in range(ncols)]
             for i in range(nrows)]
    return SparseMatrix.from_dense(dense)


def instance(seed: int) -> SparseMatrix:
    rng = random.Random(seed)
    nrows, ncols = rng.randint(1, 14), rng.randint(1, 16)
    if rng.random() < 0.5:
        return planted_rank(rng, nrows, ncols, rng.randint(1, min(nrows, ncols)), 0.5)
    return random_sparse(rng, nrows, ncols, rng.choice([0.1, 0.25, 0.4]))


def dense_rank(A: SparseMatrix) -> int:
    """Textbook elimination on a dense Fraction copy; independent of the package code."""
    m = [row[:] for row in A.to_dense()]
    rank, col = 0, 0
    nrows, ncols = len(m), A.ncols
    while rank < nrows and col < ncols:
        piv = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, nrows):
            f = m[i][col] / m[rank][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


LAMBDAS = [Fraction(-3), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]
MUS = [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2)]
SS = [Fraction(0), Fraction(1, 2)]
GRID = [(lam, mu, s) for lam in LAMBDAS for mu in MUS for s in SS]


def grid_id(point) -> str:
    return "lam={},mu={},s={}".format(*point)
