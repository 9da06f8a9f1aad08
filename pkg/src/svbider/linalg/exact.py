"""Exact sparse linear algebra over Q.

Rows are ``{col: value}`` dicts.  Forward elimination works on primitive
integer rows (denominators cleared, content divided out after every
step), so intermediate growth stays bounded by the entries actually
needed.  Outputs are reduced row echelon forms, which are canonical:
identical inputs always give identical bases however they were reached.

:func:`nullspace_exact` runs a two-tier solve per connected column block:
a GF(p) pass fixes the rank and picks independent rows, then the kernel
of those rows is computed exactly and checked against every row.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ..errors import BadPrime, DimensionMismatch, ModularMismatch
from .modular import DEFAULT_CONFIG, MAX_REDRAWS, ModularConfig, echelon_rows_mod_p


class SparseMatrix:
    """Rows x cols matrix of rationals; zeros are never stored."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        out = []
        if rows is not None:
            for row in rows:
                clean = {}
                for c, v in row.items():
                    if not 0 <= c < ncols:
                        raise IndexError(f"column {c} out of range for {ncols} columns")
                    v = v if isinstance(v, Fraction) else Fraction(v)
                    if v:
                        clean[c] = v
                out.append(clean)
        if len(out) > nrows:
            raise IndexError("more rows than declared")
        out.extend({} for _ in range(nrows - len(out)))
        self._rows = out

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, ({j: v for j, v in enumerate(r) if v} for r in data))

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict) -> "SparseMatrix":
        rows = [dict() for _ in range(nrows)]
        for (r, c), v in entries.items():
            rows[r][c] = v
        return cls(nrows, ncols, rows)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(r, c): v for r, row in enumerate(self._rows) for c, v in row.items()}

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> dict[int, Fraction]:
        return self._rows[i]

    def rows(self) -> list[dict[int, Fraction]]:
        return self._rows

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def matvec(self, v) -> list[Fraction]:
        get = v.get if isinstance(v, dict) else (lambda c, _d=None: v[c])
        return [sum((val * get(c, 0) for c, val in row.items()), Fraction(0)) for row in self._rows]

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for r, row in enumerate(self._rows):
            for c, v in row.items():
                out[r][c] = v
        return out


class SubspaceBasis:
    """A subspace of Q^ambient held in reduced row echelon form.

    ``labels`` optionally names the coordinates (e.g. basis vectors of a
    window), in which case :meth:`as_lincombs` is available.
    """

    __slots__ = ("ambient", "_rows", "labels")

    def __init__(self, ambient: int, rows: Sequence[dict], labels: Sequence | None = None):
        self.ambient = ambient
        self._rows = tuple(dict(sorted(r.items())) for r in rows)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != ambient:
            raise DimensionMismatch("label count differs from ambient dimension")

    @classmethod
    def span(cls, ambient: int, vectors: Iterable, labels: Sequence | None = None) -> "SubspaceBasis":
        rows = [_as_row(v) for v in vectors]
        for r in rows:
            if r and max(r) >= ambient:
                raise DimensionMismatch("vector longer than ambient dimension")
        _, reduced = rref_exact(rows)
        return cls(ambient, reduced, labels)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(min(r) for r in self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def sparse_rows(self) -> tuple[dict[int, Fraction], ...]:
        return self._rows

    def vectors(self) -> list[list[Fraction]]:
        return [_dense(r, self.ambient) for r in self._rows]

    def reduce(self, v) -> dict[int, Fraction]:
        """Remainder of ``v`` after eliminating every pivot."""
        rem = dict(_as_row(v))
        for row in self._rows:
            c = next(iter(row))
            a = rem.get(c)
            if a:
                for k, val in row.items():
                    nv = rem.get(k, 0) - a * val
                    if nv:
                        rem[k] = nv
                    else:
                        rem.pop(k, None)
        return rem

    def contains(self, v) -> bool:
        return in_span(v, self)

    def as_lincombs(self):
        from ..algebra import LinComb

        if self.labels is None:
            raise ValueError("unlabelled subspace")
        return [LinComb({self.labels[c]: v for c, v in r.items()}) for r in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient == other.ambient and self._rows == other._rows

    def __repr__(self) -> str:
        return f"SubspaceBasis(ambient={self.ambient}, dim={self.dim})"


def _as_row(v) -> dict[int, Fraction]:
    if isinstance(v, dict):
        return {c: Fraction(x) for c, x in v.items() if x}
    return {j: Fraction(x) for j, x in enumerate(v) if x}


def _dense(row: dict, n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for c, v in row.items():
        out[c] = v
    return out


def _primitive(row: dict) -> dict[int, int]:
    """Scale a rational or integer row to coprime integers, leading entry positive."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items()} if den != 1 else {c: int(v) for c, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    if g != 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _forward(rows: Iterable[dict]) -> dict[int, dict[int, int]]:
    """Fraction-free echelon insertion; returns pivot column -> primitive row."""
    basis: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _primitive(raw)
        while row:
            c = min(row)
            prow = basis.get(c)
            if prow is None:
                basis[c] = row
                break
            a, b = prow[c], row[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in row.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new)
    return basis


def rref_exact(rows: Iterable[dict]) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Reduced row echelon form of the row space: (pivot columns, rows)."""
    basis = _forward(rows)
    pivots = sorted(basis)
    reduced: dict[int, dict[int, Fraction]] = {}
    for c in reversed(pivots):
        prow = basis[c]
        lead = prow[c]
        row = {k: Fraction(v, lead) for k, v in prow.items()}
        for k in [k for k in row if k != c and k in reduced]:
            a = row.get(k)
            if not a:
                continue
            for kk, vv in reduced[k].items():
                nv = row.get(kk, 0) - a * vv
                if nv:
                    row[kk] = nv
                else:
                    row.pop(kk, None)
        reduced[c] = dict(sorted(row.items()))
    return pivots, [reduced[c] for c in pivots]


def rank_exact(A: SparseMatrix) -> int:
    return len(_forward(A.rows()))


def column_blocks(rows: Sequence[dict], ncols: int) -> list[tuple[list[int], list[int]]]:
    """Split into independent blocks: (sorted columns, row indices) per block.

    Columns that occur in no row come back as singleton blocks with no rows.
    """
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in rows:
        it = iter(row)
        first = next(it, None)
        if first is None:
            continue
        ra = find(first)
        for c in it:
            rc = find(c)
            if rc != ra:
                parent[rc] = ra
    cols_of: dict[int, list[int]] = {}
    for c in range(ncols):
        cols_of.setdefault(find(c), []).append(c)
    rows_of: dict[int, list[int]] = {}
    for i, row in enumerate(rows):
        if row:
            rows_of.setdefault(find(next(iter(row))), []).append(i)
    return [(cols, rows_of.get(root, [])) for root, cols in sorted(cols_of.items(), key=lambda kv: kv[1][0])]


def _dedupe(rows: Iterable[dict]) -> list[dict[int, int]]:
    seen = set()
    out = []
    for r in rows:
        pr = _primitive(r)
        if not pr:
            continue
        key = tuple(sorted(pr.items()))
        if key not in seen:
            seen.add(key)
            out.append(pr)
    return out


def _kernel_from_rref(cols: Sequence[int], pivots: Sequence[int], reduced: Sequence[dict]) -> list[dict]:
    pset = set(pivots)
    vecs = []
    for f in cols:
        if f in pset:
            continue
        v = {f: Fraction(1)}
        for pc, row in zip(pivots, reduced):
            a = row.get(f)
            if a:
                v[pc] = -a
        vecs.append(v)
    return vecs


def _dot_zero(row: dict, v: dict) -> bool:
    return sum((a * v[c] for c, a in row.items() if c in v), 0) == 0


@dataclass
class SolveStats:
    blocks: int = 0
    modular_rank: int = 0
    exact_rank: int = 0
    prime: int | None = None
    full_rank_blocks: int = 0
    redraws: int = 0
    rows_after_dedupe: int = 0
    notes: list = field(default_factory=list)


def _block_nullspace(rows: list[dict[int, int]], cols: list[int], cfg: ModularConfig | None,
                     stats: SolveStats) -> list[dict[int, Fraction]]:
    if not rows:
        return [{c: Fraction(1)} for c in cols]
    if cfg is None:
        pivots, reduced = rref_exact(rows)
        stats.exact_rank += len(pivots)
        kernel = _kernel_from_rref(cols, pivots, reduced)
    else:
        rank, _, sel = echelon_rows_mod_p(rows, cols, cfg.prime)
        stats.modular_rank += rank
        if rank == len(cols):
            # rank mod p never exceeds the exact rank, which is at most len(cols)
            stats.full_rank_blocks += 1
            stats.exact_rank += rank
            return []
        pivots, reduced = rref_exact(rows[i] for i in sel)
        if len(pivots) != rank:
            raise ModularMismatch(f"selected rows have exact rank {len(pivots)}, modular rank {rank}")
        kernel = _kernel_from_rref(cols, pivots, reduced)
        for row in rows:
            for v in kernel:
                if not _dot_zero(row, v):
                    raise ModularMismatch(
                        f"prime {cfg.prime} underestimates the rank of a {len(rows)}x{len(cols)} block")
        stats.exact_rank += rank
    _, echelon = rref_exact(kernel)
    return echelon


def nullspace_exact(A: SparseMatrix, cfg: ModularConfig | None = DEFAULT_CONFIG,
                    labels: Sequence | None = None, stats: SolveStats | None = None) -> SubspaceBasis:
    """Exact kernel {v : A v = 0} in reduced echelon form.

    With ``cfg=None`` the modular tier is skipped and every block is
    eliminated exactly.  A prime dividing a denominator is redrawn a
    bounded number of times.
    """
    stats = stats if stats is not None else SolveStats()
    attempt = cfg
    for _ in range(MAX_REDRAWS):
        try:
            return _nullspace(A, attempt, labels, stats)
        except BadPrime:
            stats.redraws += 1
            attempt = attempt.redraw()
    raise BadPrime(f"no usable prime after {MAX_REDRAWS} draws")


def _nullspace(A, cfg, labels, stats) -> SubspaceBasis:
    stats.blocks = 0
    stats.modular_rank = stats.exact_rank = stats.full_rank_blocks = 0
    stats.prime = cfg.prime if cfg else None
    rows = _dedupe(A.rows())
    stats.rows_after_dedupe = len(rows)
    out: list[dict] = []
    for cols, ridx in column_blocks(rows, A.ncols):
        stats.blocks += 1
        out.extend(_block_nullspace([rows[i] for i in ridx], cols, cfg, stats))
    out.sort(key=min)
    return SubspaceBasis(A.ncols, out, labels)


def rank_mod_p(A: SparseMatrix, cfg: ModularConfig = DEFAULT_CONFIG) -> int:
    """Rank of A reduced mod ``cfg.prime``; raises BadPrime on a bad denominator."""
    rows = [r for r in A.rows() if r]
    total = 0
    for cols, ridx in column_blocks(rows, A.ncols):
        if ridx:
            total += echelon_rows_mod_p([rows[i] for i in ridx], cols, cfg.prime)[0]
    return total


def in_span(v, basis: SubspaceBasis) -> bool:
    if isinstance(v, dict):
        if v and max(v) >= basis.ambient:
            raise DimensionMismatch("vector index exceeds ambient dimension")
    elif len(v) != basis.ambient:
        raise DimensionMismatch(f"vector of length {len(v)} vs ambient {basis.ambient}")
    return not basis.reduce(v)


def solve_exact(A: SparseMatrix, b: Sequence) -> list[Fraction] | None:
    """Some x with A x = b, free variables set to zero; None if inconsistent."""
    if len(b) != A.nrows:
        raise DimensionMismatch("right-hand side length differs from row count")
    n = A.ncols
    aug = []
    for row, bi in zip(A.rows(), b):
        r = dict(row)
        bi = Fraction(bi)
        if bi:
            r[n] = bi
        aug.append(r)
    pivots, reduced = rref_exact(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for c, row in zip(pivots, reduced):
        x[c] = row.get(n, Fraction(0))
    return x
