"""Center, derived subalgebra, abelianization and centralizers on a window.

A window ``B(N)`` is the finite slice of the basis with ``|index| <= N``.
Centrality is tested against ``B(N)`` only.  That is exact here: a
homogeneous element fails to commute with some ``L_k`` or ``Y`` of small
degree whenever it fails at all, because each bracket coefficient is an
affine function of the source indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    BasisVector,
    Family,
    HalfInt,
    LinComb,
    Params,
    bracket_term,
    format_fraction,
)
from .linalg import SparseMatrix, SubspaceBasis, nullspace_exact, rref_exact


@dataclass(frozen=True)
class Window:
    radius: int
    s: HalfInt = HalfInt(0)

    def __post_init__(self):
        if not isinstance(self.s, HalfInt):
            object.__setattr__(self, "s", HalfInt.of(self.s))
        if self.radius < 0:
            raise ValueError("window radius must be nonnegative")

    @classmethod
    def for_params(cls, p: Params, radius: int) -> "Window":
        return cls(radius, p.s)

    def grow(self, by: int) -> "Window":
        return Window(self.radius + by, self.s)

    @property
    def basis(self) -> tuple[BasisVector, ...]:
        return _window_basis(self.radius, self.s.doubled)

    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, b: BasisVector) -> bool:
        return abs(b.index.doubled) <= 2 * self.radius and (
            b.index.doubled % 2 == (self.s.doubled if b.family is Family.Y else 0))

    def expected_dim(self) -> int:
        n = self.radius
        return 3 * (2 * n + 1) if self.s.doubled == 0 else 2 * (2 * n + 1) + 2 * n


@lru_cache(maxsize=None)
def _window_basis(radius: int, s2: int) -> tuple[BasisVector, ...]:
    ints = [HalfInt(2 * n) for n in range(-radius, radius + 1)]
    ys = [HalfInt(d) for d in range(-2 * radius, 2 * radius + 1) if d % 2 == s2]
    return (tuple(BasisVector(Family.L, i) for i in ints)
            + tuple(BasisVector(Family.M, i) for i in ints)
            + tuple(BasisVector(Family.Y, i) for i in ys))


def _check(p: Params, w: Window) -> None:
    if w.s != p.s:
        raise ValueError(f"window s={w.s} differs from params s={p.s}")


def _annihilator(p: Params, w: Window, against) -> SubspaceBasis:
    """{v in span B(N) : [v, a] = 0 for every a in ``against``}."""
    basis = w.basis
    rows: dict[BasisVector, dict[int, Fraction]] = {}
    order: list = []
    for a in against:
        a_terms = a.items() if isinstance(a, LinComb) else [(a, Fraction(1))]
        local: dict[BasisVector, dict[int, Fraction]] = {}
        for j, b in enumerate(basis):
            for x, coef in a_terms:
                t = bracket_term(b, x, p)
                if t is None:
                    continue
                row = local.setdefault(t[1], {})
                v = row.get(j, 0) + coef * t[0]
                if v:
                    row[j] = v
                else:
                    row.pop(j)
        for key in sorted(local):
            if local[key]:
                order.append(local[key])
    A = SparseMatrix(len(order), len(basis), order)
    return nullspace_exact(A, cfg=None, labels=basis)


@lru_cache(maxsize=256)
def center_window(p: Params, w: Window) -> SubspaceBasis:
    _check(p, w)
    return _annihilator(p, w, w.basis)


@lru_cache(maxsize=256)
def derived_window(p: Params, w: Window, margin: int = 2) -> SubspaceBasis:
    """span{[x, y] : x, y in B(N+margin)} intersected with span B(N)."""
    if margin < 1:
        raise ValueError("margin must be >= 1")
    _check(p, w)
    src = w.grow(margin).basis
    images = []
    for i, x in enumerate(src):
        for y in src[i + 1:]:
            t = bracket_term(x, y, p)
            if t is not None:
                images.append({t[1]: t[0]})
    inside = w.basis
    outside = sorted({b for img in images for b in img if b not in w})
    # outside coordinates first: echelon rows pivoting inside have no outside part
    cols = {b: j for j, b in enumerate(outside + list(inside))}
    _, reduced = rref_exact({cols[b]: c for b, c in img.items()} for img in images)
    off = len(outside)
    kept = [{c - off: v for c, v in r.items()} for r in reduced if min(r) >= off]
    return SubspaceBasis.span(len(inside), kept, labels=inside)


def abelianization_dim(p: Params, w: Window, margin: int = 2) -> int:
    return len(w.basis) - derived_window(p, w, margin).dim


def abelianization_complement(p: Params, w: Window, margin: int = 2) -> list[BasisVector]:
    """Window basis vectors that are not pivots of the derived subalgebra."""
    d = derived_window(p, w, margin)
    piv = set(d.pivots)
    return [b for j, b in enumerate(w.basis) if j not in piv]


@lru_cache(maxsize=256)
def centralizer_of_derived(p: Params, w: Window, margin: int = 2) -> SubspaceBasis:
    _check(p, w)
    return _annihilator(p, w, derived_window(p, w, margin).as_lincombs())


@dataclass(frozen=True)
class JacobiResult:
    ok: bool
    triples_checked: int
    witness: tuple[BasisVector, BasisVector, BasisVector] | None = None
    residual: LinComb | None = None


def jacobi_check_window(p: Params, w: Window) -> JacobiResult:
    """Check every ordered triple; the first failure in canonical order is the witness."""
    _check(p, w)
    basis = w.basis
    memo: dict = {}

    def br(a, b):
        key = (a, b)
        if key not in memo:
            memo[key] = bracket_term(a, b, p)
        return memo[key]

    n = 0
    for x in basis:
        for y in basis:
            xy = br(x, y)
            for z in basis:
                n += 1
                # the three terms share one target (degree and weight are additive)
                total = 0
                for a, inner in ((x, br(y, z)), (y, br(z, x)), (z, xy)):
                    if inner is None:
                        continue
                    outer = br(a, inner[1])
                    if outer is not None:
                        total += inner[0] * outer[0]
                        target = outer[1]
                if total:
                    return JacobiResult(False, n, (x, y, z), LinComb.single(target, total))
    return JacobiResult(True, n)


def antisymmetry_check_window(p: Params, w: Window) -> tuple[bool, tuple | None]:
    basis = w.basis
    for x in basis:
        for y in basis:
            a, b = bracket_term(x, y, p), bracket_term(y, x, p)
            if (a is None) != (b is None) or (a is not None and (a[1] != b[1] or a[0] != -b[0])):
                return False, (x, y)
    return True, None


def degree_check_window(p: Params, w: Window) -> tuple[bool, tuple | None]:
    """Output degree is additive and the family lands where the grading says."""
    target_family = {
        (Family.L, Family.L): Family.L, (Family.L, Family.M): Family.M,
        (Family.L, Family.Y): Family.Y, (Family.Y, Family.Y): Family.M,
    }
    basis = w.basis
    for x in basis:
        for y in basis:
            t = bracket_term(x, y, p)
            if t is None:
                continue
            key = tuple(sorted((x.family, y.family)))
            if t[1].index != x.index + y.index or target_family.get(key) is not t[1].family:
                return False, (x, y)
    return True, None


def predicted_center(p: Params, w: Window) -> list[BasisVector]:
    """The center of the full algebra, intersected with the window."""
    if p.lam == 0 and p.two_mu_integral():
        b = BasisVector(Family.M, HalfInt.of(-2 * p.mu))
        if b in w:
            return [b]
    return []


def predicted_abelianization(p: Params, w: Window) -> list[BasisVector]:
    if p.lam == -3 and p.mu_in_s_plus_z():
        b = BasisVector(Family.Y, HalfInt.of(-p.mu))
        if b in w:
            return [b]
    return []


def structure_summary(p: Params, w: Window, margin: int = 2) -> dict:
    """All four window computations plus the closed-form predictions."""
    center = center_window(p, w)
    derived = derived_window(p, w, margin)
    cent = centralizer_of_derived(p, w, margin)

    def fmt(sb: SubspaceBasis):
        return [[[str(b), format_fraction(c)] for b, c in v.items()] for v in sb.as_lincombs()]

    pc = predicted_center(p, w)
    pa = predicted_abelianization(p, w)
    complement = abelianization_complement(p, w, margin)
    center_ok = center.dim == len(pc) and all(center.contains(
        {w.basis.index(b): 1}) for b in pc)
    ab_ok = complement == pa
    return {
        "window": w.radius,
        "margin": margin,
        "center": {"dim": center.dim, "basis": fmt(center), "predicted": [str(b) for b in pc],
                   "matches_prediction": center_ok},
        "derived": {"dim": derived.dim, "window_dim": len(w.basis)},
        "abelianization": {"dim": len(w.basis) - derived.dim, "missing": [str(b) for b in complement],
                           "predicted": [str(b) for b in pa], "matches_prediction": ab_ok},
        "centralizer_of_derived": {"dim": cent.dim, "basis": fmt(cent), "equals_center": cent == center},
    }
