"""Bilinear maps, linear self-maps and residuals of their defining identities.

Maps come in two backings.  Formula-backed maps are total and evaluate a
closed form.  Window-backed maps hold a finite table (classifier output)
and raise :class:`UndefinedSupport` outside their domain instead of
silently returning zero.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping

from .algebra import (
    ZERO,
    BasisVector,
    Family,
    HalfInt,
    LinComb,
    Params,
    as_fraction,
    as_lincomb,
    bracket,
    bracket_term,
)
from .errors import NotCommuting, ParameterIncompatible, PreconditionViolated, UndefinedSupport
from .linalg import SubspaceBasis, in_span, rank_exact, SparseMatrix
from .structure import Window, centralizer_of_derived


class BilinearMap:
    """phi : L x L -> L, evaluated on basis pairs and extended bilinearly."""

    skew: bool = True
    name: str = "phi"

    def on_basis(self, x: BasisVector, y: BasisVector) -> LinComb:
        raise NotImplementedError

    def __call__(self, u, v) -> LinComb:
        if isinstance(u, BasisVector) and isinstance(v, BasisVector):
            return self.on_basis(u, v)
        out = ZERO
        for x, a in as_lincomb(u):
            for y, b in as_lincomb(v):
                val = self.on_basis(x, y)
                if val:
                    out = out + val * (a * b)
        return out


class FormulaBilinearMap(BilinearMap):
    def __init__(self, fn: Callable[[BasisVector, BasisVector], LinComb], *, skew: bool = True,
                 name: str = "phi"):
        self._fn = lru_cache(maxsize=1 << 16)(fn)
        self.skew = skew
        self.name = name

    def on_basis(self, x, y):
        return self._fn(x, y)

    def __repr__(self):
        return f"<{self.name}>"


class WindowBilinearMap(BilinearMap):
    """Finite table on pairs of ``domain``; pairs in the domain but absent map to 0.

    With ``skew=True`` the table holds canonically ordered pairs only.
    """

    def __init__(self, domain: Iterable[BasisVector], table: Mapping, *, skew: bool = True,
                 name: str = "window-map"):
        self.domain = frozenset(domain)
        self.skew = skew
        self.name = name
        clean = {}
        for (x, y), val in table.items():
            if x not in self.domain or y not in self.domain:
                raise UndefinedSupport(f"table pair ({x}, {y}) outside the domain")
            val = as_lincomb(val)
            if not val:
                continue
            if skew:
                if x == y:
                    raise ValueError("skew map with nonzero diagonal entry")
                if y < x:
                    x, y, val = y, x, -val
            clean[(x, y)] = val
        self._table = clean

    def on_basis(self, x, y):
        if x not in self.domain or y not in self.domain:
            raise UndefinedSupport(f"{self.name} is undefined at ({x}, {y})")
        if self.skew:
            if x == y:
                return ZERO
            if y < x:
                return -self._table.get((y, x), ZERO)
        return self._table.get((x, y), ZERO)

    def table(self) -> dict:
        return dict(self._table)


def _single(b: BasisVector, c) -> LinComb:
    return LinComb.single(b, c)


def inner_bider(alpha, p: Params) -> FormulaBilinearMap:
    alpha = as_fraction(alpha)

    def fn(x, y):
        t = bracket_term(x, y, p)
        return ZERO if t is None or not alpha else _single(t[1], alpha * t[0])

    return FormulaBilinearMap(fn, skew=True, name=f"inner({alpha})")


def _require(cond: bool, what: str, p: Params) -> None:
    if not cond:
        raise ParameterIncompatible(f"{what} is undefined at {p}")


def phi0(p: Params) -> FormulaBilinearMap:
    """(L_n, L_m) -> (m - n) M_{n+m-2mu}; everything else -> 0."""
    _require(p.lam == 1 and p.two_mu_integral(), "phi0 (needs lambda=1, 2mu integral)", p)
    shift = HalfInt.of(-2 * p.mu)

    def fn(x, y):
        if x.family is Family.L and y.family is Family.L:
            c = y.index.value - x.index.value
            if c:
                return _single(BasisVector(Family.M, x.index + y.index + shift), c)
        return ZERO

    return FormulaBilinearMap(fn, skew=True, name="phi0")


def phi1(p: Params) -> FormulaBilinearMap:
    """The three printed cases, each evaluated literally in its own argument order."""
    _require(p.lam == 1 and p.mu_in_s_plus_z(), "phi1 (needs lambda=1, mu in s+Z)", p)
    mu = p.mu
    shift = HalfInt.of(-mu)

    def fn(x, y):
        fx, fy = x.family, y.family
        if fx is Family.L and fy is Family.L:
            c = y.index.value - x.index.value
            target = BasisVector(Family.Y, x.index + y.index + shift)
        elif fx is Family.L and fy is Family.Y:
            # (L_n, Y_{m+s}) -> (m+s-n+mu) M_{n+m+s-mu}
            c = y.index.value - x.index.value + mu
            target = BasisVector(Family.M, x.index + y.index + shift)
        elif fx is Family.Y and fy is Family.L:
            # (Y_{m+s}, L_n) -> (n-m-s-mu) M_{n+m+s-mu}
            c = y.index.value - x.index.value - mu
            target = BasisVector(Family.M, x.index + y.index + shift)
        else:
            return ZERO
        return _single(target, c) if c else ZERO

    return FormulaBilinearMap(fn, skew=True, name="phi1")


class LinearSelfMap:
    """psi : L -> L given on basis vectors; unmapped basis vectors go to 0."""

    name = "psi"

    def on_basis(self, b: BasisVector) -> LinComb:
        raise NotImplementedError

    def __call__(self, u) -> LinComb:
        if isinstance(u, BasisVector):
            return self.on_basis(u)
        out = ZERO
        for b, a in u:
            val = self.on_basis(b)
            if val:
                out = out + val * a
        return out


class FormulaSelfMap(LinearSelfMap):
    def __init__(self, fn: Callable[[BasisVector], LinComb], name: str = "psi"):
        self._fn = lru_cache(maxsize=1 << 14)(fn)
        self.name = name

    def on_basis(self, b):
        return self._fn(b)

    def __repr__(self):
        return f"<{self.name}>"


class WindowSelfMap(LinearSelfMap):
    def __init__(self, domain: Iterable[BasisVector], images: Mapping, name: str = "window-psi"):
        self.domain = frozenset(domain)
        self.name = name
        self._images = {}
        for b, v in images.items():
            if b not in self.domain:
                raise UndefinedSupport(f"{b} outside the domain")
            v = as_lincomb(v)
            if v:
                self._images[b] = v

    def on_basis(self, b):
        if b not in self.domain:
            raise UndefinedSupport(f"{self.name} is undefined at {b}")
        return self._images.get(b, ZERO)

    def images(self) -> dict:
        return dict(self._images)


class FunctionalSpec:
    """A linear functional on the algebra given by its values on basis vectors."""

    def __init__(self, coefficients: Mapping[BasisVector, object] | None = None):
        self.coefficients = {b: as_fraction(c) for b, c in (coefficients or {}).items() if as_fraction(c)}

    def __call__(self, b: BasisVector) -> Fraction:
        return self.coefficients.get(b, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.coefficients)


def identity_map() -> FormulaSelfMap:
    return FormulaSelfMap(lambda b: LinComb.single(b, 1), name="id")


def psi0(p: Params) -> FormulaSelfMap:
    """L_n -> M_{n-2mu}; M, Y -> 0."""
    _require(p.lam == 1 and p.two_mu_integral(), "psi0 (needs lambda=1, 2mu integral)", p)
    shift = HalfInt.of(-2 * p.mu)

    def fn(b):
        if b.family is Family.L:
            return LinComb.single(BasisVector(Family.M, b.index + shift), 1)
        return ZERO

    return FormulaSelfMap(fn, name="psi0")


def psi1(p: Params) -> FormulaSelfMap:
    """L_n -> Y_{n-mu}, Y_{n+s} -> M_{n+s-mu}; M -> 0."""
    _require(p.lam == 1 and p.mu_in_s_plus_z(), "psi1 (needs lambda=1, mu in s+Z)", p)
    shift = HalfInt.of(-p.mu)

    def fn(b):
        if b.family is Family.L:
            return LinComb.single(BasisVector(Family.Y, b.index + shift), 1)
        if b.family is Family.Y:
            return LinComb.single(BasisVector(Family.M, b.index + shift), 1)
        return ZERO

    return FormulaSelfMap(fn, name="psi1")


def central_vector(p: Params) -> BasisVector | None:
    if p.lam == 0 and p.two_mu_integral():
        return BasisVector(Family.M, HalfInt.of(-2 * p.mu))
    return None


def standard_commuting(alpha, f: FunctionalSpec | None, p: Params) -> FormulaSelfMap:
    """x -> alpha x + f(x) M_{-2mu}."""
    alpha = as_fraction(alpha)
    f = f or FunctionalSpec()
    z = central_vector(p)
    if f and z is None:
        raise ParameterIncompatible(f"the center is zero at {p}; f must vanish")

    def fn(b):
        out = LinComb.single(b, alpha)
        c = f(b)
        if c:
            out = out + LinComb.single(z, c)
        return out

    return FormulaSelfMap(fn, name="standard")


# ------------------------------------------------------------------ residuals

def bider_residual_1(phi: BilinearMap, x, y, z, p: Params) -> LinComb:
    """phi([x,y], z) - [x, phi(y,z)] - [phi(x,z), y]."""
    x, y, z = as_lincomb(x), as_lincomb(y), as_lincomb(z)
    return phi(bracket(x, y, p), z) - bracket(x, phi(y, z), p) - bracket(phi(x, z), y, p)


def bider_residual_2(phi: BilinearMap, x, y, z, p: Params) -> LinComb:
    """phi(x, [y,z]) - [phi(x,y), z] - [y, phi(x,z)]."""
    x, y, z = as_lincomb(x), as_lincomb(y), as_lincomb(z)
    return phi(x, bracket(y, z, p)) - bracket(phi(x, y), z, p) - bracket(y, phi(x, z), p)


def skew_check(phi: BilinearMap, pairs: Iterable[tuple[BasisVector, BasisVector]]) -> bool:
    for x, y in pairs:
        if phi(x, y) + phi(y, x):
            return False
        if x == y and phi(x, x):
            return False
    return True


def skew_check_window(phi: BilinearMap, w: Window) -> bool:
    basis = w.basis
    return skew_check(phi, product(basis, basis))


def lemma25_residual(phi: BilinearMap, x, y, u, v, p: Params) -> LinComb:
    """[phi(x,y), [u,v]] - [[x,y], phi(u,v)]."""
    x, y, u, v = map(as_lincomb, (x, y, u, v))
    return bracket(phi(x, y), bracket(u, v, p), p) - bracket(bracket(x, y, p), phi(u, v), p)


def lemma26_check(phi: BilinearMap, x, y, p: Params, w: Window) -> bool:
    """phi(x, y) lies in the centralizer of the derived subalgebra on ``w``."""
    if bracket(as_lincomb(x), as_lincomb(y), p):
        raise PreconditionViolated(f"[{x}, {y}] is nonzero")
    value = phi(x, y)
    basis = w.basis
    index = {b: j for j, b in enumerate(basis)}
    if any(b not in index for b in value.support()):
        return False
    cent: SubspaceBasis = centralizer_of_derived(p, w, 2)
    return in_span({index[b]: c for b, c in value}, cent)


def commuting_residual(psi: LinearSelfMap, x, p: Params) -> LinComb:
    x = as_lincomb(x)
    return bracket(psi(x), x, p)


def polarized_commuting_residual(psi: LinearSelfMap, x, y, p: Params) -> LinComb:
    """[psi(x), y] + [psi(y), x]."""
    x, y = as_lincomb(x), as_lincomb(y)
    return bracket(psi(x), y, p) + bracket(psi(y), x, p)


def bider_from_commuting(psi: LinearSelfMap, p: Params, check_window: Window | None = None) -> FormulaBilinearMap:
    """(x, y) -> [psi(x), y], after checking psi commutes on ``check_window``."""
    w = check_window or Window(3, p.s)
    basis = w.basis
    for i, x in enumerate(basis):
        for y in basis[i:]:
            r = polarized_commuting_residual(psi, x, y, p)
            if r:
                raise NotCommuting(f"[psi({x}), {y}] + [psi({y}), {x}] = {r}")

    def fn(x, y):
        return bracket(psi(x), as_lincomb(y), p)

    return FormulaBilinearMap(fn, skew=True, name=f"bider({getattr(psi, 'name', 'psi')})")


# ------------------------------------------------------------ window drivers

def bider_window_check(phi: BilinearMap, p: Params, w: Window) -> dict:
    """Both biderivation axioms on all triples of ``B(N)``; returns counts and a witness."""
    basis = w.basis
    bad1 = bad2 = 0
    witness = None
    for x, y, z in product(basis, basis, basis):
        r1 = bider_residual_1(phi, x, y, z, p)
        r2 = bider_residual_2(phi, x, y, z, p)
        if r1:
            bad1 += 1
        if r2:
            bad2 += 1
        if (r1 or r2) and witness is None:
            witness = (x, y, z)
    return {"triples": len(basis) ** 3, "axiom1_failures": bad1, "axiom2_failures": bad2,
            "witness": witness}


def lemma25_window_check(phi: BilinearMap, p: Params, w: Window) -> dict:
    """[phi(x,y),[u,v]] = [[x,y],phi(u,v)] on all quadruples of ``B(N)``.

    Pair values are computed once; each quadruple then costs two brackets.
    """
    basis = w.basis
    pairs = list(product(basis, basis))
    vals = [(phi(x, y), bracket(as_lincomb(x), as_lincomb(y), p)) for x, y in pairs]
    failures = 0
    witness = None
    for i, (pv, bv) in enumerate(vals):
        for j, (pw, bw) in enumerate(vals):
            if not (pv and bw) and not (bv and pw):
                continue
            if bracket(pv, bw, p) != bracket(bv, pw, p):
                failures += 1
                if witness is None:
                    witness = pairs[i] + pairs[j]
    return {"quadruples": len(pairs) ** 2, "failures": failures, "witness": witness}


def evaluation_rank(maps: list[BilinearMap], pairs: list[tuple[BasisVector, BasisVector]]) -> int:
    """Rank of the maps' evaluation vectors over ``pairs`` (exact)."""
    coords: dict = {}
    rows = []
    for phi in maps:
        row = {}
        for k, (x, y) in enumerate(pairs):
            for b, c in phi(x, y):
                j = coords.setdefault((k, b), len(coords))
                row[j] = c
        rows.append(row)
    return rank_exact(SparseMatrix(len(rows), max(len(coords), 1), rows))


def maps_agree(a: BilinearMap, b: BilinearMap, pairs: Iterable) -> tuple[bool, tuple | None]:
    for x, y in pairs:
        if a(x, y) != b(x, y):
            return False, (x, y)
    return True, None
