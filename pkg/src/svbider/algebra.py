"""Exact scalars, graded basis vectors and the bracket of L(lambda, mu, s).

The algebra has basis ``L_n, M_n, Y_{n+s}`` (``n`` integral, ``s`` in
``{0, 1/2}``) and the nontrivial brackets

    [L_n, L_m]         = (m - n) L_{n+m}
    [L_n, M_m]         = (m - lam*n + 2 mu) M_{n+m}
    [L_n, Y_{m+s}]     = (m + s - (lam+1)/2 * n + mu) Y_{n+m+s}
    [Y_{n+s}, Y_{m+s}] = (m - n) M_{n+m+2s}

Every other family pair brackets to zero.  Pairs written in one argument
order only are completed by antisymmetry.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from .errors import InvalidBasisVector

Scalar = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Exact conversion; floats are refused so nothing inexact leaks in."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True, slots=True)
class HalfInt:
    """An element of (1/2)Z stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        q = as_fraction(value)
        twice = 2 * q
        if twice.denominator != 1:
            raise ValueError(f"{value!r} is not in (1/2)Z")
        return cls(twice.numerator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def is_integral(self) -> bool:
        return self.doubled % 2 == 0

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled + other.doubled)

    def __sub__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled - other.doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.doubled)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.doubled))

    def __str__(self) -> str:
        return format_fraction(self.value)

    def __repr__(self) -> str:
        return f"HalfInt({self})"


class Family(enum.IntEnum):
    L = 0
    M = 1
    Y = 2

    @property
    def weight(self) -> int:
        # auxiliary grading preserved by the bracket: [Y, Y] lands in M
        return (0, 2, 1)[self]


class BasisVector(NamedTuple):
    family: Family
    index: HalfInt

    @property
    def degree(self) -> HalfInt:
        return self.index

    def __str__(self) -> str:
        idx = str(self.index)
        if "/" in idx or idx.startswith("-"):
            idx = "{" + idx + "}"
        return f"{self.family.name}_{idx}"


def L(n) -> BasisVector:
    return BasisVector(Family.L, HalfInt.of(n))


def M(n) -> BasisVector:
    return BasisVector(Family.M, HalfInt.of(n))


def Y(index) -> BasisVector:
    """``Y(Fraction(1, 2))`` is ``Y_{1/2}``; the argument is the full index."""
    return BasisVector(Family.Y, HalfInt.of(index))


def parse_basis(text: str) -> BasisVector:
    """Parse ``"L_3"``, ``"Y_{-1/2}"`` or ``"M_-2"``."""
    fam, _, idx = text.strip().partition("_")
    idx = idx.strip("{}")
    try:
        family = Family[fam]
    except KeyError:
        raise ValueError(f"unknown family in {text!r}") from None
    return BasisVector(family, HalfInt.of(idx))


_HALF = HalfInt(1)
_ZERO = HalfInt(0)


@dataclass(frozen=True, slots=True)
class Params:
    """The parameter triple.  ``lam`` and ``mu`` are exact rationals."""

    lam: Fraction
    mu: Fraction
    s: HalfInt

    def __post_init__(self):
        for name in ("lam", "mu"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, as_fraction(v))
        if not isinstance(self.s, HalfInt):
            object.__setattr__(self, "s", HalfInt.of(self.s))
        if self.s not in (_ZERO, _HALF):
            raise ValueError(f"s must be 0 or 1/2, got {self.s}")

    @classmethod
    def of(cls, lam, mu, s=0) -> "Params":
        return cls(as_fraction(lam), as_fraction(mu), HalfInt.of(s))

    # coset memberships, decided exactly
    def two_mu_integral(self) -> bool:
        """mu in (1/2)Z, equivalently mu in s + (1/2)Z."""
        return (2 * self.mu).denominator == 1

    def mu_in_s_plus_z(self) -> bool:
        return (self.mu - self.s.value).denominator == 1

    def mu_in_s_half_plus_z(self) -> bool:
        return (self.mu - self.s.value - Fraction(1, 2)).denominator == 1

    def is_valid(self, b: BasisVector) -> bool:
        if b.family is Family.Y:
            return b.index.doubled % 2 == self.s.doubled
        return b.index.doubled % 2 == 0

    def check(self, b: BasisVector) -> BasisVector:
        if not self.is_valid(b):
            raise InvalidBasisVector(f"{b} is not a basis vector of L(lam, mu, s={self.s})")
        return b

    def as_strings(self) -> dict:
        return {"lambda": format_fraction(self.lam), "mu": format_fraction(self.mu), "s": str(self.s)}

    def __str__(self) -> str:
        d = self.as_strings()
        return f"(lambda={d['lambda']}, mu={d['mu']}, s={d['s']})"


class LinComb:
    """A finite exact linear combination of basis vectors.

    Zero coefficients are never stored, so ``bool(v)`` is the zero test.
    Iteration yields ``(basis, coeff)`` in canonical order.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[BasisVector, Scalar] | Iterable | None = None):
        acc: dict[BasisVector, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for b, c in items:
                c = as_fraction(c)
                if c:
                    acc[b] = acc.get(b, 0) + c
            acc = {b: c for b, c in acc.items() if c}
        self._terms = acc

    @classmethod
    def _wrap(cls, terms: dict) -> "LinComb":
        out = cls.__new__(cls)
        out._terms = terms
        return out

    @classmethod
    def single(cls, b: BasisVector, c: Scalar = 1) -> "LinComb":
        c = as_fraction(c)
        return cls._wrap({b: c} if c else {})

    def coeff(self, b: BasisVector) -> Fraction:
        return self._terms.get(b, Fraction(0))

    def support(self) -> list[BasisVector]:
        return sorted(self._terms)

    def items(self) -> list[tuple[BasisVector, Fraction]]:
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[tuple[BasisVector, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self._terms)
        for b, c in other._terms.items():
            v = out.get(b, 0) + c
            if v:
                out[b] = v
            else:
                out.pop(b, None)
        return LinComb._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "LinComb":
        return LinComb._wrap({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "LinComb":
        if isinstance(scalar, LinComb):
            return NotImplemented
        a = as_fraction(scalar)
        if not a:
            return LinComb._wrap({})
        return LinComb._wrap({b: a * c for b, c in self._terms.items()})

    __rmul__ = __mul__

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self._terms.values()), default=Fraction(0))

    def __repr__(self) -> str:
        return f"LinComb({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for b, c in self.items():
            parts.append(f"{format_fraction(c)}*{b}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = LinComb()


@lru_cache(maxsize=1 << 20)
def bracket_term(x: BasisVector, y: BasisVector, p: Params) -> tuple[Fraction, BasisVector] | None:
    """``[x, y]`` as ``(coeff, basis)``; every basis bracket is a single term.

    No validity check; callers on the hot path guarantee valid input.
    """
    fx, fy = x.family, y.family
    if fx > fy:
        t = bracket_term(y, x, p)
        return None if t is None else (-t[0], t[1])
    if fx is Family.L:
        n = x.index.value
        m = y.index.value
        if fy is Family.L:
            c = m - n
        elif fy is Family.M:
            c = m - p.lam * n + 2 * p.mu
        else:
            c = m - (p.lam + 1) / 2 * n + p.mu
        target = BasisVector(fy, x.index + y.index)
    elif fx is Family.Y and fy is Family.Y:
        c = y.index.value - x.index.value
        target = BasisVector(Family.M, x.index + y.index)
    else:
        return None
    if not c:
        return None
    return (c, target)


def bracket_basis(x: BasisVector, y: BasisVector, p: Params) -> LinComb:
    p.check(x)
    p.check(y)
    t = bracket_term(x, y, p)
    return ZERO if t is None else LinComb._wrap({t[1]: t[0]})


def bracket(u: LinComb, v: LinComb, p: Params) -> LinComb:
    """Bilinear extension of :func:`bracket_basis`."""
    acc: dict[BasisVector, Fraction] = {}
    for x, a in u._terms.items():
        for y, b in v._terms.items():
            t = bracket_term(x, y, p)
            if t is None:
                continue
            c, z = t
            val = acc.get(z, 0) + a * b * c
            if val:
                acc[z] = val
            else:
                del acc[z]
    return LinComb._wrap(acc)


def as_lincomb(x: BasisVector | LinComb) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb._wrap({x: Fraction(1)})


def jacobi_residual(x: BasisVector, y: BasisVector, z: BasisVector, p: Params) -> LinComb:
    """``[x,[y,z]] + [y,[z,x]] + [z,[x,y]]``."""
    acc: dict[BasisVector, Fraction] = {}
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        inner = bracket_term(b, c, p)
        if inner is None:
            continue
        outer = bracket_term(a, inner[1], p)
        if outer is None:
            continue
        coef = inner[0] * outer[0]
        val = acc.get(outer[1], 0) + coef
        if val:
            acc[outer[1]] = val
        else:
            del acc[outer[1]]
    return LinComb._wrap(acc)
