"""Randomized algebraic identities."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, strategies as st

from svbider.algebra import BasisVector, Family, HalfInt, LinComb, Params, bracket, jacobi_residual
from svbider.classifier import detect_case
from svbider.cli import parse_rational
from svbider.linalg import SubspaceBasis, in_span, nullspace_exact
from svbider.maps import bider_from_commuting, commuting_residual, polarized_commuting_residual, psi0, psi1
from svbider.structure import Window

from helpers import instance

rationals = st.one_of(
    st.sampled_from([Fraction(k, 2) for k in range(-6, 7)] + [Fraction(-3), Fraction(1, 3)]),
    st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6)),
)
s_values = st.sampled_from([Fraction(0), Fraction(1, 2)])


@st.composite
def params(draw):
    return Params.of(draw(rationals), draw(rationals), draw(s_values))


@st.composite
def basis_for(draw, p: Params):
    fam = draw(st.sampled_from(list(Family)))
    n = draw(st.integers(-6, 6))
    if fam is Family.Y:
        return BasisVector(fam, HalfInt(2 * n + p.s.doubled))
    return BasisVector(fam, HalfInt(2 * n))


@st.composite
def lincomb_for(draw, p: Params):
    k = draw(st.integers(0, 4))
    return LinComb({draw(basis_for(p)): draw(rationals) for _ in range(k)})


@st.composite
def param_and_elements(draw, count):
    p = draw(params())
    return p, [draw(lincomb_for(p)) for _ in range(count)]


@given(param_and_elements(2))
def test_antisymmetry(data):
    p, (u, v) = data
    assert bracket(u, v, p) == -bracket(v, u, p)
    assert not bracket(u, u, p)


@given(param_and_elements(3), rationals, rationals)
def test_bilinearity(data, a, b):
    p, (u, v, w) = data
    assert bracket(u * a + v * b, w, p) == bracket(u, w, p) * a + bracket(v, w, p) * b
    assert bracket(w, u * a + v * b, p) == bracket(w, u, p) * a + bracket(w, v, p) * b


@given(param_and_elements(3))
def test_jacobi_on_combinations(data):
    p, (u, v, w) = data
    total = (bracket(u, bracket(v, w, p), p) + bracket(v, bracket(w, u, p), p)
             + bracket(w, bracket(u, v, p), p))
    assert not total


@given(params().flatmap(lambda p: st.tuples(st.just(p), basis_for(p), basis_for(p), basis_for(p))))
def test_jacobi_on_basis(data):
    p, x, y, z = data
    assert not jacobi_residual(x, y, z, p)


@given(st.sampled_from([0, 1, 2]), s_values,
       st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)]), st.data())
def test_polarization_identity(_, s, mu, data):
    p = Params.of(1, mu, s)
    psi = psi1(p) if p.mu_in_s_plus_z() else psi0(p)
    x, y = data.draw(lincomb_for(p)), data.draw(lincomb_for(p))
    lhs = commuting_residual(psi, x + y, p) - commuting_residual(psi, x, p) - commuting_residual(psi, y, p)
    assert lhs == polarized_commuting_residual(psi, x, y, p)
    assert not lhs


@given(params(), st.integers(-3, 3))
def test_detect_case_coset_invariance(p, k):
    shifted = Params(p.lam, p.mu + k, p.s)
    assert detect_case(shifted) == detect_case(p)
    half = Params(p.lam, p.mu + Fraction(1, 2), p.s)
    tag, tag_half = detect_case(p), detect_case(half)
    assert tag.center_nonzero == tag_half.center_nonzero
    if p.lam == 1 and p.two_mu_integral():
        assert {tag.bider_case, tag_half.bider_case} == {"Lambda1HalfCoset", "Lambda1IntCoset"}


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_parse_rational_roundtrip(num, den):
    q = Fraction(num, den)
    assert parse_rational(f"{num}/{den}") == q
    assert parse_rational(str(q)) == q


@given(st.integers(0, 10**6))
def test_nullspace_and_in_span_agree_with_matvec(seed):
    A = instance(seed)
    S = nullspace_exact(A)
    rng = random.Random(seed)
    for v in S.vectors():
        assert all(x == 0 for x in A.matvec(v))
    combo = [Fraction(0)] * A.ncols
    for v in S.vectors():
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        combo = [a + c * b for a, b in zip(combo, v)]
    assert in_span(combo, S)
    probe = [Fraction(rng.randint(-3, 3)) for _ in range(A.ncols)]
    assert in_span(probe, S) == all(x == 0 for x in A.matvec(probe))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=5))
def test_span_is_order_independent(vectors):
    a = SubspaceBasis.span(4, vectors)
    b = SubspaceBasis.span(4, list(reversed(vectors)))
    assert a == b


def test_bider_from_psi_is_skew_on_window():
    p = Params.of(1, 1)
    phi = bider_from_commuting(psi1(p), p, Window(2))
    basis = Window(2).basis
    assert all(not (phi(x, y) + phi(y, x)) for x in basis for y in basis)
