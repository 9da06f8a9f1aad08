from __future__ import annotations

from fractions import Fraction as F

import pytest

from svbider.algebra import M, Params, Y
from svbider.structure import (
    Window,
    abelianization_complement,
    abelianization_dim,
    antisymmetry_check_window,
    center_window,
    centralizer_of_derived,
    degree_check_window,
    derived_window,
    jacobi_check_window,
    structure_summary,
)


def W(p, n):
    return Window(n, p.s)


def test_window_basis_sizes():
    assert len(Window(2)) == 15
    assert len(Window(2, F(1, 2))) == 14
    assert Window(3).expected_dim() == len(Window(3))
    assert Window(3, F(1, 2)).expected_dim() == len(Window(3, F(1, 2)))
    assert Y(F(1, 2)) in Window(1, F(1, 2)) and Y(F(1, 2)) not in Window(1)


def test_center_examples():
    p = Params.of(0, F(1, 2))
    C = center_window(p, W(p, 3))
    assert C.dim == 1 and [str(b) for b, _ in C.as_lincombs()[0]] == ["M_{-1}"]
    for p in (Params.of(1, 0), Params.of(0, F(1, 3))):
        assert center_window(p, W(p, 3)).dim == 0


def test_derived_examples():
    p = Params.of(1, 0)
    assert derived_window(p, W(p, 2)).dim == 15
    p = Params.of(-3, 1)
    assert derived_window(p, W(p, 2)).dim == 14
    assert abelianization_complement(p, W(p, 2)) == [Y(-1)]
    p = Params.of(-3, F(1, 3))
    assert derived_window(p, W(p, 2)).dim == 15


@pytest.mark.parametrize("lam,mu,s,expected", [
    (-3, 1, 0, 1), (0, 0, 0, 0), (-3, 0, F(1, 2), 0), (-3, F(1, 2), F(1, 2), 1),
])
def test_abelianization_examples(lam, mu, s, expected):
    p = Params.of(lam, mu, s)
    assert abelianization_dim(p, W(p, 2)) == expected


def test_centralizer_examples():
    p = Params.of(0, F(1, 2))
    C = centralizer_of_derived(p, W(p, 3))
    assert C.dim == 1 and list(C.as_lincombs()[0].support()) == [M(-1)]
    for p in (Params.of(2, F(1, 5)), Params.of(1, 1, F(1, 2))):
        assert centralizer_of_derived(p, W(p, 3)).dim == 0
        assert centralizer_of_derived(p, W(p, 3)) == center_window(p, W(p, 3))


@pytest.mark.parametrize("lam,mu,s,n", [(1, 0, 0, 4), (-3, F(7, 2), F(1, 2), 3), (0, 0, 0, 0)])
def test_jacobi_examples(lam, mu, s, n):
    p = Params.of(lam, mu, s)
    r = jacobi_check_window(p, W(p, n))
    assert r.ok and r.triples_checked == len(W(p, n)) ** 3


def test_checks_detect_a_broken_bracket(monkeypatch):
    import svbider.structure as st

    real = st.bracket_term

    def broken(x, y, p):
        t = real(x, y, p)
        if t is not None and x.family.name == "L" and y.family.name == "M":
            return (t[0] + 1, t[1])
        return t

    monkeypatch.setattr(st, "bracket_term", broken)
    p = Params.of(1, 0)
    r = jacobi_check_window(p, W(p, 1))
    assert not r.ok and r.witness is not None and r.residual
    assert not antisymmetry_check_window(p, W(p, 1))[0]


def test_degree_check_passes():
    p = Params.of(F(1, 2), F(1, 3), F(1, 2))
    assert degree_check_window(p, W(p, 3)) == (True, None)


def test_structure_mismatched_window():
    with pytest.raises(ValueError):
        center_window(Params.of(0, 0, F(1, 2)), Window(2))


def test_structure_summary_fields():
    p = Params.of(0, 1)
    d = structure_summary(p, W(p, 2))
    assert d["center"]["predicted"] == ["M_{-2}"]
    assert d["center"]["matches_prediction"] and d["centralizer_of_derived"]["equals_center"]
