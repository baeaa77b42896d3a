import pytest
from hypothesis import given, settings

from core.compositions import Composition, conjugate
from core.errors import DomainError, NotInvertibleError
from core.nsym import (
    NsymElement,
    NsymSeries,
    alternating_series,
    complete,
    elementary,
    eulerian_polynomial,
    eulerian_series,
    expand_basis,
    multiply,
    omega,
    partial_right,
    ribbon,
    series_invert,
)
from core.scalars import MultiPoly
from tests.strategies import compositions_up_to, sym_elements


def test_ribbon_to_complete():
    """Test R_I as the alternating sum over coarser compositions."""
    assert ribbon((2, 1)).convert("S") == NsymElement("S", {(2, 1): 1, (3,): -1})
    assert expand_basis("S", "R", Composition((1, 1))) == (
        (Composition((2,)), 1),
        (Composition((1, 1)), 1),
    )


def test_elementary_is_a_column_ribbon():
    """Test Lambda_n = R_(1^n) and Lambda_2 = S^(1,1) - S_2."""
    assert elementary(3) == ribbon((1, 1, 1))
    assert elementary(2).convert("S") == NsymElement("S", {(1, 1): 1, (2,): -1})


def test_unknown_basis():
    """Test that only S, L and R are Sym bases."""
    with pytest.raises(DomainError):
        NsymElement("M", {(1,): 1})


def test_ribbon_product_rule():
    """Test R_2 R_1 = R_21 + R_3 and its text form."""
    product = ribbon((2,)) * ribbon((1,))
    assert product == NsymElement("R", {(2, 1): 1, (3,): 1})
    assert str(product) == "R[3] + R[2,1]"
    assert str(ribbon((2,)) * 2 - ribbon((1, 1))) == "2·R[2] - R[1,1]"


def test_multiply_respects_max_degree():
    """Test that terms above max_degree are dropped."""
    assert multiply(complete(2), complete(2), max_degree=3).is_zero
    assert multiply(complete(1), complete(2), max_degree=3) == NsymElement("S", {(1, 2): 1})


def test_to_json():
    """Test the degree-grouped JSON form."""
    assert ribbon((2, 1)).to_json() == {
        "basis": "R",
        "components": [{"degree": 3, "terms": {"2,1": {"1": "1/1"}}}],
    }


@settings(max_examples=40, deadline=None)
@given(sym_elements(max_degree=4))
def test_conversion_round_trip(f):
    """Test that converting through every basis returns the element."""
    for target in ("S", "L", "R"):
        assert f.convert(target).convert(f.basis) == f


@settings(max_examples=30, deadline=None)
@given(sym_elements(max_degree=3), sym_elements(max_degree=3))
def test_product_is_basis_independent(f, g):
    """Test that multiplying in S and in R gives the same element."""
    assert multiply(f.convert("S"), g) == multiply(f.convert("R"), g)


def test_omega_on_generators():
    """Test omega(S_n) = Lambda_n."""
    for n in range(1, 5):
        assert omega(complete(n)) == elementary(n)


@given(compositions_up_to(5))
def test_omega_on_ribbons(I):
    """Test omega(R_I) = R_conjugate(I)."""
    assert omega(ribbon(I.parts)) == ribbon(conjugate(I).parts)


@settings(max_examples=30, deadline=None)
@given(sym_elements(max_degree=3), sym_elements(max_degree=3))
def test_omega_is_an_anti_automorphism(f, g):
    """Test omega(fg) = omega(g) omega(f) and omega(omega(f)) = f."""
    assert omega(f * g) == omega(g) * omega(f)
    assert omega(omega(f)) == f


def test_right_derivation_on_ribbons():
    """Test the ribbon rule including R_(1) d = 1."""
    assert partial_right(ribbon((1,))) == NsymElement.one("R")
    assert partial_right(ribbon((3,))) == ribbon((2,))
    assert partial_right(ribbon((1, 2))) == ribbon((1, 1))
    assert partial_right(ribbon((2, 1))).is_zero
    assert partial_right(NsymElement.basis_element("S", (2, 1))) == complete(2)


@settings(max_examples=30, deadline=None)
@given(sym_elements(max_degree=3), sym_elements(max_degree=3))
def test_right_derivation_is_a_derivation(f, g):
    """Test the twisted Leibniz rule (fg) d = f (g d) + (f d) g_0."""
    assert partial_right(f * g) == f * partial_right(g) + partial_right(f) * g.constant_term


def test_series_inverse_of_lambda():
    """Test (sum (-1)^n Lambda_n)^-1 = sum S_n up to degree 4."""
    lam = NsymElement("L", {Composition((n,)) if n else Composition(()): (-1) ** n for n in range(5)})
    inverse = series_invert(NsymSeries(lam, 4))
    assert inverse.element == NsymElement("S", {Composition((n,)) if n else Composition(()): 1 for n in range(5)})


def test_series_inverse_needs_a_unit():
    """Test that a series without constant term is refused."""
    with pytest.raises(NotInvertibleError):
        series_invert(NsymSeries(complete(1), 3))
    with pytest.raises(DomainError):
        NsymSeries(complete(1), -1)


def test_eulerian_polynomials():
    """Test A_2(t) = t R_2 + t^2 R_11 and the generating series."""
    t = MultiPoly.var("t")
    assert eulerian_polynomial(2) == NsymElement("R", {(2,): t, (1, 1): t * t})
    series = eulerian_series(4)
    for n in range(5):
        assert series.component(n) == eulerian_polynomial(n)


def test_alternating_series():
    """Test that the alternating series picks the ribbons (2,2,..) and (2,..,2,1)."""
    series = alternating_series(5)
    assert series.constant_term == MultiPoly.one()
    assert series.component(1) == ribbon((1,))
    assert series.component(2) == ribbon((2,))
    assert series.component(3) == ribbon((2, 1))
    assert series.component(4) == ribbon((2, 2))
    assert series.component(5) == ribbon((2, 2, 1))


@settings(max_examples=25, deadline=None)
@given(sym_elements(max_degree=3))
def test_right_derivation_of_an_inverse(g):
    """Test (1 - G)^-1 d = (1 - G)^-1 (G d) when G has no constant term."""
    # Setup
    order = 4
    G = g - g.component(0)
    inverse = series_invert(NsymSeries(NsymElement.one(g.basis) - G, order)).element

    # Test
    lhs = partial_right(inverse).truncated(order - 1)
    rhs = multiply(inverse, partial_right(G), max_degree=order - 1)
    assert lhs == rhs
