import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from core.compositions import compositions, descent_composition, maj, permutations
from core.errors import BoundError, DomainError, UnderflowError
from core.nsym import complete, elementary, ribbon
from core.scalars import MultiPoly, geometric_inverse, pochhammer
from core.specialize import (
    ChainAlphabet,
    alternating_numbers,
    classical_bessel,
    csv_a,
    csv_a_counts,
    csv_c,
    eulerian_numbers,
    fr_compare,
    fr_formula_side,
    fr_series_side,
    q_bessel,
    spec_chain,
    spec_exponential,
    spec_q,
)
from tests.strategies import compositions_up_to, sym_elements


@pytest.fixture
def window():
    """q and p truncations for the double series."""
    return {"q": 6, "p": 6}


def test_exponential_alphabet():
    """Test S_n -> t^n/n! and R_I -> beta_I t^n/n!."""
    t = MultiPoly.var("t")
    assert spec_exponential(ribbon((2, 1))) == t ** 3 * Fraction(1, 3)
    assert spec_exponential(complete(2) * complete(1)) == t ** 3 * Fraction(1, 2)
    assert spec_exponential(elementary(2), var=None) == MultiPoly.constant(Fraction(1, 2))


def test_q_alphabet():
    """Test S_1 -> 1/(1-q) and Lambda_2 -> q/((1-q)(1-q^2))."""
    q = MultiPoly.var("q")
    assert spec_q(complete(1), qtrunc=3) == 1 + q + q ** 2 + q ** 3
    assert spec_q(elementary(2), qtrunc=4) == q + q ** 2 + 2 * q ** 3 + 2 * q ** 4


def test_chain_alphabet():
    """Test the two-letter chain 1 < q."""
    q = MultiPoly.var("q")
    chain = ChainAlphabet(2, "q")
    assert spec_chain(complete(2), chain) == 1 + q + q ** 2
    assert spec_chain(elementary(2), chain) == q
    assert spec_chain(ribbon((1, 1)), chain) == q
    assert spec_chain(ribbon((2,)), chain) == 1 + q + q ** 2
    assert spec_chain(elementary(3), chain).is_zero


@settings(max_examples=30, deadline=None)
@given(sym_elements(max_degree=3))
def test_chain_value_is_basis_independent(f):
    """Test that evaluating f in S, L and R gives one polynomial."""
    chain = ChainAlphabet(3, "q")
    expected = spec_chain(f.convert("S"), chain)
    assert spec_chain(f.convert("L"), chain) == expected
    assert spec_chain(f.convert("R"), chain) == expected


def test_chain_validation():
    """Test the chain alphabet refusals."""
    with pytest.raises(DomainError):
        ChainAlphabet(-1)
    with pytest.raises(DomainError):
        ChainAlphabet(2, "w")
    with pytest.raises(DomainError):
        ChainAlphabet(0).greatest()


def test_classical_bessel():
    """Test J_0(2x) = 1 - x^2 + x^4/4 and the agreement of both routes."""
    x = MultiPoly.var("x")
    assert classical_bessel(0, 4) == 1 - x ** 2 + x ** 4 * Fraction(1, 4)
    assert classical_bessel(1, 3) == x - x ** 3 * Fraction(1, 2)
    for nu in range(3):
        assert classical_bessel(nu, 10, via="series") == classical_bessel(nu, 10, via="tensor")


def test_classical_bessel_errors():
    """Test negative indices and unknown routes."""
    with pytest.raises(DomainError):
        classical_bessel(-1, 4)
    with pytest.raises(DomainError):
        classical_bessel(0, 4, via="integral")


def test_q_bessel():
    """Test J_0 at A = x/(1-q), B = xE."""
    x, q = MultiPoly.var("x"), MultiPoly.var("q")
    assert q_bessel(0, 2, 2) == 1 - x ** 2 * (1 + q + q ** 2)


def test_pair_counts_a():
    """Test a_0..a_3 = 1, 1, 3, 19 and the three routes on n = 4."""
    assert [csv_a(n) for n in range(4)] == [1, 1, 3, 19]
    counts = csv_a_counts(4)
    assert counts["brute_force"] == counts["descent_classes"] == counts["series"]


def test_pair_counts_c():
    """Test c_1..c_4 = 1, 1, 4, 33."""
    assert [csv_c(n) for n in range(1, 5)] == [1, 1, 4, 33]
    with pytest.raises(DomainError):
        csv_c(0)


def test_pair_counts_c_match_bessel_quotient():
    """Test c_n = (n-1)! n! [x^(2n-1)] J_1(2x)/J_0(2x) from the Taylor series."""
    # Setup
    order = {"x": 7}
    j0 = MultiPoly.zero(order)
    j1 = MultiPoly.zero(order)
    for m in range(4):
        sign = (-1) ** m
        j0 = j0 + MultiPoly.var("x", 2 * m, Fraction(sign, math.factorial(m) ** 2), order)
        j1 = j1 + MultiPoly.var("x", 2 * m + 1, Fraction(sign, math.factorial(m) * math.factorial(m + 1)), order)

    # Test
    quotient = j1 * geometric_inverse(j0)
    assert quotient.coefficient(x=5) == Fraction(1, 3)
    for n in range(1, 5):
        assert quotient.coefficient(x=2 * n - 1) * math.factorial(n - 1) * math.factorial(n) == csv_c(n)


def test_oracle_window():
    """Test that degrees beyond the limit raise BoundError."""
    with pytest.raises(BoundError):
        csv_a(9)
    with pytest.raises(BoundError):
        csv_a(5, limit=4)


def test_euler_and_eulerian_numbers():
    """Test Euler numbers and t + 4t^2 + t^3 for S_3."""
    assert alternating_numbers(8) == [1, 1, 1, 2, 5, 16, 61, 272, 1385]
    t = MultiPoly.var("t")
    assert eulerian_numbers(3) == t + 4 * t ** 2 + t ** 3
    assert eulerian_numbers(0) == MultiPoly.one()


def test_first_double_series(window):
    """Test that both sides of the first series agree for n <= 2."""
    for n in range(3):
        assert fr_compare(n, 2, 2, window, "first").agrees
    assert fr_series_side("formula", 0, 1, 1, window) == 1 + MultiPoly.var("p")


def test_second_double_series(window):
    """Test the shifted denominator and the mismatch of the (y;p)_n one."""
    for n in range(3):
        assert fr_compare(n, 2, 2, window, "second", "shifted").agrees
    printed = fr_compare(1, 2, 2, window, "second", "printed")
    assert not printed.agrees
    assert (0, 1) in printed.mismatches


def test_double_series_truncation():
    """Test the truncation refusals."""
    with pytest.raises(UnderflowError):
        fr_formula_side(0, 0, 3, {"t": 1})
    with pytest.raises(DomainError):
        fr_formula_side(0, 0, 1, {"x": 2})
    with pytest.raises(DomainError):
        fr_series_side("both", 0, 0, 1)


@settings(max_examples=30, deadline=None)
@given(compositions_up_to(5, min_n=1))
def test_ribbons_on_the_q_alphabet(I):
    """Test R_I(1/(1-q)) = sum over C(sigma) = I of q^maj(sigma^-1), over (q;q)_n."""
    qtrunc = 12
    q = MultiPoly.var("q", truncation={"q": qtrunc})
    numerator = MultiPoly.zero({"q": qtrunc})
    for sigma in permutations(I.n):
        if descent_composition(sigma) == I:
            numerator = numerator + MultiPoly.var("q", maj(descent_composition(sigma.inverse())), truncation={"q": qtrunc})
    assert spec_q(ribbon(I.parts), qtrunc=qtrunc) == numerator * geometric_inverse(pochhammer(q, "q", I.n))


def test_ribbons_sum_to_the_q_image_of_s1_power():
    """Test that the ribbons of degree n add up to S_1^n -> 1/(1-q)^n."""
    qtrunc = 10
    for n in range(1, 5):
        total = MultiPoly.zero({"q": qtrunc})
        for I in compositions(n):
            total = total + spec_q(ribbon(I.parts), qtrunc=qtrunc)
        assert total == spec_q(complete(1), qtrunc=qtrunc) ** n
