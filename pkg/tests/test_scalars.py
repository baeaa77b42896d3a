from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import DomainError, NotInvertibleError
from core.scalars import RING, MultiPoly, geometric_inverse, pochhammer, poly_arith, q_integer


@pytest.fixture
def q():
    """q truncated at q^5."""
    return MultiPoly.var("q", truncation={"q": 5})


def test_arithmetic_and_rendering():
    """Test addition, multiplication and the text form."""
    t = MultiPoly.var("t")
    f = (1 + t) * (1 - t)
    assert f == 1 - t * t
    assert str(f) == "1 - t^2"
    assert str(MultiPoly.zero()) == "0"
    assert (t * Fraction(3, 2)).coefficient(t=1) == Fraction(3, 2)


def test_truncation_is_pointwise_minimum(q):
    """Test that products keep the tighter bound and drop higher terms."""
    loose = MultiPoly.var("q", 3, truncation={"q": 9})
    product = loose * q ** 3
    assert product.is_zero
    assert product.truncation == {"q": 5}


def test_geometric_inverse(q):
    """Test 1/(1-q) = 1 + q + ... + q^5 under the truncation."""
    inverse = geometric_inverse(1 - q)
    assert inverse == MultiPoly({(0, k, 0, 0, 0, 0): 1 for k in range(6)}, {"q": 5})
    assert (inverse * (1 - q)) == MultiPoly.one({"q": 5})


def test_geometric_inverse_errors():
    """Test the two ways an inversion can be refused."""
    with pytest.raises(NotInvertibleError):
        geometric_inverse(MultiPoly.var("q", truncation={"q": 3}))
    with pytest.raises(NotInvertibleError) as excinfo:
        geometric_inverse(1 - MultiPoly.var("t"))
    assert "no truncated variable" in str(excinfo.value)


def test_coefficient_of_drops_named_variables():
    """Test extracting the polynomial multiplying x y^2."""
    f = MultiPoly({(1, 0, 0, 1, 2, 0): 3, (0, 2, 0, 1, 2, 0): 1, (0, 0, 0, 1, 0, 0): 5})
    assert f.coefficient_of(x=1, y=2) == MultiPoly({(1, 0, 0, 0, 0, 0): 3, (0, 2, 0, 0, 0, 0): 1})


def test_q_integers_and_pochhammer():
    """Test [3]_q and (q; q)_2 = (1 - q)(1 - q^2)."""
    assert q_integer(3) == MultiPoly({(0, 0, 0, 0, 0, 0): 1, (0, 1, 0, 0, 0, 0): 1, (0, 2, 0, 0, 0, 0): 1})
    q = MultiPoly.var("q")
    assert pochhammer(q, "q", 2) == (1 - q) * (1 - q * q)
    assert pochhammer(q, "q", 0) == MultiPoly.one()


def test_unknown_variable():
    """Test that only t, q, p, x, y, z are accepted."""
    with pytest.raises(DomainError):
        MultiPoly.var("w")
    with pytest.raises(DomainError):
        poly_arith(MultiPoly.one(), MultiPoly.one(), "div")


def test_json_form():
    """Test the monomial-to-fraction JSON map."""
    f = MultiPoly.var("q", 2, Fraction(-1, 2)) + 1
    assert f.to_json() == {"1": "1/1", "q^2": "-1/2"}


polynomials = st.dictionaries(
    st.tuples(*(st.integers(min_value=0, max_value=2) for _ in range(6))),
    st.integers(min_value=-4, max_value=4),
    max_size=4,
).map(MultiPoly)


@settings(max_examples=50, deadline=None)
@given(polynomials, polynomials, polynomials)
def test_ring_laws(f, g, h):
    """Test commutativity, associativity and distributivity."""
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == MultiPoly.zero()


@st.composite
def invertible_polynomials(draw):
    """A truncated polynomial with a nonzero constant term."""
    truncation = {"t": draw(st.integers(min_value=1, max_value=4)), "q": draw(st.integers(min_value=0, max_value=3))}
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.just(0), st.integers(0, 1), st.just(0), st.just(0)),
        st.integers(min_value=-3, max_value=3),
        max_size=4,
    ))
    terms = {e: c for e, c in terms.items() if e[0] or e[1]}
    terms[(0, 0, 0, 0, 0, 0)] = draw(st.sampled_from([Fraction(1), Fraction(-2), Fraction(1, 3)]))
    return MultiPoly(terms, truncation)


@settings(max_examples=100, deadline=None)
@given(invertible_polynomials())
def test_geometric_inverse_is_a_truncated_inverse(f):
    """Test f * f^-1 = 1 under the truncation, in one or several truncated variables."""
    assert f * geometric_inverse(f) == MultiPoly.one(f.truncation)


def test_series_live_in_the_rational_ring(q):
    """Test that values are elements of QQ[t, q, p, x, y, z] truncated in place."""
    # Setup
    f = (1 - q) * (1 + q) ** 6

    # Test
    assert f.poly.ring == RING
    assert f.degree("q") == 5
    assert f.coefficient(q=5) == Fraction(-9)
    assert geometric_inverse(1 - q).poly == sum(RING.gens[1] ** k for k in range(6))
