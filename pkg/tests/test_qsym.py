import pytest
from hypothesis import given, settings

from core.compositions import compositions
from core.errors import DomainError
from core.nsym import NsymElement, ribbon
from core.qsym import QsymElement, concat_product, internal_product, pairing
from core.scalars import MultiPoly
from tests.strategies import compositions_up_to, same_degree_compositions


def F(*parts):
    return QsymElement.basis_element("F", parts)


def M(*parts):
    return QsymElement.basis_element("M", parts)


def test_fundamental_to_monomial():
    """Test F_21 = M_21 + M_111 and the inverse change of basis."""
    assert F(2, 1).convert("M") == QsymElement("M", {(2, 1): 1, (1, 1, 1): 1})
    assert M(2).convert("F") == QsymElement("F", {(2,): 1, (1, 1): -1})
    assert str(M(2).convert("F")) == "F[2] - F[1,1]"


@given(compositions_up_to(5))
def test_basis_round_trip(I):
    """Test that M -> F -> M is the identity on basis elements."""
    element = QsymElement.basis_element("M", I)
    assert element.convert("F").convert("M") == element


def test_unknown_basis():
    """Test that only M and F are QSym bases."""
    with pytest.raises(DomainError):
        QsymElement("R", {(1,): 1})
    with pytest.raises(DomainError):
        F(1).convert("S")


def test_internal_products():
    """Test that meet and join act on descent sets."""
    assert internal_product(F(1, 1, 2), F(2, 2), "meet") == F(2, 2)
    assert internal_product(F(1, 1, 2), F(2, 2), "join") == F(1, 1, 2)
    assert internal_product(F(2), F(1, 1, 1), "meet") == QsymElement("F")
    with pytest.raises(DomainError):
        internal_product(F(1), F(1), "diff")


def test_internal_product_keeps_left_basis():
    """Test that the product comes back in the basis of the left factor."""
    product = internal_product(M(1, 1), F(2), "join")
    assert product.basis == "M"
    assert product == F(1, 1)


@settings(max_examples=40, deadline=None)
@given(same_degree_compositions(3))
def test_internal_product_laws(triple):
    """Test commutativity and associativity of both internal products."""
    H, K, L = (QsymElement.basis_element("F", I) for I in triple)
    for mode in ("meet", "join"):
        assert internal_product(H, K, mode) == internal_product(K, H, mode)
        assert internal_product(internal_product(H, K, mode), L, mode) == internal_product(H, internal_product(K, L, mode), mode)


def test_concat_product():
    """Test F_I (.)0 F_J = F_{I.J}."""
    assert concat_product(F(1), F(2, 1)) == F(1, 2, 1)
    assert concat_product(M(1), M(1)) == F(1, 1)


def test_pairing_is_dual():
    """Test <R_I, F_J> = delta and <S^I, M_J> = delta on degree 3."""
    for I in compositions(3):
        for J in compositions(3):
            expected = MultiPoly.one() if I == J else MultiPoly.zero()
            assert pairing(ribbon(I.parts), QsymElement.basis_element("F", J)) == expected
            assert pairing(NsymElement.basis_element("S", I), QsymElement.basis_element("M", J)) == expected


def test_json_form():
    """Test the degree-grouped JSON form."""
    assert (F(2) * 3).to_json() == {
        "basis": "F",
        "components": [{"degree": 2, "terms": {"2": {"1": "3/1"}}}],
    }
