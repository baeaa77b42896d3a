import pytest
from hypothesis import given, settings

from core.compositions import (
    Composition,
    Permutation,
    coimaj,
    complement,
    compositions,
    conjugate,
    descent_class_sizes,
    descent_composition,
    descent_op,
    from_descents,
    maj,
    multinomial,
    permutations,
    ribbon_number,
    ribbon_number_formula,
    word_descents,
)
from core.errors import BoundError, DegreeError, DomainError
from tests.strategies import compositions_up_to, same_degree_compositions


def test_descents_and_degree():
    """Test descent sets, degree and length of a composition."""
    I = Composition((2, 1, 3))
    assert I.n == 6
    assert I.length == 3
    assert I.descents == {2, 3}
    assert Composition(()).descents == frozenset()


def test_invalid_parts():
    """Test that zero or negative parts are rejected."""
    with pytest.raises(DomainError):
        Composition((2, 0))
    with pytest.raises(DomainError):
        Composition((-1,))


def test_parse():
    """Test parsing of composition strings."""
    assert Composition.parse("2,1") == Composition((2, 1))
    assert Composition.parse("[1, 2]") == Composition((1, 2))
    assert Composition.parse("") == Composition(())
    assert Composition.parse("0") == Composition(())

    with pytest.raises(DomainError) as excinfo:
        Composition.parse("2,x")
    assert "Malformed composition" in str(excinfo.value)


def test_canonical_order():
    """Test that compositions of n come out in binary descent-set order."""
    assert compositions(3) == (
        Composition((3,)),
        Composition((1, 2)),
        Composition((2, 1)),
        Composition((1, 1, 1)),
    )
    assert compositions(0) == (Composition(()),)
    assert len(compositions(6)) == 32
    assert sorted(compositions(4)) == list(compositions(4))


def test_from_descents_bounds():
    """Test that descents outside {1..n-1} are rejected."""
    assert from_descents({2}, 3) == Composition((2, 1))
    with pytest.raises(DomainError):
        from_descents({3}, 3)
    with pytest.raises(DomainError):
        from_descents({0}, 3)


@given(compositions_up_to(7))
def test_descent_round_trip(I):
    """Test that (n, Des(I)) determines I."""
    assert from_descents(I.descents, I.n) == I


def test_descent_operations():
    """Test meet, join and difference of descent sets."""
    H, K = Composition((1, 1, 2)), Composition((2, 2))
    assert descent_op(H, K, "meet") == Composition((2, 2))
    assert descent_op(H, K, "join") == Composition((1, 1, 2))
    assert descent_op(H, K, "diff") == Composition((1, 3))

    with pytest.raises(DegreeError):
        descent_op(Composition((2,)), Composition((1, 2)), "meet")
    with pytest.raises(DomainError):
        descent_op(H, K, "xor")


@settings(max_examples=60, deadline=None)
@given(same_degree_compositions(3))
def test_lattice_laws(triple):
    """Test commutativity, associativity, idempotence and absorption of meet and join."""
    H, K, L = triple
    meet = lambda a, b: descent_op(a, b, "meet")
    join = lambda a, b: descent_op(a, b, "join")
    assert meet(H, K) == meet(K, H)
    assert join(H, K) == join(K, H)
    assert meet(meet(H, K), L) == meet(H, meet(K, L))
    assert join(join(H, K), L) == join(H, join(K, L))
    assert meet(H, H) == H and join(H, H) == H
    assert meet(H, join(H, K)) == H
    assert join(H, meet(H, K)) == H


def test_conjugate_and_complement():
    """Test the conjugate (reverse of the complement) on small cases."""
    assert conjugate(Composition((2, 1))) == Composition((2, 1))
    assert conjugate(Composition((3,))) == Composition((1, 1, 1))
    assert conjugate(Composition((1, 3))) == Composition((1, 1, 2))
    assert complement(Composition((1, 3))) == Composition((2, 1, 1))


@given(compositions_up_to(7))
def test_conjugate_is_an_involution(I):
    """Test that conjugating twice gives back the composition."""
    assert conjugate(conjugate(I)) == I


def test_statistics():
    """Test maj, coimaj, multinomials and word descents."""
    assert maj(Composition((2, 1))) == 2
    assert maj(Composition((1, 1, 1))) == 3
    assert coimaj(Permutation((2, 1, 3))) == 2
    assert multinomial((2, 1)) == 3
    assert word_descents((3, 1, 2)) == {1}
    assert word_descents((1, 1, 0)) == {2}
    assert descent_composition(Permutation((3, 1, 2))) == Composition((1, 2))


def test_permutation_validation():
    """Test that non-permutations are rejected and inverses are computed."""
    with pytest.raises(DomainError):
        Permutation((1, 1, 2))
    assert Permutation((2, 3, 1)).inverse() == Permutation((3, 1, 2))
    assert Permutation((2, 3, 1)).descents == {2}


def test_brute_force_cap():
    """Test that enumerating S_n beyond the cap raises BoundError."""
    assert len(permutations(4)) == 24
    with pytest.raises(BoundError):
        permutations(9)


def test_ribbon_numbers():
    """Test beta_I against known values and against brute force."""
    assert ribbon_number_formula(Composition((3,))) == 1
    assert ribbon_number_formula(Composition((1, 2))) == 2
    assert ribbon_number_formula(Composition((2, 1))) == 2
    assert ribbon_number_formula(Composition((2, 2))) == 5
    for n in range(6):
        assert sum(descent_class_sizes(n).values()) == len(permutations(n))
        for I in compositions(n):
            assert ribbon_number(I, verify=True) == descent_class_sizes(n)[I]


@settings(max_examples=40, deadline=None)
@given(compositions_up_to(6))
def test_ribbon_number_of_the_conjugate(I):
    """Test beta_I = beta of the reversed complement."""
    assert ribbon_number(I) == ribbon_number(conjugate(I))
    assert ribbon_number_formula(I) == ribbon_number_formula(Composition(tuple(reversed(complement(I).parts))))
