from collections import Counter

import pytest

from core.errors import BoundError, DomainError
from core.polyomino import (
    PolyominoCode,
    SegmentAlphabet,
    cartier_foata_check,
    enumerate_polyominoes,
    enumeration_series,
    heap_census,
    heap_class,
    heap_normal_form,
    is_adjacency_word,
    segments_commute,
    series_via_bessel,
    validate_code,
)
from core.scalars import MultiPoly

AREA_COUNTS = [1, 2, 4, 9, 20, 46, 105, 242, 557, 1285]


@pytest.fixture
def code():
    """Two columns of heights 2 and 3 sharing two rows."""
    return PolyominoCode(((2, 2), (1, 3)))


def test_code_geometry(code):
    """Test width, area, cells and height."""
    assert code.width == 2
    assert code.area == 5
    assert code.cells() == [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]
    assert code.height == 3


def test_biword_forms(code):
    """Test the two-row rendering and parsing."""
    assert code.biword() == ("2 1", "2 3")
    assert code.render() == "2 1\n2 3"
    assert PolyominoCode.from_biword("21", "23") == code
    assert PolyominoCode.from_biword("2 1", "2 3") == code
    assert code.to_json()["height"] == 3
    with pytest.raises(DomainError):
        PolyominoCode.from_biword("2 1", "2")


def test_code_validation():
    """Test the reasons given for invalid codes."""
    assert validate_code(((1, 1), (1, 2))) is None
    assert validate_code(()) == "A polyomino has at least one column"
    assert validate_code(((3, 3), (1, 2))) == "Adjacency fails between columns 1 and 2"
    assert "last column" in validate_code(((1, 2), (2, 2)))
    with pytest.raises(DomainError):
        PolyominoCode(((2, 1),))


def test_counts_by_area():
    """Test the number of polyominoes of each area up to 10."""
    counts = Counter(code.area for code in enumerate_polyominoes(10, 10))
    assert [counts[a] for a in range(1, 11)] == AREA_COUNTS


def test_enumeration_bounds():
    """Test that bounds must be positive."""
    with pytest.raises(DomainError):
        enumerate_polyominoes(0, 3)


def test_series_matches_enumeration():
    """Test the heap series against direct enumeration."""
    truncation = {"x": 4, "q": 8}
    series = series_via_bessel(truncation)
    assert series == enumeration_series(4, 8)
    assert series.constant_term == 1


def test_height_exponent():
    """Test that a single column of height j carries y^(j-1)."""
    series = series_via_bessel({"x": 2, "q": 4})
    assert series.coefficient_of(x=1, q=3) == MultiPoly.var("y", 2)


def test_word_route():
    """Test that inverting in the word algebra gives the same series."""
    truncation = {"x": 3, "q": 6}
    assert series_via_bessel(truncation, route="words") == series_via_bessel(truncation, route="fast")


def test_series_errors():
    """Test the refusals of the heap series."""
    with pytest.raises(BoundError):
        series_via_bessel({"x": 2, "q": 5}, max_j=4)
    with pytest.raises(DomainError):
        series_via_bessel({"x": 2})
    with pytest.raises(DomainError):
        series_via_bessel({"x": 2, "q": 3}, route="heaps")


def test_segment_alphabet():
    """Test segment ids, weights and the ending letters."""
    alphabet = SegmentAlphabet(3)
    assert alphabet.segments == ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))
    assert alphabet.letter((2, 3)) == 4
    assert alphabet.weight(4) == MultiPoly.monomial({"x": 1, "y": 1, "q": 3})
    assert alphabet.ending_letters() == {0, 1, 2}
    th = alphabet.relation()
    assert th(alphabet.letter((1, 1)), alphabet.letter((2, 2)))
    assert not th(alphabet.letter((2, 2)), alphabet.letter((1, 1)))
    with pytest.raises(DomainError):
        alphabet.letter((4, 4))
    with pytest.raises(DomainError):
        SegmentAlphabet(0)


def test_heap_normal_form():
    """Test commutation classes and their adjacency representative."""
    assert segments_commute((1, 1), (3, 3))
    assert not segments_commute((1, 2), (2, 3))
    assert heap_class(((3, 3), (1, 1))) == {((3, 3), (1, 1)), ((1, 1), (3, 3))}
    assert heap_normal_form(((3, 3), (1, 1))) == ((1, 1), (3, 3))
    assert is_adjacency_word(((1, 1), (3, 3)))
    with pytest.raises(DomainError):
        heap_class(((2, 1),))


def test_heap_census():
    """Test that classes and adjacency words are in bijection."""
    census = heap_census(3, 3)
    assert census.bijective
    assert census.classes == census.adjacency_words
    assert cartier_foata_check(3, 3)
