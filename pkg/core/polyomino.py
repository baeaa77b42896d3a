"""Parallelogram polyominoes, heaps of segments and their Bessel-type series.

A parallelogram polyomino with n columns is the biword (i_1..i_n / j_1..j_n)
where j_k is the height of column k and i_k the number of rows column k
shares with column k+1 (i_n = 1 by convention). The codes are exactly the
words over the segment alphabet {a_ij : i <= j} with i_k <= j_{k+1} that end
in some a_1j.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from core.errors import BoundError, DomainError, VerificationError
from core.scalars import MultiPoly, geometric_inverse
from core.theta import Relation, WordPoly, koszul_check, theta_words, word_partial

# Set up logging
logger = logging.getLogger("polyomino")

Segment = Tuple[int, int]
HeapWord = Tuple[Segment, ...]
ROUTES = ("fast", "words")


@dataclass(frozen=True)
class PolyominoCode:
    """Column description of a parallelogram polyomino."""

    columns: Tuple[Segment, ...]

    def __post_init__(self):
        columns = tuple((int(i), int(j)) for i, j in self.columns)
        object.__setattr__(self, "columns", columns)
        problem = validate_code(columns)
        if problem:
            raise DomainError(problem)

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def area(self) -> int:
        return sum(j for _, j in self.columns)

    def cells(self) -> List[Tuple[int, int]]:
        """(column, row) cells, columns from 0 and the bottom row of the first column at 0."""
        cells = []
        bottom = 0
        for k, (i, j) in enumerate(self.columns):
            top = bottom + j - 1
            cells.extend((k, row) for row in range(bottom, top + 1))
            bottom = top - i + 1
        return cells

    @property
    def height(self) -> int:
        """Number of distinct rows met by the cells."""
        return len({row for _, row in self.cells()})

    def biword(self) -> Tuple[str, str]:
        return (" ".join(str(i) for i, _ in self.columns), " ".join(str(j) for _, j in self.columns))

    @classmethod
    def from_biword(cls, top: str, bottom: str) -> "PolyominoCode":
        """Parse the two rows, either space-separated or as digit strings."""
        def parse(row: str) -> List[int]:
            row = row.strip()
            return [int(piece) for piece in (row.split() if " " in row else list(row))]

        u, v = parse(top), parse(bottom)
        if len(u) != len(v):
            raise DomainError(f"Biword rows differ in length: {len(u)} and {len(v)}")
        return cls(tuple(zip(u, v)))

    def render(self) -> str:
        top, bottom = self.biword()
        return f"{top}\n{bottom}"

    def to_json(self) -> Dict:
        top, bottom = self.biword()
        return {
            "biword": [top, bottom],
            "width": self.width,
            "height": self.height,
            "area": self.area,
            "cells": [list(cell) for cell in self.cells()],
        }


def validate_code(columns: Sequence[Segment]) -> Optional[str]:
    """Return None for a valid code, otherwise the reason it is invalid."""
    if not columns:
        return "A polyomino has at least one column"
    for k, (i, j) in enumerate(columns):
        if not 1 <= i <= j:
            return f"Column {k + 1} needs 1 <= i <= j, got ({i}, {j})"
    for k in range(len(columns) - 1):
        if columns[k][0] > columns[k + 1][1]:
            return f"Adjacency fails between columns {k + 1} and {k + 2}"
    if columns[-1][0] != 1:
        return f"The last column must have i = 1, got {columns[-1][0]}"
    return None


def enumerate_polyominoes(max_width: int, max_area: int) -> List[PolyominoCode]:
    """All parallelogram polyominoes with width <= max_width and area <= max_area.

    Raises:
        DomainError: If a bound is not positive
    """
    if max_width < 1 or max_area < 1:
        raise DomainError("Polyomino bounds must be positive")
    found: List[PolyominoCode] = []

    def extend(prefix: List[Segment], area: int) -> None:
        # prefix[-1] has its i still open; close it with i = 1 or continue
        last_j = prefix[-1][1]
        found.append(PolyominoCode(tuple(prefix[:-1]) + ((1, last_j),)))
        if len(prefix) == max_width:
            return
        for j in range(1, max_area - area + 1):
            for i in range(1, min(last_j, j) + 1):
                extend(prefix[:-1] + [(i, last_j), (0, j)], area + j)

    for j in range(1, max_area + 1):
        extend([(0, j)], j)
    found.sort(key=lambda code: (code.width, code.area, code.columns))
    logger.debug(f"Enumerated {len(found)} polyominoes (width <= {max_width}, area <= {max_area})")
    return found


def enumeration_series(max_width: int, max_area: int) -> MultiPoly:
    """1 + sum over polyominoes of x^width y^(height-1) q^area."""
    truncation = {"x": max_width, "q": max_area}
    total = MultiPoly.one(truncation)
    for code in enumerate_polyominoes(max_width, max_area):
        total = total + MultiPoly.monomial({"x": code.width, "y": code.height - 1, "q": code.area}, 1, truncation)
    return total


@dataclass(frozen=True)
class SegmentAlphabet:
    """The letters a_ij = [i, j], 1 <= i <= j <= max_j, with ids in lexicographic order of (i, j)."""

    max_j: int

    def __post_init__(self):
        if self.max_j < 1:
            raise DomainError(f"max_j must be positive, got {self.max_j}")

    @property
    def segments(self) -> Tuple[Segment, ...]:
        return tuple((i, j) for i in range(1, self.max_j + 1) for j in range(i, self.max_j + 1))

    @property
    def m(self) -> int:
        return len(self.segments)

    def letter(self, segment: Segment) -> int:
        try:
            return self.segments.index(tuple(segment))
        except ValueError as e:
            raise DomainError(f"Segment {segment} is outside the alphabet of max_j = {self.max_j}") from e

    def segment(self, letter: int) -> Segment:
        return self.segments[letter]

    def to_heap_word(self, w: Sequence[int]) -> HeapWord:
        return tuple(self.segment(letter) for letter in w)

    def from_heap_word(self, w: HeapWord) -> Tuple[int, ...]:
        return tuple(self.letter(s) for s in w)

    def relation(self) -> Relation:
        """a_ij theta a_kl iff i <= l."""
        segments = self.segments
        return Relation.from_predicate(self.m, lambda a, b: segments[a][0] <= segments[b][1], "segment-overlap")

    def weight(self, letter: int, truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
        """a_ij -> x y^(j-i) q^j."""
        i, j = self.segment(letter)
        return MultiPoly.monomial({"x": 1, "y": j - i, "q": j}, 1, truncation)

    def ending_letters(self) -> FrozenSet[int]:
        return frozenset(self.letter((1, j)) for j in range(1, self.max_j + 1))


def _trivial_heaps(max_j: int, max_length: int, max_area: int) -> Iterator[HeapWord]:
    # Decreasing sequences of pairwise disjoint segments: j_{k+1} < i_k
    def extend(prefix: HeapWord, ceiling: int, area: int) -> Iterator[HeapWord]:
        yield prefix
        if len(prefix) == max_length:
            return
        for j in range(1, min(ceiling, max_area - area) + 1):
            for i in range(1, j + 1):
                yield from extend(prefix + ((i, j),), i - 1, area + j)

    yield from extend((), max_j, 0)


def series_via_bessel(truncation: Mapping[str, int], max_j: Optional[int] = None, route: str = "fast") -> MultiPoly:
    """Width/height/area series of parallelogram polyominoes from the theta-calculus.

    The adjacency-word series is (1 - F)^{-1} with F = sum_{n>=1} (-1)^(n-1) Lambda_n(A; not theta),
    the trivial heaps; the ending condition is imposed by D = sum_j d_{a_1j} . a_1j,
    and a_ij is specialized to x y^(j-i) q^j. The empty polyomino contributes 1.

    Args:
        truncation: orders for x (width) and q (area), y optional
        max_j: alphabet window, at least the q-order (defaults to it)
        route: "fast" specializes the trivial-heap sums before inverting,
            "words" inverts in the word algebra first

    Raises:
        BoundError: If the alphabet window cannot hold every column of the certified area
    """
    if "x" not in truncation or "q" not in truncation:
        raise DomainError("The polyomino series needs x and q truncation orders")
    max_width, max_area = truncation["x"], truncation["q"]
    max_j = max_area if max_j is None else max_j
    if max_j < max_area:
        raise BoundError(f"max_j = {max_j} would lose columns taller than {max_j} below area {max_area}")
    alphabet = SegmentAlphabet(max_j)

    if route == "fast":
        F = MultiPoly.zero(truncation)
        F_ending = MultiPoly.zero(truncation)
        for heap in _trivial_heaps(max_j, max_width, max_area):
            if not heap:
                continue
            value = MultiPoly.constant((-1) ** (len(heap) - 1), truncation)
            for i, j in heap:
                value = value * MultiPoly.monomial({"x": 1, "y": j - i, "q": j}, 1, truncation)
            F = F + value
            if heap[-1][0] == 1:
                F_ending = F_ending + value
        restricted = geometric_inverse(1 - F) * F_ending
    elif route == "words":
        weight = {letter: alphabet.weight(letter, truncation) for letter in range(alphabet.m)}
        area = {letter: alphabet.segment(letter)[1] for letter in range(alphabet.m)}
        within = lambda w: sum(area[letter] for letter in w) <= max_area
        complement = alphabet.relation().complement()
        F = WordPoly(alphabet.m, max_length=max_width)
        for n in range(1, max_width + 1):
            F = F + WordPoly.from_words(alphabet.m, filter(within, theta_words(n, complement)),
                                        (-1) ** (n - 1), max_length=max_width)
        adjacency_words = (WordPoly.one(alphabet.m, max_width) - F).inverse(keep=within)
        restricted = word_partial(adjacency_words, alphabet.ending_letters(), reappend=True).specialize(weight.__getitem__)
    else:
        raise DomainError(f"Unknown route {route!r}; expected one of {ROUTES}")
    return MultiPoly.one(truncation) + restricted


# -- heaps of segments ------------------------------------------------------------

def segments_commute(s: Segment, t: Segment) -> bool:
    """Disjoint segments commute: a_ij a_kl = a_kl a_ij when j < k (or l < i)."""
    return s[1] < t[0] or t[1] < s[0]


def is_adjacency_word(w: HeapWord) -> bool:
    """i_k <= j_{k+1} for every adjacent pair."""
    return all(w[k][0] <= w[k + 1][1] for k in range(len(w) - 1))


def heap_class(w: HeapWord) -> Set[HeapWord]:
    """The commutation class of w, closed under swapping adjacent disjoint segments."""
    w = tuple(tuple(s) for s in w)
    for i, j in w:
        if not 1 <= i <= j:
            raise DomainError(f"Segment ({i}, {j}) needs 1 <= i <= j")
    seen = {w}
    queue = deque([w])
    while queue:
        current = queue.popleft()
        for k in range(len(current) - 1):
            if segments_commute(current[k], current[k + 1]):
                swapped = current[:k] + (current[k + 1], current[k]) + current[k + 2:]
                if swapped not in seen:
                    seen.add(swapped)
                    queue.append(swapped)
    return seen


def heap_normal_form(w: HeapWord) -> HeapWord:
    """The unique member of the commutation class with i_k <= j_{k+1} throughout.

    Raises:
        VerificationError: If the class has no such member or more than one
    """
    candidates = sorted(v for v in heap_class(w) if is_adjacency_word(v))
    if len(candidates) != 1:
        logger.error(f"Heap class of {w} has {len(candidates)} adjacency representatives")
        raise VerificationError(f"Heap class of {w} has {len(candidates)} adjacency representatives",
                                expected=1, actual=len(candidates))
    return candidates[0]


@dataclass
class HeapCensus:
    """Outcome of the class-by-class normal form check for one length and window."""

    length: int
    max_j: int
    classes: int
    adjacency_words: int

    @property
    def bijective(self) -> bool:
        return self.classes == self.adjacency_words


def heap_census(n: int, max_j: int) -> HeapCensus:
    """Walk every commutation class of segment words of length n and check each normal form.

    Raises:
        VerificationError: If some class has zero or several representatives
    """
    alphabet = SegmentAlphabet(max_j)
    segments = alphabet.segments
    seen: Set[HeapWord] = set()
    classes = 0
    adjacency = 0
    stack: List[HeapWord] = [()]
    while stack:
        prefix = stack.pop()
        if len(prefix) < n:
            stack.extend(prefix + (s,) for s in segments)
            continue
        if is_adjacency_word(prefix):
            adjacency += 1
        if prefix in seen:
            continue
        members = heap_class(prefix)
        seen |= members
        classes += 1
        representatives = [v for v in members if is_adjacency_word(v)]
        if len(representatives) != 1:
            logger.error(f"Heap class of {prefix} has {len(representatives)} adjacency representatives")
            raise VerificationError(f"Heap class of {prefix} has {len(representatives)} adjacency representatives",
                                    expected=1, actual=len(representatives))
    logger.info(f"Heaps of length {n} over max_j={max_j}: {classes} classes, {adjacency} adjacency words")
    return HeapCensus(n, max_j, classes, adjacency)


def cartier_foata_check(n: int, max_j: int) -> bool:
    """Alternating convolution of the two segment relations vanishes, and Lambda_n(not theta)
    is exactly the sum of decreasing products of pairwise disjoint segments."""
    alphabet = SegmentAlphabet(max_j)
    th = alphabet.relation()
    if not koszul_check(n, th):
        logger.error(f"Alternating convolution fails for n={n}, max_j={max_j}")
        return False
    words = {alphabet.to_heap_word(w) for w in theta_words(n, th.complement())}
    trivial = {heap for heap in _trivial_heaps(max_j, n, n * max_j) if len(heap) == n}
    if words != trivial:
        logger.error(f"Trivial heaps differ from Lambda_{n}(not theta): "
                     f"{sorted(words ^ trivial)[:5]} among the differences")
        return False
    return True
