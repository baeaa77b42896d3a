"""Compositions, descent sets and descent statistics of permutations and words."""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from core.errors import BoundError, DegreeError, DomainError, VerificationError

# Set up logging
logger = logging.getLogger("compositions")

# Brute-force enumeration of S_n stays below this degree
BRUTE_FORCE_CAP = 8

DESCENT_OPS = ("meet", "join", "diff")


@total_ordering
@dataclass(frozen=True)
class Composition:
    """A composition I of n, i.e. an ordered sequence of positive parts.

    Compositions of a fixed n are in bijection with subsets of {1, ..., n-1}
    through their descent sets (the partial sums of all parts but the last).
    The empty composition is the unique composition of 0.
    """

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        for part in parts:
            if not isinstance(part, int) or isinstance(part, bool) or part < 1:
                raise DomainError(f"Composition parts must be positive integers, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        """Degree |I|."""
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of parts l(I)."""
        return len(self.parts)

    @property
    def descents(self) -> FrozenSet[int]:
        """Descent set Des(I)."""
        return frozenset(itertools.accumulate(self.parts[:-1]))

    @property
    def sort_key(self) -> Tuple[int, int]:
        """Canonical order: degree first, then the descent set read as a binary number."""
        return (self.n, sum(1 << (d - 1) for d in self.descents))

    def __lt__(self, other: "Composition") -> bool:
        if not isinstance(other, Composition):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return ",".join(str(part) for part in self.parts)

    def __repr__(self) -> str:
        return f"Composition({self})"

    def concat(self, other: "Composition") -> "Composition":
        """Concatenation I.J."""
        return Composition(self.parts + other.parts)

    def merge(self, other: "Composition") -> "Composition":
        """I |> J: concatenation with the last part of I added to the first part of J."""
        if not self.parts or not other.parts:
            return self.concat(other)
        return Composition(self.parts[:-1] + (self.parts[-1] + other.parts[0],) + other.parts[1:])

    def reversed(self) -> "Composition":
        return Composition(tuple(reversed(self.parts)))

    @classmethod
    def parse(cls, text: str) -> "Composition":
        """Parse a comma-separated part list such as "2,1" (empty string or "0" for the empty composition).

        Raises:
            DomainError: If the text is not a list of positive integers
        """
        text = text.strip().strip("[]()")
        if text in ("", "0"):
            return cls(())
        try:
            parts = tuple(int(piece) for piece in text.split(","))
        except ValueError as e:
            raise DomainError(f"Malformed composition string: {text!r}") from e
        return cls(parts)


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1, ..., n} in one-line notation."""

    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise DomainError(f"Not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    def __len__(self) -> int:
        return len(self.images)

    def __str__(self) -> str:
        return "".join(str(v) for v in self.images) if len(self) < 10 else " ".join(map(str, self.images))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for position, value in enumerate(self.images, start=1):
            inv[value - 1] = position
        return Permutation(tuple(inv))

    @property
    def descents(self) -> FrozenSet[int]:
        """Des(sigma) = {i : sigma(i) > sigma(i+1)}."""
        return word_descents(self.images)

    @property
    def des(self) -> int:
        return len(self.descents)


def word_descents(word: Sequence[int]) -> FrozenSet[int]:
    """Strict descent positions of a word over an ordered alphabet (1-based)."""
    return frozenset(i for i in range(1, len(word)) if word[i - 1] > word[i])


def from_descents(d: Iterable[int], n: int) -> Composition:
    """Build the composition of n whose descent set is d.

    Args:
        d: subset of {1, ..., n-1}
        n: degree

    Returns:
        The composition whose parts are the gaps of 0 < d_1 < ... < d_k < n

    Raises:
        DomainError: If an element of d lies outside {1, ..., n-1}
    """
    if n < 0:
        raise DomainError(f"Degree must be nonnegative, got {n}")
    marks = sorted(set(d))
    for mark in marks:
        if not 1 <= mark <= n - 1:
            raise DomainError(f"Descent {mark} outside {{1,...,{n - 1}}}")
    if n == 0:
        return Composition(())
    bounds = [0] + marks + [n]
    return Composition(tuple(b - a for a, b in zip(bounds, bounds[1:])))


@lru_cache(maxsize=None)
def compositions(n: int) -> Tuple[Composition, ...]:
    """All compositions of n in canonical (binary descent set) order."""
    if n < 0:
        raise DomainError(f"Degree must be nonnegative, got {n}")
    if n == 0:
        return (Composition(()),)
    result = []
    for mask in range(1 << (n - 1)):
        result.append(from_descents([i + 1 for i in range(n - 1) if mask >> i & 1], n))
    return tuple(result)


def descent_op(H: Composition, K: Composition, op: str) -> Composition:
    """Combine two compositions of the same degree through their descent sets.

    Args:
        H: first composition
        K: second composition
        op: "meet" (intersection), "join" (union) or "diff" (Des(H) minus Des(K))

    Raises:
        DegreeError: If |H| != |K|
        DomainError: If op is unknown
    """
    if H.n != K.n:
        raise DegreeError(f"Degree mismatch: |{H}| = {H.n} but |{K}| = {K.n}")
    if op == "meet":
        d = H.descents & K.descents
    elif op == "join":
        d = H.descents | K.descents
    elif op == "diff":
        d = H.descents - K.descents
    else:
        raise DomainError(f"Unknown descent operation {op!r}; expected one of {DESCENT_OPS}")
    return from_descents(d, H.n)


def complement(I: Composition) -> Composition:
    """The composition with the complementary descent set in {1, ..., n-1}."""
    return from_descents(set(range(1, I.n)) - I.descents, I.n)


def conjugate(I: Composition) -> Composition:
    """Conjugate composition: Des(I~) = {n - d : d in {1..n-1} \\ Des(I)}."""
    n = I.n
    return from_descents({n - d for d in range(1, n) if d not in I.descents}, n)


def descent_composition(w: Sequence[int]) -> Composition:
    """Descent composition of a permutation or of a word over an ordered alphabet."""
    if isinstance(w, Permutation):
        w = w.images
    return from_descents(word_descents(w), len(w))


def maj(I: Composition) -> int:
    """Major index: sum of the descent positions of I."""
    return sum(I.descents)


def coimaj(sigma: Permutation) -> int:
    """Co-major index of sigma^-1: sum of n - d over the descents d of sigma^-1."""
    n = len(sigma)
    return sum(n - d for d in sigma.inverse().descents)


def multinomial(parts: Sequence[int]) -> int:
    """n! / (j_1! ... j_r!) for the parts j_k of a composition of n."""
    result = math.factorial(sum(parts))
    for part in parts:
        result //= math.factorial(part)
    return result


def ribbon_number_formula(I: Composition) -> int:
    """beta_I by inclusion-exclusion over the subsets of Des(I)."""
    total = 0
    size = len(I.descents)
    for J in compositions(I.n):
        if J.descents <= I.descents:
            sign = -1 if (size - len(J.descents)) % 2 else 1
            total += sign * multinomial(J.parts)
    return total


def permutations(n: int) -> List[Permutation]:
    """All permutations of S_n in lexicographic order."""
    if n > BRUTE_FORCE_CAP:
        raise BoundError(f"Refusing to enumerate S_{n}: cap is n <= {BRUTE_FORCE_CAP}")
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


@lru_cache(maxsize=None)
def descent_class_sizes(n: int) -> Dict[Composition, int]:
    """Brute-force sizes of the descent classes of S_n."""
    sizes = {I: 0 for I in compositions(n)}
    for sigma in permutations(n):
        sizes[descent_composition(sigma)] += 1
    logger.debug(f"Counted descent classes of S_{n}")
    return sizes


def ribbon_number(I: Composition, verify: bool = False) -> int:
    """Number of permutations with descent composition I.

    Args:
        I: composition of n
        verify: also count by brute force (n <= 8) and compare

    Returns:
        beta_I

    Raises:
        VerificationError: If the two counts disagree
    """
    value = ribbon_number_formula(I)
    if verify:
        brute = descent_class_sizes(I.n)[I]
        if brute != value:
            logger.error(f"Ribbon number mismatch for {I}: formula {value}, brute force {brute}")
            raise VerificationError(f"beta_{I} disagrees", expected=brute, actual=value)
    return value
