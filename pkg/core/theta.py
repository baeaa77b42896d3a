"""theta-specializations: Sym realized in word algebras over a finite alphabet.

For a binary relation theta on A = {0, ..., m-1}, Lambda_n(A; theta) is the
sum of the words of length n whose adjacent letters are all theta-related,
and S_n(A; theta) = Lambda_n(A; not theta). Ribbons collect the words by
their theta-adjacency set.

Letters are dense integer ids. Words are tuples of ids.
"""

import itertools
import json
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from core.compositions import Composition, from_descents, permutations, word_descents
from core.errors import DegreeError, DomainError, NotInvertibleError, VerificationError
from core.nsym import _accumulate, _as_poly, Coefficient, render_linear
from core.scalars import MultiPoly, geometric_inverse

# Set up logging
logger = logging.getLogger("theta")

Word = Tuple[int, ...]
ORDER_PRESETS = ("gt", "geq", "lt", "leq", "eq")
KINDS = ("lambda", "complete", "ribbon")


@dataclass(frozen=True)
class Relation:
    """A binary relation on {0, ..., m-1}, stored as a boolean matrix."""

    m: int
    rel: Tuple[Tuple[bool, ...], ...]
    name: str = "custom"

    def __post_init__(self):
        rows = tuple(tuple(bool(v) for v in row) for row in self.rel)
        if len(rows) != self.m or any(len(row) != self.m for row in rows):
            raise DomainError(f"Relation matrix must be {self.m}x{self.m}")
        object.__setattr__(self, "rel", rows)

    def __call__(self, a: int, b: int) -> bool:
        return self.rel[a][b]

    def complement(self) -> "Relation":
        name = self.name[4:] if self.name.startswith("not ") else f"not {self.name}"
        return Relation(self.m, tuple(tuple(not v for v in row) for row in self.rel), name)

    @classmethod
    def from_predicate(cls, m: int, predicate: Callable[[int, int], bool], name: str = "custom") -> "Relation":
        return cls(m, tuple(tuple(predicate(a, b) for b in range(m)) for a in range(m)), name)

    @classmethod
    def preset(cls, name: str, m: int) -> "Relation":
        """Order relations on the chain 0 < 1 < ... < m-1.

        Raises:
            DomainError: If the preset name is unknown
        """
        predicates = {
            "gt": lambda a, b: a > b,
            "geq": lambda a, b: a >= b,
            "lt": lambda a, b: a < b,
            "leq": lambda a, b: a <= b,
            "eq": lambda a, b: a == b,
        }
        if name not in predicates:
            raise DomainError(f"Unknown relation preset {name!r}; expected one of {ORDER_PRESETS}")
        return cls.from_predicate(m, predicates[name], name)

    @classmethod
    def random(cls, m: int, rng: random.Random, density: float = 0.5) -> "Relation":
        return cls(m, tuple(tuple(rng.random() < density for _ in range(m)) for _ in range(m)), "random")

    @classmethod
    def from_json(cls, text: str) -> "Relation":
        """Load a relation from a JSON boolean matrix (or {"matrix": ..., "name": ...}).

        Raises:
            DomainError: If the JSON is malformed or not square
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DomainError(f"Relation is not valid JSON: {e}") from e
        name = "custom"
        if isinstance(data, dict):
            name = data.get("name", name)
            data = data.get("matrix")
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise DomainError("Relation JSON must be a list of rows")
        return cls(len(data), tuple(tuple(row) for row in data), name)

    def to_json(self) -> Dict:
        return {"name": self.name, "matrix": [list(row) for row in self.rel]}


def word_string(w: Sequence[int]) -> str:
    if all(letter < 10 for letter in w):
        return "".join(str(letter) for letter in w)
    return ".".join(str(letter) for letter in w)


class WordPoly:
    """A noncommutative polynomial over {0, ..., m-1} with MultiPoly coefficients.

    When max_length is set, the element is a word series known up to that
    length and products drop longer words.
    """

    __slots__ = ("m", "max_length", "_terms")

    def __init__(self, m: int, terms: Optional[Mapping[Sequence[int], Coefficient]] = None,
                 max_length: Optional[int] = None):
        self.m = m
        self.max_length = max_length
        clean: Dict[Word, MultiPoly] = {}
        for w, coeff in (terms or {}).items():
            w = tuple(w)
            if any(not 0 <= letter < m for letter in w):
                raise DomainError(f"Word {w} is not over an alphabet of size {m}")
            if max_length is not None and len(w) > max_length:
                continue
            _accumulate(clean, w, _as_poly(coeff))
        self._terms = clean

    @classmethod
    def _make(cls, m: int, terms: Dict[Word, MultiPoly], max_length: Optional[int]) -> "WordPoly":
        element = object.__new__(cls)
        element.m = m
        element.max_length = max_length
        element._terms = terms
        return element

    @classmethod
    def one(cls, m: int, max_length: Optional[int] = None) -> "WordPoly":
        return cls(m, {(): 1}, max_length)

    @classmethod
    def from_words(cls, m: int, words: Iterable[Sequence[int]], coeff: Coefficient = 1,
                   max_length: Optional[int] = None) -> "WordPoly":
        out: Dict[Word, MultiPoly] = {}
        value = _as_poly(coeff)
        for w in words:
            _accumulate(out, tuple(w), value)
        return cls(m, out, max_length)

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Word, MultiPoly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def words(self) -> List[Word]:
        return [w for w, _ in self.items()]

    def coefficient(self, w: Sequence[int]) -> MultiPoly:
        return self._terms.get(tuple(w), MultiPoly.zero())

    @property
    def constant_term(self) -> MultiPoly:
        return self._terms.get((), MultiPoly.zero())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def component(self, n: int) -> "WordPoly":
        return WordPoly._make(self.m, {w: c for w, c in self._terms.items() if len(w) == n}, self.max_length)

    def truncated(self, max_length: int) -> "WordPoly":
        bound = max_length if self.max_length is None else min(max_length, self.max_length)
        return WordPoly._make(self.m, {w: c for w, c in self._terms.items() if len(w) <= bound}, bound)

    def filtered(self, keep: Callable[[Word], bool]) -> "WordPoly":
        return WordPoly._make(self.m, {w: c for w, c in self._terms.items() if keep(w)}, self.max_length)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "WordPoly") -> Optional[int]:
        if self.m != other.m:
            raise DomainError(f"Alphabet sizes differ: {self.m} and {other.m}")
        if self.max_length is None:
            return other.max_length
        if other.max_length is None:
            return self.max_length
        return min(self.max_length, other.max_length)

    def __add__(self, other: "WordPoly") -> "WordPoly":
        if not isinstance(other, WordPoly):
            return NotImplemented
        bound = self._check(other)
        out = {w: c for w, c in self._terms.items() if bound is None or len(w) <= bound}
        for w, c in other._terms.items():
            if bound is None or len(w) <= bound:
                _accumulate(out, w, c)
        return WordPoly._make(self.m, out, bound)

    def __neg__(self) -> "WordPoly":
        return WordPoly._make(self.m, {w: -c for w, c in self._terms.items()}, self.max_length)

    def __sub__(self, other: "WordPoly") -> "WordPoly":
        if not isinstance(other, WordPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "WordPoly":
        if isinstance(other, WordPoly):
            return concatenate(self, other)
        if isinstance(other, (int, Fraction, MultiPoly)):
            factor = _as_poly(other)
            out: Dict[Word, MultiPoly] = {}
            for w, c in self._terms.items():
                _accumulate(out, w, c * factor)
            return WordPoly._make(self.m, out, self.max_length)
        return NotImplemented

    def __rmul__(self, other) -> "WordPoly":
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordPoly):
            return NotImplemented
        return self.m == other.m and self._terms == other._terms

    __hash__ = None

    def inverse(self, max_length: Optional[int] = None,
                keep: Optional[Callable[[Word], bool]] = None) -> "WordPoly":
        """Graded inverse by word length: g_0 = 1/f_0, g_n = -(1/f_0) sum_k f_k g_{n-k}.

        keep, when given, must reject every word having a rejected suffix
        (an additive weight bound, say); rejected words are never formed.

        Raises:
            NotInvertibleError: If the constant term is not a unit scalar
            DomainError: If no length bound is known
        """
        bound = max_length if max_length is not None else self.max_length
        if bound is None:
            raise DomainError("Inverting a word series needs a length bound")
        c = self.constant_term
        if c.is_zero or not c.constant_term:
            raise NotInvertibleError(f"Constant term {c} of the word series is not a unit")
        c_inv = geometric_inverse(c)
        by_length: Dict[int, Dict[Word, MultiPoly]] = {}
        for w, coeff in self._terms.items():
            by_length.setdefault(len(w), {})[w] = coeff
        inverse: Dict[int, Dict[Word, MultiPoly]] = {0: {(): c_inv}}
        for n in range(1, bound + 1):
            acc: Dict[Word, MultiPoly] = {}
            for k in range(1, n + 1):
                for u, a in by_length.get(k, {}).items():
                    for v, b in inverse[n - k].items():
                        w = u + v
                        if keep is None or keep(w):
                            _accumulate(acc, w, a * b)
            inverse[n] = {w: -(c_inv * v) for w, v in acc.items()}
            logger.debug(f"Word series inverse length {n}: {len(acc)} words")
        terms = {w: v for comp in inverse.values() for w, v in comp.items() if not v.is_zero}
        return WordPoly._make(self.m, terms, bound)

    def specialize(self, weight: Callable[[int], MultiPoly]) -> MultiPoly:
        """Apply a letter-wise weight and sum: the commutative image of the element."""
        total = MultiPoly.zero()
        for w, coeff in self._terms.items():
            value = coeff
            for letter in w:
                value = value * weight(letter)
            total = total + value
        return total

    def __str__(self) -> str:
        return render_linear(((f"[{word_string(w)}]", c) for w, c in self.items()))

    def __repr__(self) -> str:
        return f"WordPoly({self})"

    def to_json(self) -> Dict:
        return {
            "alphabet": self.m,
            "terms": [{"word": list(w), "coefficient": c.to_json()} for w, c in self.items()],
        }


def concatenate(f: WordPoly, g: WordPoly, keep: Optional[Callable[[Word], bool]] = None) -> WordPoly:
    """Concatenation product, dropping words beyond the length bound or rejected by keep."""
    bound = f._check(g)
    out: Dict[Word, MultiPoly] = {}
    for u, a in f._terms.items():
        for v, b in g._terms.items():
            if bound is not None and len(u) + len(v) > bound:
                continue
            w = u + v
            if keep is not None and not keep(w):
                continue
            _accumulate(out, w, a * b)
    return WordPoly._make(f.m, out, bound)


# -- statistics -----------------------------------------------------------------

def theta_adjacency(w: Sequence[int], th: Relation) -> FrozenSet[int]:
    """thetaAdj(w) = {i : w_i theta w_{i+1}}, positions 1-based."""
    return frozenset(i for i in range(1, len(w)) if th(w[i - 1], w[i]))


def theta_adj(w: Sequence[int], th: Relation) -> int:
    return len(theta_adjacency(w, th))


def theta_maj_statistic(w: Sequence[int], th: Relation) -> int:
    return sum(theta_adjacency(w, th))


def all_words(m: int, n: int) -> Iterator[Word]:
    return itertools.product(range(m), repeat=n)


def theta_words(n: int, th: Relation) -> List[Word]:
    """Words of length n whose adjacent letters are all theta-related."""
    if n == 0:
        return [()]
    words: List[Word] = [(a,) for a in range(th.m)]
    for _ in range(n - 1):
        words = [w + (b,) for w in words for b in range(th.m) if th(w[-1], b)]
    return words


# -- operations -----------------------------------------------------------------

def theta_basis(kind: str, n: int, th: Relation, I: Optional[Composition] = None,
                max_length: Optional[int] = None) -> WordPoly:
    """Lambda_n(A; theta), S_n(A; theta) = Lambda_n(A; not theta) or R_I(A; theta).

    Raises:
        DegreeError: If |I| != n for a ribbon
        DomainError: If the kind is unknown or n is negative
    """
    if n < 0:
        raise DomainError(f"Length must be nonnegative, got {n}")
    if kind == "lambda":
        return WordPoly.from_words(th.m, theta_words(n, th), max_length=max_length)
    if kind == "complete":
        return WordPoly.from_words(th.m, theta_words(n, th.complement()), max_length=max_length)
    if kind == "ribbon":
        if I is None:
            raise DomainError("A ribbon needs its composition")
        if I.n != n:
            raise DegreeError(f"Ribbon R_{I} has degree {I.n}, not {n}")
        target = I.descents
        return WordPoly.from_words(th.m, (w for w in all_words(th.m, n) if theta_adjacency(w, th) == target),
                                   max_length=max_length)
    raise DomainError(f"Unknown theta basis kind {kind!r}; expected one of {KINDS}")


def theta_composition(w: Sequence[int], th: Relation) -> Composition:
    """C_theta(w): the composition whose descent set is thetaAdj(w)."""
    return from_descents(theta_adjacency(w, th), len(w))


def koszul_check(n: int, th: Relation) -> bool:
    """sum_{k=0..n} (-1)^k Lambda_k(theta) Lambda_{n-k}(not theta) == 0 in the word algebra."""
    complement = th.complement()
    total = WordPoly(th.m)
    for k in range(n + 1):
        left = WordPoly.from_words(th.m, theta_words(k, th))
        right = WordPoly.from_words(th.m, theta_words(n - k, complement))
        total = total + concatenate(left, right) * (-1) ** k
    if not total.is_zero:
        logger.error(f"Alternating convolution does not vanish for n={n}, relation {th.name}")
    return total.is_zero


def _eulerian_generator(n: int, th: Relation) -> WordPoly:
    # F = sum over nonempty theta-words w of (t-1)^(l(w)-1) w
    t_minus_one = MultiPoly.var("t") - 1
    F = WordPoly(th.m, max_length=n)
    for k in range(1, n + 1):
        F = F + WordPoly.from_words(th.m, theta_words(k, th), t_minus_one ** (k - 1), max_length=n)
    return F


def _verified(name: str, enumerated: WordPoly, closed: WordPoly) -> WordPoly:
    if enumerated != closed:
        logger.error(f"{name}: enumeration and closed form disagree")
        raise VerificationError(f"{name}: enumeration and closed form disagree",
                                expected=str(enumerated), actual=str(closed))
    return enumerated


def theta_eulerian(n: int, th: Relation) -> WordPoly:
    """Length-n part of sum_w t^thetaadj(w) w, enumerated and checked against (1 - F)^{-1}.

    Raises:
        VerificationError: If the two computations disagree
    """
    enumerated = WordPoly(th.m, {w: MultiPoly.var("t", theta_adj(w, th)) for w in all_words(th.m, n)})
    closed = (WordPoly.one(th.m, n) - _eulerian_generator(n, th)).inverse().component(n)
    return _verified(f"theta-Eulerian polynomial of length {n}", enumerated, closed)


def word_partial(f: WordPoly, C: Union[int, Iterable[int]], reappend: bool = False) -> WordPoly:
    """Right derivations: w d_c = u if w = uc, else 0, summed over c in C.

    With reappend=True this is D_C = sum_c d_c . c, which keeps exactly the
    words ending in a letter of C.
    """
    letters = {C} if isinstance(C, int) else set(C)
    out: Dict[Word, MultiPoly] = {}
    for w, coeff in f.terms.items():
        if w and w[-1] in letters:
            _accumulate(out, w if reappend else w[:-1], coeff)
    return WordPoly._make(f.m, out, f.max_length)


def theta_eulerian_ending(n: int, th: Relation, C: Iterable[int]) -> WordPoly:
    """Length-n words ending in C weighted by t^thetaadj, checked against (1 - F)^{-1} (F D_C)."""
    letters = set(C)
    enumerated = WordPoly(th.m, {w: MultiPoly.var("t", theta_adj(w, th))
                                 for w in all_words(th.m, n) if n and w[-1] in letters})
    F = _eulerian_generator(n, th)
    closed = ((WordPoly.one(th.m, n) - F).inverse() * word_partial(F, letters, reappend=True)).component(n)
    return _verified(f"theta-Eulerian words of length {n} ending in {sorted(letters)}", enumerated, closed)


def theta_maj(n: int, th: Relation, qtrunc: int) -> WordPoly:
    """sum over A^n of q^thetamaj(w) w, checked against (q)_n S_n(A/(1-q); theta).

    sigma_z(A/(1-q); theta) is the ordered product of sigma_{z q^k}(A; theta)
    for k = K, ..., 1, 0 with K = qtrunc + 1, the largest power of q on the left.
    """
    truncation = {"q": qtrunc}
    enumerated = WordPoly(th.m, {w: MultiPoly.var("q", theta_maj_statistic(w, th), truncation=truncation)
                                 for w in all_words(th.m, n)})
    complete = [WordPoly.from_words(th.m, theta_words(j, th.complement()), max_length=n) for j in range(n + 1)]
    product = WordPoly.one(th.m, n)
    for k in range(qtrunc + 1, -1, -1):
        factor = WordPoly(th.m, max_length=n)
        for j in range(n + 1):
            factor = factor + complete[j] * MultiPoly.var("q", k * j, truncation=truncation)
        product = product * factor
    q_factorial = MultiPoly.one(truncation)
    for k in range(1, n + 1):
        q_factorial = q_factorial * (1 - MultiPoly.var("q", k, truncation=truncation))
    closed = product.component(n) * q_factorial
    return _verified(f"theta-major index identity of length {n}", enumerated, closed)


# -- the double alphabet A x B --------------------------------------------------

@dataclass(frozen=True)
class BiAlphabet:
    """The product alphabet A x B with (a, b) theta (a', b') iff a > a' and b <= b'.

    The biletter (a, b) has id a * size_b + b.
    """

    size_a: int
    size_b: int

    @property
    def m(self) -> int:
        return self.size_a * self.size_b

    def letter(self, a: int, b: int) -> int:
        return a * self.size_b + b

    def split(self, letter: int) -> Tuple[int, int]:
        return divmod(letter, self.size_b)

    def relation(self) -> Relation:
        def related(x: int, y: int) -> bool:
            (a, b), (a2, b2) = self.split(x), self.split(y)
            return a > a2 and b <= b2

        return Relation.from_predicate(self.m, related, "bessel-product")

    def biword(self, u: Sequence[int], v: Sequence[int]) -> Word:
        if len(u) != len(v):
            raise DomainError(f"Biword rows differ in length: {len(u)} and {len(v)}")
        return tuple(self.letter(a, b) for a, b in zip(u, v))

    def rows(self, w: Sequence[int]) -> Tuple[Word, Word]:
        pairs = [self.split(letter) for letter in w]
        return tuple(a for a, _ in pairs), tuple(b for _, b in pairs)

    def render(self, w: Sequence[int]) -> str:
        """Two-row form: the A row above the B row."""
        u, v = self.rows(w)
        return f"{word_string(u)}\n{word_string(v)}"


def elementary_biwords(k: int, alphabet: BiAlphabet) -> WordPoly:
    """Lambda_k(J) as a biword sum: strictly decreasing rows in A paired with weakly increasing rows in B."""
    decreasing = theta_words(k, Relation.preset("gt", alphabet.size_a))
    increasing = theta_words(k, Relation.preset("leq", alphabet.size_b))
    return WordPoly.from_words(alphabet.m, (alphabet.biword(u, v) for u in decreasing for v in increasing))


def check_descent_identity(w: Sequence[int], alphabet: BiAlphabet, th: Optional[Relation] = None) -> bool:
    """thetaAdj([u, v]) == Des(u) minus Des(v)."""
    u, v = alphabet.rows(w)
    th = th or alphabet.relation()
    return theta_adjacency(w, th) == word_descents(u) - word_descents(v)


def double_eulerian(n: int, size_a: int, size_b: int) -> WordPoly:
    """The n-th double theta-Eulerian polynomial over A x B.

    Enumerates biwords with t^thetaadj and compares with the length-n part of
    (1 - t)/(J_0((1 - t)z; A, B) - t) = (1 - sum_{k>=1} (t-1)^(k-1) Lambda_k(J))^{-1}.
    Also checks that Lambda_k(J) is the pairing of decreasing and weakly
    increasing rows, and the descent identity on every enumerated biword.

    Raises:
        VerificationError: If any of the checks fails
    """
    alphabet = BiAlphabet(size_a, size_b)
    th = alphabet.relation()
    for k in range(1, n + 1):
        if theta_basis("lambda", k, th) != elementary_biwords(k, alphabet):
            raise VerificationError(f"Lambda_{k}(J) is not the biword pairing")
    for w in all_words(alphabet.m, n):
        if not check_descent_identity(w, alphabet, th):
            raise VerificationError(f"Descent identity fails on biword {alphabet.render(w)!r}")
    return theta_eulerian(n, th)


def pair_eulerian(n: int) -> MultiPoly:
    """sum over (a, b) in S_n x S_n of t^|Des(a) minus Des(b)|, read off the double Eulerian polynomial.

    Only the biwords over the n x n chains whose rows are both permutations
    are kept; the result is compared with a direct count over pairs.
    """
    alphabet = BiAlphabet(n, n)
    polynomial = double_eulerian(n, n, n)
    extracted = MultiPoly.zero()
    for w, coeff in polynomial.terms.items():
        u, v = alphabet.rows(w)
        if len(set(u)) == n and len(set(v)) == n:
            extracted = extracted + coeff
    direct_terms: Dict[Tuple[int, ...], int] = {}
    descents = [s.descents for s in permutations(n)]
    for a in descents:
        for b in descents:
            key = (len(a - b), 0, 0, 0, 0, 0)
            direct_terms[key] = direct_terms.get(key, 0) + 1
    direct = MultiPoly(direct_terms)
    if direct != extracted:
        logger.error(f"Pair Eulerian polynomial mismatch at n={n}")
        raise VerificationError(f"Pair Eulerian polynomial mismatch at n={n}", expected=str(direct), actual=str(extracted))
    return direct
