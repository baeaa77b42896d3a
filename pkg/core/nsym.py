"""The graded algebra Sym of noncommutative symmetric functions.

Elements are sparse linear combinations of basis elements indexed by
compositions, in one of three bases:

    S   complete products S^I = S_{i_1} ... S_{i_r}
    L   elementary products Lambda^I = Lambda_{i_1} ... Lambda_{i_r}
    R   ribbons R_I

Coefficients are MultiPoly values. Basis changes go through the S basis:

    S^I = sum over Des(J) subset of Des(I) of R_J
    R_I = sum over Des(J) subset of Des(I) of (-1)^{|Des I| - |Des J|} S^J
    Lambda_n = R_{1^n},  S_n = sum over J |= n of (-1)^{n - l(J)} Lambda^J
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from core.compositions import Composition, compositions
from core.errors import DomainError, NotInvertibleError
from core.scalars import MultiPoly, geometric_inverse

# Set up logging
logger = logging.getLogger("nsym")

BASES = ("S", "L", "R")
EMPTY = Composition(())

Expansion = Tuple[Tuple[Composition, int], ...]
Coefficient = Union[int, Fraction, MultiPoly]


def _check_basis(basis: str) -> str:
    if basis not in BASES:
        raise DomainError(f"Unknown Sym basis {basis!r}; expected one of {BASES}")
    return basis


def _as_poly(value: Coefficient) -> MultiPoly:
    return value if isinstance(value, MultiPoly) else MultiPoly.constant(value)


def _accumulate(out: Dict, key, value: MultiPoly) -> None:
    current = out.get(key)
    total = value if current is None else current + value
    if total.is_zero:
        out.pop(key, None)
    else:
        out[key] = total


def _collect(pairs: Iterable[Tuple[Composition, int]]) -> Expansion:
    out: Dict[Composition, int] = {}
    for key, coeff in pairs:
        out[key] = out.get(key, 0) + coeff
    return tuple(sorted(((k, c) for k, c in out.items() if c), key=lambda kc: kc[0].sort_key))


# -- basis-element level maps (memoized) --------------------------------

def _generator_in_other(n: int) -> Expansion:
    # Lambda_n in the S basis, and by symmetry S_n in the Lambda basis
    return tuple((J, (-1) ** (n - J.length)) for J in compositions(n))


def _product_of_generators(I: Composition) -> Expansion:
    current: Dict[Composition, int] = {EMPTY: 1}
    for part in I.parts:
        nxt: Dict[Composition, int] = {}
        for K, a in current.items():
            for J, b in _generator_in_other(part):
                key = K.concat(J)
                nxt[key] = nxt.get(key, 0) + a * b
        current = {k: c for k, c in nxt.items() if c}
    return _collect(current.items())


@lru_cache(maxsize=None)
def expand_basis(source: str, target: str, I: Composition) -> Expansion:
    """Expansion of one basis element of `source` in the `target` basis."""
    _check_basis(source)
    _check_basis(target)
    if source == target:
        return ((I, 1),)
    if source == "S" and target == "R":
        return _collect((J, 1) for J in compositions(I.n) if J.descents <= I.descents)
    if source == "R" and target == "S":
        size = len(I.descents)
        return _collect((J, (-1) ** (size - len(J.descents)))
                        for J in compositions(I.n) if J.descents <= I.descents)
    if (source, target) in (("L", "S"), ("S", "L")):
        return _product_of_generators(I)
    # R <-> L through S
    pairs = []
    for J, a in expand_basis(source, "S", I):
        for K, b in expand_basis("S", target, J):
            pairs.append((K, a * b))
    return _collect(pairs)


def basis_product(basis: str, I: Composition, J: Composition) -> Expansion:
    """Product of two basis elements of the same basis.

    S and Lambda multiply by concatenation; ribbons follow
    R_I R_J = R_{I.J} + R_{I |> J}.
    """
    if basis == "R" and I.parts and J.parts:
        return ((I.concat(J), 1), (I.merge(J), 1))
    return ((I.concat(J), 1),)


@lru_cache(maxsize=None)
def omega_basis(basis: str, I: Composition) -> Expansion:
    """omega on a basis element: the anti-automorphism with omega(S_n) = Lambda_n."""
    if basis == "S":
        return expand_basis("L", "S", I.reversed())
    if basis == "L":
        return expand_basis("S", "L", I.reversed())
    pairs = []
    for J, a in expand_basis("R", "S", I):
        for K, b in expand_basis("L", "R", J.reversed()):
            pairs.append((K, a * b))
    return _collect(pairs)


@lru_cache(maxsize=None)
def partial_basis(basis: str, I: Composition) -> Expansion:
    """Right derivation on a basis element.

    S^{(i_1..i_r)} d = S^{(i_1..i_r - 1)}, a vanishing last part being deleted.
    R_I d = R_{(i_1..i_r - 1)} if i_r > 1, R_() for I = (1), and 0 otherwise.
    """
    if not I.parts:
        return ()
    *head, last = I.parts
    lowered = Composition(tuple(head) + ((last - 1,) if last > 1 else ()))
    if basis == "S":
        return ((lowered, 1),)
    if basis == "R":
        if last > 1 or I.length == 1:
            return ((lowered, 1),)
        return ()
    pairs = []
    for J, a in expand_basis("L", "S", I):
        for K, b in partial_basis("S", J):
            for M, c in expand_basis("S", "L", K):
                pairs.append((M, a * b * c))
    return _collect(pairs)


# -- elements -------------------------------------------------------------

class NsymElement:
    """A finite linear combination of basis elements of Sym."""

    __slots__ = ("basis", "_terms")

    def __init__(self, basis: str, terms: Optional[Mapping[Composition, Coefficient]] = None):
        self.basis = _check_basis(basis)
        clean: Dict[Composition, MultiPoly] = {}
        for I, coeff in (terms or {}).items():
            if not isinstance(I, Composition):
                I = Composition(tuple(I))
            _accumulate(clean, I, _as_poly(coeff))
        self._terms = clean

    @classmethod
    def _make(cls, basis: str, terms: Dict[Composition, MultiPoly]) -> "NsymElement":
        element = object.__new__(cls)
        element.basis = basis
        element._terms = terms
        return element

    @classmethod
    def basis_element(cls, basis: str, parts: Union[Composition, Iterable[int]],
                      coeff: Coefficient = 1) -> "NsymElement":
        I = parts if isinstance(parts, Composition) else Composition(tuple(parts))
        return cls(basis, {I: coeff})

    @classmethod
    def one(cls, basis: str = "S") -> "NsymElement":
        return cls(basis, {EMPTY: 1})

    @classmethod
    def zero(cls, basis: str = "S") -> "NsymElement":
        return cls(basis, {})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Composition, MultiPoly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key)

    def components(self) -> Dict[int, Dict[Composition, MultiPoly]]:
        """Homogeneous components keyed by degree."""
        out: Dict[int, Dict[Composition, MultiPoly]] = {}
        for I, coeff in self._terms.items():
            out.setdefault(I.n, {})[I] = coeff
        return out

    def component(self, n: int) -> "NsymElement":
        return NsymElement._make(self.basis, {I: c for I, c in self._terms.items() if I.n == n})

    def truncated(self, order: int) -> "NsymElement":
        return NsymElement._make(self.basis, {I: c for I, c in self._terms.items() if I.n <= order})

    @property
    def constant_term(self) -> MultiPoly:
        return self._terms.get(EMPTY, MultiPoly.zero())

    @property
    def max_degree(self) -> int:
        return max((I.n for I in self._terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, parts: Union[Composition, Iterable[int]]) -> MultiPoly:
        I = parts if isinstance(parts, Composition) else Composition(tuple(parts))
        return self._terms.get(I, MultiPoly.zero())

    # -- linear structure -------------------------------------------------

    def map_basis(self, fn: Callable[[Composition], Expansion], basis: Optional[str] = None) -> "NsymElement":
        """Apply a linear map given on basis elements."""
        out: Dict[Composition, MultiPoly] = {}
        for I, coeff in self._terms.items():
            for J, c in fn(I):
                _accumulate(out, J, coeff * c)
        return NsymElement._make(basis or self.basis, out)

    def convert(self, target: str) -> "NsymElement":
        return convert(self, target)

    def __add__(self, other: "NsymElement") -> "NsymElement":
        if not isinstance(other, NsymElement):
            return NotImplemented
        other = other.convert(self.basis)
        out = dict(self._terms)
        for I, coeff in other._terms.items():
            _accumulate(out, I, coeff)
        return NsymElement._make(self.basis, out)

    def __neg__(self) -> "NsymElement":
        return NsymElement._make(self.basis, {I: -c for I, c in self._terms.items()})

    def __sub__(self, other: "NsymElement") -> "NsymElement":
        if not isinstance(other, NsymElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "NsymElement":
        if isinstance(other, NsymElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction, MultiPoly)):
            factor = _as_poly(other)
            out = {}
            for I, c in self._terms.items():
                _accumulate(out, I, c * factor)
            return NsymElement._make(self.basis, out)
        return NotImplemented

    def __rmul__(self, other) -> "NsymElement":
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, NsymElement):
            return NotImplemented
        return self._terms == other.convert(self.basis)._terms

    __hash__ = None

    def __str__(self) -> str:
        return render_linear(((f"{self.basis}[{I}]", c) for I, c in self.items()))

    def __repr__(self) -> str:
        return f"NsymElement({self})"

    def to_json(self) -> Dict:
        components = self.components()
        return {
            "basis": self.basis,
            "components": [
                {
                    "degree": n,
                    "terms": {str(I): c.to_json() for I, c in sorted(components[n].items(), key=lambda kv: kv[0].sort_key)},
                }
                for n in sorted(components)
            ],
        }


def render_linear(labelled: Iterable[Tuple[str, MultiPoly]]) -> str:
    """Render sum of coefficient * label pairs, e.g. "R[2,1] + 3/2·R[3]"."""
    pieces: List[str] = []
    for label, coeff in labelled:
        sign = "+"
        if coeff.is_constant:
            value = coeff.constant_term
            if value < 0:
                sign, value = "-", -value
            body = label if value == 1 else f"{value}·{label}"
        else:
            body = f"({coeff})·{label}"
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces) if pieces else "0"


# -- operations -------------------------------------------------------------

def convert(f: NsymElement, target: str) -> NsymElement:
    """Re-express f in the target basis."""
    _check_basis(target)
    if f.basis == target:
        return f
    source = f.basis
    return f.map_basis(lambda I: expand_basis(source, target, I), target)


def multiply(f: NsymElement, g: NsymElement, max_degree: Optional[int] = None) -> NsymElement:
    """Product f * g in the basis of f (g is converted first when needed).

    Args:
        f: left factor
        g: right factor
        max_degree: drop every product term of higher degree

    Returns:
        The product, in f's basis
    """
    basis = f.basis
    g = g.convert(basis)
    out: Dict[Composition, MultiPoly] = {}
    for I, a in f._terms.items():
        for J, b in g._terms.items():
            if max_degree is not None and I.n + J.n > max_degree:
                continue
            ab = a * b
            for K, c in basis_product(basis, I, J):
                _accumulate(out, K, ab * c if c != 1 else ab)
    return NsymElement._make(basis, out)


def omega(f: NsymElement) -> NsymElement:
    """The involutive anti-automorphism with omega(S_n) = Lambda_n, in f's basis."""
    basis = f.basis
    return f.map_basis(lambda I: omega_basis(basis, I))


def partial_right(f: NsymElement) -> NsymElement:
    """Right derivation d, computed in f's own basis."""
    basis = f.basis
    return f.map_basis(lambda I: partial_basis(basis, I))


def complete(n: int) -> NsymElement:
    """S_n."""
    return NsymElement.basis_element("S", (n,) if n else ())


def elementary(n: int) -> NsymElement:
    """Lambda_n."""
    return NsymElement.basis_element("L", (n,) if n else ())


def ribbon(parts: Iterable[int]) -> NsymElement:
    return NsymElement.basis_element("R", tuple(parts))


@dataclass(frozen=True)
class NsymSeries:
    """A series of Sym known up to degree `order`."""

    element: NsymElement
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise DomainError(f"Series order must be nonnegative, got {self.order}")
        object.__setattr__(self, "element", self.element.truncated(self.order))

    @property
    def constant_term(self) -> MultiPoly:
        return self.element.constant_term

    def component(self, n: int) -> NsymElement:
        return self.element.component(n)

    def __mul__(self, other: "NsymSeries") -> "NsymSeries":
        order = min(self.order, other.order)
        return NsymSeries(multiply(self.element, other.element, max_degree=order), order)


def series_invert(f: NsymSeries) -> NsymSeries:
    """Graded inverse: g_0 = 1/f_0 and g_n = -(1/f_0) sum_{k=1..n} f_k g_{n-k}.

    Raises:
        NotInvertibleError: If the constant term is not a unit
    """
    c = f.constant_term
    if c.is_zero or not c.constant_term:
        raise NotInvertibleError(f"Constant term {c} of the series is not a unit")
    c_inv = geometric_inverse(c)
    basis = f.element.basis
    parts = f.element.components()
    inverse: Dict[int, Dict[Composition, MultiPoly]] = {0: {EMPTY: c_inv}}
    for n in range(1, f.order + 1):
        acc: Dict[Composition, MultiPoly] = {}
        for k in range(1, n + 1):
            for I, a in parts.get(k, {}).items():
                for J, b in inverse.get(n - k, {}).items():
                    ab = a * b
                    for K, m in basis_product(basis, I, J):
                        _accumulate(acc, K, ab * m if m != 1 else ab)
        inverse[n] = {K: -(c_inv * v) for K, v in acc.items()}
        logger.debug(f"Inverse component of degree {n} has {len(acc)} terms")
    terms = {I: v for comp in inverse.values() for I, v in comp.items() if not v.is_zero}
    return NsymSeries(NsymElement._make(basis, terms), f.order)


def eulerian_polynomial(n: int) -> NsymElement:
    """Noncommutative Eulerian polynomial A_n(t) = sum over I |= n of t^{l(I)} R_I."""
    return NsymElement("R", {I: MultiPoly.var("t", I.length) for I in compositions(n)})


def eulerian_series(order: int) -> NsymSeries:
    """(1 - t)(1 - t sigma_{1-t})^{-1}, written as (1 - sum_{n>=1} t (1-t)^{n-1} S_n)^{-1}, in the R basis."""
    one_minus_t = 1 - MultiPoly.var("t")
    terms: Dict[Composition, Coefficient] = {EMPTY: 1}
    for n in range(1, order + 1):
        terms[Composition((n,))] = -(MultiPoly.var("t") * one_minus_t ** (n - 1))
    inverse = series_invert(NsymSeries(NsymElement("S", terms), order))
    return NsymSeries(inverse.element.convert("R"), order)


def alternating_series(order: int) -> NsymSeries:
    """(sum (-1)^n S_{2n})^{-1} (1 + sum (-1)^n S_{2n+1}), in the R basis."""
    even: Dict[Composition, int] = {}
    odd: Dict[Composition, int] = {EMPTY: 1}
    for n in range(0, order + 1):
        key = Composition((n,)) if n else EMPTY
        if n % 2 == 0:
            even[key] = (-1) ** (n // 2)
        else:
            odd[key] = (-1) ** (n // 2)
    denominator = series_invert(NsymSeries(NsymElement("S", even), order))
    product = denominator * NsymSeries(NsymElement("S", odd), order)
    return NsymSeries(product.element.convert("R"), order)
