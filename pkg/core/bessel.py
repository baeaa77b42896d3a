"""Sym(A) (x) Sym(B), the coproduct gamma_meet, the embedding j and the
noncommutative Bessel functions J_nu(A, B) = sum_m (-1)^m Lambda_{m-nu}(A) S_m(B).

A tensor F (x) G is read as F(A) G(B) for two mutually commuting alphabets.
Each side of a TensorElement carries its own basis tag; products and
conversions act side by side.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from core.compositions import Composition, compositions, conjugate, descent_op
from core.errors import DomainError, NotInvertibleError
from core.nsym import (
    BASES,
    EMPTY,
    Coefficient,
    Expansion,
    NsymElement,
    _accumulate,
    _as_poly,
    basis_product,
    expand_basis,
    omega_basis,
    partial_basis,
)
from core.qsym import QsymElement
from core.scalars import MultiPoly, geometric_inverse

# Set up logging
logger = logging.getLogger("bessel")

Pair = Tuple[Composition, Composition]
GRADINGS = ("right", "left", "total")


class TensorElement:
    """A finite linear combination of tensors X_H (x) Y_K."""

    __slots__ = ("bases", "_terms")

    def __init__(self, terms: Optional[Mapping[Pair, Coefficient]] = None,
                 bases: Tuple[str, str] = ("R", "R")):
        for basis in bases:
            if basis not in BASES:
                raise DomainError(f"Unknown Sym basis {basis!r}")
        self.bases = tuple(bases)
        clean: Dict[Pair, MultiPoly] = {}
        for (H, K), coeff in (terms or {}).items():
            H = H if isinstance(H, Composition) else Composition(tuple(H))
            K = K if isinstance(K, Composition) else Composition(tuple(K))
            _accumulate(clean, (H, K), _as_poly(coeff))
        self._terms = clean

    @classmethod
    def _make(cls, terms: Dict[Pair, MultiPoly], bases: Tuple[str, str]) -> "TensorElement":
        element = object.__new__(cls)
        element.bases = bases
        element._terms = terms
        return element

    @classmethod
    def one(cls, bases: Tuple[str, str] = ("R", "R")) -> "TensorElement":
        return cls({(EMPTY, EMPTY): 1}, bases)

    @classmethod
    def tensor(cls, f: NsymElement, g: NsymElement) -> "TensorElement":
        """f (x) g."""
        out: Dict[Pair, MultiPoly] = {}
        for H, a in f.terms.items():
            for K, b in g.terms.items():
                _accumulate(out, (H, K), a * b)
        return cls._make(out, (f.basis, g.basis))

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Pair, MultiPoly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1].sort_key))

    def components(self) -> Dict[Tuple[int, int], Dict[Pair, MultiPoly]]:
        """Bihomogeneous components keyed by (degree in A, degree in B)."""
        out: Dict[Tuple[int, int], Dict[Pair, MultiPoly]] = {}
        for (H, K), coeff in self._terms.items():
            out.setdefault((H.n, K.n), {})[(H, K)] = coeff
        return out

    def bidegree(self, a: int, b: int) -> "TensorElement":
        return TensorElement._make({k: c for k, c in self._terms.items() if k[0].n == a and k[1].n == b}, self.bases)

    def coefficient(self, H: Union[Composition, Iterable[int]], K: Union[Composition, Iterable[int]]) -> MultiPoly:
        H = H if isinstance(H, Composition) else Composition(tuple(H))
        K = K if isinstance(K, Composition) else Composition(tuple(K))
        return self._terms.get((H, K), MultiPoly.zero())

    @property
    def constant_term(self) -> MultiPoly:
        return self._terms.get((EMPTY, EMPTY), MultiPoly.zero())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def filtered(self, keep: Callable[[Composition, Composition], bool]) -> "TensorElement":
        return TensorElement._make({k: c for k, c in self._terms.items() if keep(*k)}, self.bases)

    # -- linear structure -------------------------------------------------

    def map_sides(self, left: Optional[Callable[[Composition], Expansion]] = None,
                  right: Optional[Callable[[Composition], Expansion]] = None,
                  bases: Optional[Tuple[str, str]] = None) -> "TensorElement":
        """Apply linear maps given on basis elements to either side."""
        identity = lambda I: ((I, 1),)
        left = left or identity
        right = right or identity
        out: Dict[Pair, MultiPoly] = {}
        for (H, K), coeff in self._terms.items():
            for H2, a in left(H):
                for K2, b in right(K):
                    _accumulate(out, (H2, K2), coeff * (a * b))
        return TensorElement._make(out, tuple(bases or self.bases))

    def convert(self, left: Optional[str] = None, right: Optional[str] = None) -> "TensorElement":
        """Re-express one or both sides in another basis."""
        left = left or self.bases[0]
        right = right or self.bases[1]
        if (left, right) == self.bases:
            return self
        src_left, src_right = self.bases
        return self.map_sides(
            None if left == src_left else (lambda I: expand_basis(src_left, left, I)),
            None if right == src_right else (lambda I: expand_basis(src_right, right, I)),
            (left, right),
        )

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        out = dict(self._terms)
        for key, coeff in other.convert(*self.bases)._terms.items():
            _accumulate(out, key, coeff)
        return TensorElement._make(out, self.bases)

    def __neg__(self) -> "TensorElement":
        return TensorElement._make({k: -c for k, c in self._terms.items()}, self.bases)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "TensorElement":
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        if isinstance(other, (int, Fraction, MultiPoly)):
            factor = _as_poly(other)
            out: Dict[Pair, MultiPoly] = {}
            for key, c in self._terms.items():
                _accumulate(out, key, c * factor)
            return TensorElement._make(out, self.bases)
        return NotImplemented

    def __rmul__(self, other) -> "TensorElement":
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self._terms == other.convert(*self.bases)._terms

    __hash__ = None

    def __str__(self) -> str:
        from core.nsym import render_linear

        left, right = self.bases
        return render_linear(((f"{left}[{H}]⊗{right}[{K}]", c) for (H, K), c in self.items()))

    def __repr__(self) -> str:
        return f"TensorElement({self})"

    def to_json(self) -> Dict:
        left, right = self.bases
        return {
            "bases": [left, right],
            "terms": [
                {"left": str(H), "right": str(K), "coefficient": c.to_json()}
                for (H, K), c in self.items()
            ],
        }


def tensor_multiply(f: TensorElement, g: TensorElement, keep: Optional[Callable[[int, int], bool]] = None) -> TensorElement:
    """Product (F (x) G)(F' (x) G') = FF' (x) GG', side by side in f's bases.

    Args:
        f: left factor
        g: right factor (converted to f's bases when needed)
        keep: optional filter on the bidegree of each product term
    """
    left, right = f.bases
    g = g.convert(left, right)
    out: Dict[Pair, MultiPoly] = {}
    for (H1, K1), a in f._terms.items():
        for (H2, K2), b in g._terms.items():
            if keep is not None and not keep(H1.n + H2.n, K1.n + K2.n):
                continue
            ab = a * b
            for H, c in basis_product(left, H1, H2):
                for K, d in basis_product(right, K1, K2):
                    _accumulate(out, (H, K), ab * (c * d) if c * d != 1 else ab)
    return TensorElement._make(out, f.bases)


def _grade(grading: str, H: Composition, K: Composition) -> int:
    if grading == "right":
        return K.n
    if grading == "left":
        return H.n
    return H.n + K.n


@dataclass(frozen=True)
class TensorSeries:
    """A tensor series known up to `order` in the chosen grading.

    The grading is "right" (degree in B, the default used for the Bessel
    series), "left" (degree in A) or "total".
    """

    element: TensorElement
    order: int
    grading: str = "right"

    def __post_init__(self):
        if self.grading not in GRADINGS:
            raise DomainError(f"Unknown grading {self.grading!r}; expected one of {GRADINGS}")
        grading, order = self.grading, self.order
        object.__setattr__(self, "element", self.element.filtered(lambda H, K: _grade(grading, H, K) <= order))

    @property
    def constant_term(self) -> MultiPoly:
        return self.element.constant_term

    def component(self, k: int) -> TensorElement:
        grading = self.grading
        return self.element.filtered(lambda H, K: _grade(grading, H, K) == k)

    def __mul__(self, other: "TensorSeries") -> "TensorSeries":
        if self.grading != other.grading:
            raise DomainError("Cannot multiply tensor series with different gradings")
        order, grading = min(self.order, other.order), self.grading
        if grading == "right":
            keep = lambda a, b: b <= order
        elif grading == "left":
            keep = lambda a, b: a <= order
        else:
            keep = lambda a, b: a + b <= order
        return TensorSeries(tensor_multiply(self.element, other.element, keep), order, grading)


@lru_cache(maxsize=None)
def _pairs_with(op: str, I: Composition) -> Tuple[Pair, ...]:
    n = I.n
    return tuple((H, K) for H in compositions(n) for K in compositions(n) if descent_op(H, K, op) == I)


def gamma_meet(f: NsymElement) -> TensorElement:
    """gamma_meet R_I = sum over Des(H) & Des(K) = Des(I) of R_H (x) R_K, extended linearly."""
    out: Dict[Pair, MultiPoly] = {}
    for I, coeff in f.convert("R").terms.items():
        for pair in _pairs_with("meet", I):
            _accumulate(out, pair, coeff)
    return TensorElement._make(out, ("R", "R"))


def j_embed(f: NsymElement) -> TensorElement:
    """The algebra morphism with Lambda_n -> Lambda_n(A) S_n(B), so Lambda^I -> Lambda^I (x) S^I."""
    out: Dict[Pair, MultiPoly] = {}
    for I, coeff in f.convert("L").terms.items():
        _accumulate(out, (I, I), coeff)
    return TensorElement._make(out, ("L", "S"))


def ribbon_image(K: Composition) -> TensorElement:
    """Sum over Des(I) minus Des(J) = Des(K) of R_I (x) R_J."""
    return TensorElement({pair: 1 for pair in _pairs_with("diff", K)}, ("R", "R"))


def tensor_pairing(T: TensorElement, G: QsymElement, H: QsymElement) -> MultiPoly:
    """<T, G (x) H> with <R_I (x) R_J, F_K (x) F_L> = delta_{I,K} delta_{J,L}."""
    T = T.convert("R", "R")
    G, H = G.convert("F"), H.convert("F")
    total = MultiPoly.zero()
    for (A, B), coeff in T.terms.items():
        g, h = G.coefficient(A), H.coefficient(B)
        if not g.is_zero and not h.is_zero:
            total = total + coeff * g * h
    return total


def bessel_J(nu: int, order: int) -> TensorSeries:
    """J_nu(A, B) = sum_{m >= 0} (-1)^m Lambda_{m-nu}(A) S_m(B), for m <= order.

    The m-th term sits in bidegree (m - nu, m); terms with m - nu < 0 vanish.
    """
    terms: Dict[Pair, int] = {}
    for m in range(max(0, nu), order + 1):
        left = Composition((m - nu,)) if m - nu else EMPTY
        right = Composition((m,)) if m else EMPTY
        terms[(left, right)] = (-1) ** m
    return TensorSeries(TensorElement(terms, ("L", "S")), order, "right")


def alternating_diagonal(order: int, right: str = "L") -> TensorSeries:
    """sum_k (-1)^k Lambda_k (x) Lambda_k (right="L") or Lambda_k (x) S_k (right="S")."""
    terms: Dict[Pair, int] = {}
    for k in range(order + 1):
        key = Composition((k,)) if k else EMPTY
        terms[(key, key)] = (-1) ** k
    return TensorSeries(TensorElement(terms, ("L", right)), order, "right")


def tensor_invert(f: Union[TensorSeries, TensorElement], order: Optional[int] = None,
                  opposite: bool = False) -> TensorSeries:
    """Graded inverse of a tensor series.

    A bare TensorElement is graded by total degree and inverted up to `order`.
    The degree-0 component must be a unit scalar times 1 (x) 1.

    Args:
        f: the series to invert
        order: truncation for a bare TensorElement
        opposite: invert in Sym (x) Sym^op, where B-side factors multiply in reverse order

    Raises:
        NotInvertibleError: If the constant term is not a unit scalar
    """
    if isinstance(f, TensorElement):
        if order is None:
            raise DomainError("An order is required to invert a bare tensor element")
        f = TensorSeries(f, order, "total")
    grading = f.grading
    c = f.constant_term
    if c.is_zero or not c.constant_term:
        raise NotInvertibleError(f"Constant term {c} of the tensor series is not a unit")
    parts: Dict[int, Dict[Pair, MultiPoly]] = {}
    for (H, K), coeff in f.element.terms.items():
        parts.setdefault(_grade(grading, H, K), {})[(H, K)] = coeff
    if set(parts.get(0, {})) != {(EMPTY, EMPTY)}:
        raise NotInvertibleError("Degree-0 component of the tensor series is not a scalar")
    c_inv = geometric_inverse(c)
    left, right = f.element.bases
    inverse: Dict[int, Dict[Pair, MultiPoly]] = {0: {(EMPTY, EMPTY): c_inv}}
    for n in range(1, f.order + 1):
        acc: Dict[Pair, MultiPoly] = {}
        for k in range(1, n + 1):
            for (H1, K1), a in parts.get(k, {}).items():
                for (H2, K2), b in inverse.get(n - k, {}).items():
                    ab = a * b
                    right_product = basis_product(right, K2, K1) if opposite else basis_product(right, K1, K2)
                    for H, x in basis_product(left, H1, H2):
                        for K, y in right_product:
                            _accumulate(acc, (H, K), ab if x * y == 1 else ab * (x * y))
        inverse[n] = {key: -(c_inv * v) for key, v in acc.items()}
        logger.debug(f"Tensor inverse grade {n}: {len(acc)} terms")
    terms = {key: v for comp in inverse.values() for key, v in comp.items() if not v.is_zero}
    return TensorSeries(TensorElement._make(terms, (left, right)), f.order, grading)


def apply_second(f: TensorElement, op: str) -> TensorElement:
    """Apply omega or the right derivation to the B side only."""
    right = f.bases[1]
    if op == "omega":
        return f.map_sides(right=lambda K: omega_basis(right, K))
    if op == "partial":
        return f.map_sides(right=lambda K: partial_basis(right, K))
    raise DomainError(f"Unknown second-factor operation {op!r}; expected 'omega' or 'partial'")


def inversion_formula(n: int) -> TensorElement:
    """Sum over H, K |= n with Des(H) & Des(K) empty of R_H (x) R_K."""
    return TensorElement({(H, K): 1 for H in compositions(n) for K in compositions(n)
                          if not (H.descents & K.descents)}, ("R", "R"))


def twisted_inversion_formula(n: int) -> TensorElement:
    """Sum over H, K |= n with Des(H) & Des(K) empty of R_H (x) R_{K~}."""
    return TensorElement({(H, conjugate(K)): 1 for H in compositions(n) for K in compositions(n)
                          if not (H.descents & K.descents)}, ("R", "R"))


def j0_inverse_formula(order: int) -> TensorElement:
    """Sum over |I| <= order of S^I(A) R_I(B)."""
    return TensorElement({(I, I): 1 for n in range(order + 1) for I in compositions(n)}, ("S", "R"))


def j0_partial_formula(order: int) -> TensorElement:
    """Sum over |I| <= order of S^I(A) (R_I d)(B)."""
    return apply_second(j0_inverse_formula(order), "partial")
