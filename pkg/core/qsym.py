"""Quasi-symmetric functions in the monomial (M) and fundamental (F) bases.

QSym is the graded dual of Sym: <S^I, M_J> = delta_{I,J} = <R_I, F_J>.
The two internal products act on fundamental indices through descent sets
(intersection for the meet product, union for the join product).
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Union

from core.compositions import Composition, compositions, descent_op
from core.errors import DomainError
from core.nsym import NsymElement, _accumulate, _as_poly, _collect, Coefficient, Expansion, render_linear
from core.scalars import MultiPoly

# Set up logging
logger = logging.getLogger("qsym")

QBASES = ("M", "F")


@lru_cache(maxsize=None)
def expand_qbasis(source: str, target: str, I: Composition) -> Expansion:
    """F_I = sum over Des(J) containing Des(I) of M_J, and its Moebius inverse."""
    if source not in QBASES or target not in QBASES:
        raise DomainError(f"Unknown QSym basis pair {source!r} -> {target!r}")
    if source == target:
        return ((I, 1),)
    finer = [J for J in compositions(I.n) if J.descents >= I.descents]
    if source == "F":
        return _collect((J, 1) for J in finer)
    size = len(I.descents)
    return _collect((J, (-1) ** (len(J.descents) - size)) for J in finer)


class QsymElement:
    """A finite linear combination of M or F basis elements."""

    __slots__ = ("basis", "_terms")

    def __init__(self, basis: str, terms: Optional[Mapping[Composition, Coefficient]] = None):
        if basis not in QBASES:
            raise DomainError(f"Unknown QSym basis {basis!r}; expected one of {QBASES}")
        self.basis = basis
        clean: Dict[Composition, MultiPoly] = {}
        for I, coeff in (terms or {}).items():
            if not isinstance(I, Composition):
                I = Composition(tuple(I))
            _accumulate(clean, I, _as_poly(coeff))
        self._terms = clean

    @classmethod
    def basis_element(cls, basis: str, parts: Union[Composition, Iterable[int]],
                      coeff: Coefficient = 1) -> "QsymElement":
        I = parts if isinstance(parts, Composition) else Composition(tuple(parts))
        return cls(basis, {I: coeff})

    @property
    def terms(self) -> Dict[Composition, MultiPoly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key)

    def components(self) -> Dict[int, Dict[Composition, MultiPoly]]:
        out: Dict[int, Dict[Composition, MultiPoly]] = {}
        for I, coeff in self._terms.items():
            out.setdefault(I.n, {})[I] = coeff
        return out

    def coefficient(self, parts: Union[Composition, Iterable[int]]) -> MultiPoly:
        I = parts if isinstance(parts, Composition) else Composition(tuple(parts))
        return self._terms.get(I, MultiPoly.zero())

    def convert(self, target: str) -> "QsymElement":
        return convert_q(self, target)

    def __add__(self, other: "QsymElement") -> "QsymElement":
        if not isinstance(other, QsymElement):
            return NotImplemented
        out = dict(self._terms)
        for I, coeff in other.convert(self.basis)._terms.items():
            _accumulate(out, I, coeff)
        return QsymElement(self.basis, out)

    def __neg__(self) -> "QsymElement":
        return QsymElement(self.basis, {I: -c for I, c in self._terms.items()})

    def __sub__(self, other: "QsymElement") -> "QsymElement":
        return self + (-other)

    def __mul__(self, other) -> "QsymElement":
        if isinstance(other, (int, Fraction, MultiPoly)):
            return QsymElement(self.basis, {I: c * other for I, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, QsymElement):
            return NotImplemented
        return self._terms == other.convert(self.basis)._terms

    __hash__ = None

    def __str__(self) -> str:
        return render_linear(((f"{self.basis}[{I}]", c) for I, c in self.items()))

    def __repr__(self) -> str:
        return f"QsymElement({self})"

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


def convert_q(f: QsymElement, target: str) -> QsymElement:
    """Basis change between M and F by the refinement-order triangular matrices."""
    if target not in QBASES:
        raise DomainError(f"Unknown QSym basis {target!r}")
    if f.basis == target:
        return f
    out: Dict[Composition, MultiPoly] = {}
    for I, coeff in f._terms.items():
        for J, c in expand_qbasis(f.basis, target, I):
            _accumulate(out, J, coeff * c)
    return QsymElement(target, out)


def internal_product(f: QsymElement, g: QsymElement, mode: str = "meet") -> QsymElement:
    """Internal product: F_H ^ F_K = F_{H meet K}, F_H v F_K = F_{H join K}.

    Components of different degrees multiply to zero. The result is returned
    in the basis of f.

    Raises:
        DomainError: If mode is neither "meet" nor "join"
    """
    if mode not in ("meet", "join"):
        raise DomainError(f"Unknown internal product mode {mode!r}")
    left, right = f.convert("F"), g.convert("F")
    out: Dict[Composition, MultiPoly] = {}
    for H, a in left._terms.items():
        for K, b in right._terms.items():
            if H.n != K.n:
                continue
            _accumulate(out, descent_op(H, K, mode), a * b)
    return QsymElement("F", out).convert(f.basis)


def concat_product(f: QsymElement, g: QsymElement) -> QsymElement:
    """The 0-convolution pulled back to QSym: F_I (.)0 F_J = F_{I.J}."""
    left, right = f.convert("F"), g.convert("F")
    out: Dict[Composition, MultiPoly] = {}
    for I, a in left._terms.items():
        for J, b in right._terms.items():
            _accumulate(out, I.concat(J), a * b)
    return QsymElement("F", out)


def pairing(f: NsymElement, g: QsymElement) -> MultiPoly:
    """Duality pairing with <R_I, F_J> = delta_{I,J}."""
    left = f.convert("R")
    right = g.convert("F")
    total = MultiPoly.zero()
    for I, a in left.terms.items():
        b = right.coefficient(I)
        if not b.is_zero:
            total = total + a * b
    return total
