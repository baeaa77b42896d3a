"""Exact rationals and truncated multivariate polynomials in t, q, p, x, y, z.

Every algebra in the package uses MultiPoly as its coefficient ring. A
MultiPoly wraps an element of the sympy ring QQ[t, q, p, x, y, z] together
with its own truncation: a per-variable maximum exponent. Arithmetic goes
through the ``rs_*`` truncated-series routines, so no stored term ever
exceeds a bound.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_mul, rs_series_inversion, rs_trunc
from sympy.polys.rings import PolyElement, ring

from core.errors import DomainError, NotInvertibleError

# Set up logging
logger = logging.getLogger("scalars")

VARIABLES: Tuple[str, ...] = ("t", "q", "p", "x", "y", "z")
RING, *GENERATORS = ring(",".join(VARIABLES), QQ)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_ZERO_EXPONENTS = RING.zero_monom

Exponents = Tuple[int, ...]
Bounds = Tuple[Optional[int], ...]
Scalar = Union[int, Fraction]


def to_qq(value: Scalar):
    """Ground-domain element of QQ for an int or Fraction."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(value) -> Fraction:
    """Fraction for an element of QQ."""
    return Fraction(int(value.numerator), int(value.denominator))


def _bounds_from(truncation: Optional[Mapping[str, int]]) -> Bounds:
    bounds = [None] * len(VARIABLES)
    for name, bound in (truncation or {}).items():
        if name not in _INDEX:
            raise DomainError(f"Unknown variable {name!r}; the universe is {VARIABLES}")
        if bound is not None:
            if bound < 0:
                raise DomainError(f"Truncation order for {name} must be nonnegative, got {bound}")
            bounds[_INDEX[name]] = bound
    return tuple(bounds)


def _meet_bounds(a: Bounds, b: Bounds) -> Bounds:
    if a == b:
        return a
    return tuple(y if x is None else x if y is None else min(x, y) for x, y in zip(a, b))


def _limits(bounds: Bounds) -> List[Tuple[PolyElement, int]]:
    """(generator, precision) pairs in the rs_* convention, precision = bound + 1."""
    return [(GENERATORS[i], b + 1) for i, b in enumerate(bounds) if b is not None]


def _truncated(poly: PolyElement, bounds: Bounds) -> PolyElement:
    for gen, prec in _limits(bounds):
        poly = rs_trunc(poly, gen, prec)
    return poly


def _truncated_product(a: PolyElement, b: PolyElement, bounds: Bounds) -> PolyElement:
    limits = _limits(bounds)
    if not limits:
        return a * b
    (gen, prec), rest = limits[0], limits[1:]
    product = rs_mul(a, b, gen, prec)
    for gen, prec in rest:
        product = rs_trunc(product, gen, prec)
    return product


class MultiPoly:
    """A polynomial in the fixed variables t, q, p, x, y, z with rational coefficients."""

    __slots__ = ("_poly", "_bounds")

    def __init__(self, terms: Optional[Mapping[Exponents, Scalar]] = None,
                 truncation: Optional[Mapping[str, int]] = None):
        """Build a polynomial from an exponent-vector map.

        Args:
            terms: map from 6-tuples of exponents (t, q, p, x, y, z) to coefficients
            truncation: per-variable maximum exponent, absent means untruncated
        """
        bounds = _bounds_from(truncation)
        clean: Dict[Exponents, object] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(VARIABLES) or any(e < 0 for e in exps):
                raise DomainError(f"Bad exponent vector {exps}")
            clean[exps] = clean.get(exps, QQ.zero) + to_qq(coeff)
        self._poly = _truncated(RING.from_dict(clean), bounds)
        self._bounds = bounds

    @classmethod
    def _wrap(cls, poly: PolyElement, bounds: Bounds) -> "MultiPoly":
        element = object.__new__(cls)
        element._poly = poly
        element._bounds = bounds
        return element

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar, truncation: Optional[Mapping[str, int]] = None) -> "MultiPoly":
        return cls({_ZERO_EXPONENTS: value}, truncation)

    @classmethod
    def zero(cls, truncation: Optional[Mapping[str, int]] = None) -> "MultiPoly":
        return cls({}, truncation)

    @classmethod
    def one(cls, truncation: Optional[Mapping[str, int]] = None) -> "MultiPoly":
        return cls.constant(1, truncation)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff: Scalar = 1,
                 truncation: Optional[Mapping[str, int]] = None) -> "MultiPoly":
        exps = [0] * len(VARIABLES)
        for name, power in powers.items():
            if name not in _INDEX:
                raise DomainError(f"Unknown variable {name!r}")
            exps[_INDEX[name]] += power
        return cls({tuple(exps): coeff}, truncation)

    @classmethod
    def var(cls, name: str, power: int = 1, coeff: Scalar = 1,
            truncation: Optional[Mapping[str, int]] = None) -> "MultiPoly":
        return cls.monomial({name: power}, coeff, truncation)

    # -- inspection -----------------------------------------------------

    @property
    def poly(self) -> PolyElement:
        """The underlying element of QQ[t, q, p, x, y, z]."""
        return self._poly

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return {exps: to_fraction(c) for exps, c in self._poly.items()}

    @property
    def truncation(self) -> Dict[str, int]:
        return {name: b for name, b in zip(VARIABLES, self._bounds) if b is not None}

    @property
    def is_zero(self) -> bool:
        return not self._poly

    @property
    def is_constant(self) -> bool:
        return all(e == _ZERO_EXPONENTS for e in self._poly)

    @property
    def constant_term(self) -> Fraction:
        return to_fraction(self._poly.get(_ZERO_EXPONENTS, QQ.zero))

    def coefficient(self, **powers: int) -> Fraction:
        """Coefficient of a single monomial, e.g. f.coefficient(q=2, t=1)."""
        exps = [0] * len(VARIABLES)
        for name, power in powers.items():
            exps[_INDEX[name]] = power
        return to_fraction(self._poly.get(tuple(exps), QQ.zero))

    def coefficient_of(self, **powers: int) -> "MultiPoly":
        """Collect the terms with the given exponents in the named variables.

        The named variables are removed from the result, e.g.
        f.coefficient_of(x=1, y=0) is the polynomial in the remaining variables
        multiplying x^1 y^0.
        """
        fixed = {_INDEX[name]: power for name, power in powers.items()}
        out: Dict[Exponents, object] = {}
        for exps, coeff in self._poly.items():
            if all(exps[i] == power for i, power in fixed.items()):
                key = tuple(0 if i in fixed else e for i, e in enumerate(exps))
                out[key] = out.get(key, QQ.zero) + coeff
        bounds = tuple(None if i in fixed else b for i, b in enumerate(self._bounds))
        return MultiPoly._wrap(RING.from_dict(out), bounds)

    def degree(self, name: str) -> int:
        """Largest exponent of a variable (0 for the zero polynomial)."""
        i = _INDEX[name]
        return max((e[i] for e in self._poly), default=0)

    def truncate(self, **bounds: int) -> "MultiPoly":
        """Tighten the truncation and drop the terms that no longer fit."""
        new = _meet_bounds(self._bounds, _bounds_from(bounds))
        return MultiPoly._wrap(_truncated(self._poly, new), new)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other)
        return None

    def _scaled(self, factor: Fraction) -> "MultiPoly":
        if not factor:
            return MultiPoly._wrap(RING.zero, self._bounds)
        return MultiPoly._wrap(self._poly.mul_ground(to_qq(factor)), self._bounds)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        bounds = _meet_bounds(self._bounds, other._bounds)
        total = self._poly + other._poly
        if bounds != self._bounds or bounds != other._bounds:
            total = _truncated(total, bounds)
        return MultiPoly._wrap(total, bounds)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._wrap(-self._poly, self._bounds)

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self._scaled(Fraction(other))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if other.is_constant:
            return self._scaled(other.constant_term).truncate(**other.truncation)
        if self.is_constant:
            return other._scaled(self.constant_term).truncate(**self.truncation)
        bounds = _meet_bounds(self._bounds, other._bounds)
        return MultiPoly._wrap(_truncated_product(self._poly, other._poly, bounds), bounds)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self._scaled(1 / Fraction(other))
        if isinstance(other, MultiPoly):
            return self * geometric_inverse(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            return geometric_inverse(self) ** (-exponent)
        result = MultiPoly.one(self.truncation)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return dict(self._poly) == dict(other._poly)

    def __hash__(self) -> int:
        return hash(frozenset(self._poly.items()))

    def __bool__(self) -> bool:
        return bool(self._poly)

    # -- rendering ------------------------------------------------------

    def sorted_terms(self) -> Iterable[Tuple[Exponents, Fraction]]:
        """Terms in exponent-lex order over (t, q, p, x, y, z)."""
        return sorted(self.terms.items())

    def __str__(self) -> str:
        if not self._poly:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            mono = monomial_string(exps)
            sign = "-" if coeff < 0 else "+"
            size = abs(coeff)
            if mono == "1":
                body = str(size)
            elif size == 1:
                body = mono
            else:
                body = f"{size}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def to_json(self) -> Dict[str, str]:
        """JSON-ready map from monomial strings to "num/den" coefficients."""
        return {monomial_string(e): f"{c.numerator}/{c.denominator}" for e, c in self.sorted_terms()}


def monomial_string(exps: Exponents) -> str:
    factors = []
    for name, e in zip(VARIABLES, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Ring operation followed by truncation to the pointwise minimum of the bounds."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise DomainError(f"Unknown polynomial operation {op!r}")


def geometric_inverse(f: MultiPoly) -> MultiPoly:
    """Inverse of f up to its truncation.

    When one truncated variable divides every non-constant term, the inverse
    is a single rs_series_inversion in that variable. Otherwise it is the
    geometric series 1/c0 * sum (1 - f/c0)^k with truncated products, which
    terminates because every term of 1 - f/c0 raises some bounded exponent.

    Args:
        f: polynomial with a nonzero constant term

    Returns:
        g with f * g = 1 up to truncation

    Raises:
        NotInvertibleError: If the constant term vanishes, or if the series
            would not terminate because some term involves no truncated variable
    """
    c0 = f.constant_term
    if not c0:
        raise NotInvertibleError(f"Constant term of {f} is zero")
    bounds = f._bounds
    if f.is_constant:
        return MultiPoly.constant(1 / c0, f.truncation)
    bounded = [i for i, b in enumerate(bounds) if b is not None]
    moving = [exps for exps in f._poly if exps != _ZERO_EXPONENTS]
    for exps in moving:
        if not any(exps[i] for i in bounded):
            raise NotInvertibleError(f"Cannot invert {f}: term {monomial_string(exps)} has no truncated variable")
    for i in bounded:
        if all(exps[i] for exps in moving):
            inverse = rs_series_inversion(f._poly, GENERATORS[i], bounds[i] + 1)
            logger.debug(f"Inverted {len(moving) + 1} terms in {VARIABLES[i]} up to order {bounds[i]}")
            return MultiPoly._wrap(_truncated(inverse, bounds), bounds)
    h = (MultiPoly.one(f.truncation) - f / c0)._poly
    result = RING.one
    power = RING.one
    steps = 0
    while True:
        power = _truncated_product(power, h, bounds)
        if not power:
            break
        result = result + power
        steps += 1
    logger.debug(f"Geometric inverse converged after {steps} steps")
    return MultiPoly._wrap(_truncated(result, bounds), bounds) / c0


def q_integer(i: int, var: str = "q", truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    """[i]_var = 1 + var + ... + var^(i-1)."""
    return MultiPoly({tuple(k if name == var else 0 for name in VARIABLES): 1 for k in range(i)}, truncation)


def pochhammer(a: MultiPoly, var: str, n: int) -> MultiPoly:
    """(a; var)_n = (1 - a)(1 - a var) ... (1 - a var^(n-1))."""
    result = MultiPoly.one(a.truncation)
    for k in range(n):
        result = result * (1 - a * MultiPoly.var(var, k, truncation=a.truncation))
    return result
