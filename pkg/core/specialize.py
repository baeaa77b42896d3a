"""Scalar specializations of Sym, QSym-dual pairs and Sym (x) Sym.

Three alphabets are supported:

    exponential   S_n -> var^n / n!            (the alphabet E)
    q-alphabet    S_n -> 1 / (q; q)_n           (the alphabet 1/(1-q))
    chains        letters 1, q, ..., q^(m-1)    (finite ordered alphabets)

On top of them sit the classical Bessel series, the pair-of-permutation
oracles for the two CSV counts and the two Fedou-Rawlings double series.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from core.bessel import TensorElement, apply_second, bessel_J, tensor_invert, tensor_multiply
from core.compositions import (
    BRUTE_FORCE_CAP,
    Composition,
    compositions,
    permutations,
    ribbon_number_formula,
)
from core.errors import BoundError, DomainError, UnderflowError, VerificationError
from core.nsym import NsymElement, alternating_series, eulerian_polynomial, expand_basis
from core.scalars import VARIABLES, MultiPoly, geometric_inverse, pochhammer

# Set up logging
logger = logging.getLogger("specialize")

Specializer = Callable[[str, Composition], MultiPoly]
FR_SERIES = ("first", "second")
FR_VARIANTS = ("shifted", "printed")


def _truncation_key(truncation: Optional[Mapping[str, int]]) -> Tuple[Tuple[str, int], ...]:
    return tuple(sorted((truncation or {}).items()))


@dataclass(frozen=True)
class ChainAlphabet:
    """The finite chain 1 < var < var^2 < ... < var^(m-1), optionally scaled by a second variable."""

    m: int
    var: str = "q"
    scale: Optional[str] = None

    def __post_init__(self):
        if self.m < 0:
            raise DomainError(f"Chain size must be nonnegative, got {self.m}")
        for name in (self.var, self.scale):
            if name is not None and name not in VARIABLES:
                raise DomainError(f"Unknown variable {name!r}")

    def values(self, truncation: Optional[Mapping[str, int]] = None) -> List[MultiPoly]:
        powers = [{self.var: k} for k in range(self.m)]
        if self.scale:
            for power in powers:
                power[self.scale] = power.get(self.scale, 0) + 1
        return [MultiPoly.monomial(power, 1, truncation) for power in powers]

    def greatest(self, truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
        if not self.m:
            raise DomainError("The empty chain has no greatest letter")
        return self.values(truncation)[-1]


# -- per-basis-element values ----------------------------------------------

def _graded(value: MultiPoly, var: Optional[str], degree: int,
            truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    if var is None or degree == 0:
        return value
    return value * MultiPoly.var(var, degree, truncation=truncation)


def exponential_value(basis: str, I: Composition, var: Optional[str] = None,
                      truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    """Image of one basis element under S_n -> var^n / n! (var=None gives the scalar)."""
    if basis in ("S", "L"):
        denominator = 1
        for part in I.parts:
            denominator *= math.factorial(part)
        value = Fraction(1, denominator)
    elif basis == "R":
        value = Fraction(ribbon_number_formula(I), math.factorial(I.n))
    else:
        raise DomainError(f"Unknown Sym basis {basis!r}")
    return _graded(MultiPoly.constant(value, truncation), var, I.n, truncation)


@lru_cache(maxsize=None)
def _inverse_q_pochhammer(n: int, qtrunc: int, var: str) -> MultiPoly:
    truncation = {var: qtrunc}
    return geometric_inverse(pochhammer(MultiPoly.var(var, truncation=truncation), var, n))


@lru_cache(maxsize=None)
def q_value(basis: str, I: Composition, qtrunc: int, var: str = "q") -> MultiPoly:
    """Image of one basis element under S_n -> 1/(q;q)_n, truncated at var^qtrunc.

    Lambda_n goes to q^(n(n-1)/2) / (q;q)_n; ribbons are evaluated through
    their S expansion.
    """
    truncation = {var: qtrunc}
    if basis == "S":
        value = MultiPoly.one(truncation)
        for part in I.parts:
            value = value * _inverse_q_pochhammer(part, qtrunc, var)
        return value
    if basis == "L":
        value = MultiPoly.one(truncation)
        for part in I.parts:
            value = value * _inverse_q_pochhammer(part, qtrunc, var)
            value = value * MultiPoly.var(var, part * (part - 1) // 2, truncation=truncation)
        return value
    total = MultiPoly.zero(truncation)
    for J, c in expand_basis(basis, "S", I):
        total = total + q_value("S", J, qtrunc, var) * c
    return total


def _complete_on(values: List[MultiPoly], k: int) -> MultiPoly:
    # h_k: weakly increasing words of length k
    if k == 0:
        return MultiPoly.one()
    ending = [MultiPoly.zero() for _ in values]
    ending_prev = list(values)
    for _ in range(k - 1):
        running = MultiPoly.zero()
        for a, value in enumerate(values):
            running = running + ending_prev[a]
            ending[a] = running * value
        ending_prev, ending = ending, [MultiPoly.zero() for _ in values]
    return sum(ending_prev, MultiPoly.zero())


def _elementary_on(values: List[MultiPoly], k: int) -> MultiPoly:
    # e_k: strictly decreasing words of length k
    e = [MultiPoly.one()] + [MultiPoly.zero()] * k
    for value in values:
        for r in range(k, 0, -1):
            e[r] = e[r] + e[r - 1] * value
    return e[k]


def _ribbon_on(values: List[MultiPoly], I: Composition) -> MultiPoly:
    # Words whose strict descent set is exactly Des(I)
    n = I.n
    if n == 0:
        return MultiPoly.one()
    descents = I.descents
    current = list(values)
    for position in range(1, n):
        nxt = [MultiPoly.zero() for _ in values]
        if position in descents:
            running = MultiPoly.zero()
            for b in range(len(values) - 1, -1, -1):
                nxt[b] = running * values[b]
                running = running + current[b]
        else:
            running = MultiPoly.zero()
            for b in range(len(values)):
                running = running + current[b]
                nxt[b] = running * values[b]
        current = nxt
    return sum(current, MultiPoly.zero())


@lru_cache(maxsize=None)
def _chain_value(basis: str, I: Composition, alphabet: ChainAlphabet,
                 truncation: Tuple[Tuple[str, int], ...]) -> MultiPoly:
    values = alphabet.values(dict(truncation))
    if basis == "S":
        value = MultiPoly.one(dict(truncation))
        for part in I.parts:
            value = value * _complete_on(values, part)
        return value
    if basis == "L":
        value = MultiPoly.one(dict(truncation))
        for part in I.parts:
            value = value * _elementary_on(values, part)
        return value
    return _ribbon_on(values, I)


def chain_value(basis: str, I: Composition, alphabet: ChainAlphabet,
                truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    """Commutative image of one basis element on a chain alphabet.

    S^I is a product of complete sums (weakly increasing words), Lambda^I a
    product of elementary sums (strictly decreasing words) and R_I the sum
    over words whose strict descent set is exactly Des(I).
    """
    if basis not in ("S", "L", "R"):
        raise DomainError(f"Unknown Sym basis {basis!r}")
    return _chain_value(basis, I, alphabet, _truncation_key(truncation))


# -- element-level specializations --------------------------------------------

def _specialize(f: NsymElement, value: Specializer) -> MultiPoly:
    total = MultiPoly.zero()
    for I, coeff in f.terms.items():
        total = total + coeff * value(f.basis, I)
    return total


def spec_exponential(f: NsymElement, var: Optional[str] = "t",
                     truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    """Algebra morphism S_n -> var^n / n!; ribbons go to beta_I var^n / n!."""
    return _specialize(f, partial(exponential_value, var=var, truncation=truncation))


def spec_q(f: NsymElement, qtrunc: int, var: str = "q") -> MultiPoly:
    """Algebra morphism S_n -> 1/(q;q)_n, as a series truncated at var^qtrunc."""
    return _specialize(f, partial(q_value, qtrunc=qtrunc, var=var))


def spec_chain(f: NsymElement, alphabet: ChainAlphabet,
               truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    """Evaluate f on a chain alphabet, in f's own basis."""
    return _specialize(f, partial(chain_value, alphabet=alphabet, truncation=truncation))


def specialize_tensor(T: TensorElement, left: Specializer, right: Specializer) -> MultiPoly:
    """Specialize both sides of a tensor: sum of c * left(H) * right(K)."""
    left_basis, right_basis = T.bases
    total = MultiPoly.zero()
    for (H, K), coeff in T.terms.items():
        total = total + coeff * left(left_basis, H) * right(right_basis, K)
    return total


# -- Bessel series ------------------------------------------------------------

def classical_bessel(nu: int, order: int, var: str = "x", via: str = "series") -> MultiPoly:
    """J_nu(2x) = sum_m (-1)^m x^(2m+nu) / (m! (m+nu)!) up to x^order.

    Args:
        nu: nonnegative integer index
        order: largest power of var kept
        var: the variable standing for x
        via: "series" for the Taylor coefficients, "tensor" for the
            specialization A = B = xE of J_{-nu}(A, B)

    Raises:
        DomainError: If nu is negative or via is unknown
    """
    if nu < 0:
        raise DomainError(f"Bessel index must be nonnegative, got {nu}")
    truncation = {var: order}
    if via == "series":
        terms: Dict[Tuple[int, ...], Fraction] = {}
        m = 0
        while 2 * m + nu <= order:
            exps = tuple(2 * m + nu if name == var else 0 for name in VARIABLES)
            terms[exps] = Fraction((-1) ** m, math.factorial(m) * math.factorial(m + nu))
            m += 1
        return MultiPoly(terms, truncation)
    if via == "tensor":
        exp_side = partial(exponential_value, var=var, truncation=truncation)
        return specialize_tensor(bessel_J(-nu, order).element, exp_side, exp_side)
    raise DomainError(f"Unknown Bessel route {via!r}")


def q_bessel(nu: int, xtrunc: int, qtrunc: int) -> MultiPoly:
    """J_nu(A, B) at A = x/(1-q) and B = xE.

    The m-th term becomes (-1)^m x^(2m-nu) q^binom(m-nu, 2) / ((q;q)_{m-nu} m!).
    """
    truncation = {"x": xtrunc, "q": qtrunc}

    def left(basis: str, H: Composition) -> MultiPoly:
        return _graded(q_value(basis, H, qtrunc), "x", H.n, truncation)

    right = partial(exponential_value, var="x", truncation=truncation)
    return specialize_tensor(bessel_J(nu, xtrunc).element, left, right)


# -- permutation-pair oracles -------------------------------------------------

def _check_oracle(n: int, limit: int) -> None:
    cap = min(limit, BRUTE_FORCE_CAP)
    if n < 0 or n > cap:
        raise BoundError(f"Degree {n} outside the oracle window 0..{cap}")


def _descent_mask(word) -> int:
    return sum(1 << (i - 1) for i in range(1, len(word)) if word[i - 1] > word[i])


def _all_descent_masks(n: int, last_fixed: bool = False) -> List[int]:
    return [_descent_mask(s.images) for s in permutations(n) if not last_fixed or s.images[-1] == n]


def _factorial_exponential(var: str, truncation: Mapping[str, int]) -> Specializer:
    return partial(exponential_value, var=var, truncation=truncation)


@lru_cache(maxsize=None)
def _j0_inverse(order: int) -> TensorElement:
    return tensor_invert(bessel_J(0, order)).element


def csv_a_counts(n: int, limit: int = BRUTE_FORCE_CAP) -> Dict[str, int]:
    """a_n = #{(s, t) in S_n x S_n : Des(s) contained in Des(t)}, three ways.

    Returns:
        {"brute_force": ..., "descent_classes": ..., "series": ...}
    """
    _check_oracle(n, limit)
    masks = _all_descent_masks(n)
    brute = sum(1 for a in masks for b in masks if not a & ~b)

    classes = 0
    for D in compositions(n):
        for E in compositions(n):
            if D.descents <= E.descents:
                classes += ribbon_number_formula(D) * ribbon_number_formula(E)

    # 1/J_0(2 sqrt t) with J_0 specialized term by term to (-1)^m t^m / m!^2
    truncation = {"t": n}
    j0 = specialize_tensor(bessel_J(0, n).element,
                           partial(exponential_value, var=None, truncation=truncation),
                           _factorial_exponential("t", truncation))
    series = geometric_inverse(j0).coefficient(t=n) * math.factorial(n) ** 2
    if series.denominator != 1:
        raise VerificationError(f"Non-integral series coefficient for a_{n}", actual=series)
    return {"brute_force": brute, "descent_classes": classes, "series": int(series)}


def csv_a(n: int, limit: int = BRUTE_FORCE_CAP) -> int:
    """a_n, with the three computations required to agree.

    Raises:
        BoundError: If n lies outside the oracle window
        VerificationError: If the three counts disagree
    """
    counts = csv_a_counts(n, limit)
    if len(set(counts.values())) != 1:
        logger.error(f"a_{n} disagrees across methods: {counts}")
        raise VerificationError(f"a_{n} disagrees across methods", expected=counts["brute_force"], actual=counts)
    return counts["brute_force"]


def csv_c_counts(n: int, limit: int = BRUTE_FORCE_CAP) -> Dict[str, int]:
    """c_n = #{(a, b) : Des(a) contained in Des(b), b(n) = n}, three ways.

    The two series routes read c_n off (n-1)! n! [x^(2n-1)] of the
    specialization A = B = xE of J_0^{-1} J_{-1}: once as the right
    derivation of J_0^{-1} on the B side, once as the explicit product.
    """
    if n < 1:
        raise DomainError(f"c_n is defined for n >= 1, got {n}")
    _check_oracle(n, limit)
    all_masks = _all_descent_masks(n)
    fixed = _all_descent_masks(n, last_fixed=True)
    brute = sum(1 for a in all_masks for b in fixed if not a & ~b)

    truncation = {"x": 2 * n - 1}
    exp_side = _factorial_exponential("x", truncation)
    scale = math.factorial(n - 1) * math.factorial(n)

    j0_inverse = _j0_inverse(n)
    derived = apply_second(j0_inverse, "partial")
    via_partial = specialize_tensor(derived, exp_side, exp_side).coefficient(x=2 * n - 1) * scale

    product = tensor_multiply(j0_inverse, bessel_J(-1, n).element, keep=lambda a, b: b <= n and a + b <= 2 * n - 1)
    via_product = specialize_tensor(product, exp_side, exp_side).coefficient(x=2 * n - 1) * scale

    for value in (via_partial, via_product):
        if value.denominator != 1:
            raise VerificationError(f"Non-integral series coefficient for c_{n}", actual=value)
    return {"brute_force": brute, "partial": int(via_partial), "product": int(via_product)}


def csv_c(n: int, limit: int = BRUTE_FORCE_CAP) -> int:
    """c_n, with brute force and both series routes required to agree."""
    counts = csv_c_counts(n, limit)
    if len(set(counts.values())) != 1:
        logger.error(f"c_{n} disagrees across methods: {counts}")
        raise VerificationError(f"c_{n} disagrees across methods", expected=counts["brute_force"], actual=counts)
    return counts["brute_force"]


def alternating_numbers(order: int) -> List[int]:
    """Euler numbers E_0..E_order (secant and tangent numbers) from the alternating series."""
    series = alternating_series(order)
    return [
        int(spec_exponential(series.component(n), var=None).constant_term * math.factorial(n))
        for n in range(order + 1)
    ]


def eulerian_numbers(n: int) -> MultiPoly:
    """n! times the exponential image of A_n(t): sum over S_n of t^(des + 1) (t^0 for n = 0)."""
    return spec_exponential(eulerian_polynomial(n), var=None) * math.factorial(n)


# -- Fedou-Rawlings double series ---------------------------------------------

def _chain_pair(i: int, j: int) -> Tuple[ChainAlphabet, ChainAlphabet]:
    return ChainAlphabet(i + 1, "q"), ChainAlphabet(j + 1, "p")


def _check_truncation(n: int, truncation: Mapping[str, int]) -> None:
    t_order = truncation.get("t")
    if t_order is not None and t_order < n - 1:
        raise UnderflowError(f"t-truncation {t_order} cannot hold desris up to {n - 1}")
    for name in ("x", "y", "z"):
        if name in truncation:
            raise DomainError(f"Variable {name} is reserved by the series assembly and cannot be truncated")


def fr_formula_side(i: int, j: int, n: int, truncation: Optional[Mapping[str, int]] = None,
                    series: str = "first") -> MultiPoly:
    """Coefficient of z^n in the chain specialization A_i = [i+1]_q, B_j = [j+1]_p.

    The first series is (1-t)/(J_0((1-t)z) - t) = (1 - F)^{-1} with
    F = sum_{m>=1} (t-1)^(m-1) z^m Lambda_m(A_i) S_m(B_j). The second is
    (1 - F)^{-1} (F d) p^j, the right derivation acting on the B side.
    """
    truncation = dict(truncation or {})
    _check_truncation(n, truncation)
    if series not in FR_SERIES:
        raise DomainError(f"Unknown Fedou-Rawlings series {series!r}")
    A, B = _chain_pair(i, j)
    inner = dict(truncation, z=n)
    t_minus_one = MultiPoly.var("t", truncation=inner) - 1
    F = MultiPoly.zero(inner)
    F_partial = MultiPoly.zero(inner)
    for m in range(1, n + 1):
        weight = t_minus_one ** (m - 1) * MultiPoly.var("z", m, truncation=inner)
        lam = chain_value("L", Composition((m,)), A, truncation)
        F = F + weight * lam * chain_value("S", Composition((m,)), B, truncation)
        lowered = Composition((m - 1,)) if m > 1 else Composition(())
        F_partial = F_partial + weight * lam * chain_value("S", lowered, B, truncation)
    inverse = geometric_inverse(1 - F)
    if series == "first":
        result = inverse
    else:
        result = inverse * F_partial * B.greatest(inner)
    return result.coefficient_of(z=n)


@lru_cache(maxsize=None)
def _pair_statistics(n: int, last_fixed: bool) -> Dict[Tuple[int, int, int], int]:
    # (descent mask, des of the inverse, coimaj) -> multiplicity
    stats: Dict[Tuple[int, int, int], int] = {}
    for sigma in permutations(n):
        if last_fixed and (not n or sigma.images[-1] != n):
            continue
        inverse_descents = sigma.inverse().descents
        key = (_descent_mask(sigma.images), len(inverse_descents), sum(n - d for d in inverse_descents))
        stats[key] = stats.get(key, 0) + 1
    return stats


def fr_statistic_numerator(n: int, series: str = "first",
                           truncation: Optional[Mapping[str, int]] = None) -> MultiPoly:
    """Sum over pairs (a, b) of t^desris x^des(a^-1) y^des(b^-1) q^coimaj(a) p^coimaj(b).

    For the second series b ranges over permutations with b(n) = n.
    """
    if series not in FR_SERIES:
        raise DomainError(f"Unknown Fedou-Rawlings series {series!r}")
    left = _pair_statistics(n, False)
    right = _pair_statistics(n, series == "second")
    terms: Dict[Tuple[int, ...], int] = {}
    for (mask_a, des_a, coimaj_a), count_a in left.items():
        for (mask_b, des_b, coimaj_b), count_b in right.items():
            desris = bin(mask_a & ~mask_b).count("1")
            exps = (desris, coimaj_a, coimaj_b, des_a, des_b, 0)
            terms[exps] = terms.get(exps, 0) + count_a * count_b
    return MultiPoly(terms, truncation)


def fr_statistic_series(n: int, max_i: int, max_j: int, truncation: Optional[Mapping[str, int]] = None,
                        series: str = "first", variant: str = "shifted") -> MultiPoly:
    """The z^n coefficient of the statistic side, expanded in x and y up to x^max_i y^max_j.

    Denominators: (x;q)_{n+1} (y;p)_{n+1} for the first series; for the
    second (x;q)_{n+1} (yp;p)_n ("shifted") or (x;q)_{n+1} (y;p)_n ("printed").
    """
    truncation = dict(truncation or {})
    _check_truncation(n, truncation)
    if variant not in FR_VARIANTS:
        raise DomainError(f"Unknown Pochhammer variant {variant!r}")
    window = dict(truncation, x=max_i, y=max_j)
    x = MultiPoly.var("x", truncation=window)
    y = MultiPoly.var("y", truncation=window)
    denominator = pochhammer(x, "q", n + 1)
    if series == "first":
        denominator = denominator * pochhammer(y, "p", n + 1)
    elif variant == "shifted":
        denominator = denominator * pochhammer(y * MultiPoly.var("p", truncation=window), "p", n)
    else:
        denominator = denominator * pochhammer(y, "p", n)
    return fr_statistic_numerator(n, series, window) * geometric_inverse(denominator)


def fr_series_side(side: str, i: int, j: int, n: int, truncation: Optional[Mapping[str, int]] = None,
                   series: str = "first", variant: str = "shifted") -> MultiPoly:
    """One side of a Fedou-Rawlings identity at chain indices (i, j) and degree n.

    Args:
        side: "formula" (Bessel ratio on chains) or "statistic" (permutation pairs)
        i: size index of A_i = [i+1]_q
        j: size index of B_j = [j+1]_p
        n: power of z
        truncation: optional orders for t, q, p
        series: "first" or "second" (the b(n) = n companion)
        variant: Pochhammer variant for the second series

    Returns:
        The coefficient of x^i y^j z^n, a polynomial in t, q, p

    Raises:
        UnderflowError: If the t-truncation cannot hold every desris value
    """
    if side == "formula":
        return fr_formula_side(i, j, n, truncation, series)
    if side == "statistic":
        return fr_statistic_series(n, i, j, truncation, series, variant).coefficient_of(x=i, y=j)
    raise DomainError(f"Unknown side {side!r}; expected 'formula' or 'statistic'")


@dataclass
class FrComparison:
    """Outcome of comparing both sides of a Fedou-Rawlings series on a window."""

    series: str
    variant: str
    n: int
    mismatches: List[Tuple[int, int]]

    @property
    def agrees(self) -> bool:
        return not self.mismatches


def fr_compare(n: int, max_i: int, max_j: int, truncation: Optional[Mapping[str, int]] = None,
               series: str = "first", variant: str = "shifted") -> FrComparison:
    """Compare the two sides for every (i, j) in the window."""
    statistic = fr_statistic_series(n, max_i, max_j, truncation, series, variant)
    mismatches = []
    for i in range(max_i + 1):
        for j in range(max_j + 1):
            formula = fr_formula_side(i, j, n, truncation, series)
            if formula != statistic.coefficient_of(x=i, y=j):
                mismatches.append((i, j))
    if mismatches:
        logger.warning(f"Fedou-Rawlings {series} series ({variant}) disagrees at n={n} on {mismatches}")
    return FrComparison(series, variant, n, mismatches)
