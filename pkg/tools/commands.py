"""Command registrations for the nsym-bessel command line."""

import argparse
import logging
import os
import re
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from config.run_config import RunConfig
from config.settings import ORACLE_LIMITS, POLYOMINO, THETA
from core.bessel import TensorElement, bessel_J, gamma_meet, tensor_invert
from core.compositions import Composition
from core.errors import DomainError, UsageError, VerificationError
from core.nsym import BASES, NsymElement, multiply
from core.polyomino import (
    ROUTES,
    SegmentAlphabet,
    cartier_foata_check,
    enumerate_polyominoes,
    enumeration_series,
    heap_census,
    series_via_bessel,
)
from core.qsym import QBASES, QsymElement, internal_product
from core.scalars import MultiPoly
from core.specialize import (
    FR_SERIES,
    FR_VARIANTS,
    ChainAlphabet,
    csv_a,
    csv_c,
    fr_formula_side,
    fr_statistic_series,
    spec_chain,
    spec_exponential,
    spec_q,
)
from core.theta import (
    ORDER_PRESETS,
    BiAlphabet,
    Relation,
    WordPoly,
    double_eulerian,
    koszul_check,
    pair_eulerian,
    theta_basis,
    theta_eulerian,
    theta_eulerian_ending,
    theta_maj,
    word_string,
)
from utils.formatting import Artifact

# Set up logging
logger = logging.getLogger("commands")

Handler = Callable[[argparse.Namespace, RunConfig], Artifact]
RELATION_NAMES = ORDER_PRESETS + ("segment-overlap", "bessel-product")
THETA_KINDS = ("lambda", "complete", "ribbon", "eulerian", "ending", "maj", "koszul")

_FACTOR = re.compile(r"^([SLR])\[([0-9,\s]*)\]$")
_SCALAR = re.compile(r"^-?\d+(/\d+)?$")


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


class CommandRegistry:
    """Collects sub-commands on an argparse parser together with their handlers."""

    def __init__(self, subparsers):
        self.subparsers = subparsers
        self.handlers: Dict[str, Handler] = {}

    def command(self, name: str, help: str, arguments: Sequence = ()):
        """Register the decorated handler as sub-command `name`.

        Args:
            name: sub-command name
            help: one-line help text
            arguments: (flags, options) pairs passed to add_argument
        """
        def register(handler: Handler) -> Handler:
            parser = self.subparsers.add_parser(name, help=help, description=handler.__doc__)
            for flags, options in arguments:
                parser.add_argument(*flags, **options)
            parser.set_defaults(command=name)
            self.handlers[name] = handler
            return handler

        return register

    def run(self, name: str, args: argparse.Namespace, config: RunConfig) -> Artifact:
        if name not in self.handlers:
            raise UsageError(f"Unknown command {name!r}")
        logger.info(f"Command called: {name}")
        return self.handlers[name](args, config)


# -- parsing helpers --------------------------------------------------------------

def parse_composition(text: str) -> Composition:
    """Composition strings such as "2,1"; malformed input is a usage error."""
    try:
        return Composition.parse(text)
    except DomainError as e:
        raise UsageError(str(e)) from e


def parse_element(text: str) -> NsymElement:
    """Parse a sum of products such as "R[2,1]*S[1] - 2*L[3]".

    Raises:
        UsageError: If a factor is neither a scalar nor B[parts] with B in S, L, R
    """
    source = text.replace(" ", "")
    if not source:
        raise UsageError("Empty Sym expression")
    total: Optional[NsymElement] = None
    for summand in source.replace("-", "+-").split("+"):
        if not summand:
            continue
        negate = summand.startswith("-")
        factors = summand.lstrip("-").split("*")
        scalar = Fraction(-1 if negate else 1)
        product: Optional[NsymElement] = None
        for factor in factors:
            if _SCALAR.match(factor):
                scalar *= Fraction(factor)
                continue
            match = _FACTOR.match(factor)
            if not match:
                raise UsageError(f"Malformed Sym factor {factor!r}; expected e.g. R[2,1]")
            element = NsymElement.basis_element(match.group(1), parse_composition(match.group(2)))
            product = element if product is None else multiply(product, element)
        if product is None:
            product = NsymElement.one()
        term = product * scalar
        total = term if total is None else total + term
    if total is None:
        raise UsageError(f"No terms in Sym expression {text!r}")
    return total


def resolve_relation(name: str, m: int) -> Relation:
    """A preset order, one of the two named product relations, or a JSON matrix file.

    segment-overlap takes m as max_j; bessel-product uses an m x m alphabet.
    """
    if name in ORDER_PRESETS:
        return Relation.preset(name, m)
    if name == "segment-overlap":
        return SegmentAlphabet(m).relation()
    if name == "bessel-product":
        return BiAlphabet(m, m).relation()
    if os.path.isfile(name):
        with open(name, "r", encoding="utf-8") as fh:
            return Relation.from_json(fh.read())
    raise UsageError(f"Unknown relation {name!r}; expected one of {RELATION_NAMES} or a JSON file")


def parse_letters(text: str) -> List[int]:
    try:
        return [int(piece) for piece in text.split(",") if piece.strip()]
    except ValueError as e:
        raise UsageError(f"Malformed letter list: {text!r}") from e


# -- artifact builders --------------------------------------------------------------

def poly_artifact(name: str, value: MultiPoly, extra: Optional[Dict] = None) -> Artifact:
    data = dict(extra or {})
    data[name] = value.to_json()
    rows = [
        {"monomial": monomial, "coefficient": coefficient}
        for monomial, coefficient in value.to_json().items()
    ]
    return Artifact(data, f"{name} = {value}", rows)


def nsym_artifact(f: NsymElement, extra: Optional[Dict] = None) -> Artifact:
    data = dict(extra or {})
    data["element"] = f.to_json()
    rows = [
        {"basis": f.basis, "composition": str(I), "degree": I.n, "coefficient": str(c)}
        for I, c in f.items()
    ]
    return Artifact(data, str(f), rows)


def qsym_artifact(f: QsymElement, extra: Optional[Dict] = None) -> Artifact:
    data = dict(extra or {})
    data["element"] = f.to_json()
    rows = [
        {"basis": f.basis, "composition": str(I), "degree": I.n, "coefficient": str(c)}
        for I, c in f.items()
    ]
    return Artifact(data, str(f), rows)


def tensor_artifact(T: TensorElement, extra: Optional[Dict] = None) -> Artifact:
    data = dict(extra or {})
    data["tensor"] = T.to_json()
    left, right = T.bases
    rows = [
        {"left": f"{left}[{H}]", "right": f"{right}[{K}]", "coefficient": str(c)}
        for (H, K), c in T.items()
    ]
    return Artifact(data, str(T), rows)


def words_artifact(f: WordPoly, extra: Optional[Dict] = None,
                   render: Optional[Callable[[Sequence[int]], Dict]] = None) -> Artifact:
    data = dict(extra or {})
    data["series"] = f.to_json()
    rows = []
    for w, c in f.items():
        row = render(w) if render else {"word": word_string(w)}
        row["coefficient"] = str(c)
        rows.append(row)
    return Artifact(data, str(f), rows)


# -- registrations ----------------------------------------------------------------

def register_commands(registry: CommandRegistry) -> None:
    """Register every sub-command of the tool."""

    @registry.command("expand", "Expand a Sym expression in a target basis", [
        (("expression",), {"help": "Sum of products, e.g. \"R[2]*R[1] - 2*S[3]\""}),
        (("--basis",), {"choices": BASES, "default": "R", "help": "Target basis"}),
    ])
    def expand(args, config):
        """Multiply out a Sym expression and expand it in one basis."""
        f = parse_element(args.expression).convert(args.basis)
        logger.info(f"Expanded {args.expression!r} into {len(f.terms)} {args.basis} terms")
        return nsym_artifact(f, {"expression": args.expression})

    @registry.command("convert", "Change the basis of one Sym or QSym basis element", [
        (("basis",), {"choices": BASES + QBASES, "help": "Source basis"}),
        (("composition",), {"help": "Composition such as 2,1"}),
        (("--to",), {"dest": "target", "required": True, "choices": BASES + QBASES, "help": "Target basis"}),
    ])
    def convert(args, config):
        """Convert S/L/R into S/L/R, or M/F into M/F."""
        I = parse_composition(args.composition)
        if args.basis in QBASES:
            if args.target not in QBASES:
                raise UsageError("QSym elements convert only between M and F")
            return qsym_artifact(QsymElement.basis_element(args.basis, I).convert(args.target))
        if args.target not in BASES:
            raise UsageError("Sym elements convert only between S, L and R")
        return nsym_artifact(NsymElement.basis_element(args.basis, I).convert(args.target))

    @registry.command("internal-product", "Internal product of two fundamental quasi-symmetric functions", [
        (("left",), {"help": "Composition H"}),
        (("right",), {"help": "Composition K"}),
        (("--mode",), {"choices": ("meet", "join"), "default": "meet"}),
        (("--basis",), {"choices": QBASES, "default": "F", "help": "Basis of the result"}),
    ])
    def internal(args, config):
        """F_H ^ F_K = F_{Des(H) & Des(K)} (meet) or F_{Des(H) | Des(K)} (join)."""
        H, K = parse_composition(args.left), parse_composition(args.right)
        if H.n != K.n:
            raise UsageError(f"Internal products need equal degrees, got {H.n} and {K.n}")
        product = internal_product(QsymElement.basis_element("F", H), QsymElement.basis_element("F", K), args.mode)
        return qsym_artifact(product.convert(args.basis), {"mode": args.mode})

    @registry.command("gamma", "Apply the coproduct dual to the meet product", [
        (("basis",), {"choices": BASES}),
        (("composition",), {}),
    ])
    def gamma(args, config):
        """gamma(R_I) as the list of pairs (H, K) with Des(H) & Des(K) = Des(I)."""
        f = NsymElement.basis_element(args.basis, parse_composition(args.composition))
        return tensor_artifact(gamma_meet(f), {"input": str(f)})

    @registry.command("bessel", "Noncommutative Bessel function J_nu(A, B) or its inverse", [
        (("--nu",), {"type": int, "default": 0}),
        (("--order",), {"type": int, "default": None, "help": "Largest B-degree (defaults to --max-n)"}),
        (("--invert",), {"action": "store_true", "help": "Output J_nu^{-1} (nu <= 0)"}),
        (("--bases",), {"default": None, "help": "Output bases as LEFT,RIGHT, e.g. R,R"}),
    ])
    def bessel(args, config):
        """Terms (-1)^m Lambda_{m-nu} (x) S_m up to the chosen order."""
        order = config.max_n if args.order is None else args.order
        series = bessel_J(args.nu, order)
        if args.invert:
            series = tensor_invert(series)
        T = series.element
        if args.bases:
            sides = args.bases.split(",")
            if len(sides) != 2 or any(side not in BASES for side in sides):
                raise UsageError(f"--bases needs two of {BASES}, got {args.bases!r}")
            T = T.convert(*sides)
        return tensor_artifact(T, {"nu": args.nu, "order": order, "inverted": args.invert})

    @registry.command("specialize", "Commutative image of a Sym expression", [
        (("expression",), {}),
        (("--alphabet",), {"choices": ("exponential", "q", "chain"), "default": "exponential"}),
        (("--size",), {"type": int, "default": 3, "help": "Chain length for --alphabet chain"}),
    ])
    def specialize(args, config):
        """S_n -> t^n/n!, S_n -> 1/(q;q)_n, or evaluation on the chain 1 < q < ... < q^(size-1)."""
        f = parse_element(args.expression)
        if args.alphabet == "exponential":
            value = spec_exponential(f, var="t")
        elif args.alphabet == "q":
            value = spec_q(f, config.q_order)
        else:
            value = spec_chain(f, ChainAlphabet(args.size), {"q": config.q_order})
        return poly_artifact("value", value, {"expression": args.expression, "alphabet": args.alphabet})

    @registry.command("csv-table", "Table of the pair counts a_n and c_n")
    def csv_table(args, config):
        """a_n counts pairs with Des(s) in Des(t); c_n adds t(n) = n. Every value is cross-checked."""
        rows = []
        for n in range(config.max_n + 1):
            rows.append({
                "n": n,
                "a_n": csv_a(n, ORACLE_LIMITS["hard_cap"]),
                "c_n": csv_c(n, ORACLE_LIMITS["hard_cap"]) if n >= 1 else None,
            })
        text = "\n".join(f"{row['n']}\t{row['a_n']}\t{'' if row['c_n'] is None else row['c_n']}" for row in rows)
        return Artifact({"rows": rows}, "n\ta_n\tc_n\n" + text, rows)

    @registry.command("theta", "theta-specializations in the word algebra", [
        (("--relation",), {"default": "gt", "help": f"One of {RELATION_NAMES} or a JSON matrix file"}),
        (("--m",), {"type": int, "default": 3, "help": "Alphabet size (max_j for segment-overlap)"}),
        (("--n",), {"type": int, "default": 3, "help": "Word length"}),
        (("--kind",), {"choices": THETA_KINDS, "default": "lambda"}),
        (("--composition",), {"default": None, "help": "Ribbon shape for --kind ribbon"}),
        (("--ending",), {"default": "0", "help": "Ending letters for --kind ending, e.g. 0,2"}),
    ])
    def theta(args, config):
        """Lambda_n, S_n, R_I, the theta-Eulerian and theta-major index series, or the Koszul check."""
        th = resolve_relation(args.relation, args.m)
        if args.n > THETA["max_length"]:
            logger.warning(f"Word length {args.n} exceeds the usual window of {THETA['max_length']}")
        extra = {"relation": th.to_json(), "n": args.n, "kind": args.kind}
        if args.kind in ("lambda", "complete"):
            return words_artifact(theta_basis(args.kind, args.n, th), extra)
        if args.kind == "ribbon":
            if args.composition is None:
                raise UsageError("--kind ribbon needs --composition")
            return words_artifact(theta_basis("ribbon", args.n, th, parse_composition(args.composition)), extra)
        if args.kind == "eulerian":
            return words_artifact(theta_eulerian(args.n, th), extra)
        if args.kind == "ending":
            letters = parse_letters(args.ending)
            extra["ending"] = letters
            return words_artifact(theta_eulerian_ending(args.n, th, letters), extra)
        if args.kind == "maj":
            return words_artifact(theta_maj(args.n, th, config.q_order), extra)
        vanishes = koszul_check(args.n, th)
        extra["vanishes"] = vanishes
        if not vanishes:
            raise VerificationError(f"Alternating convolution does not vanish for {th.name} at n={args.n}")
        return Artifact(extra, f"alternating convolution vanishes: {vanishes}", [{"n": args.n, "vanishes": vanishes}])

    @registry.command("double-euler", "Double theta-Eulerian polynomial over A x B", [
        (("--size-a",), {"type": int, "default": THETA["double_alphabet"]}),
        (("--size-b",), {"type": int, "default": THETA["double_alphabet"]}),
        (("--n",), {"type": int, "default": 3}),
        (("--pairs",), {"action": "store_true", "help": "Sum over pairs of permutations of t^|Des(a) - Des(b)|"}),
    ])
    def double_euler(args, config):
        """Biwords with t^thetaadj, checked against the J_0 ratio and the descent identity."""
        if args.pairs:
            return poly_artifact("pair_polynomial", pair_eulerian(args.n), {"n": args.n})
        alphabet = BiAlphabet(args.size_a, args.size_b)

        def render(w):
            top, bottom = alphabet.rows(w)
            return {"top": word_string(top), "bottom": word_string(bottom)}

        return words_artifact(double_eulerian(args.n, args.size_a, args.size_b),
                              {"size_a": args.size_a, "size_b": args.size_b, "n": args.n}, render)

    @registry.command("fr-series", "Both sides of a Fedou-Rawlings double series", [
        (("--series",), {"choices": FR_SERIES, "default": "first"}),
        (("--variant",), {"choices": FR_VARIANTS, "default": "shifted"}),
        (("--n",), {"type": int, "default": 2}),
        (("--max-i",), {"type": int, "default": 2}),
        (("--max-j",), {"type": int, "default": 2}),
    ])
    def fr_series(args, config):
        """Coefficient of x^i y^j z^n on the Bessel side and the permutation-statistic side."""
        truncation = {"q": config.q_order, "p": config.p_order}
        statistic = fr_statistic_series(args.n, args.max_i, args.max_j, truncation, args.series, args.variant)
        rows = []
        for i in range(args.max_i + 1):
            for j in range(args.max_j + 1):
                formula = fr_formula_side(i, j, args.n, truncation, args.series)
                stat = statistic.coefficient_of(x=i, y=j)
                rows.append({"i": i, "j": j, "formula": str(formula), "statistic": str(stat),
                             "agrees": formula == stat})
        agrees = all(row["agrees"] for row in rows)
        if not agrees:
            logger.warning(f"{args.series} series ({args.variant}) disagrees at n={args.n}")
        data = {"series": args.series, "variant": args.variant, "n": args.n, "agrees": agrees, "coefficients": rows}
        text = "\n".join(f"x^{row['i']} y^{row['j']}: {row['formula']}  [{'ok' if row['agrees'] else 'MISMATCH'}]"
                         for row in rows)
        return Artifact(data, text, rows)

    @registry.command("polyomino", "Parallelogram polyomino series from the heap calculus", [
        (("--max-width",), {"type": int, "default": POLYOMINO["max_width"]}),
        (("--max-area",), {"type": int, "default": POLYOMINO["max_area"]}),
        (("--route",), {"choices": ROUTES, "default": "fast"}),
        (("--list",), {"action": "store_true", "help": "List the enumerated polyominoes instead"}),
    ])
    def polyomino(args, config):
        """Coefficients of x^width y^(height-1) q^area, compared with a direct enumeration."""
        if args.list:
            codes = enumerate_polyominoes(args.max_width, args.max_area)
            rows = [{"top": code.biword()[0], "bottom": code.biword()[1], "width": code.width,
                     "height": code.height, "area": code.area} for code in codes]
            text = "\n\n".join(code.render() for code in codes)
            return Artifact({"polyominoes": [code.to_json() for code in codes]}, text, rows)
        truncation = {"x": args.max_width, "q": args.max_area}
        series = series_via_bessel(truncation, route=args.route)
        enumerated = enumeration_series(args.max_width, args.max_area)
        if series != enumerated:
            raise VerificationError("Polyomino series disagrees with the enumeration",
                                    expected=str(enumerated), actual=str(series))
        rows = []
        for exps, coeff in series.sorted_terms():
            powers = dict(zip(("t", "q", "p", "x", "y", "z"), exps))
            rows.append({"width": powers["x"], "height": powers["y"] + 1 if powers["x"] else 0,
                         "area": powers["q"], "count": int(coeff)})
        rows.sort(key=lambda row: (row["width"], row["area"], row["height"]))
        return Artifact({"truncation": truncation, "route": args.route, "series": series.to_json()}, str(series), rows)

    @registry.command("heaps", "Normal forms of heaps of segments", [
        (("--length",), {"type": int, "default": POLYOMINO["heap_length"]}),
        (("--max-j",), {"type": int, "default": POLYOMINO["heap_max_j"]}),
        (("--cartier-length",), {"type": int, "default": POLYOMINO["cartier_length"]}),
    ])
    def heaps(args, config):
        """Every commutation class holds exactly one word with i_k <= j_{k+1}."""
        rows = []
        for n in range(1, args.length + 1):
            census = heap_census(n, args.max_j)
            rows.append({
                "length": n,
                "classes": census.classes,
                "adjacency_words": census.adjacency_words,
                "bijective": census.bijective,
                "cartier_foata": cartier_foata_check(n, args.max_j) if n <= args.cartier_length else None,
            })
        text = "\n".join(f"length {row['length']}: {row['classes']} classes, {row['adjacency_words']} normal forms"
                         for row in rows)
        return Artifact({"max_j": args.max_j, "lengths": rows}, text, rows)

    @registry.command("verify-all", "Run every identity check and report pass/fail")
    def verify_all(args, config):
        """Fixed-order acceptance checks; the exit status is 1 when any check fails."""
        from tools.verification import run_verification

        report = run_verification(config)
        return Artifact(report.to_json(), report.render(), report.rows())


def build_parser() -> argparse.ArgumentParser:
    """The top-level parser with the global flags and every sub-command."""
    parser = CommandParser(prog="nsym-bessel",
                           description="Noncommutative symmetric functions, Bessel functions and theta-specializations")
    parser.add_argument("--max-n", type=int, default=None, help="Degree bound for the oracles (hard cap 8)")
    parser.add_argument("--q-order", type=int, default=None, help="Truncation order in q")
    parser.add_argument("--p-order", type=int, default=None, help="Truncation order in p")
    parser.add_argument("--seed", type=int, default=None, help="Seed of the run's random generator")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=None)
    parser.add_argument("--out", default=None, help="Write the artifact to this file instead of stdout")
    parser.add_argument("--config", default=None, help="key=value file with defaults for the flags above")
    parser.add_argument("--timings", action="store_true", default=None, help="Include timings in the verify-all report")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    registry = CommandRegistry(subparsers)
    register_commands(registry)
    parser.set_defaults(registry=registry)
    return parser
