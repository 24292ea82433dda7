"""
Closed-form bounds on minimum dynamo / monotone dynamo / stable / immortal sets
모든 값은 sympy 정확 산술 (유리수 또는 유리수·√유리수)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import sympy as sp

from .dynamics import ThresholdModel, Variant
from .errors import ModelError
from .graph import Graph, bipartition
from .schemas import BoundModel, BoundsReportModel, ExactValue

logger = logging.getLogger(__name__)


# (status, reference) per bound row
PROVENANCE: Dict[str, Tuple[str, str]] = {
    "alpha-dynamo": ("tight", "random labeling dynamo: E|D_L| = sum ceil(alpha d(v))/(d(v)+1) <= (alpha delta + 1)/(delta + 1) n; a star meets it"),
    "twoway-alpha-dynamo-high": ("tight-up-to-constant", "alpha > 3/4: the two-round core potential |B_t| + |∂(B_t)| never grows, giving 2 alpha sqrt(n) - 1; a clique with pendant leaves meets it"),
    "twoway-alpha-dynamo-mid": ("open", "1/2 < alpha <= 3/4: only the trivial bounds are known"),
    "twoway-alpha-dynamo-low": ("tight", "alpha <= 1/2: one node on an odd cycle is a dynamo"),
    "r-dynamo": ("tight", "r <= MD <= r n/(1 + delta); complete graphs meet both sides"),
    "twoway-r1-dynamo": ("tight", "two-way 1-BP: 2 on bipartite graphs, 1 otherwise"),
    "twoway-r-dynamo": ("tight", "two-way r-BP: r on large complete graphs, n on r-regular graphs"),
    "twoway-alpha-monotone-high": ("tight-up-to-constant", "alpha > 1/2: boundary potential |∂(D_t)| drops by each newly black node, giving sqrt(alpha/(1-alpha) n) - 1 and alpha/(2-alpha) n on trees"),
    "twoway-alpha-monotone-low": ("trivial", "alpha <= 1/2: a single black node turns white in round one"),
    "twoway-r-monotone": ("tight", "every node of a two-way r-BP monotone dynamo needs r black neighbours inside it: r + 1"),
    "oneway-monotone": ("tight", "one-way runs never lose black nodes, so monotone dynamos are exactly dynamos"),
    "oneway-stable": ("tight", "one-way: a black node stays black, every singleton is stable and immortal"),
    "twoway-alpha-stable-low": ("tight-up-to-constant", "alpha <= 1/2: ceil(1/(1-alpha)) <= MS <= n/c + 2c with c = floor(1/alpha), via a cut-minimising partition into c parts"),
    "twoway-alpha-stable-high": ("tight", "ceil(1/(1-alpha)) from a clique joined to a path by one bridge; n is the trivial upper bound"),
    "twoway-alpha-immortal": ("trivial", "two-way alpha-BP: a star centre is an immortal set of size 1; stable sets are immortal"),
    "twoway-r1-stable": ("tight", "two-way 1-BP: any edge is stable, any node is immortal"),
    "twoway-r2-immortal": ("tight", "two-way 2-BP: alternate nodes of an even cycle or the whole longest cycle: MI <= n/(1+x), x = 1 for even n; odd cycles need n"),
    "twoway-r-stable": ("tight", "two-way r-BP: stable sets need r + 1 nodes, immortal sets r; regular chains force nearly n"),
}


def _exact(value: Any) -> sp.Expr:
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    return sp.nsimplify(value) if isinstance(value, float) else sp.sympify(value)


def exact_le(a: Any, b: Any) -> bool:
    """a <= b exactly for rationals and rational multiples of square roots."""
    diff = sp.simplify(_exact(b) - _exact(a))
    sign = diff.is_nonnegative
    if sign is None:
        sign = bool(sp.N(diff, 60) >= 0)
    return bool(sign)


def to_exact_value(expr: Any) -> ExactValue:
    expr = sp.simplify(_exact(expr))
    return ExactValue(exact=str(expr), value=float(sp.N(expr, 30)))


@dataclass(frozen=True)
class GraphFlags:
    """Graph facts a bound row may depend on."""

    n: int
    delta: int
    bipartite: Optional[bool] = None
    tree: bool = False

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.delta <= max(self.n - 1, 0):
            raise ModelError(f"inconsistent graph parameters n={self.n}, delta={self.delta}")

    @classmethod
    def of(cls, g: Graph) -> "GraphFlags":
        return cls(n=g.n, delta=g.min_degree, bipartite=bipartition(g) is not None, tree=g.is_tree())

    @property
    def parity(self) -> int:
        """x: 1 for even n, 0 for odd n"""
        return 1 if self.n % 2 == 0 else 0

    def as_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "delta": self.delta, "bipartite": self.bipartite, "tree": self.tree, "x": self.parity}


@dataclass(frozen=True)
class BoundPair:
    """lower <= minimum <= upper; upper None means no upper bound stated."""

    lower: sp.Expr
    upper: Optional[sp.Expr]
    row: str
    assumptions: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.upper is not None and not exact_le(self.lower, self.upper):
            raise ModelError(f"bound row {self.row}: lower {self.lower} exceeds upper {self.upper}")

    @property
    def status(self) -> str:
        return PROVENANCE[self.row][0]

    @property
    def reference(self) -> str:
        return PROVENANCE[self.row][1]

    def contains(self, value: int) -> bool:
        if not exact_le(self.lower, value):
            return False
        return self.upper is None or exact_le(value, self.upper)

    def to_model(self) -> BoundModel:
        return BoundModel(
            lower=to_exact_value(self.lower),
            upper=to_exact_value(self.upper) if self.upper is not None else None,
            status=self.status,
            reference=self.reference,
        )


def _alpha(m: ThresholdModel) -> sp.Rational:
    return sp.Rational(m.alpha.numerator, m.alpha.denominator)


def _check(m: ThresholdModel, flags: GraphFlags) -> None:
    if m.r is not None and m.r > flags.delta:
        raise ModelError(f"r={m.r} exceeds minimum degree {flags.delta}")


def dynamo_bounds(m: ThresholdModel, flags: GraphFlags) -> BoundPair:
    _check(m, flags)
    n, delta = sp.Integer(flags.n), sp.Integer(flags.delta)
    info = flags.as_dict()

    if m.variant is Variant.ALPHA_BP:
        a = _alpha(m)
        return BoundPair(sp.Integer(1), (delta + 1 / a) / (delta + 1) * a * n, "alpha-dynamo", info)

    if m.variant is Variant.TWO_WAY_ALPHA_BP:
        a = _alpha(m)
        if a > sp.Rational(3, 4):
            lower = sp.Max(sp.Integer(1), 2 * a * sp.sqrt(n) - 1)
            return BoundPair(lower, n, "twoway-alpha-dynamo-high", info)
        row = "twoway-alpha-dynamo-mid" if a > sp.Rational(1, 2) else "twoway-alpha-dynamo-low"
        return BoundPair(sp.Integer(1), n, row, info)

    r = sp.Integer(m.r)
    if m.variant is Variant.RBP:
        return BoundPair(r, r * n / (1 + delta), "r-dynamo", info)

    if m.r == 1:
        if flags.bipartite is None:
            return BoundPair(sp.Integer(1), sp.Integer(2), "twoway-r1-dynamo", info)
        size = sp.Integer(2 if flags.bipartite else 1)
        return BoundPair(size, size, "twoway-r1-dynamo", info)
    return BoundPair(r, n, "twoway-r-dynamo", info)


def monotone_dynamo_lower(m: ThresholdModel, flags: GraphFlags) -> BoundPair:
    """Lower bound on the minimum monotone dynamo (upper side left open)."""
    if not m.two_way:
        base = dynamo_bounds(m, flags)
        return BoundPair(base.lower, None, "oneway-monotone", base.assumptions)
    _check(m, flags)
    n = sp.Integer(flags.n)
    info = flags.as_dict()
    if m.variant is Variant.TWO_WAY_RBP:
        return BoundPair(sp.Integer(m.r + 1), None, "twoway-r-monotone", info)
    a = _alpha(m)
    if a <= sp.Rational(1, 2):
        return BoundPair(sp.Integer(min(2, flags.n)), None, "twoway-alpha-monotone-low", info)
    lower = sp.sqrt(a / (1 - a) * n) - 1
    if flags.tree:
        lower = sp.Max(lower, a / (2 - a) * n)
    return BoundPair(sp.Max(sp.Integer(min(2, flags.n)), lower), None, "twoway-alpha-monotone-high", info)


def stable_core_size(alpha: Fraction) -> int:
    """⌈1/(1-α)⌉"""
    return -(-alpha.denominator // (alpha.denominator - alpha.numerator))


def partition_guarantee(n: int, alpha: Fraction) -> sp.Expr:
    """n/c + 2c, c = ⌊1/α⌋"""
    c = alpha.denominator // alpha.numerator
    return sp.Rational(n, c) + 2 * c


def stable_immortal_bounds(m: ThresholdModel, flags: GraphFlags) -> Tuple[BoundPair, BoundPair]:
    """(stable, immortal) bounds."""
    _check(m, flags)
    n = sp.Integer(flags.n)
    info = flags.as_dict()
    one = sp.Integer(1)

    if not m.two_way:
        return BoundPair(one, one, "oneway-stable", info), BoundPair(one, one, "oneway-stable", info)

    if m.variant is Variant.TWO_WAY_ALPHA_BP:
        lower = sp.Integer(min(flags.n, stable_core_size(m.alpha)))
        if m.alpha <= Fraction(1, 2):
            upper = sp.Min(n, partition_guarantee(flags.n, m.alpha))
            return (
                BoundPair(lower, upper, "twoway-alpha-stable-low", info),
                BoundPair(one, upper, "twoway-alpha-immortal", info),
            )
        return (
            BoundPair(lower, n, "twoway-alpha-stable-high", info),
            BoundPair(one, n, "twoway-alpha-immortal", info),
        )

    r = m.r
    if r == 1:
        return BoundPair(sp.Integer(2), sp.Integer(2), "twoway-r1-stable", info), BoundPair(one, one, "twoway-r1-stable", info)
    if r == 2:
        upper = n / (1 + flags.parity)
        return BoundPair(sp.Integer(3), n, "twoway-r-stable", info), BoundPair(sp.Integer(2), upper, "twoway-r2-immortal", info)
    return BoundPair(sp.Integer(r + 1), n, "twoway-r-stable", info), BoundPair(sp.Integer(r), n, "twoway-r-stable", info)


def gunderson_condition(n: int, delta: int, r: int) -> bool:
    """δ >= n/2 + r"""
    return 2 * delta >= n + 2 * r


@dataclass(frozen=True)
class BoundsReport:
    model: ThresholdModel
    flags: GraphFlags
    dynamo: BoundPair
    monotone: BoundPair
    stable: BoundPair
    immortal: BoundPair

    def to_model(self) -> BoundsReportModel:
        condition = None
        if self.model.variant is Variant.TWO_WAY_RBP:
            condition = gunderson_condition(self.flags.n, self.flags.delta, self.model.r)
        return BoundsReportModel(
            model=self.model.label,
            assumptions=self.flags.as_dict(),
            dynamo=self.dynamo.to_model(),
            monotone_lower=self.monotone.to_model(),
            stable=self.stable.to_model(),
            immortal=self.immortal.to_model(),
            gunderson_condition=condition,
        )


def all_bounds(m: ThresholdModel, flags: GraphFlags) -> BoundsReport:
    stable, immortal = stable_immortal_bounds(m, flags)
    return BoundsReport(m, flags, dynamo_bounds(m, flags), monotone_dynamo_lower(m, flags), stable, immortal)
