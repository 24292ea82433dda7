"""
Synchronous threshold dynamics
r-BP / α-BP 및 two-way 변형의 정확한 동기식 시뮬레이션과 potential 진단
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from .config import get_settings
from .errors import ModelError, PreconditionError, RoundRangeError
from .graph import Graph, NodeSet, edge_boundary_mask, mask_nodes, node_mask

logger = logging.getLogger(__name__)


class Variant(str, Enum):
    """프로세스 종류"""

    RBP = "r"
    TWO_WAY_RBP = "twoway-r"
    ALPHA_BP = "alpha"
    TWO_WAY_ALPHA_BP = "twoway-alpha"

    @property
    def two_way(self) -> bool:
        return self in (Variant.TWO_WAY_RBP, Variant.TWO_WAY_ALPHA_BP)

    @property
    def uses_alpha(self) -> bool:
        return self in (Variant.ALPHA_BP, Variant.TWO_WAY_ALPHA_BP)


@dataclass(frozen=True)
class ThresholdModel:
    """Process variant plus its exact parameter (integer r or rational alpha)."""

    variant: Variant
    r: Optional[int] = None
    alpha: Optional[Fraction] = None

    def __post_init__(self):
        variant = Variant(self.variant)
        object.__setattr__(self, "variant", variant)
        if variant.uses_alpha:
            if self.alpha is None or self.r is not None:
                raise ModelError(f"{variant.value} needs alpha and no r")
            try:
                alpha = Fraction(self.alpha)
            except (ValueError, ZeroDivisionError):
                raise ModelError(f"alpha {self.alpha!r} is not a rational p/q") from None
            if not 0 < alpha < 1:
                raise ModelError(f"alpha must satisfy 0 < alpha < 1, got {alpha}")
            object.__setattr__(self, "alpha", alpha)
        else:
            if self.r is None or self.alpha is not None:
                raise ModelError(f"{variant.value} needs r and no alpha")
            if int(self.r) != self.r or self.r < 1:
                raise ModelError(f"r must be a positive integer, got {self.r}")
            object.__setattr__(self, "r", int(self.r))

    @classmethod
    def rbp(cls, r: int) -> "ThresholdModel":
        return cls(Variant.RBP, r=r)

    @classmethod
    def twoway_rbp(cls, r: int) -> "ThresholdModel":
        return cls(Variant.TWO_WAY_RBP, r=r)

    @classmethod
    def alpha_bp(cls, alpha: Union[Fraction, str]) -> "ThresholdModel":
        return cls(Variant.ALPHA_BP, alpha=alpha)

    @classmethod
    def twoway_alpha_bp(cls, alpha: Union[Fraction, str]) -> "ThresholdModel":
        return cls(Variant.TWO_WAY_ALPHA_BP, alpha=alpha)

    @classmethod
    def parse(cls, text: str, r: Optional[int] = None, alpha: Optional[str] = None) -> "ThresholdModel":
        """'twoway-r:2', 'alpha:1/2' 또는 variant 이름 + r/alpha 인자"""
        name, _, param = text.partition(":")
        try:
            variant = Variant(name.strip())
        except ValueError:
            raise ModelError(f"unknown model {name!r}; choose from {', '.join(v.value for v in Variant)}") from None
        if param:
            if variant.uses_alpha:
                alpha = param
            else:
                try:
                    r = int(param)
                except ValueError:
                    raise ModelError(f"r must be an integer, got {param!r}") from None
        if variant.uses_alpha:
            return cls(variant, alpha=alpha)
        return cls(variant, r=r)

    @property
    def two_way(self) -> bool:
        return self.variant.two_way

    @property
    def label(self) -> str:
        param = self.alpha if self.variant.uses_alpha else self.r
        return f"{self.variant.value}:{param}"

    def threshold(self, degree: int) -> int:
        """흑색 이웃이 이 수 이상이면 다음 라운드에 흑색 (q·b >= p·d 와 동치)"""
        if self.alpha is None:
            return self.r
        return -(-self.alpha.numerator * degree // self.alpha.denominator)

    def check_graph(self, g: Graph) -> None:
        if self.r is not None and self.r > g.min_degree:
            raise ModelError(f"r={self.r} exceeds minimum degree {g.min_degree}")

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Configuration:
    """Black node set as a dense bitmask."""

    black: int = 0

    @classmethod
    def from_nodes(cls, nodes: Iterable[int]) -> "Configuration":
        return cls(node_mask(nodes))

    def nodes(self) -> List[int]:
        return mask_nodes(self.black)

    def node_set(self) -> NodeSet:
        return frozenset(self.nodes())

    def __contains__(self, v: int) -> bool:
        return bool(self.black >> v & 1)

    def __len__(self) -> int:
        return self.black.bit_count()


class Outcome(str, Enum):
    FIXED_POINT = "fixed-point"
    CYCLE = "cycle"
    LIMIT_REACHED = "limit-reached"


@dataclass(frozen=True)
class RunTrace:
    """Configurations C_0..C_T and how the run ended.

    On repetition the repeated configuration is appended, so
    C_T == C_{cycle_start} and period == T - cycle_start.
    """

    masks: Tuple[int, ...]
    outcome: Outcome
    period: Optional[int] = None
    cycle_start: Optional[int] = None

    @property
    def rounds(self) -> int:
        return len(self.masks) - 1

    @property
    def final(self) -> int:
        return self.masks[-1]

    def configs(self) -> List[Configuration]:
        return [Configuration(mask) for mask in self.masks]

    def black_at(self, t: int) -> NodeSet:
        if not 0 <= t <= self.rounds:
            raise RoundRangeError(f"round {t} outside 0..{self.rounds}")
        return frozenset(mask_nodes(self.masks[t]))

    def to_records(self) -> List[Dict[str, Any]]:
        """JSON-lines 레코드: 라운드별 {"t", "black"} 다음 종료 정보"""
        records: List[Dict[str, Any]] = [{"t": t, "black": mask_nodes(mask)} for t, mask in enumerate(self.masks)]
        records.append({"outcome": self.outcome.value, "period": self.period, "start": self.cycle_start})
        return records


class Simulator:
    """Per-(graph, model) step function with cached neighbour masks and thresholds."""

    def __init__(self, g: Graph, model: ThresholdModel, limit: Optional[int] = None):
        model.check_graph(g)
        self.g = g
        self.model = model
        self.thresholds = tuple(model.threshold(d) for d in g.degrees())
        self.full = g.full_mask
        self.limit = limit if limit is not None else get_settings().round_budget(g.n)
        if self.limit < 1:
            raise PreconditionError(f"round budget must be >= 1, got {self.limit}")
        self._rows = tuple(zip(g.masks, self.thresholds, (1 << v for v in range(g.n))))

    def step_mask(self, black: int) -> int:
        nxt = 0
        for neighbours, need, bit in self._rows:
            if (neighbours & black).bit_count() >= need:
                nxt |= bit
        if not self.model.two_way:
            nxt |= black
        return nxt

    def run_mask(self, start: int) -> RunTrace:
        masks = [start]
        seen = {start: 0}
        current = start
        for t in range(1, self.limit + 1):
            current = self.step_mask(current)
            masks.append(current)
            first = seen.get(current)
            if first is not None:
                period = t - first
                outcome = Outcome.FIXED_POINT if period == 1 else Outcome.CYCLE
                return RunTrace(tuple(masks), outcome, period, first)
            seen[current] = t
        logger.debug(f"run from {mask_nodes(start)} hit the {self.limit}-round budget")
        return RunTrace(tuple(masks), Outcome.LIMIT_REACHED)


def step(g: Graph, m: ThresholdModel, c: Configuration) -> Configuration:
    """한 라운드 동시 갱신"""
    return Configuration(Simulator(g, m).step_mask(c.black))


def run(g: Graph, m: ThresholdModel, c0: Configuration, limit: Optional[int] = None) -> RunTrace:
    return Simulator(g, m, limit).run_mask(c0.black)


# ---------------------------------------------------------------------------
# potential diagnostics
# ---------------------------------------------------------------------------

def _core_masks(trace: RunTrace) -> List[int]:
    """B_1..B_T 누적 bitmask"""
    cores = []
    acc = 0
    for prev, cur in zip(trace.masks, trace.masks[1:]):
        acc |= prev & cur
        cores.append(acc)
    return cores


def _check_round(trace: RunTrace, t: int) -> None:
    if not 1 <= t <= trace.rounds:
        raise RoundRangeError(f"round {t} outside 1..{trace.rounds}")


def two_round_core(trace: RunTrace, t: int) -> NodeSet:
    """B_t: nodes black in two consecutive rounds t'-1, t' for some t' <= t."""
    _check_round(trace, t)
    return frozenset(mask_nodes(_core_masks(trace)[t - 1]))


def potential_phi_core(g: Graph, trace: RunTrace, t: int) -> int:
    """|B_t| + |∂(B_t)|"""
    _check_round(trace, t)
    core = _core_masks(trace)[t - 1]
    return core.bit_count() + edge_boundary_mask(g, core)


def potential_phi_boundary(g: Graph, blackset: Iterable[int]) -> int:
    return edge_boundary_mask(g, node_mask(g.check_nodes(blackset)))


@dataclass(frozen=True)
class Diagnostics:
    """cores[i] = B_{i+1}, phi_core[i] = Φ over B_{i+1}, phi_boundary[t] = |∂(D_t)|"""

    cores: Tuple[NodeSet, ...]
    phi_core: Tuple[int, ...]
    phi_boundary: Tuple[int, ...]

    def core_increases(self) -> List[int]:
        """Rounds t >= 1 with Φ_{t+1} > Φ_t for the core potential."""
        return [t for t in range(1, len(self.phi_core)) if self.phi_core[t] > self.phi_core[t - 1]]


def diagnose(g: Graph, trace: RunTrace) -> Diagnostics:
    cores = _core_masks(trace)
    return Diagnostics(
        cores=tuple(frozenset(mask_nodes(c)) for c in cores),
        phi_core=tuple(c.bit_count() + edge_boundary_mask(g, c) for c in cores),
        phi_boundary=tuple(edge_boundary_mask(g, mask) for mask in trace.masks),
    )


def boundary_potential_violations(g: Graph, trace: RunTrace) -> List[int]:
    """Rounds t where |∂(D_{t+1})| > |∂(D_t)| - |D_{t+1} \\ D_t|."""
    violations = []
    phi = [edge_boundary_mask(g, mask) for mask in trace.masks]
    for t in range(trace.rounds):
        added = (trace.masks[t + 1] & ~trace.masks[t]).bit_count()
        if phi[t + 1] > phi[t] - added:
            violations.append(t)
    return violations
