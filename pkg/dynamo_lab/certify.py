"""
Set property certification
dynamo / monotone dynamo / stable / immortal 판정과 증거 trace

Every verdict is computed from the worst-case start: the queried set black,
everything else white. Monotone coupling of the step function extends the
verdict to every configuration containing the set.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .dynamics import Outcome, RunTrace, Simulator, ThresholdModel
from .errors import PreconditionError
from .graph import Graph, NodeSet, mask_nodes, node_mask
from .monitor import get_run_monitor
from .schemas import CertificateModel

logger = logging.getLogger(__name__)


class Property(str, Enum):
    DYNAMO = "dynamo"
    MONOTONE = "monotone"
    STABLE = "stable"
    IMMORTAL = "immortal"


@dataclass(frozen=True)
class Certificate:
    """verdict None = indeterminate (round budget exhausted)"""

    property: Property
    model: ThresholdModel
    nodes: NodeSet
    verdict: Optional[bool]
    trace: RunTrace
    failure_round: Optional[int] = None

    @property
    def indeterminate(self) -> bool:
        return self.verdict is None

    def __bool__(self) -> bool:
        return self.verdict is True

    def to_model(self, include_trace: bool = False) -> CertificateModel:
        fields = dict(
            property=self.property.value,
            model=self.model.label,
            set=sorted(self.nodes),
            verdict=self.verdict,
            indeterminate=self.indeterminate,
            rounds=self.trace.rounds,
            outcome=self.trace.outcome.value,
            period=self.trace.period,
            failure_round=self.failure_round,
        )
        if include_trace:
            fields["trace"] = [mask_nodes(mask) for mask in self.trace.masks]
        return CertificateModel(**fields)


def evaluate_trace(trace: RunTrace, prop: Property, target: int, full: int):
    """(verdict, failure_round) from a complete trace started at the target set."""
    masks = trace.masks
    limited = trace.outcome is Outcome.LIMIT_REACHED

    if prop is Property.STABLE:
        for t, mask in enumerate(masks):
            if target & ~mask:
                return False, t
        return (None, None) if limited else (True, None)

    if prop is Property.IMMORTAL:
        for t, mask in enumerate(masks):
            if mask == 0:
                return False, t
        return (None, None) if limited else (True, None)

    if prop is Property.MONOTONE:
        for t in range(1, len(masks)):
            if masks[t - 1] & ~masks[t]:
                return False, t

    if full in masks:
        return True, None
    if limited:
        return None, None
    return False, trace.cycle_start


def quick_verdict(sim: Simulator, prop: Property, start: int) -> Optional[bool]:
    """Early-exit verdict, identical to evaluate_trace on the full run."""
    full = sim.full
    step = sim.step_mask
    if prop is Property.DYNAMO or prop is Property.MONOTONE:
        if start == full:
            return True
    seen = {start}
    current = start
    for _ in range(sim.limit):
        nxt = step(current)
        if prop is Property.DYNAMO:
            if nxt == full:
                return True
        elif prop is Property.MONOTONE:
            if current & ~nxt:
                return False
            if nxt == full:
                return True
        elif prop is Property.STABLE:
            if start & ~nxt:
                return False
        elif nxt == 0:
            return False
        if nxt in seen:
            return prop is Property.STABLE or prop is Property.IMMORTAL
        seen.add(nxt)
        current = nxt
    return None


def certify(
    g: Graph,
    m: ThresholdModel,
    nodes: Iterable[int],
    prop: Property,
    limit: Optional[int] = None,
    simulator: Optional[Simulator] = None,
) -> Certificate:
    prop = Property(prop)
    members = g.check_nodes(nodes)
    if not members:
        raise PreconditionError(f"{prop.value} certification needs a non-empty set")
    sim = simulator or Simulator(g, m, limit)
    target = node_mask(members)
    trace = sim.run_mask(target)
    verdict, failure_round = evaluate_trace(trace, prop, target, sim.full)
    get_run_monitor().increment("certifications")
    if verdict is None:
        logger.warning(f"{prop.value} check of {sorted(members)} under {m.label} ran out of rounds ({sim.limit})")
    return Certificate(prop, m, members, verdict, trace, failure_round)


def is_dynamo(g: Graph, m: ThresholdModel, d: Iterable[int], limit: Optional[int] = None) -> Certificate:
    return certify(g, m, d, Property.DYNAMO, limit)


def is_monotone_dynamo(g: Graph, m: ThresholdModel, d: Iterable[int], limit: Optional[int] = None) -> Certificate:
    """Dynamo whose black set never shrinks on the way to all-black."""
    return certify(g, m, d, Property.MONOTONE, limit)


def is_stable(g: Graph, m: ThresholdModel, s: Iterable[int], limit: Optional[int] = None) -> Certificate:
    return certify(g, m, s, Property.STABLE, limit)


def is_immortal(g: Graph, m: ThresholdModel, s: Iterable[int], limit: Optional[int] = None) -> Certificate:
    return certify(g, m, s, Property.IMMORTAL, limit)
