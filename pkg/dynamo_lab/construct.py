"""
Constructions producing certified sets
labeling dynamo, two-way 1-BP dynamo, dense graph small dynamo,
partition 기반 stable set, longest cycle 기반 immortal set
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from .bounds import dynamo_bounds, gunderson_condition, partition_guarantee, to_exact_value, GraphFlags
from .certify import Certificate, Property, certify, quick_verdict
from .config import get_settings
from .dynamics import Simulator, ThresholdModel
from .errors import ModelError, PreconditionError
from .graph import Graph, NodeSet, bipartition, find_odd_cycle, node_mask
from .schemas import ConstructionReportModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Labeling:
    """order[v] = label of node v, a bijection onto 1..n"""

    order: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(1, len(self.order) + 1)):
            raise PreconditionError(f"labeling {list(self.order)} is not a bijection onto 1..{len(self.order)}")

    @classmethod
    def from_sequence(cls, nodes: Sequence[int]) -> "Labeling":
        """nodes[i] gets label i + 1"""
        order = [0] * len(nodes)
        for label, v in enumerate(nodes, start=1):
            order[v] = label
        return cls(tuple(order))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Labeling":
        return cls.from_sequence(rng.permutation(n).tolist())


@dataclass(frozen=True)
class ConstructionReport:
    construction: str
    model: ThresholdModel
    nodes: NodeSet
    guarantee: Optional[sp.Expr]
    certificate: Certificate
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def certified(self) -> bool:
        return self.certificate.verdict is True

    def to_model(self) -> ConstructionReportModel:
        return ConstructionReportModel(
            construction=self.construction,
            model=self.model.label,
            set=sorted(self.nodes),
            size=self.size,
            guarantee=to_exact_value(self.guarantee) if self.guarantee is not None else None,
            certified=self.certified,
            details=self.details,
        )


# ---------------------------------------------------------------------------
# random labeling dynamo
# ---------------------------------------------------------------------------

def labeling_dynamo(g: Graph, m: ThresholdModel, labeling: Labeling) -> NodeSet:
    """D_L: nodes with fewer earlier-labelled neighbours than their threshold."""
    if len(labeling.order) != g.n:
        raise PreconditionError(f"labeling covers {len(labeling.order)} nodes, graph has {g.n}")
    order = labeling.order
    members = []
    for v in range(g.n):
        earlier = sum(1 for u in g.adjacency[v] if order[u] < order[v])
        if earlier < m.threshold(g.degree(v)):
            members.append(v)
    return frozenset(members)


def labeling_expectation(g: Graph, m: ThresholdModel) -> Fraction:
    """E|D_L| = Σ thr(v)/(d(v)+1) over uniform labelings"""
    return sum((Fraction(m.threshold(d), d + 1) for d in g.degrees()), Fraction(0))


def dynamo_by_labeling(g: Graph, m: ThresholdModel, seed: int = 0, samples: int = 100) -> ConstructionReport:
    if m.two_way:
        raise ModelError(f"labeling dynamos are built for one-way models, got {m.label}")
    if samples < 1:
        raise PreconditionError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    sim = Simulator(g, m)
    sizes: List[int] = []
    failures = 0
    best: Optional[Tuple[int, List[int]]] = None
    for _ in range(samples):
        candidate = labeling_dynamo(g, m, Labeling.random(g.n, rng))
        sizes.append(len(candidate))
        if quick_verdict(sim, Property.DYNAMO, node_mask(candidate)) is not True:
            failures += 1
        key = (len(candidate), sorted(candidate))
        if best is None or key < best:
            best = key
    if failures:
        logger.error(f"❌ {failures}/{samples} labeling dynamos failed certification on n={g.n} under {m.label}")

    expectation = labeling_expectation(g, m)
    certificate = certify(g, m, best[1], Property.DYNAMO, simulator=sim)
    table = dynamo_bounds(m, GraphFlags(n=g.n, delta=g.min_degree))
    details = {
        "seed": seed,
        "samples": samples,
        "sample_sizes": sizes,
        "mean": sum(sizes) / len(sizes),
        "expectation": to_exact_value(sp.Rational(expectation.numerator, expectation.denominator)).model_dump(),
        "certification_failures": failures,
        "table_upper": to_exact_value(table.upper).model_dump(),
    }
    return ConstructionReport(
        "labeling", m, frozenset(best[1]), sp.Rational(expectation.numerator, expectation.denominator), certificate, details
    )


# ---------------------------------------------------------------------------
# two-way 1-BP
# ---------------------------------------------------------------------------

def dynamo_twoway_r1(g: Graph) -> ConstructionReport:
    """Two adjacent nodes on bipartite graphs, one odd-cycle node otherwise."""
    m = ThresholdModel.twoway_rbp(1)
    if bipartition(g) is not None:
        u, v = g.edges()[0]
        nodes = frozenset((u, v))
        details: Dict[str, Any] = {"bipartite": True, "edge": [u, v]}
    else:
        cycle = find_odd_cycle(g)
        nodes = frozenset((cycle[0],))
        details = {"bipartite": False, "odd_cycle": cycle}
    certificate = certify(g, m, nodes, Property.DYNAMO)
    return ConstructionReport("twoway-r1", m, nodes, sp.Integer(len(nodes)), certificate, details)


# ---------------------------------------------------------------------------
# dense graphs: small dynamos
# ---------------------------------------------------------------------------

def _covered(g: Graph, mask: int, r: int) -> int:
    """|{v : d_D(v) >= r}|"""
    return sum(1 for nb in g.masks if (nb & mask).bit_count() >= r)


def dense_small_dynamo(g: Graph, r: int, seed: int = 0) -> ConstructionReport:
    """Size-r two-way r-BP dynamo inside a random (2r-1)-set, for δ >= n/2 + r."""
    if r < 1:
        raise ModelError(f"r must be >= 1, got {r}")
    if not gunderson_condition(g.n, g.min_degree, r):
        raise PreconditionError(f"minimum degree {g.min_degree} is below n/2 + r = {Fraction(g.n, 2) + r}")
    m = ThresholdModel.twoway_rbp(r)
    sim = Simulator(g, m)
    rng = np.random.default_rng(seed)
    pool = sorted(int(v) for v in rng.choice(g.n, size=2 * r - 1, replace=False))

    # max coverage first, lexicographic on ties
    ranked = sorted(combinations(pool, r), key=lambda subset: (-_covered(g, node_mask(subset), r), subset))
    chosen = ranked[0]
    fallback = 0
    for rank, subset in enumerate(ranked):
        if quick_verdict(sim, Property.DYNAMO, node_mask(subset)) is True:
            chosen, fallback = subset, rank
            break
    if fallback:
        logger.info(f"max-coverage subset was not a dynamo, used candidate #{fallback}")

    covered = _covered(g, node_mask(chosen), r)
    floor = Fraction(g.n, (2 * r) ** (2 * r))
    certificate = certify(g, m, chosen, Property.DYNAMO, simulator=sim)
    details = {
        "seed": seed,
        "pool": pool,
        "covered": covered,
        "max_covered": _covered(g, node_mask(ranked[0]), r),
        "covered_floor": str(floor),
        "covered_floor_ceiling": -(-floor.numerator // floor.denominator),
        "fallback_rank": fallback,
    }
    return ConstructionReport("dense", m, frozenset(chosen), sp.Integer(r), certificate, details)


@dataclass(frozen=True)
class CountResult:
    count: int
    examined: int
    total: int

    @property
    def partial(self) -> bool:
        return self.examined < self.total


def count_small_dynamos(g: Graph, r: int, budget: Optional[int] = None) -> CountResult:
    """Number of r-subsets that are two-way r-BP dynamos (partial when budget runs out)."""
    if r < 1:
        raise ModelError(f"r must be >= 1, got {r}")
    sim = Simulator(g, ThresholdModel.twoway_rbp(r))
    total = comb(g.n, r)
    count = examined = 0
    for subset in combinations(range(g.n), r):
        if budget is not None and examined >= budget:
            logger.warning(f"count stopped after {examined}/{total} subsets (budget {budget})")
            break
        examined += 1
        if quick_verdict(sim, Property.DYNAMO, node_mask(subset)) is True:
            count += 1
    return CountResult(count, examined, total)


# ---------------------------------------------------------------------------
# stable sets by cut-minimising partition
# ---------------------------------------------------------------------------

def cross_edges(g: Graph, parts: Sequence[Sequence[int]]) -> int:
    part_of = _part_index(g, parts)
    return sum(1 for u, v in g.edges() if part_of[u] != part_of[v])


def _part_index(g: Graph, parts: Sequence[Sequence[int]]) -> List[int]:
    part_of = [-1] * g.n
    for i, part in enumerate(parts):
        for v in part:
            part_of[v] = i
    if -1 in part_of:
        raise PreconditionError("partition does not cover every node")
    return part_of


def improving_moves(g: Graph, parts: Sequence[Sequence[int]], floor: int) -> List[Tuple[int, int, int]]:
    """(node, from, to) moves that strictly cut fewer edges and keep |from| - 1 >= floor."""
    part_of = _part_index(g, parts)
    masks = [node_mask(part) for part in parts]
    moves = []
    for v in range(g.n):
        i = part_of[v]
        if len(parts[i]) - 1 < floor:
            continue
        own = (g.masks[v] & masks[i]).bit_count()
        moves.extend((v, i, j) for j in range(len(parts)) if j != i and (g.masks[v] & masks[j]).bit_count() > own)
    return moves


def stable_by_partition(g: Graph, alpha) -> ConstructionReport:
    """Largest part of a locally cut-minimal partition into c = ⌊1/α⌋ parts."""
    a = Fraction(alpha)
    if not 0 < a <= Fraction(1, 2):
        raise PreconditionError(f"partition construction needs 0 < alpha <= 1/2, got {a}")
    m = ThresholdModel.twoway_alpha_bp(a)
    c = a.denominator // a.numerator
    floor = max(g.n // c - 1, 0)
    parts: List[set] = [{v for v in range(g.n) if v % c == i} for i in range(c)]

    # each move strictly lowers the cut
    moves = 0
    while True:
        candidates = improving_moves(g, parts, floor)
        if not candidates:
            break
        v, i, j = candidates[0]
        parts[i].discard(v)
        parts[j].add(v)
        moves += 1

    largest = max(range(c), key=lambda i: (len(parts[i]), -i))
    nodes = frozenset(parts[largest])
    certificate = certify(g, m, nodes, Property.STABLE)
    partition = [sorted(part) for part in parts]
    details = {
        "c": c,
        "size_floor": floor,
        "moves": moves,
        "cross_edges": cross_edges(g, partition),
        "partition": partition,
    }
    logger.debug(f"partition search: {moves} moves, part sizes {[len(p) for p in partition]}")
    return ConstructionReport("partition", m, nodes, partition_guarantee(g.n, a), certificate, details)


# ---------------------------------------------------------------------------
# immortal sets in two-way 2-BP
# ---------------------------------------------------------------------------

def longest_cycle(g: Graph, guard: Optional[int] = None) -> List[int]:
    """Exact longest simple cycle by DFS, rooted at its smallest node."""
    guard = guard if guard is not None else get_settings().longest_cycle_guard
    if g.n > guard:
        raise PreconditionError(f"exact longest cycle search is limited to {guard} nodes, graph has {g.n}")
    best: List[int] = []
    path: List[int] = []

    def extend(start: int, cur: int, visited: int, available: int) -> bool:
        nonlocal best
        for nb in sorted(g.adjacency[cur]):
            if nb == start and len(path) >= 3 and len(path) > len(best):
                best = list(path)
                if len(best) == g.n:
                    return True
            elif nb > start and not visited >> nb & 1 and len(path) + available > len(best):
                path.append(nb)
                if extend(start, nb, visited | 1 << nb, available - 1):
                    return True
                path.pop()
        return False

    for start in range(g.n):
        if g.n - start <= len(best):
            break
        path[:] = [start]
        if extend(start, start, 1 << start, g.n - start - 1):
            break
    return best


def even_cycle(g: Graph, guard: Optional[int] = None) -> List[int]:
    """Some even simple cycle by DFS, rooted at its smallest node; [] when every cycle is odd."""
    guard = guard if guard is not None else get_settings().longest_cycle_guard
    if g.n > guard:
        raise PreconditionError(f"exact even cycle search is limited to {guard} nodes, graph has {g.n}")
    path: List[int] = []

    def extend(start: int, cur: int, visited: int) -> bool:
        for nb in sorted(g.adjacency[cur]):
            if nb == start and len(path) >= 4 and len(path) % 2 == 0:
                return True
            if nb > start and not visited >> nb & 1:
                path.append(nb)
                if extend(start, nb, visited | 1 << nb):
                    return True
                path.pop()
        return False

    for start in range(g.n):
        path[:] = [start]
        if extend(start, start, 1 << start):
            return list(path)
    return []


def chord_split(g: Graph, cycle: List[int]) -> List[int]:
    """Even cycle cut off by the first chord of an odd cycle; [] when the cycle is induced.

    A chord {c_i, c_j} splits the cycle into two cycles with lengths summing to
    k + 2, so exactly one of them is even.
    """
    k = len(cycle)
    for i in range(k):
        for j in range(i + 2, k):
            if (i, j) == (0, k - 1) or not g.has_edge(cycle[i], cycle[j]):
                continue
            inner = cycle[i : j + 1]
            outer = cycle[j:] + cycle[: i + 1]
            return inner if len(inner) % 2 == 0 else outer
    return []


def _alternate(cycle: List[int]) -> List[int]:
    return cycle[1::2]


def _cycle_or_alternate(cycle: List[int]) -> List[int]:
    return _alternate(cycle) if len(cycle) % 2 == 0 else list(cycle)


def immortal_r2(g: Graph, guard: Optional[int] = None) -> ConstructionReport:
    """Immortal set for two-way 2-BP from a longest cycle of length k.

    Size <= max(n/2, k), and <= n/2 whenever g has an even cycle.
    """
    if g.min_degree < 2:
        raise PreconditionError(f"minimum degree {g.min_degree} < 2")
    m = ThresholdModel.twoway_rbp(2)
    cycle = longest_cycle(g, guard)
    k = len(cycle)
    details: Dict[str, Any] = {"longest_cycle": cycle, "k": k}

    split = chord_split(g, cycle) if k % 2 == 1 else []
    if k % 2 == 0:
        details["case"] = "even-longest-cycle"
        nodes = _alternate(cycle)
    elif split:
        details.update({"case": "chord-even-cycle", "cycle": split})
        nodes = _alternate(split)
    elif 2 * k <= g.n or k == g.n:
        details["case"] = "whole-longest-cycle"
        nodes = list(cycle)
    else:
        found, case = _walk_outside(g, cycle)
        details.update({"case": case, "cycle": found})
        nodes = _cycle_or_alternate(found)

    # an odd cycle through few outside nodes can still exceed n/2
    if 2 * len(nodes) > g.n:
        even = even_cycle(g, guard)
        if even:
            details.update({"case": "even-cycle-search", "cycle": even})
            nodes = _alternate(even)

    certificate = certify(g, m, nodes, Property.IMMORTAL)
    guarantee = sp.Max(sp.Rational(g.n, 2), sp.Integer(k))
    return ConstructionReport("immortal-r2", m, frozenset(nodes), guarantee, certificate, details)


def _walk_outside(g: Graph, cycle: List[int]) -> Tuple[List[int], str]:
    """Walk from an outside node until the walk meets the cycle again or itself."""
    position = {v: i for i, v in enumerate(cycle)}
    k = len(cycle)
    w1 = min(v for v in range(g.n) if v not in position and any(u in position for u in g.adjacency[v]))
    u = min(x for x in g.adjacency[w1] if x in position)
    walk = [u, w1]
    on_walk = {u: 0, w1: 1}
    while True:
        prev, cur = walk[-2], walk[-1]
        nxt = min(x for x in g.adjacency[cur] if x != prev)
        if nxt in position and nxt != u:
            iu, iv = position[u], position[nxt]
            forward = walk + [cycle[(iv + j) % k] for j in range((iu - iv) % k)]
            backward = walk + [cycle[(iv - j) % k] for j in range((iv - iu) % k)]
            return (forward if len(forward) % 2 == 0 else backward), "split-even-cycle"
        if nxt in on_walk:
            return walk[on_walk[nxt]:], "outside-cycle"
        on_walk[nxt] = len(walk)
        walk.append(nxt)
