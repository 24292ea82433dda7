"""
Corpus verifier
CorpusSpec 확장, 검증 항목(check) 레지스트리, 병렬 실행과 JSON-lines 리포트
"""

import json
import logging
import zlib
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn

from .bounds import (
    GraphFlags,
    dynamo_bounds,
    exact_le,
    gunderson_condition,
    monotone_dynamo_lower,
    partition_guarantee,
    stable_core_size,
    stable_immortal_bounds,
    to_exact_value,
)
from .certify import Property, certify, quick_verdict
from .config import get_settings
from .construct import (
    count_small_dynamos,
    dense_small_dynamo,
    dynamo_by_labeling,
    dynamo_twoway_r1,
    even_cycle,
    immortal_r2,
    stable_by_partition,
)
from .dynamics import Outcome, Simulator, ThresholdModel, Variant, boundary_potential_violations, diagnose, two_round_core
from .errors import DynamoLabError, ModelError, UsageError
from .generators import (
    gen_clique_with_leaves,
    gen_complete,
    gen_complete_minus_matching,
    gen_cycle,
    gen_petersen,
    gen_random_tree,
    gen_regular_chain,
    gen_stable_tight,
    gen_star,
    generate,
    sample_random_connected,
)
from .graph import Graph, bipartition, node_mask
from .monitor import get_run_monitor
from .schemas import CheckResultModel, CorpusSpec, FamilySpec, RandomGraphSpec
from .search import SearchResult, min_set

logger = logging.getLogger(__name__)

MAX_RECORDED_FAILURES = 25


# ---------------------------------------------------------------------------
# corpus expansion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusGraph:
    name: str
    graph: Graph
    seed: Optional[int] = None


@dataclass
class CorpusContext:
    graphs: List[CorpusGraph]
    models: List[ThresholdModel]
    properties: List[Property]
    seed: int

    def small_graphs(self, max_n: int = 12) -> List[CorpusGraph]:
        return [cg for cg in self.graphs if cg.graph.n <= max_n]

    def rng(self, salt: str) -> np.random.Generator:
        """check 별 독립 난수 스트림 (실행 순서와 무관)"""
        return np.random.default_rng([self.seed, zlib.crc32(salt.encode())])


def default_corpus_spec(seed: Optional[int] = None) -> CorpusSpec:
    seed = seed if seed is not None else get_settings().corpus_seed
    return CorpusSpec(
        families=[
            FamilySpec(generator="cycle", params={"n": [5, 6, 7, 8]}),
            FamilySpec(generator="complete", params={"n": [5, 6]}),
            FamilySpec(generator="complete-minus-matching", params={"n": [6, 8]}),
            FamilySpec(generator="star", params={"n": [5]}),
            FamilySpec(generator="path", params={"n": [6]}),
            FamilySpec(generator="petersen"),
            FamilySpec(generator="clique-with-leaves", params={"k": [3, 4], "n": [12]}),
            FamilySpec(generator="stable-tight", params={"alpha": ["1/2", "2/3"], "n": [8]}),
        ],
        random_graphs=RandomGraphSpec(count=10, n_min=6, n_max=10, p_min=0.3, p_max=0.6, seed=seed),
        models=["r:1", "r:2", "alpha:1/2", "twoway-r:1", "twoway-r:2", "twoway-alpha:1/2", "twoway-alpha:4/5"],
    )


def _family_graphs(family: FamilySpec) -> List[CorpusGraph]:
    names = sorted(family.params)
    graphs = []
    for values in product(*(family.params[name] for name in names)):
        params = dict(zip(names, values))
        label = ",".join(f"{k}={v}" for k, v in params.items())
        try:
            g = generate(family.generator, **params)
        except DynamoLabError as e:
            logger.warning(f"skipping {family.generator}({label}): {e}")
            continue
        graphs.append(CorpusGraph(f"{family.generator}({label})", g, params.get("seed")))
    return graphs


def _random_graphs(spec: RandomGraphSpec) -> List[CorpusGraph]:
    rng = np.random.default_rng(spec.seed)
    graphs = []
    for _ in range(spec.count):
        n = int(rng.integers(spec.n_min, spec.n_max + 1))
        p = round(float(rng.uniform(spec.p_min, spec.p_max)), 3)
        g, used = sample_random_connected(n, p, int(rng.integers(0, 2**31 - 1)))
        graphs.append(CorpusGraph(f"random-connected(n={n},p={p},seed={used})", g, used))
    return graphs


def build_context(spec: CorpusSpec, seed: Optional[int] = None) -> CorpusContext:
    if spec.is_empty():
        raise UsageError("corpus spec names no graphs and no checks")
    graphs: List[CorpusGraph] = []
    for family in spec.families:
        graphs.extend(_family_graphs(family))
    if spec.random_graphs is not None:
        graphs.extend(_random_graphs(spec.random_graphs))
    try:
        models = [ThresholdModel.parse(label) for label in spec.models]
        properties = [Property(p) for p in spec.properties]
    except (ModelError, ValueError) as e:
        raise UsageError(f"invalid corpus spec: {e}") from None
    seed = seed if seed is not None else (spec.random_graphs.seed if spec.random_graphs else get_settings().corpus_seed)
    logger.info(f"📊 corpus: {len(graphs)} graphs, {len(models)} models, seed {seed}")
    return CorpusContext(graphs, models, properties, seed)


def applicable(m: ThresholdModel, g: Graph) -> bool:
    return m.r is None or m.r <= g.min_degree


# ---------------------------------------------------------------------------
# check registry
# ---------------------------------------------------------------------------

@dataclass
class CheckOutcome:
    measured: Dict[str, Any] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    failure_count: int = 0

    def expect(self, ok: bool, message: str) -> bool:
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(message)
        return ok


@dataclass(frozen=True)
class Check:
    id: str
    claim: str
    run: Callable[[CorpusContext], CheckOutcome]


CHECKS: Dict[str, Check] = {}


def check(check_id: str, claim: str):
    def register(fn: Callable[[CorpusContext], CheckOutcome]):
        CHECKS[check_id] = Check(check_id, claim, fn)
        return fn

    return register


def _oracle(out: CheckOutcome, g: Graph, m: ThresholdModel, prop: Property, label: str, **kwargs) -> SearchResult:
    result = min_set(g, m, prop, **kwargs)
    out.expect(result.indeterminate == 0, f"{label}: {result.indeterminate} budget overruns in {prop.value} search")
    return result


@check("complete-graph-dynamo", "K_n: one-way minimum dynamo is r; two-way is r when n >= 2r+1 and r+1 below that")
def check_complete_graph(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []
    for n in range(6, 11):
        g = gen_complete(n)
        for r in (1, 2, 3):
            one_way = _oracle(out, g, ThresholdModel.rbp(r), Property.DYNAMO, f"K_{n}").min_size
            two_way = _oracle(out, g, ThresholdModel.twoway_rbp(r), Property.DYNAMO, f"K_{n}").min_size
            expected_two_way = r if n >= 2 * r + 1 else r + 1
            out.expect(one_way == r, f"K_{n} r={r}: one-way minimum {one_way}, expected {r}")
            out.expect(two_way == expected_two_way, f"K_{n} r={r}: two-way minimum {two_way}, expected {expected_two_way}")
            rows.append({"n": n, "r": r, "one_way": one_way, "two_way": two_way})
    out.measured["minima"] = rows
    return out


@check("regular-graph-dynamo", "r-regular graphs under two-way r-BP: only V is a dynamo")
def check_regular_graphs(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    m = ThresholdModel.twoway_rbp(3)
    for name, g in (("petersen", gen_petersen()), ("regular-chain(r=3,n=18)", gen_regular_chain(3, 18))):
        sim = Simulator(g, m)
        accepted = [sorted(s) for s in combinations(range(g.n), g.n - 1) if quick_verdict(sim, Property.DYNAMO, node_mask(s)) is not False]
        out.expect(not accepted, f"{name}: (n-1)-subsets not refuted: {accepted[:3]}")
        out.expect(certify(g, m, range(g.n), Property.DYNAMO).verdict is True, f"{name}: V is not a dynamo")
        out.measured[name] = {"n": g.n, "non_failing_n_minus_1_subsets": len(accepted)}
    return out


@check("odd-cycle-alpha-dynamo", "two-way alpha-BP with alpha = 1/2: one node is a dynamo on odd cycles, not on even cycles")
def check_odd_cycle(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    m = ThresholdModel.twoway_alpha_bp(Fraction(1, 2))
    for n in (3, 5, 7, 9):
        result = _oracle(out, gen_cycle(n), m, Property.DYNAMO, f"C_{n}")
        out.expect(result.min_size == 1, f"C_{n}: minimum {result.min_size}, expected 1")
        out.measured[f"C_{n}"] = result.min_size
    for n in (4, 6, 8):
        result = _oracle(out, gen_cycle(n), m, Property.DYNAMO, f"C_{n}", max_size=1)
        out.expect(result.min_size is None, f"C_{n}: a single node is a dynamo")
        out.measured[f"C_{n}"] = "> 1" if result.min_size is None else result.min_size
    return out


@check("r1-bipartite-dynamo", "two-way 1-BP: minimum dynamo is 2 on bipartite graphs and 1 otherwise; the construction matches")
def check_r1_bipartite(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng("r1-bipartite-dynamo")
    m = ThresholdModel.twoway_rbp(1)
    samples = []
    for i in range(50):
        n = int(rng.integers(4, 13))
        seed = int(rng.integers(0, 2**31 - 1))
        if i % 5 == 4:
            g, kind = gen_random_tree(n, seed), "tree"
        else:
            g, seed = sample_random_connected(n, round(float(rng.uniform(0.2, 0.6)), 3), seed)
            kind = "gnp"
        bipartite = bipartition(g) is not None
        expected = 2 if bipartite else 1
        minimum = _oracle(out, g, m, Property.DYNAMO, f"{kind} seed={seed}").min_size
        report = dynamo_twoway_r1(g)
        out.expect(minimum == expected, f"{kind} n={n} seed={seed}: minimum {minimum}, expected {expected}")
        out.expect(report.certified and report.size == expected, f"{kind} n={n} seed={seed}: construction size {report.size}")
        samples.append({"kind": kind, "n": n, "seed": seed, "bipartite": bipartite, "min": minimum})
    out.measured["graphs"] = samples
    out.measured["bipartite"] = sum(1 for s in samples if s["bipartite"])
    return out


@check("alpha-dynamo-sqrt-lower-bound", "two-way alpha-BP, alpha > 3/4: minimum dynamo >= 2 alpha sqrt(n) - 1 and |B_t| + |∂(B_t)| never grows")
def check_alpha_sqrt(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []
    for cg in ctx.small_graphs():
        for alpha in (Fraction(4, 5), Fraction(7, 8)):
            m = ThresholdModel.twoway_alpha_bp(alpha)
            result = _oracle(out, cg.graph, m, Property.DYNAMO, cg.name)
            bound = dynamo_bounds(m, GraphFlags.of(cg.graph))
            out.expect(bound.contains(result.min_size), f"{cg.name} alpha={alpha}: minimum {result.min_size} vs lower {bound.lower}")
            trace = certify(cg.graph, m, result.witness, Property.DYNAMO).trace
            increases = diagnose(cg.graph, trace).core_increases()
            out.expect(not increases, f"{cg.name} alpha={alpha}: core potential grows at rounds {increases}")
            rows.append({"graph": cg.name, "alpha": str(alpha), "min": result.min_size, "lower": to_exact_value(bound.lower).exact})
    out.measured["rows"] = rows
    return out


@check("clique-with-leaves-dynamo", "clique with n/k - 1 leaves per clique node: the clique is a monotone dynamo of size k when k - 1 >= alpha d")
def check_clique_with_leaves(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []
    for (k, n), alpha in product(((4, 16), (5, 25)), (Fraction(1, 2), Fraction(3, 4), Fraction(4, 5))):
        g = gen_clique_with_leaves(k, n)
        m = ThresholdModel.twoway_alpha_bp(alpha)
        degree = g.degree(0)
        feasible = k - 1 >= m.threshold(degree)
        row = {"k": k, "n": n, "alpha": str(alpha), "clique_degree": degree, "applies": feasible}
        if feasible:
            clique = range(k)
            dynamo = certify(g, m, clique, Property.DYNAMO)
            monotone = certify(g, m, clique, Property.MONOTONE)
            out.expect(dynamo.verdict is True, f"k={k} n={n} alpha={alpha}: clique is not a dynamo")
            out.expect(monotone.verdict is True, f"k={k} n={n} alpha={alpha}: clique is not a monotone dynamo")
            out.expect(two_round_core(dynamo.trace, 1) == frozenset(clique), f"k={k} n={n} alpha={alpha}: B_1 differs from the clique")
            row["sqrt_bound_met"] = alpha / (1 - alpha) * n == k * k
        rows.append(row)
    out.expect(any(r["applies"] for r in rows), "no clique-with-leaves case applies")
    out.measured["rows"] = rows
    return out


@check("monotone-dynamo-lower-bound", "two-way alpha-BP, alpha > 1/2: monotone dynamos have >= sqrt(alpha/(1-alpha) n) - 1 nodes, >= alpha/(2-alpha) n on trees")
def check_monotone_lower(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng("monotone-dynamo-lower-bound")
    graphs = [(cg.name, cg.graph) for cg in ctx.small_graphs()]
    for _ in range(20):
        n, seed = int(rng.integers(6, 15)), int(rng.integers(0, 2**31 - 1))
        graphs.append((f"random-tree(n={n},seed={seed})", gen_random_tree(n, seed)))
    rows = []
    for name, g in graphs:
        flags = GraphFlags.of(g)
        for alpha in (Fraction(3, 5), Fraction(3, 4)):
            m = ThresholdModel.twoway_alpha_bp(alpha)
            result = _oracle(out, g, m, Property.MONOTONE, name)
            bound = monotone_dynamo_lower(m, flags)
            out.expect(bound.contains(result.min_size), f"{name} alpha={alpha}: minimum {result.min_size} below {bound.lower}")
            trace = certify(g, m, result.witness, Property.MONOTONE).trace
            violations = boundary_potential_violations(g, trace)
            out.expect(not violations, f"{name} alpha={alpha}: boundary potential inequality fails at rounds {violations}")
            rows.append({"graph": name, "tree": flags.tree, "alpha": str(alpha), "min": result.min_size, "lower": to_exact_value(bound.lower).exact})
    out.measured["rows"] = rows
    return out


@check("labeling-dynamo", "alpha-BP: every random-labeling set D_L is a dynamo, the best of 100 is within expectation + 1, the mean within 10%")
def check_labeling(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []
    for index, cg in enumerate(ctx.graphs):
        for alpha in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
            m = ThresholdModel.alpha_bp(alpha)
            report = dynamo_by_labeling(cg.graph, m, seed=ctx.seed + index, samples=100)
            expectation = Fraction(report.guarantee.p, report.guarantee.q)
            mean = report.details["mean"]
            out.expect(report.details["certification_failures"] == 0, f"{cg.name} alpha={alpha}: {report.details['certification_failures']} uncertified D_L")
            out.expect(report.certified, f"{cg.name} alpha={alpha}: best D_L not certified")
            out.expect(report.size <= expectation + 1, f"{cg.name} alpha={alpha}: best {report.size} > expectation {expectation} + 1")
            out.expect(abs(mean - float(expectation)) <= 0.1 * float(expectation), f"{cg.name} alpha={alpha}: mean {mean:.3f} vs expectation {float(expectation):.3f}")
            rows.append({"graph": cg.name, "alpha": str(alpha), "best": report.size, "mean": round(mean, 3), "expectation": str(expectation)})
    out.measured["rows"] = rows
    return out


@check("dense-graph-small-dynamos", "delta >= n/2 + r: a size-r two-way r-BP dynamo sits in any 2r-1 nodes and their number grows like n^r")
def check_dense_graphs(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []
    for r in (2, 3):
        counts = {}
        for n in (20, 30, 40):
            g = gen_complete_minus_matching(n)
            if not gunderson_condition(g.n, g.min_degree, r):
                rows.append({"n": n, "r": r, "applies": False})
                continue
            report = dense_small_dynamo(g, r, seed=ctx.seed)
            out.expect(report.certified and report.size == r, f"n={n} r={r}: construction size {report.size}, certified {report.certified}")
            floor = Fraction(report.details["covered_floor"])
            if floor >= 1:
                out.expect(report.details["covered"] >= report.details["covered_floor_ceiling"], f"n={n} r={r}: coverage below floor")
            row = {"n": n, "r": r, "set": sorted(report.nodes), "covered": report.details["covered"], "covered_floor": str(floor)}
            if n in (20, 40):
                counted = count_small_dynamos(g, r)
                out.expect(not counted.partial, f"n={n} r={r}: partial count")
                counts[n] = counted.count
                row["count"] = counted.count
            rows.append(row)
        if 20 in counts and 40 in counts:
            ratio = Fraction(counts[40], max(counts[20], 1))
            out.expect(ratio >= Fraction(2**r, 2), f"r={r}: count ratio {float(ratio):.2f} below {2**r / 2}")
            out.measured[f"ratio_r{r}"] = round(float(ratio), 3)
    out.measured["rows"] = rows
    return out


@check("stable-set-bounds", "two-way alpha-BP stable sets: ceil(1/(1-alpha)) <= minimum; the partition construction stays within n/c + 2c")
def check_stable_sets(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    partition_rows, oracle_rows, tight_rows = [], [], []
    for cg in ctx.small_graphs():
        g = cg.graph
        for alpha in (Fraction(1, 3), Fraction(1, 2)):
            report = stable_by_partition(g, alpha)
            limit = partition_guarantee(g.n, alpha)
            out.expect(report.certified, f"{cg.name} alpha={alpha}: partition set not stable")
            out.expect(exact_le(report.size, limit), f"{cg.name} alpha={alpha}: size {report.size} > {limit}")
            partition_rows.append({"graph": cg.name, "alpha": str(alpha), "size": report.size, "guarantee": str(limit)})
        for alpha in (Fraction(1, 2), Fraction(2, 3), Fraction(4, 5)):
            m = ThresholdModel.twoway_alpha_bp(alpha)
            minimum = _oracle(out, g, m, Property.STABLE, cg.name).min_size
            lower = min(g.n, stable_core_size(alpha))
            out.expect(minimum >= lower, f"{cg.name} alpha={alpha}: stable minimum {minimum} < {lower}")
            oracle_rows.append({"graph": cg.name, "alpha": str(alpha), "min": minimum, "lower": lower})
    for alpha in (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(4, 5)):
        g = gen_stable_tight(alpha, 10)
        m = ThresholdModel.twoway_alpha_bp(alpha)
        core = stable_core_size(alpha)
        certificate = certify(g, m, range(core), Property.STABLE)
        minimum = _oracle(out, g, m, Property.STABLE, f"stable-tight({alpha})").min_size
        out.expect(certificate.verdict is True, f"stable-tight alpha={alpha}: clique not stable")
        out.expect(minimum == core, f"stable-tight alpha={alpha}: minimum {minimum}, expected {core}")
        tight_rows.append({"alpha": str(alpha), "core": core, "min": minimum})
    out.measured.update(partition=partition_rows, oracle=oracle_rows, tight=tight_rows)
    return out


@check("cycle-immortal-sets", "two-way 2-BP: minimum immortal set is n on odd cycles and n/2 on even cycles; a 3-regular chain on 18 nodes has none of size <= 10")
def check_cycle_immortal(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    m = ThresholdModel.twoway_rbp(2)
    for n in (5, 6, 7, 8, 9, 10):
        result = _oracle(out, gen_cycle(n), m, Property.IMMORTAL, f"C_{n}")
        expected = n if n % 2 else n // 2
        out.expect(result.min_size == expected, f"C_{n}: immortal minimum {result.min_size}, expected {expected}")
        out.measured[f"C_{n}"] = result.min_size
    chain = gen_regular_chain(3, 18)
    result = _oracle(out, chain, ThresholdModel.twoway_rbp(3), Property.IMMORTAL, "regular-chain(3,18)", max_size=10)
    out.expect(result.min_size is None, f"regular-chain(3,18): immortal set {sorted(result.witness or ())} of size {result.min_size}")
    out.measured["regular_chain_3_18"] = {"searched_up_to": result.exhausted_up_to, "subsets": result.examined, "found": result.min_size}
    return out


@check("implication-and-coupling", "monotone dynamo => dynamo, stable => immortal, and the step map preserves inclusion")
def check_implications(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng("implication-and-coupling")
    pairs = [(cg, m) for cg in ctx.small_graphs() for m in ctx.models if applicable(m, cg.graph)]
    out.expect(bool(pairs), "no applicable (graph, model) pairs")
    if not pairs:
        return out
    simulators: Dict[int, Simulator] = {}
    indeterminate = 0
    for _ in range(1000):
        index = int(rng.integers(len(pairs)))
        cg, m = pairs[index]
        sim = simulators.setdefault(index, Simulator(cg.graph, m))
        n = cg.graph.n
        bits = rng.random(n) < 0.5
        bits[int(rng.integers(n))] = True
        small = node_mask(np.flatnonzero(bits).tolist())
        large = small | node_mask(np.flatnonzero(rng.random(n) < 0.3).tolist())
        verdicts = {prop: quick_verdict(sim, prop, small) for prop in Property}
        indeterminate += sum(1 for v in verdicts.values() if v is None)
        label = f"{cg.name} {m.label} set={np.flatnonzero(bits).tolist()}"
        out.expect(not verdicts[Property.MONOTONE] or verdicts[Property.DYNAMO], f"{label}: monotone but not dynamo")
        out.expect(not verdicts[Property.STABLE] or verdicts[Property.IMMORTAL], f"{label}: stable but not immortal")
        if not m.two_way:
            out.expect(verdicts[Property.MONOTONE] == verdicts[Property.DYNAMO], f"{label}: one-way dynamo and monotone disagree")
        out.expect(sim.step_mask(small) & ~sim.step_mask(large) == 0, f"{label}: step does not preserve inclusion")
    out.expect(indeterminate == 0, f"{indeterminate} indeterminate verdicts")
    out.measured.update(queries=1000, indeterminate=indeterminate)
    return out


@check("two-way-termination", "two-way runs end in a fixed point or a 2-cycle within 4n + 16 rounds")
def check_termination(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng("two-way-termination")
    outcomes = {"fixed-point": 0, "cycle-2": 0, "other": 0}
    for cg in ctx.graphs:
        for m in ctx.models:
            if not m.two_way or not applicable(m, cg.graph):
                continue
            sim = Simulator(cg.graph, m)
            for _ in range(20):
                start = node_mask(np.flatnonzero(rng.random(cg.graph.n) < 0.5).tolist())
                trace = sim.run_mask(start)
                if trace.outcome is Outcome.FIXED_POINT:
                    outcomes["fixed-point"] += 1
                elif trace.outcome is Outcome.CYCLE and trace.period == 2:
                    outcomes["cycle-2"] += 1
                else:
                    outcomes["other"] += 1
                    out.expect(False, f"{cg.name} {m.label}: {trace.outcome.value} period {trace.period}")
    out.measured["outcomes"] = outcomes
    return out


@check("table-tightness", "the bound table's tight rows are met exactly on their witness graphs")
def check_table_tightness(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []

    def record(graph: str, model: ThresholdModel, prop: Property, minimum: Optional[int], **extra) -> None:
        rows.append({"graph": graph, "model": model.label, "property": prop.value, "min": minimum, **extra})

    # two-way r-BP on K_n: stable and monotone need r + 1, immortal needs r once n >= 2r
    for n in range(5, 9):
        g = gen_complete(n)
        flags = GraphFlags.of(g)
        for r in (1, 2, 3):
            m = ThresholdModel.twoway_rbp(r)
            stable, immortal = stable_immortal_bounds(m, flags)
            monotone = monotone_dynamo_lower(m, flags)
            for prop, bound in ((Property.STABLE, stable), (Property.MONOTONE, monotone)):
                minimum = _oracle(out, g, m, prop, f"K_{n}").min_size
                out.expect(minimum == r + 1, f"K_{n} r={r}: {prop.value} minimum {minimum}, expected {r + 1}")
                out.expect(bound.lower == minimum, f"K_{n} r={r}: {prop.value} lower {bound.lower} is not met")
                record(f"K_{n}", m, prop, minimum, lower=to_exact_value(bound.lower).exact)
            minimum = _oracle(out, g, m, Property.IMMORTAL, f"K_{n}").min_size
            expected = r if n >= 2 * r else r + 1
            out.expect(minimum == expected, f"K_{n} r={r}: immortal minimum {minimum}, expected {expected}")
            if n >= 2 * r:
                out.expect(immortal.lower == minimum, f"K_{n} r={r}: immortal lower {immortal.lower} is not met")
            record(f"K_{n}", m, Property.IMMORTAL, minimum, lower=to_exact_value(immortal.lower).exact)

    # alpha > 1/2 on a cycle: threshold 2, so one white node spreads
    for n in range(5, 10):
        g = gen_cycle(n)
        flags = GraphFlags.of(g)
        for alpha in (Fraction(3, 5), Fraction(4, 5)):
            m = ThresholdModel.twoway_alpha_bp(alpha)
            stable, immortal = stable_immortal_bounds(m, flags)
            targets = [(Property.DYNAMO, dynamo_bounds(m, flags)), (Property.STABLE, stable)]
            if n % 2:
                targets.append((Property.IMMORTAL, immortal))
            for prop, bound in targets:
                minimum = _oracle(out, g, m, prop, f"C_{n}").min_size
                out.expect(minimum == n, f"C_{n} alpha={alpha}: {prop.value} minimum {minimum}, expected {n}")
                out.expect(bound.upper == minimum, f"C_{n} alpha={alpha}: {prop.value} upper {bound.upper} is not met")
                record(f"C_{n}", m, prop, minimum, upper=to_exact_value(bound.upper).exact)

    # alpha <= 1/2 on a cycle: an adjacent pair is the smallest monotone dynamo
    for n in range(5, 9):
        g = gen_cycle(n)
        for alpha in (Fraction(1, 3), Fraction(1, 2)):
            m = ThresholdModel.twoway_alpha_bp(alpha)
            lower = monotone_dynamo_lower(m, GraphFlags.of(g)).lower
            minimum = _oracle(out, g, m, Property.MONOTONE, f"C_{n}").min_size
            out.expect(minimum == lower == 2, f"C_{n} alpha={alpha}: monotone minimum {minimum}, lower {lower}")
            out.expect(certify(g, m, (0, 1), Property.MONOTONE).verdict is True, f"C_{n} alpha={alpha}: edge is not a monotone dynamo")
            record(f"C_{n}", m, Property.MONOTONE, minimum, lower=to_exact_value(lower).exact)

    # alpha models on K_n
    for n in range(5, 9):
        g = gen_complete(n)
        for alpha in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
            floor = -(-alpha.numerator * n // alpha.denominator) - 1
            for m in (ThresholdModel.alpha_bp(alpha), ThresholdModel.twoway_alpha_bp(alpha)):
                minimum = _oracle(out, g, m, Property.DYNAMO, f"K_{n}").min_size
                out.expect(minimum >= floor, f"K_{n} {m.label}: dynamo minimum {minimum} < ceil(alpha n) - 1 = {floor}")
                record(f"K_{n}", m, Property.DYNAMO, minimum, floor=floor)
            m = ThresholdModel.twoway_alpha_bp(alpha)
            props = [Property.STABLE] + ([Property.IMMORTAL] if alpha <= Fraction(1, 2) else [])
            for prop in props:
                minimum = _oracle(out, g, m, prop, f"K_{n}").min_size
                out.expect(minimum >= alpha * (n - 1), f"K_{n} {m.label}: {prop.value} minimum {minimum} < alpha (n - 1)")
                record(f"K_{n}", m, prop, minimum, floor=str(alpha * (n - 1)))

    # the centre of a star
    star = gen_star(5)
    flags = GraphFlags.of(star)
    m = ThresholdModel.alpha_bp(Fraction(1, 2))
    minimum = _oracle(out, star, m, Property.DYNAMO, "star(5)").min_size
    out.expect(minimum == dynamo_bounds(m, flags).lower == 1, f"star(5) {m.label}: dynamo minimum {minimum}, expected 1")
    record("star(5)", m, Property.DYNAMO, minimum)
    m = ThresholdModel.twoway_alpha_bp(Fraction(1, 2))
    minimum = _oracle(out, star, m, Property.IMMORTAL, "star(5)").min_size
    out.expect(minimum == stable_immortal_bounds(m, flags)[1].lower == 1, f"star(5) {m.label}: immortal minimum {minimum}, expected 1")
    record("star(5)", m, Property.IMMORTAL, minimum)

    # r-regular: nothing short of V
    petersen = gen_petersen()
    m = ThresholdModel.twoway_rbp(3)
    stable, _ = stable_immortal_bounds(m, GraphFlags.of(petersen))
    for prop in (Property.STABLE, Property.MONOTONE):
        minimum = _oracle(out, petersen, m, prop, "petersen").min_size
        out.expect(minimum == petersen.n, f"petersen {m.label}: {prop.value} minimum {minimum}, expected {petersen.n}")
        record("petersen", m, prop, minimum)
    out.expect(stable.upper == petersen.n, f"petersen {m.label}: stable upper {stable.upper} is not n")

    out.measured["rows"] = rows
    return out


def _constructions(g: Graph, m: ThresholdModel, prop: Property, seed: int) -> List[Tuple[str, int, bool]]:
    """(name, size, certified) of every construction that applies to this query."""
    built = []
    if prop is Property.DYNAMO and not m.two_way:
        report = dynamo_by_labeling(g, m, seed=seed, samples=20)
        built.append(("labeling", report.size, report.certified))
    if prop is Property.DYNAMO and m.variant is Variant.TWO_WAY_RBP:
        if m.r == 1:
            report = dynamo_twoway_r1(g)
            built.append(("twoway-r1", report.size, report.certified))
        elif gunderson_condition(g.n, g.min_degree, m.r):
            report = dense_small_dynamo(g, m.r, seed=seed)
            built.append(("dense", report.size, report.certified))
    if prop is Property.STABLE and m.variant is Variant.TWO_WAY_ALPHA_BP and m.alpha <= Fraction(1, 2):
        report = stable_by_partition(g, m.alpha)
        built.append(("partition", report.size, report.certified))
    if prop is Property.IMMORTAL and m.variant is Variant.TWO_WAY_RBP and m.r == 2 and g.min_degree >= 2:
        report = immortal_r2(g)
        built.append(("immortal-r2", report.size, report.certified))
    return built


@check("oracle-vs-bounds", "exact minima lie between the closed-form bounds and never exceed a construction's size")
def check_oracle_vs_bounds(ctx: CorpusContext) -> CheckOutcome:
    out = CheckOutcome()
    rows = []
    for cg in ctx.small_graphs(get_settings().search_cap):
        g = cg.graph
        flags = GraphFlags.of(g)
        for m in ctx.models:
            if not applicable(m, g):
                continue
            stable, immortal = stable_immortal_bounds(m, flags)
            bound_for = {
                Property.DYNAMO: dynamo_bounds(m, flags),
                Property.MONOTONE: monotone_dynamo_lower(m, flags),
                Property.STABLE: stable,
                Property.IMMORTAL: immortal,
            }
            for prop in ctx.properties:
                label = f"{cg.name} {m.label} {prop.value}"
                minimum = _oracle(out, g, m, prop, label).min_size
                bound = bound_for[prop]
                out.expect(bound.contains(minimum), f"{label}: minimum {minimum} outside [{bound.lower}, {bound.upper}]")
                row = {
                    "graph": cg.name,
                    "model": m.label,
                    "property": prop.value,
                    "min": minimum,
                    "lower": to_exact_value(bound.lower).exact,
                    "upper": to_exact_value(bound.upper).exact if bound.upper is not None else None,
                }
                for name, size, certified in _constructions(g, m, prop, ctx.seed):
                    out.expect(certified, f"{label}: {name} construction not certified")
                    out.expect(size >= minimum, f"{label}: {name} construction size {size} below minimum {minimum}")
                    if name == "twoway-r1":
                        out.expect(size == minimum, f"{label}: two-way 1-BP construction size {size} != minimum {minimum}")
                    if name == "immortal-r2" and even_cycle(g):
                        out.expect(2 * size <= g.n, f"{label}: immortal-r2 size {size} > n/2 with an even cycle present")
                    row[name] = size
                rows.append(row)
    out.measured["rows"] = rows
    return out


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

def run_check(c: Check, ctx: CorpusContext) -> CheckResultModel:
    monitor = get_run_monitor()
    try:
        with monitor.timed(f"check:{c.id}"):
            outcome = c.run(ctx)
    except Exception as e:
        logger.error(f"❌ check {c.id} crashed: {e}")
        return CheckResultModel(id=c.id, passed=False, claim=c.claim, error=f"{type(e).__name__}: {e}")
    measured = dict(outcome.measured)
    if outcome.failure_count > len(outcome.failures):
        measured["failure_count"] = outcome.failure_count
    passed = outcome.failure_count == 0
    logger.info(f"{'✅' if passed else '❌'} {c.id}")
    return CheckResultModel(id=c.id, passed=passed, claim=c.claim, measured=measured, failures=outcome.failures)


def select_checks(ids: Sequence[str]) -> List[Check]:
    if not ids:
        return [CHECKS[i] for i in sorted(CHECKS)]
    unknown = sorted(set(ids) - set(CHECKS))
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    return [CHECKS[i] for i in sorted(set(ids))]


def run_corpus(
    spec: CorpusSpec,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    progress: bool = False,
) -> Tuple[List[CheckResultModel], CorpusContext]:
    """Run the selected checks in parallel; results come back sorted by id."""
    ctx = build_context(spec, seed)
    checks = select_checks(spec.checks)
    workers = max(1, workers if workers is not None else get_settings().workers)
    results: Dict[str, CheckResultModel] = {}
    with Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TimeElapsedColumn(),
        transient=True,
        disable=not progress,
    ) as bar:
        task = bar.add_task("corpus checks", total=len(checks))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_check, c, ctx): c.id for c in checks}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
                bar.update(task, advance=1, description=f"done: {futures[future]}")
    return [results[i] for i in sorted(results)], ctx


def write_report(results: List[CheckResultModel], ctx: CorpusContext, stream: TextIO) -> None:
    """JSON lines: one object per check, then a summary whose environment field holds timings."""
    for result in results:
        stream.write(result.model_dump_json() + "\n")
    failed = [r.id for r in results if not r.passed]
    summary = {
        "summary": {
            "checks": len(results),
            "passed": len(results) - len(failed),
            "failed": failed,
            "seed": ctx.seed,
            "graphs": [{"name": cg.name, "seed": cg.seed} for cg in ctx.graphs],
            "models": [m.label for m in ctx.models],
        },
        "environment": get_run_monitor().summary(),
    }
    stream.write(json.dumps(summary) + "\n")
