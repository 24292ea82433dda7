"""
Exhaustive minimum set search
크기 오름차순, 같은 크기 안에서는 사전순으로 부분집합을 인증하는 brute-force oracle
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

from .certify import Property, quick_verdict
from .config import get_settings
from .dynamics import Simulator, ThresholdModel
from .errors import PreconditionError, SearchCapExceeded
from .graph import Graph, NodeSet, node_mask
from .monitor import get_run_monitor
from .schemas import AllSetsModel, SearchResultModel

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class SearchResult:
    """Lexicographically first certified set of minimum size."""

    property: Property
    model: ThresholdModel
    n: int
    min_size: Optional[int]
    witness: Optional[NodeSet]
    examined: int
    exhausted_up_to: int
    indeterminate: int = 0

    def to_model(self) -> SearchResultModel:
        return SearchResultModel(
            property=self.property.value,
            model=self.model.label,
            n=self.n,
            min_size=self.min_size,
            witness=sorted(self.witness) if self.witness is not None else None,
            examined=self.examined,
            exhausted_up_to=self.exhausted_up_to,
            indeterminate=self.indeterminate,
        )


def default_cap(prop: Property) -> int:
    settings = get_settings()
    return settings.immortal_search_cap if prop is Property.IMMORTAL else settings.search_cap


def _check_cap(g: Graph, prop: Property, cap: Optional[int]) -> None:
    cap = cap if cap is not None else default_cap(prop)
    if g.n > cap:
        raise SearchCapExceeded(g.n, cap)


def _batches(n: int, size: int, batch_size: int) -> Iterator[List[Subset]]:
    subsets = combinations(range(n), size)
    while True:
        batch = list(islice(subsets, batch_size))
        if not batch:
            return
        yield batch


def _scan_batch(sim: Simulator, prop: Property, batch: Sequence[Subset]) -> Tuple[Optional[int], int]:
    """(index of the first certified subset, budget overruns before it)"""
    indeterminate = 0
    for i, subset in enumerate(batch):
        verdict = quick_verdict(sim, prop, node_mask(subset))
        if verdict is True:
            return i, indeterminate
        if verdict is None:
            indeterminate += 1
    return None, indeterminate


def _first_of_size(sim: Simulator, prop: Property, size: int, workers: int, batch_size: int) -> Tuple[Optional[Subset], int, int]:
    """(witness, its lexicographic rank within the size, budget overruns before it)"""
    monitor = get_run_monitor()
    batches = _batches(sim.g.n, size, batch_size)
    offset = 0
    indeterminate = 0
    with ThreadPoolExecutor(max_workers=workers) as executor:
        while True:
            wave = list(islice(batches, workers))
            if not wave:
                return None, offset, indeterminate
            results = list(executor.map(lambda batch: _scan_batch(sim, prop, batch), wave))
            monitor.increment("search_batches", len(wave))
            # waves are merged in batch order so the witness never depends on scheduling
            for batch, (index, overruns) in zip(wave, results):
                indeterminate += overruns
                if index is not None:
                    return batch[index], offset + index, indeterminate
                offset += len(batch)


def min_set(
    g: Graph,
    m: ThresholdModel,
    prop: Property,
    cap: Optional[int] = None,
    max_size: Optional[int] = None,
    workers: Optional[int] = None,
    limit: Optional[int] = None,
) -> SearchResult:
    """Smallest certified set; with max_size, stops after that size and may report none."""
    prop = Property(prop)
    _check_cap(g, prop, cap)
    settings = get_settings()
    workers = max(1, workers if workers is not None else settings.workers)
    sim = Simulator(g, m, limit)
    last = g.n if max_size is None else min(max_size, g.n)
    if last < 1:
        raise PreconditionError(f"max_size must be >= 1, got {max_size}")

    examined = 0
    indeterminate = 0
    for size in range(1, last + 1):
        logger.info(f"🔍 {prop.value} search under {m.label}: size {size}, {comb(g.n, size)} subsets")
        witness, rank, overruns = _first_of_size(sim, prop, size, workers, settings.batch_size)
        indeterminate += overruns
        if witness is not None:
            get_run_monitor().increment("subset_checks", examined + rank + 1)
            return SearchResult(prop, m, g.n, size, frozenset(witness), examined + rank + 1, size - 1, indeterminate)
        examined += comb(g.n, size)

    get_run_monitor().increment("subset_checks", examined)
    logger.info(f"no {prop.value} set of size <= {last} under {m.label}")
    return SearchResult(prop, m, g.n, None, None, examined, last, indeterminate)


def all_min_sets(
    g: Graph,
    m: ThresholdModel,
    prop: Property,
    size: int,
    cap: Optional[int] = None,
    limit: Optional[int] = None,
) -> List[NodeSet]:
    """Every certified subset of exactly the given size, in lexicographic order."""
    prop = Property(prop)
    _check_cap(g, prop, cap)
    if not 1 <= size <= g.n:
        raise PreconditionError(f"size must be in 1..{g.n}, got {size}")
    sim = Simulator(g, m, limit)
    found = [frozenset(s) for s in combinations(range(g.n), size) if quick_verdict(sim, prop, node_mask(s)) is True]
    get_run_monitor().increment("subset_checks", comb(g.n, size))
    return found


def all_sets_model(m: ThresholdModel, prop: Property, size: int, sets: List[NodeSet]) -> AllSetsModel:
    return AllSetsModel(property=Property(prop).value, model=m.label, size=size, count=len(sets), sets=[sorted(s) for s in sets])
