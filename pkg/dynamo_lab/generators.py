"""
Graph generators
명명된 그래프 패밀리와 tightness construction
"""

import inspect
import logging
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, Tuple, Union

import networkx as nx
import numpy as np

from .errors import InfeasibleParametersError, UsageError
from .graph import Edge, Graph

logger = logging.getLogger(__name__)

Rational = Union[Fraction, str, int]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InfeasibleParametersError(message)


def as_alpha(alpha: Rational) -> Fraction:
    """'p/q' 문자열 또는 Fraction -> 0 < α < 1 검증된 Fraction"""
    try:
        value = Fraction(alpha)
    except (ValueError, ZeroDivisionError):
        raise InfeasibleParametersError(f"alpha {alpha!r} is not a rational p/q") from None
    _require(0 < value < 1, f"alpha must satisfy 0 < alpha < 1, got {value}")
    return value


def gen_complete(n: int) -> Graph:
    _require(n >= 2, f"complete graph needs n >= 2, got {n}")
    return Graph.from_edges(n, combinations(range(n), 2))


def gen_cycle(n: int) -> Graph:
    _require(n >= 3, f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def gen_star(n: int) -> Graph:
    """Centre 0 with leaves 1..n (n + 1 nodes)."""
    _require(n >= 2, f"star needs n >= 2 leaves, got {n}")
    return Graph.from_edges(n + 1, [(0, leaf) for leaf in range(1, n + 1)])


def gen_path(n: int) -> Graph:
    _require(n >= 2, f"path needs n >= 2, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gen_petersen() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


def gen_complete_minus_matching(n: int) -> Graph:
    """K_n without the perfect matching {2i, 2i+1}."""
    _require(n >= 4 and n % 2 == 0, f"complete minus matching needs even n >= 4, got {n}")
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if not (u % 2 == 0 and v == u + 1)])


def gen_clique_with_leaves(k: int, n: int) -> Graph:
    """Clique 0..k-1, each clique node with n/k - 1 private leaves."""
    _require(k >= 2, f"clique size must be >= 2, got {k}")
    _require(n >= k and n % k == 0, f"clique size {k} must divide n={n}")
    leaves_each = n // k - 1
    edges: List[Edge] = list(combinations(range(k), 2))
    leaf = k
    for centre in range(k):
        for _ in range(leaves_each):
            edges.append((centre, leaf))
            leaf += 1
    return Graph.from_edges(n, edges)


def _circulant_edges(first: int, size: int, r: int) -> List[Edge]:
    offsets = list(range(1, r // 2 + 1))
    if r % 2 == 1:
        offsets.append(size // 2)
    edges = set()
    for i in range(size):
        for off in offsets:
            u, v = first + i, first + (i + off) % size
            edges.add((min(u, v), max(u, v)))
    return sorted(edges)


def regular_chain_layout(r: int, n: int) -> Tuple[int, int]:
    """(K, ℓ): clique 수와 r-regular tail 크기. 불가능하면 InfeasibleParametersError"""
    _require(r >= 3, f"regular chain needs r >= 3, got {r}")
    n_even = n if n % 2 == 0 else n - 1
    k = n_even // (r + 1) - 1
    _require(k >= 1, f"n={n} too small for r={r}: needs at least {2 * (r + 1)} nodes")
    if n % 2 == 1:
        _require(k >= r, f"odd n={n} needs at least r={r} cliques, got {k}")
    return k, n_even - k * (r + 1)


def gen_regular_chain(r: int, n: int) -> Graph:
    """Chain of K cliques K_{r+1} minus {v_i^(1), v_i^(2)}, closed by an r-regular tail.

    Clique i occupies ids i(r+1)..i(r+1)+r with v^(1) = i(r+1), v^(2) = i(r+1)+1.
    v_i^(2) is joined to v_{i+1}^(1). The tail is a circulant on the last ℓ ids
    with edge {t0, t1} removed and t0 -> v_1^(1), t1 -> v_K^(2) attached.
    Odd n adds node n-1 joined to v_i^(2) for the first r cliques.
    """
    k, ell = regular_chain_layout(r, n)
    n_even = n if n % 2 == 0 else n - 1
    edges: List[Edge] = []
    for i in range(k):
        base = i * (r + 1)
        edges.extend((u, v) for u, v in combinations(range(base, base + r + 1), 2) if (u, v) != (base, base + 1))
        if i + 1 < k:
            edges.append((base + 1, base + r + 1))
    tail = k * (r + 1)
    t0, t1 = tail, tail + 1
    edges.extend(e for e in _circulant_edges(tail, ell, r) if e != (t0, t1))
    edges.append((0, t0))
    edges.append(((k - 1) * (r + 1) + 1, t1))
    if n != n_even:
        w = n - 1
        edges.extend((i * (r + 1) + 1, w) for i in range(r))
    logger.debug(f"regular chain r={r} n={n}: K={k} cliques, tail of {ell} nodes")
    return Graph.from_edges(n, edges)


def stable_tight_core_size(alpha: Rational) -> int:
    """⌈1/(1-α)⌉"""
    a = as_alpha(alpha)
    return -(-a.denominator // (a.denominator - a.numerator))


def gen_stable_tight(alpha: Rational, n: int) -> Graph:
    """V_2 = clique on 0..c-1 (c = ⌈1/(1-α)⌉), V_1 = path on c..n-1, bridge {0, c}."""
    c = stable_tight_core_size(alpha)
    _require(c + 1 <= n, f"n={n} too small, needs at least {c + 1} nodes for alpha={Fraction(alpha)}")
    edges: List[Edge] = list(combinations(range(c), 2))
    edges.extend((v, v + 1) for v in range(c, n - 1))
    edges.append((0, c))
    return Graph.from_edges(n, edges)


def sample_random_connected(n: int, p: float, seed: int, max_attempts: int = 1000) -> Tuple[Graph, int]:
    """G(n, p) 샘플을 연결될 때까지 rejection sampling. (graph, 실제 사용된 seed)"""
    _require(n >= 2, f"random graph needs n >= 2, got {n}")
    _require(0 < p <= 1, f"edge probability must be in (0, 1], got {p}")
    for attempt in range(max_attempts):
        candidate = nx.gnp_random_graph(n, p, seed=seed + attempt)
        if nx.is_connected(candidate):
            if attempt:
                logger.debug(f"G({n}, {p}) connected after {attempt + 1} samples (seed {seed + attempt})")
            return Graph.from_networkx(candidate), seed + attempt
    raise InfeasibleParametersError(f"no connected G({n}, {p}) within {max_attempts} samples from seed {seed}")


def gen_random_connected(n: int, p: float, seed: int = 0) -> Graph:
    return sample_random_connected(n, p, seed)[0]


def gen_random_tree(n: int, seed: int = 0) -> Graph:
    """Uniform random labelled tree from a Prüfer sequence."""
    _require(n >= 2, f"tree needs n >= 2, got {n}")
    if n == 2:
        return gen_path(2)
    rng = np.random.default_rng(seed)
    sequence = rng.integers(0, n, size=n - 2).tolist()
    return Graph.from_networkx(nx.from_prufer_sequence(sequence))


GENERATORS: Dict[str, Callable[..., Graph]] = {
    "complete": gen_complete,
    "cycle": gen_cycle,
    "star": gen_star,
    "path": gen_path,
    "petersen": gen_petersen,
    "complete-minus-matching": gen_complete_minus_matching,
    "clique-with-leaves": gen_clique_with_leaves,
    "regular-chain": gen_regular_chain,
    "stable-tight": gen_stable_tight,
    "random-connected": gen_random_connected,
    "random-tree": gen_random_tree,
}


def generator_params(name: str) -> List[str]:
    return list(inspect.signature(_lookup(name)).parameters)


def _lookup(name: str) -> Callable[..., Graph]:
    try:
        return GENERATORS[name]
    except KeyError:
        raise UsageError(f"unknown generator {name!r}; choose from {', '.join(sorted(GENERATORS))}") from None


def generate(name: str, **params: Any) -> Graph:
    """이름과 키워드 파라미터로 생성기 호출"""
    fn = _lookup(name)
    signature = inspect.signature(fn)
    unknown = sorted(set(params) - set(signature.parameters))
    if unknown:
        raise UsageError(f"generator {name!r} does not take {', '.join(unknown)}")
    missing = [p.name for p in signature.parameters.values() if p.default is inspect.Parameter.empty and p.name not in params]
    if missing:
        raise UsageError(f"generator {name!r} needs {', '.join(missing)}")
    return fn(**params)
