"""
Graph core for dynamo-lab
단순 무방향 그래프, 노드 집합 bitmask, edge-list 입출력
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import GraphParseError, GraphStructureError, PreconditionError, UsageError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
NodeSet = FrozenSet[int]


def node_mask(nodes: Iterable[int]) -> int:
    """노드 집합 -> bitmask"""
    mask = 0
    for v in nodes:
        mask |= 1 << v
    return mask


def mask_nodes(mask: int) -> List[int]:
    """bitmask -> 정렬된 노드 목록"""
    nodes = []
    v = 0
    while mask:
        if mask & 1:
            nodes.append(v)
        mask >>= 1
        v += 1
    return nodes


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0..n-1.

    Neighbour sets are stored twice: as frozensets for readable code and as
    int bitmasks for the simulation inner loop.
    """

    n: int
    adjacency: Tuple[FrozenSet[int], ...]
    masks: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "masks", tuple(node_mask(nb) for nb in self.adjacency))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], require_connected: bool = True) -> "Graph":
        if n < 1:
            raise GraphStructureError(f"graph needs at least one node, got n={n}")
        neighbours: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphStructureError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphStructureError(f"self-loop at node {u}")
            if v in neighbours[u]:
                raise GraphStructureError(f"duplicate edge ({u}, {v})")
            neighbours[u].add(v)
            neighbours[v].add(u)
        g = cls(n, tuple(frozenset(nb) for nb in neighbours))
        if require_connected and not g.is_connected():
            raise GraphStructureError(f"graph with n={n} is disconnected")
        return g

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, require_connected: bool = True) -> "Graph":
        relabelled = nx.convert_node_labels_to_integers(nx_graph, ordering="sorted")
        return cls.from_edges(relabelled.number_of_nodes(), relabelled.edges(), require_connected)

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.n))
        nx_graph.add_edges_from(self.edges())
        return nx_graph

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> List[int]:
        return [len(nb) for nb in self.adjacency]

    @property
    def min_degree(self) -> int:
        return min(self.degrees())

    @property
    def max_degree(self) -> int:
        return max(self.degrees())

    @property
    def m(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> List[Edge]:
        """(u, v), u < v, 사전순 정렬"""
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree_into(self, v: int, nodes: Iterable[int]) -> int:
        """d_S(v): S 안의 이웃 수"""
        return (self.masks[v] & node_mask(nodes)).bit_count()

    def is_connected(self) -> bool:
        return len(_bfs_order(self, 0)) == self.n

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def check_nodes(self, nodes: Iterable[int]) -> NodeSet:
        """노드 집합 검증 후 frozenset 반환"""
        members = frozenset(nodes)
        for v in members:
            if not 0 <= v < self.n:
                raise PreconditionError(f"node {v} is not in a graph with n={self.n}")
        return members

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1


def _bfs_order(g: Graph, root: int) -> List[int]:
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(g.adjacency[u]):
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order


def edge_boundary_mask(g: Graph, mask: int) -> int:
    outside = g.full_mask & ~mask
    return sum((g.masks[v] & outside).bit_count() for v in mask_nodes(mask))


def edge_boundary(g: Graph, a: Iterable[int]) -> int:
    """|∂(A)|: 정확히 한 끝점만 A에 속한 간선 수"""
    return edge_boundary_mask(g, node_mask(g.check_nodes(a)))


def edges_inside(g: Graph, a: Iterable[int]) -> int:
    mask = node_mask(g.check_nodes(a))
    return sum((g.masks[v] & mask).bit_count() for v in mask_nodes(mask)) // 2


def _two_colouring(g: Graph):
    """BFS 2-colouring. 충돌 간선(같은 색 끝점)이 처음 발견되면 함께 반환"""
    colour: Dict[int, int] = {}
    parent: Dict[int, Optional[int]] = {}
    for root in range(g.n):
        if root in colour:
            continue
        colour[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in sorted(g.adjacency[u]):
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    parent[v] = u
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return colour, parent, (u, v)
    return colour, parent, None


def bipartition(g: Graph) -> Optional[Tuple[NodeSet, NodeSet]]:
    """(U, W) with node 0 in U, or None when g has an odd cycle."""
    colour, _, conflict = _two_colouring(g)
    if conflict is not None:
        return None
    u_side = frozenset(v for v, c in colour.items() if c == 0)
    w_side = frozenset(v for v, c in colour.items() if c == 1)
    return u_side, w_side


def find_odd_cycle(g: Graph) -> List[int]:
    """Odd simple cycle v_1..v_{2k+1}; the edge back to v_1 is implied."""
    _, parent, conflict = _two_colouring(g)
    if conflict is None:
        raise GraphStructureError("graph is bipartite and has no odd cycle")
    u, v = conflict
    ancestors_u = [u]
    while parent[ancestors_u[-1]] is not None:
        ancestors_u.append(parent[ancestors_u[-1]])
    on_u_path = {node: i for i, node in enumerate(ancestors_u)}
    path_v = [v]
    while path_v[-1] not in on_u_path:
        path_v.append(parent[path_v[-1]])
    lca = path_v[-1]
    cycle = ancestors_u[: on_u_path[lca] + 1] + list(reversed(path_v[:-1]))
    logger.debug(f"odd cycle of length {len(cycle)} through edge ({u}, {v})")
    return cycle


# ---------------------------------------------------------------------------
# edge-list I/O
# ---------------------------------------------------------------------------

def _parse_int_pair(line: str, line_no: int) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphParseError(f"expected two integers, got {line!r}", line_no)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"expected two integers, got {line!r}", line_no) from None


def load_graph(text: str, require_connected: bool = True) -> Graph:
    """Parse the edge-list format: "n m" then m lines "u v"; '#' lines are comments."""
    header: Optional[Tuple[int, int]] = None
    edges: List[Edge] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        pair = _parse_int_pair(line, line_no)
        if header is None:
            if pair[0] < 1 or pair[1] < 0:
                raise GraphParseError(f"invalid header {line!r}", line_no)
            header = pair
            continue
        if len(edges) == header[1]:
            raise GraphParseError(f"more than the declared {header[1]} edges", line_no)
        edges.append(pair)
    if header is None:
        raise GraphParseError("missing 'n m' header line")
    if len(edges) != header[1]:
        raise GraphParseError(f"declared {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges, require_connected=require_connected)


def dump_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path]) -> Graph:
    path = Path(path)
    logger.debug(f"loading graph from {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise GraphParseError(f"{path} is not UTF-8 text") from None
    except OSError as e:
        raise UsageError(f"cannot read graph file {path}: {e.strerror or e}") from None
    return load_graph(text)


def write_graph(g: Graph, path: Union[str, Path], comments: Sequence[str] = ()) -> None:
    Path(path).write_text(dump_graph(g, comments), encoding="utf-8")
