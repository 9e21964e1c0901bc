"""Undirected simple graphs: representation, edge-list I/O and random instances."""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, TextIO, Tuple, Union
import io
import logging

import networkx as nx
import numpy as np

from .errors import InputError

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on nodes 0..n-1.

    adjacency[v] is the ascending tuple of v's neighbours.
    """
    n: int
    adjacency: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        if n < 0:
            raise InputError(f"node count must be non-negative, got {n}")
        neighbors: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
            neighbors[u].add(v)
            neighbors[v].add(u)
        return cls(n, tuple(tuple(sorted(nbrs)) for nbrs in neighbors))

    @cached_property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @cached_property
    def neighbor_masks(self) -> Tuple[int, ...]:
        """Neighbourhoods as bitmasks, for subset arithmetic."""
        masks = []
        for nbrs in self.adjacency:
            mask = 0
            for v in nbrs:
                mask |= 1 << v
            masks.append(mask)
        return tuple(masks)

    def edges(self) -> List[Edge]:
        """Edges with u < v in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return (self.neighbor_masks[u] >> v) & 1 == 1

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


def degree_sequence(g: Graph) -> List[int]:
    """Node degrees in ascending order (d_1 <= ... <= d_n)."""
    return sorted(g.degrees)


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return nx.is_connected(g.to_networkx())


def parse_edge_list(text: Union[str, TextIO]) -> Graph:
    """Parse "u v" lines into a Graph.

    '#' lines are comments; a "# n=<count>" comment fixes the node count so
    isolated nodes can be declared. Without it every id in 0..max_id must
    occur in some edge.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    declared_n: Optional[int] = None
    edges: List[Edge] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = line[1:].strip()
            if header.startswith("n="):
                try:
                    declared_n = int(header[2:])
                except ValueError:
                    raise InputError(f"invalid node count header at line {lineno}: {line!r}")
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputError(f"expected two node ids at line {lineno}, got {len(tokens)} tokens")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise InputError(f"non-integer node id at line {lineno}: {line!r}")
        if u < 0 or v < 0:
            raise InputError(f"negative node id at line {lineno}")
        if u == v:
            raise InputError(f"self-loop at line {lineno}")
        edges.append((u, v))

    max_id = max((max(e) for e in edges), default=-1)
    if declared_n is not None:
        if max_id >= declared_n:
            raise InputError(f"node id {max_id} exceeds declared node count {declared_n}")
        n = declared_n
    else:
        n = max_id + 1
        seen = {u for e in edges for u in e}
        missing = sorted(set(range(n)) - seen)
        if missing:
            raise InputError(f"node ids must be dense; missing id {missing[0]}")
    return Graph.from_edges(n, edges)


def read_edge_list(path) -> Graph:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return parse_edge_list(f)
    except UnicodeDecodeError as e:
        raise InputError(f"graph file {path} is not valid UTF-8: {e}")


def to_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def check_seed(seed: int) -> int:
    if not 0 <= int(seed) <= MAX_SEED:
        raise InputError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def _random_tree_edges(n: int, rng: np.random.Generator) -> List[Edge]:
    # Uniform over labelled trees via a uniform Prufer sequence.
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    prufer = rng.integers(0, n, size=n - 2).tolist()
    tree = nx.from_prufer_sequence(prufer)
    return [(min(u, v), max(u, v)) for u, v in tree.edges()]


def gen_random_tree(n: int, seed: int) -> Graph:
    if n < 1:
        raise InputError(f"tree needs at least one node, got n={n}")
    rng = np.random.default_rng(check_seed(seed))
    return Graph.from_edges(n, _random_tree_edges(n, rng))


def gen_random_connected(n: int, m: int, seed: int) -> Graph:
    """Random tree plus m-(n-1) uniformly chosen absent edges."""
    if n < 1:
        raise InputError(f"graph needs at least one node, got n={n}")
    max_edges = n * (n - 1) // 2
    if not n - 1 <= m <= max_edges:
        raise InputError(f"edge count {m} outside [{n - 1}, {max_edges}] for n={n}")
    rng = np.random.default_rng(check_seed(seed))

    present = set(_random_tree_edges(n, rng))
    extra = m - len(present)
    if extra > 0:
        if m * 2 > max_edges:
            absent = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
            chosen = rng.choice(len(absent), size=extra, replace=False)
            present.update(absent[i] for i in sorted(chosen.tolist()))
        else:
            while extra > 0:
                u, v = rng.integers(0, n, size=2).tolist()
                if u == v:
                    continue
                pair = (min(u, v), max(u, v))
                if pair in present:
                    continue
                present.add(pair)
                extra -= 1
    logger.debug(f"Generated connected graph n={n} m={m} seed={seed}")
    return Graph.from_edges(n, sorted(present))


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); the result may be disconnected."""
    if n < 1:
        raise InputError(f"graph needs at least one node, got n={n}")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(check_seed(seed))
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    return Graph.from_edges(n, zip(rows[keep].tolist(), cols[keep].tolist()))
