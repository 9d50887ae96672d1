"""Directed compartment graphs: structure, predicates, cycles, and surgery.

Vertices are labeled 1..n and vertex 1 is always the input-output
compartment. An edge (j, i) means material flows j -> i and carries the rate
parameter a_ij (target index first, matching the matrix convention). Every
vertex additionally carries an implicit diagonal parameter a_ii, so a graph
with n vertices and m edges has n+m model parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

from .errors import InvalidEdge, MalformedInput, NoExchange

#: An ISC certificate is a vertex ordering starting at 1 whose every prefix
#: induces a strongly connected subgraph.
IscCertificate = tuple[int, ...]


@dataclass(frozen=True)
class CompartmentGraph:
    """A directed graph with a distinguished input-output vertex 1.

    `edges` is an ordered tuple of (source, target) pairs; the order fixes
    the column order of derived matrices and the parameter order.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidEdge(f"vertex count must be positive, got {self.n}")
        object.__setattr__(self, "edges", tuple((int(j), int(i)) for j, i in self.edges))
        seen = set()
        for j, i in self.edges:
            if not (1 <= j <= self.n and 1 <= i <= self.n):
                raise InvalidEdge(f"edge ({j},{i}) out of range for n={self.n}")
            if j == i:
                raise InvalidEdge(f"self-loop at vertex {j}")
            if (j, i) in seen:
                raise InvalidEdge(f"duplicate edge ({j},{i})")
            seen.add((j, i))

    @property
    def m(self) -> int:
        return len(self.edges)

    def successors(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in range(self.n + 1)]
        for j, i in self.edges:
            succ[j].append(i)
        return succ

    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in range(self.n + 1)]
        for j, i in self.edges:
            pred[i].append(j)
        return pred

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    def edge_param_name(self, k: int) -> str:
        """Parameter name of the k-th edge: edge (j, i) carries a_ij."""
        j, i = self.edges[k]
        return f"a{i}{j}"

    def param_names(self) -> list[str]:
        """All n+m parameter names: diagonals first, then edges in order."""
        return [f"a{v}{v}" for v in range(1, self.n + 1)] + [
            self.edge_param_name(k) for k in range(self.m)
        ]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})


def parse_graph(text: str) -> CompartmentGraph:
    """Parse the graph JSON document ``{"n": int, "edges": [[j, i], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise MalformedInput('expected an object with keys "n" and "edges"')
    n = doc["n"]
    edges = doc["edges"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedInput('"n" must be an integer')
    if not isinstance(edges, list):
        raise MalformedInput('"edges" must be a list of [source, target] pairs')
    pairs = []
    for e in edges:
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)
        ):
            raise MalformedInput(f"bad edge entry {e!r}")
        pairs.append((e[0], e[1]))
    return CompartmentGraph(n, tuple(pairs))


def _reachable(adj: Sequence[Sequence[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_strongly_connected(graph: CompartmentGraph) -> bool:
    """True iff every vertex is reachable from 1 and reaches 1."""
    if graph.n == 1:
        return True
    fwd = _reachable(graph.successors(), 1)
    if len(fwd) != graph.n:
        return False
    return len(_reachable(graph.predecessors(), 1)) == graph.n


def io_strong_component(graph: CompartmentGraph) -> CompartmentGraph:
    """Induced subgraph on the strongly connected component of vertex 1.

    Vertices are relabeled to 1..n' preserving relative order (vertex 1
    stays fixed); edge order is inherited from the input.
    """
    comp = _reachable(graph.successors(), 1) & _reachable(graph.predecessors(), 1)
    if len(comp) == graph.n:
        return graph
    relabel = {v: k + 1 for k, v in enumerate(sorted(comp))}
    edges = tuple(
        (relabel[j], relabel[i]) for j, i in graph.edges if j in comp and i in comp
    )
    return CompartmentGraph(len(comp), edges)


def has_exchange(graph: CompartmentGraph) -> Optional[int]:
    """Smallest vertex i > 1 with both 1->i and i->1 present, if any."""
    present = set(graph.edges)
    for i in range(2, graph.n + 1):
        if (1, i) in present and (i, 1) in present:
            return i
    return None


def exchange_vertices(graph: CompartmentGraph) -> list[int]:
    """All vertices forming a 2-cycle with vertex 1, in increasing order."""
    present = set(graph.edges)
    return [
        i for i in range(2, graph.n + 1) if (1, i) in present and (i, 1) in present
    ]


def _induced_strongly_connected(graph: CompartmentGraph, vertices: Sequence[int]) -> bool:
    vset = set(vertices)
    succ = {v: [] for v in vset}
    pred = {v: [] for v in vset}
    for j, i in graph.edges:
        if j in vset and i in vset:
            succ[j].append(i)
            pred[i].append(j)

    def covers(adj):
        start = vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(vset)

    return covers(succ) and covers(pred)


def is_inductively_strongly_connected(
    graph: CompartmentGraph,
) -> Optional[IscCertificate]:
    """Search for a vertex ordering witnessing inductive strong connectivity.

    Backtracks over extensions of the prefix (1, ...), testing each prefix
    for strong connectivity; greedy extension alone is not known to be
    complete. Returns the lexicographically smallest certificate, or None.
    """
    n = graph.n
    if n == 1:
        return (1,)

    prefix = [1]
    remaining = set(range(2, n + 1))

    def extend() -> bool:
        if not remaining:
            return True
        for v in sorted(remaining):
            prefix.append(v)
            remaining.discard(v)
            if _induced_strongly_connected(graph, prefix) and extend():
                return True
            prefix.pop()
            remaining.add(v)
        return False

    return tuple(prefix) if extend() else None


def collapse_exchange(
    graph: CompartmentGraph, at: Optional[int] = None
) -> CompartmentGraph:
    """Identify vertex 1 with an exchange partner.

    The merged vertex becomes the new vertex 1; remaining vertices are
    relabeled preserving relative order. Self-loops created by the merge are
    dropped and duplicate edges keep their first occurrence. By default the
    smallest exchange vertex is collapsed; `at` selects another one.
    """
    if at is None:
        at = has_exchange(graph)
        if at is None:
            raise NoExchange("graph has no exchange")
    else:
        present = set(graph.edges)
        if not ((1, at) in present and (at, 1) in present):
            raise NoExchange(f"no exchange at vertex {at}")

    def relabel(v: int) -> int:
        if v in (1, at):
            return 1
        return v - 1 if v > at else v

    edges = []
    seen = set()
    for j, i in graph.edges:
        e = (relabel(j), relabel(i))
        if e[0] == e[1] or e in seen:
            continue
        seen.add(e)
        edges.append(e)
    return CompartmentGraph(graph.n - 1, tuple(edges))


def add_exchange_vertex(graph: CompartmentGraph) -> CompartmentGraph:
    """Attach a fresh input-output vertex by a 2-cycle to the old vertex 1.

    Old vertex labels shift up by one; the exchange edges come first in the
    new edge order, so collapsing the new exchange recovers the original
    graph with its original edge order.
    """
    shifted = tuple((j + 1, i + 1) for j, i in graph.edges)
    return CompartmentGraph(graph.n + 1, ((1, 2), (2, 1)) + shifted)


@dataclass(frozen=True)
class Cycle:
    """An elementary directed cycle, including the length-1 diagonal cycles.

    `vertices` lists the traversal order rotated so the smallest vertex
    leads; `exponent_vector` marks the traversed edges (all zero for a
    one-cycle, whose monomial is the diagonal parameter).
    """

    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]
    exponent_vector: tuple[int, ...]
    monomial: str

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def sign(self) -> int:
        """+1 for odd length, -1 for even length."""
        return 1 if len(self.vertices) % 2 == 1 else -1


CycleSet = list[Cycle]


def _make_cycle(graph: CompartmentGraph, vertices: tuple[int, ...]) -> Cycle:
    if len(vertices) == 1:
        v = vertices[0]
        return Cycle(vertices, (), (0,) * graph.m, f"a{v}{v}")
    index = graph.edge_index()
    edge_ids = []
    for k, u in enumerate(vertices):
        w = vertices[(k + 1) % len(vertices)]
        edge_ids.append(index[(u, w)])
    expo = [0] * graph.m
    for e in edge_ids:
        expo[e] = 1
    names = sorted(graph.edge_param_name(e) for e in edge_ids)
    return Cycle(vertices, tuple(edge_ids), tuple(expo), "*".join(names))


def elementary_cycles(graph: CompartmentGraph) -> CycleSet:
    """All elementary directed cycles plus the n one-cycles.

    Each cycle of length >= 2 is reported once, rotated so its smallest
    vertex leads. Order is deterministic: by length, then lexicographic
    vertex sequence; the one-cycles come first.
    """
    succ = graph.successors()
    for lst in succ:
        lst.sort()
    found: list[tuple[int, ...]] = []

    def search(start: int, path: list[int], on_path: set[int]):
        for w in succ[path[-1]]:
            if w == start:
                found.append(tuple(path))
            elif w > start and w not in on_path:
                path.append(w)
                on_path.add(w)
                search(start, path, on_path)
                on_path.discard(w)
                path.pop()

    for s in range(1, graph.n + 1):
        search(s, [s], {s})

    found.sort(key=lambda vs: (len(vs), vs))
    cycles = [_make_cycle(graph, (v,)) for v in range(1, graph.n + 1)]
    cycles.extend(_make_cycle(graph, vs) for vs in found)
    return cycles


def incidence_matrix(graph: CompartmentGraph) -> list[list[int]]:
    """The n-by-m directed incidence matrix.

    The column for edge j -> i has +1 in row j and -1 in row i; columns
    follow graph edge order.
    """
    rows = [[0] * graph.m for _ in range(graph.n)]
    for k, (j, i) in enumerate(graph.edges):
        rows[j - 1][k] += 1
        rows[i - 1][k] -= 1
    return rows


def undirected_component_count(graph: CompartmentGraph) -> int:
    """Number of connected components of the underlying undirected graph."""
    adj: list[list[int]] = [[] for _ in range(graph.n + 1)]
    for j, i in graph.edges:
        adj[j].append(i)
        adj[i].append(j)
    seen: set[int] = set()
    count = 0
    for v in range(1, graph.n + 1):
        if v in seen:
            continue
        count += 1
        seen.update(_reachable(adj, v))
    return count


def canonical_edges(graph: CompartmentGraph) -> tuple[tuple[int, int], ...]:
    """Lexicographically minimal sorted edge list over relabelings of 2..n."""
    if graph.n <= 2 or not graph.edges:
        return tuple(sorted(graph.edges))
    best = None
    others = list(range(2, graph.n + 1))
    for perm in permutations(others):
        mapping = dict(zip(others, perm))
        mapping[1] = 1
        relabeled = sorted((mapping[j], mapping[i]) for j, i in graph.edges)
        if best is None or relabeled < best:
            best = relabeled
    return tuple(best)


def canonical_form(graph: CompartmentGraph) -> bytes:
    """Canonical byte encoding, equal iff graphs agree up to relabeling 2..n.

    Brute-forces the (n-1)! permutations fixing vertex 1; fine for n <= 6.
    """
    edges = canonical_edges(graph)
    body = ";".join(f"{j},{i}" for j, i in edges)
    return f"{graph.n}|{body}".encode("ascii")
