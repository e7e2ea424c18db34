"""Simple undirected graphs, edit operations and edge-list I/O.

Vertices are dense 0-based integers. A :class:`Graph` is immutable; every
edit returns a new value.
"""
from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO, Union


class GraphError(ValueError):
    """Invalid graph construction or edit."""


class EdgeListError(GraphError):
    """Malformed edge-list text; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def _canonical(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _edge_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.n}")
        canon = set()
        for pair in self.edges:
            u, v = (int(x) for x in pair)
            if u == v:
                raise GraphError(f"self-loop {(u, v)} not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {(u, v)} has endpoint outside 0..{n - 1}")
            canon.add(_canonical(u, v))
        edges = tuple(sorted(canon))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "neighbors", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_edge_set", frozenset(edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _canonical(u, v) in self._edge_set

    def degrees(self) -> list[int]:
        return [len(a) for a in self.neighbors]


def build_graph(n: int, edges: Iterable[tuple[int, int]] = ()) -> Graph:
    """Build a graph, deduplicating and canonically ordering ``edges``."""
    return Graph(n, tuple(edges))


def degree(g: Graph, v: int) -> int:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range 0..{g.n - 1}")
    return len(g.neighbors[v])


def average_degree(g: Graph) -> float:
    if g.n == 0:
        raise GraphError("average degree of the empty graph is undefined")
    return 2.0 * g.num_edges / g.n


def connected_components(g: Graph) -> tuple[int, list[int]]:
    """Return ``(count, labels)``; components are numbered by their lowest vertex."""
    labels = [-1] * g.n
    count = 0
    for start in range(g.n):
        if labels[start] != -1:
            continue
        labels[start] = count
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.neighbors[u]:
                if labels[w] == -1:
                    labels[w] = count
                    queue.append(w)
        count += 1
    return count, labels


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shifted = ((u + a.n, v + a.n) for u, v in b.edges)
    return Graph(a.n + b.n, a.edges + tuple(shifted))


def relabel(g: Graph, perm: list[int]) -> Graph:
    """Apply the vertex permutation ``v -> perm[v]``."""
    if sorted(perm) != list(range(g.n)):
        raise GraphError("perm must be a permutation of 0..n-1")
    return Graph(g.n, tuple((perm[u], perm[v]) for u, v in g.edges))


# -- edit operations ---------------------------------------------------------

@dataclass(frozen=True)
class InsertEdge:
    u: int
    v: int


@dataclass(frozen=True)
class DeleteEdge:
    u: int
    v: int


@dataclass(frozen=True)
class InsertIsolatedVertex:
    """Add an isolated vertex.

    With ``at=None`` the vertex gets index ``n``. Otherwise it takes index
    ``at`` and the vertex previously there moves to ``n``; this exactly
    undoes :class:`DeleteIsolatedVertex`.
    """

    at: int | None = None


@dataclass(frozen=True)
class DeleteIsolatedVertex:
    v: int


EditOp = Union[InsertEdge, DeleteEdge, InsertIsolatedVertex, DeleteIsolatedVertex]


def _swap(a: int, b: int):
    def f(x: int) -> int:
        if x == a:
            return b
        if x == b:
            return a
        return x
    return f


def apply_edit(g: Graph, op: EditOp) -> Graph:
    if isinstance(op, InsertEdge):
        if g.has_edge(op.u, op.v):
            raise GraphError(f"edge {(op.u, op.v)} already present")
        return Graph(g.n, g.edges + (_canonical(op.u, op.v),))
    if isinstance(op, DeleteEdge):
        if not (0 <= op.u < g.n and 0 <= op.v < g.n) or not g.has_edge(op.u, op.v):
            raise GraphError(f"no such edge {(op.u, op.v)}")
        e = _canonical(op.u, op.v)
        return Graph(g.n, tuple(x for x in g.edges if x != e))
    if isinstance(op, InsertIsolatedVertex):
        if op.at is None or op.at == g.n:
            return Graph(g.n + 1, g.edges)
        if not 0 <= op.at < g.n:
            raise GraphError(f"insert position {op.at} out of range 0..{g.n}")
        f = _swap(op.at, g.n)
        return Graph(g.n + 1, tuple((f(u), f(v)) for u, v in g.edges))
    if isinstance(op, DeleteIsolatedVertex):
        v = op.v
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range 0..{g.n - 1}")
        if g.neighbors[v]:
            raise GraphError(f"vertex {v} is not isolated (degree {len(g.neighbors[v])})")
        # last vertex takes the freed slot
        f = _swap(v, g.n - 1)
        return Graph(g.n - 1, tuple((f(a), f(b)) for a, b in g.edges))
    raise TypeError(f"unknown edit operation {op!r}")


def inverse_edit(g: Graph, op: EditOp) -> EditOp:
    """The operation undoing ``op`` when applied to ``apply_edit(g, op)``."""
    if isinstance(op, InsertEdge):
        return DeleteEdge(op.u, op.v)
    if isinstance(op, DeleteEdge):
        return InsertEdge(op.u, op.v)
    if isinstance(op, InsertIsolatedVertex):
        return DeleteIsolatedVertex(g.n if op.at is None else op.at)
    if isinstance(op, DeleteIsolatedVertex):
        return InsertIsolatedVertex(at=op.v)
    raise TypeError(f"unknown edit operation {op!r}")


def apply_edits(g: Graph, ops: Iterable[EditOp]) -> Graph:
    for op in ops:
        g = apply_edit(g, op)
    return g


# -- edge-list text format -----------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _as_text(source: Union[str, TextIO]) -> str:
    return source if isinstance(source, str) else source.read()


def read_edge_list(source: Union[str, TextIO]) -> Graph:
    """Parse ``n <count>`` followed by ``u v`` lines; ``#`` lines are comments."""
    lines = _content_lines(_as_text(source))
    header = next(lines, None)
    if header is None:
        raise EdgeListError("missing 'n <count>' header")
    lineno, line = header
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise EdgeListError(f"expected 'n <count>', got {line!r}", lineno)
    n = int(parts[1])
    edges = []
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex in {line!r}", lineno) from None
        if u == v:
            raise EdgeListError(f"self-loop {u} {v}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(f"endpoint out of range 0..{n - 1} in {line!r}", lineno)
        edges.append((u, v))
    return Graph(n, tuple(edges))


def write_edge_list(g: Graph) -> str:
    buf = io.StringIO()
    buf.write(f"n {g.n}\n")
    for u, v in g.edges:
        buf.write(f"{u} {v}\n")
    return buf.getvalue()


def read_labeled_edge_list(source: Union[str, TextIO]) -> tuple[Graph, list[str]]:
    """Ingest an edge list with arbitrary vertex labels.

    Each line holds two whitespace-separated labels. Labels are numbered in
    order of first appearance; the returned list maps index to label.
    Self-loops and repeated edges are dropped, as the graph model has no
    room for them.
    """
    index: dict[str, int] = {}
    edges = []
    for lineno, line in _content_lines(_as_text(source)):
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected 'a b', got {line!r}", lineno)
        a, b = (index.setdefault(p, len(index)) for p in parts)
        if a != b:
            edges.append((a, b))
    if not index:
        raise EdgeListError("no edges found")
    return Graph(len(index), tuple(edges)), list(index)


def write_label_map(labels: list[str]) -> str:
    return "# index label\n" + "".join(f"{i} {lab}\n" for i, lab in enumerate(labels))


def looks_canonical(text: str) -> bool:
    """True if ``text`` starts (after comments) with an ``n <count>`` header."""
    first = next(_content_lines(text), None)
    return first is not None and first[1].split()[0] == "n"
