"""Graph families with known spectra and seeded random graph models.

Randomness comes from numpy's PCG64 generator seeded with a 64-bit integer,
so a given (spec, seed) always yields the same edge set.
"""
from __future__ import annotations

import re
from dataclasses import MISSING, dataclass, fields
from typing import Union

import numpy as np

from .graph import Graph, GraphError


# -- deterministic families ----------------------------------------------------

@dataclass(frozen=True)
class Complete:
    n: int


@dataclass(frozen=True)
class CompleteBipartite:
    n1: int
    n2: int


@dataclass(frozen=True)
class Star:
    """Star on ``n`` vertices, i.e. K(1, n-1)."""
    n: int


@dataclass(frozen=True)
class Path:
    n: int


@dataclass(frozen=True)
class Cycle:
    n: int


@dataclass(frozen=True)
class Hypercube:
    d: int


@dataclass(frozen=True)
class Petal:
    """``m`` triangles sharing one hub; 2m + 1 vertices."""
    m: int


@dataclass(frozen=True)
class KRegularTree:
    """Complete rooted tree of the given depth: root has k children, other
    internal vertices k - 1, so every internal vertex has degree k."""
    k: int
    depth: int


@dataclass(frozen=True)
class TreeFill:
    """First ``n`` vertices of the infinite k-regular tree in breadth-first order."""
    k: int
    n: int


@dataclass(frozen=True)
class DuplicatedCycle:
    """C_2m with every even-indexed vertex given a twin; 3m vertices, 4m edges."""
    m: int


FamilySpec = Union[Complete, CompleteBipartite, Star, Path, Cycle, Hypercube,
                   Petal, KRegularTree, TreeFill, DuplicatedCycle]


# -- random models -------------------------------------------------------------

@dataclass(frozen=True)
class ErdosRenyi:
    n: int
    avg_degree: float


@dataclass(frozen=True)
class BarabasiAlbert:
    n: int
    edges_per_step: int
    initial_complete_size: int = 5


RandomSpec = Union[ErdosRenyi, BarabasiAlbert]


@dataclass(frozen=True)
class PreferentialAttachment:
    m: int


@dataclass(frozen=True)
class LeafAttachment:
    """Attach each new vertex as a leaf.

    With ``k`` set, the parent is the lowest-index vertex of degree below
    ``k``, which continues a breadth-first fill of the k-regular tree.
    With ``k=None`` the parent is uniform over existing vertices.
    """
    k: int | None = None


GrowthRule = Union[PreferentialAttachment, LeafAttachment]


def _require(cond: bool, msg: str):
    if not cond:
        raise GraphError(msg)


def complete_edges(n: int, offset: int = 0) -> list[tuple[int, int]]:
    return [(offset + i, offset + j) for i in range(n) for j in range(i + 1, n)]


def kregular_tree_size(k: int, depth: int) -> int:
    """Vertex count of :class:`KRegularTree`."""
    if k == 2:
        return 1 + 2 * depth
    return 1 + k * ((k - 1) ** depth - 1) // (k - 2)


def _tree_fill(k: int, n: int) -> Graph:
    edges = []
    parent, children = 0, 0
    for v in range(1, n):
        cap = k if parent == 0 else k - 1
        if children == cap:
            parent, children = parent + 1, 0
        edges.append((parent, v))
        children += 1
    return Graph(n, tuple(edges))


def generate_family(spec: FamilySpec) -> Graph:
    if isinstance(spec, Complete):
        _require(spec.n >= 1, f"Complete needs n >= 1, got {spec.n}")
        return Graph(spec.n, tuple(complete_edges(spec.n)))
    if isinstance(spec, CompleteBipartite):
        _require(spec.n1 >= 1 and spec.n2 >= 1, f"CompleteBipartite needs both sides >= 1: {spec}")
        n1, n2 = spec.n1, spec.n2
        return Graph(n1 + n2, tuple((i, n1 + j) for i in range(n1) for j in range(n2)))
    if isinstance(spec, Star):
        _require(spec.n >= 2, f"Star needs n >= 2, got {spec.n}")
        return generate_family(CompleteBipartite(1, spec.n - 1))
    if isinstance(spec, Path):
        _require(spec.n >= 1, f"Path needs n >= 1, got {spec.n}")
        return Graph(spec.n, tuple((i, i + 1) for i in range(spec.n - 1)))
    if isinstance(spec, Cycle):
        _require(spec.n >= 3, f"Cycle needs n >= 3, got {spec.n}")
        return Graph(spec.n, tuple((i, (i + 1) % spec.n) for i in range(spec.n)))
    if isinstance(spec, Hypercube):
        _require(spec.d >= 1, f"Hypercube needs d >= 1, got {spec.d}")
        n = 1 << spec.d
        return Graph(n, tuple((v, v ^ (1 << j)) for v in range(n)
                              for j in range(spec.d) if v < v ^ (1 << j)))
    if isinstance(spec, Petal):
        _require(spec.m >= 1, f"Petal needs m >= 1, got {spec.m}")
        edges = []
        for i in range(spec.m):
            a, b = 2 * i + 1, 2 * i + 2
            edges += [(0, a), (0, b), (a, b)]
        return Graph(2 * spec.m + 1, tuple(edges))
    if isinstance(spec, KRegularTree):
        _require(spec.k >= 2 and spec.depth >= 1, f"KRegularTree needs k >= 2 and depth >= 1: {spec}")
        return _tree_fill(spec.k, kregular_tree_size(spec.k, spec.depth))
    if isinstance(spec, TreeFill):
        _require(spec.k >= 2 and spec.n >= 1, f"TreeFill needs k >= 2 and n >= 1: {spec}")
        return _tree_fill(spec.k, spec.n)
    if isinstance(spec, DuplicatedCycle):
        _require(spec.m >= 2, f"DuplicatedCycle needs m >= 2, got {spec.m}")
        c = 2 * spec.m
        edges = [(i, (i + 1) % c) for i in range(c)]
        for j in range(spec.m):
            v, twin = 2 * j, c + j
            edges += [(twin, (v - 1) % c), (twin, (v + 1) % c)]
        return Graph(3 * spec.m, tuple(edges))
    raise TypeError(f"not a family spec: {spec!r}")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def generate_er(spec: ErdosRenyi, seed: int = 0) -> Graph:
    """G(n, p) with p = avg_degree / (n - 1), pairs drawn in order (0,1), (0,2), ..."""
    n = spec.n
    _require(n >= 1, f"ErdosRenyi needs n >= 1, got {n}")
    _require(spec.avg_degree >= 0, f"avg_degree must be >= 0, got {spec.avg_degree}")
    if n == 1:
        _require(spec.avg_degree == 0, "a single vertex cannot have positive degree")
        return Graph(1, ())
    _require(spec.avg_degree <= n - 1,
             f"avg_degree {spec.avg_degree} exceeds n - 1 = {n - 1}")
    p = spec.avg_degree / (n - 1)
    rows, cols = np.triu_indices(n, 1)
    keep = _rng(seed).random(rows.size) < p
    return Graph(n, tuple(zip(rows[keep].tolist(), cols[keep].tolist())))


def _attach_preferential(n0, edges, target_n, m, rng):
    # one entry per edge endpoint: uniform draws are degree-proportional
    ends = [x for e in edges for x in e]
    edges = list(edges)
    active = len(set(ends))
    for v in range(n0, target_n):
        if m > v:
            raise GraphError(f"edges_per_step {m} exceeds current vertex count {v}")
        if active < m:
            raise GraphError(f"need at least {m} vertices of positive degree to attach")
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(ends[int(rng.integers(len(ends)))])
        for u in sorted(targets):
            edges.append((u, v))
            ends += (u, v)
        active += 1
    return edges


def generate_ba(spec: BarabasiAlbert, seed: int = 0) -> Graph:
    init, m = spec.initial_complete_size, spec.edges_per_step
    _require(init >= m >= 1, f"need initial_complete_size >= edges_per_step >= 1: {spec}")
    _require(spec.n >= init, f"n {spec.n} smaller than initial complete size {init}")
    edges = _attach_preferential(init, complete_edges(init), spec.n, m, _rng(seed))
    return Graph(spec.n, tuple(edges))


def generate(spec: FamilySpec | RandomSpec, seed: int = 0) -> Graph:
    if isinstance(spec, ErdosRenyi):
        return generate_er(spec, seed)
    if isinstance(spec, BarabasiAlbert):
        return generate_ba(spec, seed)
    return generate_family(spec)


def grow(g: Graph, target_n: int, rule: GrowthRule, seed: int = 0) -> Graph:
    """Extend ``g`` to ``target_n`` vertices; ``g`` stays the induced subgraph on 0..g.n-1."""
    if target_n < g.n:
        raise GraphError(f"target_n {target_n} smaller than current size {g.n}")
    if target_n == g.n:
        return g
    rng = _rng(seed)
    if isinstance(rule, PreferentialAttachment):
        _require(rule.m >= 1, f"m must be >= 1, got {rule.m}")
        return Graph(target_n, tuple(_attach_preferential(g.n, g.edges, target_n, rule.m, rng)))
    if isinstance(rule, LeafAttachment):
        _require(g.n >= 1, "cannot attach leaves to an empty graph")
        edges = list(g.edges)
        if rule.k is None:
            for v in range(g.n, target_n):
                edges.append((int(rng.integers(v)), v))
            return Graph(target_n, tuple(edges))
        _require(rule.k >= 2, f"k must be >= 2, got {rule.k}")
        deg = g.degrees() + [0] * (target_n - g.n)
        parent = 0
        for v in range(g.n, target_n):
            while deg[parent] >= rule.k:
                parent += 1
            edges.append((parent, v))
            deg[parent] += 1
            deg[v] += 1
        return Graph(target_n, tuple(edges))
    raise TypeError(f"unknown growth rule {rule!r}")


def child_seeds(seed: int, count: int) -> list[int]:
    """Independent 64-bit seeds derived from ``seed``."""
    state = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


# -- textual spec grammar: <family>:<key>=<value>{,<key>=<value>} ---------------

class SpecParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.position = position


_FAMILIES = {
    "complete": (Complete, {"n": "n"}),
    "bipartite": (CompleteBipartite, {"n1": "n1", "n2": "n2"}),
    "star": (Star, {"n": "n"}),
    "path": (Path, {"n": "n"}),
    "cycle": (Cycle, {"n": "n"}),
    "cube": (Hypercube, {"d": "d"}),
    "petal": (Petal, {"m": "m"}),
    "dupcycle": (DuplicatedCycle, {"m": "m"}),
    "er": (ErdosRenyi, {"n": "n", "d": "avg_degree"}),
    "ba": (BarabasiAlbert, {"n": "n", "m": "edges_per_step", "init": "initial_complete_size"}),
}

_KEY_RE = re.compile(r"([a-z][a-z0-9]*)=([0-9]+(?:\.[0-9]+)?)")


def parse_spec(text: str) -> FamilySpec | RandomSpec:
    """Parse e.g. ``"ba:n=1000,m=2,init=5"`` or ``"tree:k=4,depth=6"``."""
    family, sep, rest = text.partition(":")
    if not sep:
        raise SpecParseError("missing ':' after family name", text, len(text))
    if family != "tree" and family not in _FAMILIES:
        raise SpecParseError(f"unknown family {family!r}", text, 0)
    values: dict[str, str] = {}
    pos = len(family) + 1
    for item in rest.split(","):
        match = _KEY_RE.fullmatch(item)
        if not match:
            raise SpecParseError(f"expected <key>=<number>, got {item!r}", text, pos)
        if match.group(1) in values:
            raise SpecParseError(f"duplicate key {match.group(1)!r}", text, pos)
        values[match.group(1)] = match.group(2)
        pos += len(item) + 1

    if family == "tree":
        cls = KRegularTree if "depth" in values else TreeFill
        keymap = {"k": "k", "depth": "depth"} if cls is KRegularTree else {"k": "k", "n": "n"}
    else:
        cls, keymap = _FAMILIES[family]
    unknown = set(values) - set(keymap)
    if unknown:
        key = sorted(unknown)[0]
        raise SpecParseError(f"unknown key {key!r} for {family}", text, text.index(key + "=", len(family)))
    kwargs = {}
    types = {f.name: f.type for f in fields(cls)}
    for key, raw in values.items():
        name = keymap[key]
        if types[name] in ("int", int):
            if "." in raw:
                raise SpecParseError(f"{key} must be an integer", text, text.index(key + "=", len(family)))
            kwargs[name] = int(raw)
        else:
            kwargs[name] = float(raw)
    required = {f.name for f in fields(cls) if f.default is MISSING}
    missing = [k for k, name in keymap.items() if name in required and name not in kwargs]
    if missing:
        raise SpecParseError(f"missing key {missing[0]!r} for {family}", text, len(text))
    return cls(**kwargs)


def format_spec(spec: FamilySpec | RandomSpec) -> str:
    """Inverse of :func:`parse_spec`."""
    if isinstance(spec, KRegularTree):
        return f"tree:k={spec.k},depth={spec.depth}"
    if isinstance(spec, TreeFill):
        return f"tree:k={spec.k},n={spec.n}"
    for family, (cls, keymap) in _FAMILIES.items():
        if isinstance(spec, cls):
            parts = []
            for key, name in keymap.items():
                val = getattr(spec, name)
                parts.append(f"{key}={val:g}" if isinstance(val, float) else f"{key}={val}")
            return f"{family}:" + ",".join(parts)
    raise TypeError(f"not a spec: {spec!r}")


def is_random(spec) -> bool:
    return isinstance(spec, (ErdosRenyi, BarabasiAlbert))


def family_size(spec: FamilySpec | RandomSpec) -> int:
    """Vertex count without building the graph."""
    if isinstance(spec, CompleteBipartite):
        return spec.n1 + spec.n2
    if isinstance(spec, Hypercube):
        return 1 << spec.d
    if isinstance(spec, Petal):
        return 2 * spec.m + 1
    if isinstance(spec, KRegularTree):
        return kregular_tree_size(spec.k, spec.depth)
    if isinstance(spec, DuplicatedCycle):
        return 3 * spec.m
    return spec.n

