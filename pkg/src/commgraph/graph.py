"""Commutativity graphs K(G, S) over a finite labelled generating set.

Two distinct generators s, t are joined when some non-zero powers s^p, t^q
commute.  Only powers with |p|, |q| <= power_bound are searched, so a missing
edge means "no witness up to the bound", never a proof of non-adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from commgraph.engine import GroupElement, canonical_key, check_same_engine, commutes, power


@dataclass(frozen=True)
class GeneratorSet:
    engine: str
    items: tuple[tuple[str, GroupElement], ...]
    power_bound: int = 1

    def __post_init__(self):
        object.__setattr__(self, "items", tuple((str(l), g) for l, g in self.items))
        if self.power_bound < 1:
            raise ValueError("power_bound must be positive")
        labels = [l for l, _ in self.items]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        keys = set()
        for label, g in self.items:
            if g.engine != self.engine:
                raise ValueError(f"generator {label} is not a {self.engine} element")
            k = canonical_key(g)
            if k in keys:
                raise ValueError(f"generator {label} duplicates an earlier element")
            keys.add(k)

    @property
    def labels(self) -> list[str]:
        return [l for l, _ in self.items]

    def element(self, label: str) -> GroupElement:
        for l, g in self.items:
            if l == label:
                return g
        raise KeyError(label)

    def __len__(self):
        return len(self.items)

    def with_power_bound(self, p: int) -> GeneratorSet:
        return GeneratorSet(self.engine, self.items, p)


@dataclass(frozen=True)
class EdgeWitness:
    n_s: int
    n_t: int

    def __post_init__(self):
        if self.n_s == 0 or self.n_t == 0:
            raise ValueError("witness powers must be non-zero")

    def check(self, s: GroupElement, t: GroupElement) -> bool:
        return commutes(power(s, self.n_s), power(t, self.n_t))

    def as_list(self) -> list[int]:
        return [self.n_s, self.n_t]


@dataclass
class CommGraph:
    vertices: list[str]
    edges: dict[tuple[str, str], EdgeWitness] = field(default_factory=dict)
    power_bound: int = 1

    def __post_init__(self):
        order = {v: i for i, v in enumerate(self.vertices)}
        for u, v in self.edges:
            if u == v:
                raise ValueError("loops are not allowed")
            if order[u] > order[v]:
                raise ValueError("edge endpoints must follow vertex order")

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def witness(self, u: str, v: str) -> EdgeWitness | None:
        if (u, v) in self.edges:
            return self.edges[(u, v)]
        w = self.edges.get((v, u))
        return None if w is None else EdgeWitness(w.n_t, w.n_s)

    def neighbours(self, u: str) -> list[str]:
        out = []
        for a, b in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return out

    def degree(self, u: str) -> int:
        return len(self.neighbours(u))

    def edge_list(self) -> list[tuple[str, str, EdgeWitness]]:
        """Edges in vertex order."""
        order = {v: i for i, v in enumerate(self.vertices)}
        return sorted(((u, v, w) for (u, v), w in self.edges.items()), key=lambda e: (order[e[0]], order[e[1]]))

    def is_connected(self) -> bool:
        return len(components(self)[0]) <= 1


def edge_witness(s: GroupElement, t: GroupElement, power_bound: int = 1) -> EdgeWitness | None:
    """Least witness (|n_s|, |n_t|, signs) with 1 <= |n_s|, |n_t| <= power_bound."""
    check_same_engine(s, t)
    if s == t:
        raise ValueError("edge_witness needs distinct elements")
    s_pows = [None]
    t_pows = [None]
    for k in range(1, power_bound + 1):
        s_pows.append(s if k == 1 else s_pows[-1] * s)
        t_pows.append(t if k == 1 else t_pows[-1] * t)
    for p in range(1, power_bound + 1):
        for q in range(1, power_bound + 1):
            # Centralisers are subgroups, so the sign variants of (p, q)
            # commute exactly when (p, q) does; positive signs come first.
            if commutes(s_pows[p], t_pows[q]):
                return EdgeWitness(p, q)
    return None


def build(gens: GeneratorSet) -> CommGraph:
    items = gens.items
    edges = {}
    for i, (ls, s) in enumerate(items):
        for lt, t in items[i + 1:]:
            w = edge_witness(s, t, gens.power_bound)
            if w is not None:
                edges[(ls, lt)] = w
    return CommGraph([l for l, _ in items], edges, gens.power_bound)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def components(g: CommGraph) -> tuple[list[list[str]], list[list[tuple[str, str]]]]:
    """Vertex partition and, per part, the edges of a spanning tree.

    Parts are ordered by their first vertex; both are deterministic.
    """
    uf = _UnionFind(g.vertices)
    tree_edges = []
    for u, v, _ in g.edge_list():
        if uf.union(u, v):
            tree_edges.append((u, v))
    roots: dict[str, int] = {}
    parts: list[list[str]] = []
    for v in g.vertices:
        r = uf.find(v)
        if r not in roots:
            roots[r] = len(parts)
            parts.append([])
        parts[roots[r]].append(v)
    forest: list[list[tuple[str, str]]] = [[] for _ in parts]
    for u, v in tree_edges:
        forest[roots[uf.find(u)]].append((u, v))
    return parts, forest


def spanning_forest(g: CommGraph) -> list[tuple[str, str]]:
    return [e for part in components(g)[1] for e in part]


def remove_vertices(g: CommGraph, labels) -> CommGraph:
    labels = set(labels)
    unknown = labels - set(g.vertices)
    if unknown:
        raise KeyError(f"unknown vertices: {sorted(unknown)}")
    keep = [v for v in g.vertices if v not in labels]
    edges = {(u, v): w for (u, v), w in g.edges.items() if u not in labels and v not in labels}
    return CommGraph(keep, edges, g.power_bound)


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: CommGraph, name: str = "K") -> str:
    """DOT text; vertices in generator order, edges labelled "n_s,n_t"."""
    lines = [f"graph {_dot_id(name)} {{"]
    for v in g.vertices:
        lines.append(f"  {_dot_id(v)};")
    for u, v, w in g.edge_list():
        lines.append(f'  {_dot_id(u)} -- {_dot_id(v)} [label="{w.n_s},{w.n_t}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_summary(g: CommGraph) -> dict:
    """JSON-ready graph fragment used inside certificates."""
    return {
        "edges": [{"u": u, "v": v, "powers": w.as_list()} for u, v, w in g.edge_list()],
        "forest": [[u, v] for u, v in spanning_forest(g)],
    }
