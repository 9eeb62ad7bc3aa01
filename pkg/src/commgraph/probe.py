"""Finite Cayley-ball exploration.

This is evidence, not proof: one-endedness is a statement about the complement
of every ball in the infinite Cayley graph, and a finite annulus can only hint
at it.  Nothing produced here feeds a certificate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from commgraph.engine import GroupElement, canonical_key
from commgraph.graph import GeneratorSet, _UnionFind

CAP_ENV = "COMMGRAPH_ELEMENT_CAP"
DEFAULT_CAP = 10**6
CAVEAT = (
    "annulus connectivity inside a finite ball neither proves nor refutes one-endedness; "
    "this report is heuristic evidence only"
)


class BallCapExceeded(RuntimeError):
    pass


def element_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be positive")
    return cap


def symmetrize(gens: GeneratorSet) -> list[tuple[str, GroupElement]]:
    """Generators and their inverses, dropping repeats by key."""
    out, seen = [], set()
    for label, g in gens.items:
        for lab, h in ((label, g), (label + "^-1", g.inverse())):
            k = canonical_key(h)
            if k not in seen and not h.is_identity():
                seen.add(k)
                out.append((lab, h))
    return out


@dataclass
class BallMap:
    radius: int
    generators: list[str]
    # key -> (distance, predecessor key, generator label); the identity has no predecessor.
    elements: dict[bytes, tuple[int, bytes | None, str | None]]
    objects: dict[bytes, GroupElement] = field(repr=False, default_factory=dict)

    def size(self, r: int | None = None) -> int:
        if r is None:
            return len(self.elements)
        return sum(1 for d, _, _ in self.elements.values() if d <= r)

    def growth(self) -> list[int]:
        counts = [0] * (self.radius + 1)
        for d, _, _ in self.elements.values():
            counts[d] += 1
        out, total = [], 0
        for c in counts:
            total += c
            out.append(total)
        return out

    def word(self, key: bytes) -> list[str]:
        """Generator labels whose product (left to right) is the element."""
        labels = []
        while True:
            _, prev, label = self.elements[key]
            if prev is None:
                return labels[::-1]
            labels.append(label)
            key = prev


def ball(gens: GeneratorSet, r: int, cap: int | None = None) -> BallMap:
    """Breadth-first ball of radius r about the identity, by canonical key."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    cap = element_cap() if cap is None else cap
    sym = symmetrize(gens)
    e = gens.items[0][1].identity()
    ek = canonical_key(e)
    elements = {ek: (0, None, None)}
    objects = {ek: e}
    frontier = [(ek, e)]
    for d in range(1, r + 1):
        nxt = []
        for k, g in frontier:
            for label, s in sym:
                h = g * s
                hk = canonical_key(h)
                if hk in elements:
                    continue
                elements[hk] = (d, k, label)
                objects[hk] = h
                nxt.append((hk, h))
                if len(elements) > cap:
                    raise BallCapExceeded(f"ball exceeds the element cap of {cap} at radius {d}")
        frontier = nxt
    return BallMap(r, [l for l, _ in sym], elements, objects)


@dataclass
class ProbeReport:
    inner: int
    outer: int
    component_count: int
    component_sizes: list[int]
    growth: list[int]
    caveat: str = CAVEAT

    def to_json(self) -> dict:
        return {
            "inner": self.inner,
            "outer": self.outer,
            "component_count": self.component_count,
            "component_sizes": self.component_sizes,
            "growth": self.growth,
            "caveat": self.caveat,
            "evidence_grade": "heuristic",
        }


def ends_probe(gens: GeneratorSet, inner: int, outer: int, cap: int | None = None) -> ProbeReport:
    """Components of the Cayley graph restricted to distances in (inner, outer]."""
    if inner < 0 or outer < inner:
        raise ValueError("need 0 <= inner <= outer")
    b = ball(gens, outer, cap)
    annulus = [k for k, (d, _, _) in b.elements.items() if d > inner]
    uf = _UnionFind(annulus)
    sym = symmetrize(gens)
    for k in annulus:
        g = b.objects[k]
        for _, s in sym:
            hk = canonical_key(g * s)
            if hk in uf.parent:
                uf.union(k, hk)
    sizes: dict[bytes, int] = {}
    for k in annulus:
        root = uf.find(k)
        sizes[root] = sizes.get(root, 0) + 1
    return ProbeReport(inner, outer, len(sizes), sorted(sizes.values(), reverse=True), b.growth())
