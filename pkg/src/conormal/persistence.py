"""Sublevel-set persistence of a function sampled on a graph.

Only graphs with one cycle (the sampled circle, or an arc with its endpoints
glued) are used here, but the routine is generic: vertices enter at their
value, an edge enters at the larger of its endpoint values, and the elder
rule pairs deaths with births.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class PersistenceDiagram:
    bars: list = field(default_factory=list)  # finite (birth, death), death > birth
    essential0: float = float("nan")
    essential1: float | None = None

    def __len__(self):
        return len(self.bars)


class _UnionFind:
    def __init__(self, births):
        self.parent = list(range(len(births)))
        self.birth = list(births)

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root


def graph_persistence(values, edges) -> PersistenceDiagram:
    values = np.asarray(values, dtype=float)
    edges = np.asarray(edges, dtype=int).reshape(-1, 2)
    weights = np.maximum(values[edges[:, 0]], values[edges[:, 1]])
    uf = _UnionFind(values)
    bars, cycles = [], []
    for e in np.argsort(weights, kind="stable"):
        w = weights[e]
        ru, rv = uf.find(edges[e, 0]), uf.find(edges[e, 1])
        if ru == rv:
            cycles.append(w)
            continue
        # elder rule: the component born later dies here
        young, old = (ru, rv) if uf.birth[ru] > uf.birth[rv] else (rv, ru)
        if w > uf.birth[young]:
            bars.append((float(uf.birth[young]), float(w)))
        uf.parent[young] = old
    roots = {uf.find(i) for i in range(len(values))}
    ess0 = min(uf.birth[r] for r in roots) if roots else float("nan")
    return PersistenceDiagram(
        bars=sorted(bars),
        essential0=float(ess0),
        essential1=float(max(cycles)) if cycles else None,
    )


def circle_persistence(values) -> PersistenceDiagram:
    """Persistence of samples taken in cyclic order around a circle."""
    n = len(values)
    idx = np.arange(n)
    return graph_persistence(values, np.column_stack([idx, (idx + 1) % n]))
