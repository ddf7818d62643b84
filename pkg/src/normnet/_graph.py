"""Mutable working graph behind every structural edit.

Public values (:class:`~normnet.network.Network` plus a weighting dict) are
immutable; operations copy them into a ``Graph``, edit, and freeze back.
Weights are kept in whatever numeric type the caller supplies (``Fraction``
for the public operations, scaled ``int`` numerators inside reconstruction),
so no division ever happens here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NetworkError


class Graph:
    __slots__ = ("children", "parents", "weight", "label", "leaf", "root", "_next")

    def __init__(self):
        self.children: dict[int, list[int]] = {}
        self.parents: dict[int, list[int]] = {}
        self.weight: dict[tuple[int, int], object] = {}
        self.label: dict[int, str] = {}
        self.leaf: dict[str, int] = {}
        self.root: int | None = None
        self._next = 0

    @classmethod
    def from_network(cls, net, w, convert=None) -> "Graph":
        g = cls()
        for v in net.vertices:
            g.children[v] = list(net.children(v))
            g.parents[v] = list(net.parents(v))
        for e in net.edges:
            g.weight[e] = w[e] if convert is None else convert(w[e])
        for taxon in net.taxa:
            v = net.leaf(taxon)
            g.label[v] = taxon
            g.leaf[taxon] = v
        g.root = net.root
        g._next = max(net.vertices, default=-1) + 1
        return g

    def new_vertex(self) -> int:
        v = self._next
        self._next += 1
        self.children[v] = []
        self.parents[v] = []
        return v

    def add_edge(self, u: int, v: int, wt) -> None:
        if (u, v) in self.weight:
            raise NetworkError(f"edge ({u}, {v}) already present; a parallel edge would result")
        self.children[u].append(v)
        self.parents[v].append(u)
        self.weight[(u, v)] = wt

    def remove_edge(self, u: int, v: int):
        self.children[u].remove(v)
        self.parents[v].remove(u)
        return self.weight.pop((u, v))

    def remove_vertex(self, v: int) -> None:
        if self.children[v] or self.parents[v]:
            raise NetworkError(f"vertex {v} still has incident edges")
        del self.children[v], self.parents[v]
        taxon = self.label.pop(v, None)
        if taxon is not None:
            del self.leaf[taxon]

    def parent(self, v: int) -> int:
        ps = self.parents[v]
        if len(ps) != 1:
            raise NetworkError(f"vertex {v} has {len(ps)} parents, expected 1")
        return ps[0]

    def is_reticulation(self, v: int) -> bool:
        return len(self.parents[v]) == 2

    def add_leaf(self, parent: int, taxon: str, wt) -> int:
        if taxon in self.leaf:
            raise NetworkError(f"taxon {taxon!r} already present")
        x = self.new_vertex()
        self.label[x] = taxon
        self.leaf[taxon] = x
        self.add_edge(parent, x, wt)
        return x

    def subdivide(self, u: int, v: int, lower) -> int:
        """Insert a vertex on ``(u, v)`` at distance ``lower`` above ``v``."""
        total = self.remove_edge(u, v)
        x = self.new_vertex()
        self.add_edge(u, x, total - lower)
        self.add_edge(x, v, lower)
        return x

    def suppress(self, v: int) -> tuple[int, int]:
        """Replace the path ``a -> v -> c`` by a single edge of summed weight."""
        if len(self.parents[v]) != 1 or len(self.children[v]) != 1:
            raise NetworkError(f"vertex {v} is not of in- and out-degree one")
        a, c = self.parents[v][0], self.children[v][0]
        total = self.remove_edge(a, v) + self.remove_edge(v, c)
        self.remove_vertex(v)
        self.add_edge(a, c, total)
        return a, c

    def ancestors_or_self(self, v: int) -> set[int]:
        seen = {v}
        stack = [v]
        while stack:
            for p in self.parents[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def topological_order(self) -> list[int]:
        indeg = {v: len(ps) for v, ps in self.parents.items()}
        order = [v for v, d in indeg.items() if d == 0]
        i = 0
        while i < len(order):
            for c in self.children[order[i]]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    order.append(c)
            i += 1
        return order

    def freeze(self, den: int | None = None):
        """Return ``(Network, weighting)``; numerators are divided by ``den`` if given."""
        from .network import Network

        edges = list(self.weight)
        if den is None:
            w = {e: Fraction(x) for e, x in self.weight.items()}
        else:
            w = {e: Fraction(x, den) for e, x in self.weight.items()}
        net = Network(edges, dict(self.label), vertices=self.children.keys())
        return net, w
