"""Rooted binary phylogenetic networks with exact rational edge weights.

A :class:`Network` is an immutable leaf-labelled DAG.  A weighting is a plain
``dict`` mapping each edge ``(u, v)`` to a :class:`fractions.Fraction`; no
function in this module mutates its arguments.

The three reduction operations used by the reconstruction algorithms live
here: :func:`reduce_leaf` (cherries), :func:`cut_reticulated_cherry` and
:func:`isolate_reticulated_cherry` (reticulated cherries).
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ._graph import Graph
from .errors import (
    DegenerateBaseCase,
    GtIsRoot,
    GtNotTreeVertex,
    NetworkError,
    NoOutgroup,
    NotACherry,
    NotAReticulatedCherry,
    WeightInfeasible,
)

Edge = tuple[int, int]
Weighting = Mapping[Edge, Fraction]


class Network:
    """Leaf-labelled rooted directed graph.

    Construction never fails on degree or acyclicity problems; those are
    reported by :func:`validate`.  Taxon labels must be unique and may only
    sit on existing vertices.

    >>> net = Network([(0, 1), (0, 2)], {1: "s", 2: "t"})
    >>> net.root, net.taxa
    (0, ('s', 't'))
    """

    __slots__ = ("_children", "_parents", "_labels", "_leaf_of", "_root", "_edges", "_vertices")

    def __init__(self, edges: Iterable[Edge], labels: Mapping[int, str], vertices: Iterable[int] | None = None):
        edges = [(int(u), int(v)) for u, v in edges]
        verts = set(vertices) if vertices is not None else set()
        verts.update(u for e in edges for u in e)
        verts.update(labels)
        children: dict[int, list[int]] = {v: [] for v in verts}
        parents: dict[int, list[int]] = {v: [] for v in verts}
        for u, v in edges:
            children[u].append(v)
            parents[v].append(u)
        leaf_of: dict[str, int] = {}
        for v, taxon in labels.items():
            if taxon in leaf_of:
                raise ValueError(f"taxon {taxon!r} labels more than one vertex")
            leaf_of[taxon] = v
        self._children = {v: tuple(sorted(c)) for v, c in children.items()}
        self._parents = {v: tuple(sorted(p)) for v, p in parents.items()}
        self._labels = dict(labels)
        self._leaf_of = leaf_of
        self._edges = tuple(sorted(edges))
        self._vertices = frozenset(verts)
        roots = [v for v in verts if not parents[v]]
        self._root = roots[0] if len(roots) == 1 else None

    # -- basic queries -------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def root(self) -> int | None:
        return self._root

    @property
    def taxa(self) -> tuple[str, ...]:
        return tuple(sorted(self._leaf_of))

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def parent(self, v: int) -> int:
        ps = self._parents[v]
        if len(ps) != 1:
            raise NetworkError(f"vertex {v} has {len(ps)} parents")
        return ps[0]

    def label(self, v: int) -> str | None:
        return self._labels.get(v)

    @property
    def labels(self) -> dict[int, str]:
        return dict(self._labels)

    def leaf(self, taxon: str) -> int:
        try:
            return self._leaf_of[taxon]
        except KeyError:
            raise KeyError(f"unknown taxon {taxon!r}") from None

    def is_leaf(self, v: int) -> bool:
        return not self._children[v]

    def is_reticulation(self, v: int) -> bool:
        return len(self._parents[v]) == 2

    def is_tree_vertex(self, v: int) -> bool:
        return len(self._parents[v]) == 1 and len(self._children[v]) == 2

    def is_tree_edge(self, e: Edge) -> bool:
        return not self.is_reticulation(e[1])

    @property
    def reticulations(self) -> list[int]:
        return sorted(v for v in self._vertices if len(self._parents[v]) == 2)

    def outgroups(self) -> list[str]:
        """Taxa whose parent is the root."""
        if self._root is None:
            return []
        return sorted(self._labels[c] for c in self._children[self._root] if c in self._labels)

    def topological_order(self) -> list[int]:
        indeg = {v: len(p) for v, p in self._parents.items()}
        order = sorted(v for v, d in indeg.items() if d == 0)
        i = 0
        while i < len(order):
            for c in self._children[order[i]]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    order.append(c)
            i += 1
        return order

    def descendants(self, v: int) -> set[int]:
        """Vertices reachable from ``v`` by a directed path (``v`` included)."""
        seen = {v}
        stack = [v]
        while stack:
            for c in self._children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def ancestors(self, v: int) -> set[int]:
        """Vertices from which ``v`` is reachable (``v`` included)."""
        seen = {v}
        stack = [v]
        while stack:
            for p in self._parents[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def relabelled(self, mapping: Mapping[int, int]) -> "Network":
        """Copy with every vertex id ``v`` replaced by ``mapping[v]``."""
        return Network(
            [(mapping[u], mapping[v]) for u, v in self._edges],
            {mapping[v]: t for v, t in self._labels.items()},
            vertices=[mapping[v] for v in self._vertices],
        )

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self._vertices, self._edges, self._labels) == (other._vertices, other._edges, other._labels)

    def __hash__(self):
        return hash((self._vertices, self._edges, tuple(sorted(self._labels.items()))))

    def __repr__(self):
        return f"Network({len(self._vertices)} vertices, {len(self._edges)} edges, taxa={list(self.taxa)})"


class PairKind(enum.Enum):
    CHERRY = "cherry"
    RETICULATED_CHERRY = "reticulated cherry"


@dataclass(frozen=True)
class PairClassification:
    """Cherry or reticulated cherry ``{s, t}``.

    For a reticulated cherry ``t`` is always the reticulation leaf.
    ``tree_vertex`` (the parent of ``s``) is only known when the
    classification was read off a network.
    """

    kind: PairKind
    s: str
    t: str
    tree_vertex: int | None = None

    @property
    def is_cherry(self) -> bool:
        return self.kind is PairKind.CHERRY


# -- validity and class predicates ------------------------------------------


def validate(net: Network, w: Weighting | None = None) -> list[str]:
    """Return every violated network or weighting invariant; empty means valid."""
    problems: list[str] = []
    if len(net.vertices) == 1 and not net.edges:
        (v,) = net.vertices
        if net.label(v) is None:
            problems.append(f"single vertex {v} is not labelled")
        if w:
            problems.append("single-vertex network carries edge weights")
        return problems
    if not net.vertices:
        return ["empty network"]

    for e, count in Counter(net.edges).items():
        if count > 1:
            problems.append(f"parallel edge {e}")
    roots = sorted(v for v in net.vertices if not net.parents(v))
    if len(roots) != 1:
        problems.append(f"expected exactly one root, found {len(roots)}")
    if len(net.topological_order()) != len(net.vertices):
        problems.append("directed cycle")

    for v in sorted(net.vertices):
        nin, nout = len(net.parents(v)), len(net.children(v))
        if nin == 0:
            if nout != 2:
                problems.append(f"root {v} has out-degree {nout}")
        elif (nin, nout) not in ((1, 0), (1, 2), (2, 1)):
            problems.append(f"vertex {v} has in-degree {nin} and out-degree {nout}")
        if nout == 0 and net.label(v) is None:
            problems.append(f"leaf {v} is not labelled")
        if net.label(v) is not None and nout != 0:
            problems.append(f"labelled vertex {v} ({net.label(v)}) is not a leaf")

    if w is not None:
        edge_set = set(net.edges)
        for e in net.edges:
            if e not in w:
                problems.append(f"edge {e} has no weight")
                continue
            x = w[e]
            if x < 0:
                problems.append(f"negative weight on edge {e}")
            elif x == 0 and net.is_tree_edge(e):
                problems.append(f"zero-weight tree edge {e}")
        for e in w:
            if e not in edge_set:
                problems.append(f"weight given for non-edge {e}")
    return problems


def is_tree_child(net: Network) -> bool:
    return all(
        any(not net.is_reticulation(c) for c in net.children(v))
        for v in net.vertices
        if not net.is_leaf(v)
    )


def find_shortcuts(net: Network) -> set[Edge]:
    """Reticulation edges ``(u, v)`` such that ``v`` is reachable from ``u`` without them."""
    found = set()
    for v in net.reticulations:
        for u in net.parents(v):
            seen = {u}
            stack = [c for c in net.children(u) if c != v]
            while stack:
                x = stack.pop()
                if x == v:
                    found.add((u, v))
                    break
                if x in seen:
                    continue
                seen.add(x)
                stack.extend(net.children(x))
    return found


def is_normal(net: Network) -> bool:
    return is_tree_child(net) and not find_shortcuts(net)


def root_path_length_range(net: Network, w: Weighting) -> dict[int, tuple[Fraction, Fraction]]:
    """Shortest and longest directed root path length to every vertex."""
    lo: dict[int, Fraction] = {}
    hi: dict[int, Fraction] = {}
    for v in net.topological_order():
        ps = net.parents(v)
        if not ps:
            lo[v] = hi[v] = Fraction(0)
        else:
            lo[v] = min(lo[p] + w[(p, v)] for p in ps)
            hi[v] = max(hi[p] + w[(p, v)] for p in ps)
    return {v: (lo[v], hi[v]) for v in lo}


def is_equidistant(net: Network, w: Weighting) -> bool:
    """True iff every directed root-to-leaf path has the same length."""
    spans = root_path_length_range(net, w)
    lengths = set()
    for taxon in net.taxa:
        lo, hi = spans[net.leaf(taxon)]
        lengths.update((lo, hi))
    return len(lengths) <= 1


def is_reticulation_pair(net: Network, w: Weighting) -> bool:
    return all(len({w[(p, v)] for p in net.parents(v)}) == 1 for v in net.reticulations)


def tree_height(net: Network, w: Weighting) -> Fraction:
    """Root-to-leaf length of an equidistant network."""
    if not is_equidistant(net, w):
        raise ValueError("network is not equidistant")
    spans = root_path_length_range(net, w)
    return spans[net.leaf(net.taxa[0])][0]


# -- pair classification -----------------------------------------------------


def classify_pair(net: Network, s: str, t: str) -> PairClassification | None:
    """Ground-truth classification of ``{s, t}`` read off the topology."""
    if s == t:
        raise ValueError("pair must consist of two distinct taxa")
    ps, pt = net.parent(net.leaf(s)), net.parent(net.leaf(t))
    if ps == pt:
        return PairClassification(PairKind.CHERRY, s, t, ps)
    if net.is_reticulation(pt) and ps in net.parents(pt):
        return PairClassification(PairKind.RETICULATED_CHERRY, s, t, ps)
    if net.is_reticulation(ps) and pt in net.parents(ps):
        return PairClassification(PairKind.RETICULATED_CHERRY, t, s, pt)
    return None


def find_cherries(net: Network) -> list[PairClassification]:
    """All cherries and reticulated cherries, ordered by taxon names."""
    found = []
    taxa = net.taxa
    for i, a in enumerate(taxa):
        for b in taxa[i + 1:]:
            c = classify_pair(net, a, b)
            if c is not None:
                found.append(c)
    return found


# -- reductions ----------------------------------------------------------------


def reduce_leaf(net: Network, w: Weighting, s: str, t: str):
    """Delete ``t`` from the cherry ``{s, t}`` and suppress the shared parent."""
    c = classify_pair(net, s, t)
    if c is None or not c.is_cherry:
        raise NotACherry(f"{{{s}, {t}}} is not a cherry")
    if c.tree_vertex == net.root:
        raise DegenerateBaseCase("reducing a leaf of a two-leaf network leaves no phylogenetic network")
    g = Graph.from_network(net, w)
    leaf_t = g.leaf[t]
    g.remove_edge(c.tree_vertex, leaf_t)
    g.remove_vertex(leaf_t)
    g.suppress(c.tree_vertex)
    return g.freeze()


def _reticulated_cherry(net: Network, s: str, t: str) -> tuple[int, int, int]:
    ps, pt = net.parent(net.leaf(s)), net.parent(net.leaf(t))
    if not (net.is_reticulation(pt) and ps in net.parents(pt)):
        raise NotAReticulatedCherry(f"{{{s}, {t}}} is not a reticulated cherry with reticulation leaf {t}")
    (gt,) = [p for p in net.parents(pt) if p != ps]
    return ps, pt, gt


def cut_reticulated_cherry(net: Network, w: Weighting, s: str, t: str):
    """Delete the edge ``(p_s, p_t)`` and suppress both endpoints."""
    ps, pt, _ = _reticulated_cherry(net, s, t)
    g = Graph.from_network(net, w)
    g.remove_edge(ps, pt)
    g.suppress(ps)
    g.suppress(pt)
    return g.freeze()


def isolate_reticulated_cherry(net: Network, w: Weighting, s: str, t: str):
    """Delete the edge ``(g_t, p_t)`` and suppress ``p_t`` and ``g_t``."""
    _, pt, gt = _reticulated_cherry(net, s, t)
    if net.is_reticulation(gt):
        raise GtNotTreeVertex(f"other parent {gt} of the reticulation above {t} is a reticulation")
    if not net.parents(gt):
        raise GtIsRoot(f"other parent {gt} of the reticulation above {t} is the root")
    g = Graph.from_network(net, w)
    g.remove_edge(gt, pt)
    g.suppress(pt)
    g.suppress(gt)
    return g.freeze()


# -- re-weightings that leave all inter-taxa distances unchanged ------------------


def reweight_at_reticulation(net: Network, w: Weighting, u: int, new_child_weight) -> dict[Edge, Fraction]:
    """Shift weight between the in-edges of reticulation ``u`` and its child edge."""
    if not net.is_reticulation(u):
        raise NetworkError(f"vertex {u} is not a reticulation")
    new_child_weight = Fraction(new_child_weight)
    (v,) = net.children(u)
    p, q = net.parents(u)
    sum_p = w[(p, u)] + w[(u, v)]
    sum_q = w[(q, u)] + w[(u, v)]
    new_p, new_q = sum_p - new_child_weight, sum_q - new_child_weight
    child_must_be_positive = net.is_tree_edge((u, v))
    if new_p < 0 or new_q < 0 or new_child_weight < 0 or (child_must_be_positive and new_child_weight == 0):
        raise WeightInfeasible(
            f"child weight {new_child_weight} is infeasible at reticulation {u} (sums {sum_p}, {sum_q})"
        )
    out = dict(w)
    out[(p, u)] = new_p
    out[(q, u)] = new_q
    out[(u, v)] = new_child_weight
    return out


def root_outgroup_split(net: Network, outgroup: str | None = None) -> tuple[int, int]:
    """Return ``(r_vertex, u)``: the outgroup leaf below the root and the other root child."""
    root = net.root
    if root is None or not net.children(root):
        raise NoOutgroup("network has no root with children")
    candidates = net.outgroups()
    if outgroup is None:
        if not candidates:
            raise NoOutgroup("no taxon is a child of the root")
        outgroup = candidates[0]
    elif outgroup not in candidates:
        raise NoOutgroup(f"{outgroup!r} is not a child of the root")
    r = net.leaf(outgroup)
    (u,) = [c for c in net.children(root) if c != r]
    return r, u


def reweight_at_root(net: Network, w: Weighting, delta, outgroup: str | None = None) -> dict[Edge, Fraction]:
    """Move ``delta`` from the edge ``(root, u)`` onto the outgroup edge ``(root, r)``."""
    r, u = root_outgroup_split(net, outgroup)
    rho = net.root
    delta = Fraction(delta)
    new_r, new_u = w[(rho, r)] + delta, w[(rho, u)] - delta
    if new_r <= 0 or new_u <= 0:
        raise WeightInfeasible(f"root shift {delta} would leave a non-positive tree edge")
    out = dict(w)
    out[(rho, r)] = new_r
    out[(rho, u)] = new_u
    return out
