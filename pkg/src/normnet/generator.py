"""Seeded random weighted normal networks, plus a path-explosion family.

Topologies are grown by running the reduction operations backwards from a
two-leaf cherry: hanging a new leaf next to an existing one, or adding an
edge from a new parent of ``s`` to a new reticulation above ``t``.  The second
move is only made when the result stays tree-child and shortcut-free, so every
intermediate network is normal.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction

from ._graph import Graph
from .errors import InfeasibleSpec
from .network import Network, Weighting

DEFAULT_DENOMINATOR = 64
RETRY_CAP = 100


class WeightingClass(enum.Enum):
    EQUIDISTANT = "eq"
    RETICULATION_PAIR = "rp"


@dataclass(frozen=True)
class GenSpec:
    n_leaves: int
    n_reticulations: int = 0
    weighting_class: WeightingClass | str = WeightingClass.EQUIDISTANT
    with_outgroup: bool = False
    seed: int = 0
    height_bound: Fraction | int = 1
    outgroup: str = "r"

    def __post_init__(self):
        object.__setattr__(self, "weighting_class", WeightingClass(self.weighting_class))
        object.__setattr__(self, "height_bound", Fraction(self.height_bound))
        if self.n_leaves < 1:
            raise InfeasibleSpec("need at least one leaf")
        if self.n_reticulations < 0:
            raise InfeasibleSpec("negative reticulation count")
        if self.n_reticulations > max(0, self.n_leaves - 2):
            raise InfeasibleSpec(
                f"a normal network on {self.n_leaves} leaves has at most {max(0, self.n_leaves - 2)} reticulations"
            )
        if self.height_bound <= 0:
            raise InfeasibleSpec("height bound must be positive")


def _reaches(g: Graph, src: int, target: int) -> bool:
    stack, seen = [src], {src}
    while stack:
        v = stack.pop()
        if v == target:
            return True
        for c in g.children[v]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def _cut_feasible(g: Graph, s: int, t: int) -> bool:
    """Can an edge from above ``s`` into a new reticulation above ``t`` keep the network normal?"""
    if s == t:
        return False
    pt = g.parents[t][0]
    if g.is_reticulation(pt):
        return False
    (other,) = [c for c in g.children[pt] if c != t]
    if g.is_reticulation(other):
        return False
    return not _reaches(g, pt, s)


def _grow_leaf(g: Graph, rng: random.Random, leaves: list[int]) -> None:
    s = rng.choice(leaves)
    x = g.subdivide(g.parents[s][0], s, 1)
    leaves.append(g.add_leaf(x, f"_{len(leaves)}", 1))


def _grow_reticulation(g: Graph, rng: random.Random, leaves: list[int]) -> bool:
    for _ in range(RETRY_CAP):
        s, t = rng.sample(leaves, 2)
        if _cut_feasible(g, s, t):
            break
    else:
        pairs = [(s, t) for s in leaves for t in leaves if _cut_feasible(g, s, t)]
        if not pairs:
            return False
        s, t = rng.choice(pairs)
    ps = g.subdivide(g.parents[s][0], s, 1)
    pt = g.subdivide(g.parents[t][0], t, 1)
    g.add_edge(ps, pt, 1)
    return True


def _topology(spec: GenSpec, rng: random.Random) -> Graph:
    g = Graph()
    root = g.new_vertex()
    g.root = root
    if spec.n_leaves == 1:
        g.label[root] = "_0"
        g.leaf["_0"] = root
        return g
    leaves = [g.add_leaf(root, "_0", 1), g.add_leaf(root, "_1", 1)]
    grow, rets = spec.n_leaves - 2, spec.n_reticulations
    while grow or rets:
        # once reticulations outnumber the leaves still to come, cut at every chance
        want_ret = rets and (rets > grow or rng.random() < rets / (grow + rets))
        if want_ret and _grow_reticulation(g, rng, leaves):
            rets -= 1
        elif grow:
            _grow_leaf(g, rng, leaves)
            grow -= 1
        else:
            raise InfeasibleSpec(f"no normal position left for {rets} more reticulation(s)")
    return g


def _random_weight(rng: random.Random, lo: int = 1) -> Fraction:
    return Fraction(rng.randint(lo, DEFAULT_DENOMINATOR), DEFAULT_DENOMINATOR)


def _equidistant_weights(g: Graph, rng: random.Random) -> dict[int, Fraction]:
    """Heights with leaves at 0; reticulation in-edges may be flat."""
    h: dict[int, Fraction] = {}
    for v in reversed(g.topological_order()):
        kids = g.children[v]
        if not kids:
            h[v] = Fraction(0)
            continue
        top = Fraction(0)
        for c in kids:
            flat = g.is_reticulation(c) and rng.random() < 0.3
            top = max(top, h[c] + (0 if flat else _random_weight(rng)))
        h[v] = top
    for (u, v) in g.weight:
        g.weight[(u, v)] = h[u] - h[v]
    return h


def _retpair_weights(g: Graph, rng: random.Random) -> None:
    for v in g.children:
        ps = g.parents[v]
        if len(ps) == 2:
            x = Fraction(0) if rng.random() < 0.3 else _random_weight(rng)
            for p in ps:
                g.weight[(p, v)] = x
        elif len(ps) == 1:
            g.weight[(ps[0], v)] = _random_weight(rng)


def _add_outgroup(g: Graph, name: str, w_out: Fraction, w_old: Fraction) -> None:
    old = g.root
    rho = g.new_vertex()
    g.root = rho
    g.add_edge(rho, old, w_old)
    g.add_leaf(rho, name, w_out)


def _compact(g: Graph, rng: random.Random, n: int) -> tuple[Network, dict]:
    names = [f"x{i}" for i in range(1, n + 1)]
    rng.shuffle(names)
    leaves = [v for v in sorted(g.label) if g.label[v].startswith("_")]
    mapping = {v: names[i] for i, v in enumerate(leaves)}
    order = g.topological_order()
    ids = {v: i for i, v in enumerate(order)}
    labels = {ids[v]: mapping.get(v, g.label[v]) for v in g.label}
    w = {(ids[u], ids[v]): Fraction(x) for (u, v), x in g.weight.items()}
    return Network(w, labels, vertices=range(len(order))), w


def generate(spec: GenSpec) -> tuple[Network, Weighting]:
    """Random weighted normal network matching ``spec``; deterministic per seed."""
    rng = random.Random(spec.seed)
    g = _topology(spec, rng)
    if spec.weighting_class is WeightingClass.EQUIDISTANT:
        h = _equidistant_weights(g, rng)
        height = h[g.root]
        if spec.with_outgroup:
            total = height + _random_weight(rng)
            _add_outgroup(g, spec.outgroup, total, total - height)
            height = total
        if height > 0:
            scale = spec.height_bound / height
            for e in g.weight:
                g.weight[e] *= scale
    else:
        _retpair_weights(g, rng)
        if spec.with_outgroup:
            _add_outgroup(g, spec.outgroup, _random_weight(rng), _random_weight(rng))
    return _compact(g, rng, spec.n_leaves)


def ladder_pair(k: int) -> tuple[str, str]:
    """The two leaves of :func:`generate_ladder` joined by ``2**k`` up-down paths."""
    return "x1", f"x{2 * k}"


def generate_ladder(k: int) -> tuple[Network, Weighting]:
    """Stack of ``k`` diamonds, unit weights, ``2k + 1`` leaves.

    Level ``i`` has a tree vertex ``C_i`` with children ``P_i`` and ``Q_i``;
    each of those carries a leaf and is a parent of reticulation ``R_i``, whose
    child is ``C_{i-1}`` (leaf ``x1`` at the bottom).  A path from ``x1`` to the
    leaf under ``P_k`` passes each ``R_i`` through either ``P_i`` or ``Q_i``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    labels = {0: "x1"}
    edges = []
    below = 0
    nxt = 1
    for i in range(1, k + 1):
        c, p, q, r, a, b = range(nxt, nxt + 6)
        nxt += 6
        edges += [(c, p), (c, q), (p, r), (q, r), (r, below), (p, a), (q, b)]
        labels[a] = f"x{2 * i}"
        labels[b] = f"x{2 * i + 1}"
        below = c
    w = {e: Fraction(1) for e in edges}
    return Network(edges, labels), w
