"""Rebuilding weighted normal networks from quadratic-size distance data.

:func:`equidistant_normal` takes the minimum distance matrix of an
equidistant-weighted normal network; :func:`reticulation_pair_normal` takes
the minimum distance matrix on ``X`` together with the maximum-distance
vector from an outgroup ``r``.  Both shrink the data one pair at a time
(reduce a cherry, or cut/isolate a reticulated cherry) down to a two-leaf
base case, then replay the recorded steps in reverse to grow the network.

Internally all lengths are integer numerators over a shared denominator that
has a factor of two to spare, so halving a distance never leaves the
integers.  Every returned network is checked against the input data before
it is handed back; anything that fails raises :class:`NotRealizable`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._graph import Graph
from .distances import DistanceMatrix, OutgroupMaxVector, min_distance_matrix, outgroup_max_vector
from .errors import NetworkError, NoCandidate, NotRealizable, NoUniqueDescendant
from .matrix_reduce import (
    classify_equidistant,
    classify_outgroup,
    common_denominator,
    cut_in_matrix,
    isolate_in_matrix,
    qr_score,
    reduce_in_matrix,
    select_max_qr_pair,
    select_min_pair,
)
from .network import (
    Network,
    Weighting,
    find_shortcuts,
    is_equidistant,
    is_reticulation_pair,
    is_tree_child,
    validate,
)


@dataclass(frozen=True)
class AttachmentPoint:
    """A point ``offset`` above ``head`` on the edge ``(tail, head)``."""

    tail: int
    head: int
    offset: object


# -- growth steps on the working graph ------------------------------------------


def _attach_cherry(g: Graph, s: str, t: str, w_s, w_t) -> None:
    vs = g.leaf[s]
    p = g.parent(vs)
    if not (0 < w_s < g.weight[(p, vs)]) or w_t <= 0:
        raise NotRealizable(
            f"attaching {t} beside {s} needs pendant weights {w_s}, {w_t} below an edge of weight {g.weight[(p, vs)]}"
        )
    x = g.subdivide(p, vs, w_s)
    g.add_leaf(x, t, w_t)


def _attach_reticulated_cherry_equidistant(g: Graph, s: str, t: str, half) -> None:
    vs, vt = g.leaf[s], g.leaf[t]
    ps, pt = g.parent(vs), g.parent(vt)
    ws, wt = g.weight[(ps, vs)], g.weight[(pt, vt)]
    if not ws > half:
        raise NotRealizable(f"pendant edge of {s} ({ws}) is too short for a new tree vertex at {half}")
    omega = min(half, wt)
    if omega <= 0:
        raise NotRealizable(f"no positive weight available below the reticulation above {t}")
    a = g.subdivide(ps, vs, half)
    b = g.subdivide(pt, vt, omega)
    g.add_edge(a, b, half - omega)


def _candidate_points(g: Graph, s: str, pendant, distances_to_t) -> dict[str, tuple | None]:
    """Walk up from each leaf by ``d(t, leaf) - pendant``; keep mid-edge stops off the path to ``s``."""
    ps = g.parent(g.leaf[s])
    above_ps = g.ancestors_or_self(ps)
    found: dict[str, tuple | None] = {}
    for leaf_name, d in distances_to_t.items():
        found[leaf_name] = None
        remaining = d - pendant
        if remaining <= 0:
            continue
        cur = g.leaf[leaf_name]
        while True:
            pars = g.parents[cur]
            if len(pars) != 1:
                break
            p = pars[0]
            wt = g.weight[(p, cur)]
            if remaining < wt:
                if cur not in above_ps:
                    found[leaf_name] = (p, cur, remaining)
                break
            if remaining == wt:
                break
            remaining -= wt
            cur = p
    return found


def _lowest_point(g: Graph, points) -> tuple:
    """The point lying below every other point, found via one topological pass."""
    points = set(points)
    if not points:
        raise NoCandidate("no leaf yields an insertion point for the second reticulation parent")
    pos = {v: i for i, v in enumerate(g.topological_order())}
    best = max(points, key=lambda pt: (pos[pt[1]], -pt[2]))
    above = g.ancestors_or_self(best[0])
    for pt in points:
        if pt == best:
            continue
        if (pt[0], pt[1]) == (best[0], best[1]):
            continue  # same edge, larger offset
        if pt[1] not in above:
            raise NoUniqueDescendant("candidate insertion points are not totally ordered by descent")
    return best


def _attach_reticulated_cherry_outgroup(g: Graph, s: str, t: str, point, pendant) -> None:
    tail, head, offset = point
    vs, vt = g.leaf[s], g.leaf[t]
    ps = g.parent(vs)
    if g.parent(vt) != ps:
        raise NotRealizable(f"{s} and {t} do not form a cherry in the reduced network")
    if g.weight[(ps, vt)] != pendant:
        raise NotRealizable(
            f"pendant edge of {t} has weight {g.weight[(ps, vt)]}, outgroup data demand {pendant}"
        )
    gt = g.subdivide(tail, head, offset)
    pt = g.subdivide(ps, vt, pendant)
    g.add_edge(gt, pt, 0 * pendant)


# -- public single-step helpers (Fraction weights) ---------------------------------


def _to_graph(net: Network, w: Weighting) -> Graph:
    return Graph.from_network(net, w, convert=Fraction)


def attach_cherry_equidistant(net: Network, w: Weighting, s: str, t: str, d_st):
    """Hang new leaf ``t`` next to ``s`` with both pendant edges ``d_st / 2``."""
    half = Fraction(d_st) / 2
    g = _to_graph(net, w)
    _attach_cherry(g, s, t, half, half)
    return g.freeze()


def attach_reticulated_cherry_equidistant(net: Network, w: Weighting, s: str, t: str, d_st):
    """Add an edge from a new parent of ``s`` to a new reticulation above ``t``."""
    g = _to_graph(net, w)
    _attach_reticulated_cherry_equidistant(g, s, t, Fraction(d_st) / 2)
    return g.freeze()


def attach_cherry_outgroup(net: Network, w: Weighting, s: str, t: str, D: DistanceMatrix, v: OutgroupMaxVector):
    q = qr_score(D, v, s, t)
    w_s = v[s] - q
    g = _to_graph(net, w)
    _attach_cherry(g, s, t, w_s, D[s, t] - w_s)
    return g.freeze()


def candidate_points(net: Network, w: Weighting, s: str, t: str, D: DistanceMatrix, v: OutgroupMaxVector):
    """Per leaf other than ``s`` and ``t``: its candidate insertion point, or ``None``."""
    pendant = v[t] - qr_score(D, v, s, t)
    row = {x: D[t, x] for x in D.taxa if x not in (s, t)}
    g = _to_graph(net, w)
    return {
        x: None if pt is None else AttachmentPoint(*pt)
        for x, pt in _candidate_points(g, s, pendant, row).items()
    }


def find_gt_insertion(net: Network, w: Weighting, s: str, t: str, D: DistanceMatrix, v: OutgroupMaxVector) -> AttachmentPoint:
    """Where the second parent of the reticulation above ``t`` goes back in."""
    cands = candidate_points(net, w, s, t, D, v)
    g = _to_graph(net, w)
    pts = [(p.tail, p.head, p.offset) for p in cands.values() if p is not None]
    return AttachmentPoint(*_lowest_point(g, pts))


def attach_reticulated_cherry_outgroup(
    net: Network, w: Weighting, s: str, t: str, point: AttachmentPoint, D: DistanceMatrix, v: OutgroupMaxVector
):
    pendant = v[t] - qr_score(D, v, s, t)
    if pendant <= 0:
        raise NotRealizable("reticulation leaf would get a non-positive pendant edge")
    g = _to_graph(net, w)
    _attach_reticulated_cherry_outgroup(g, s, t, (point.tail, point.head, point.offset), pendant)
    return g.freeze()


# -- the two algorithms ----------------------------------------------------------


def _single_vertex(taxon: str):
    return Network([], {0: taxon}), {}


def _require_clean(D: DistanceMatrix) -> None:
    problems = D.problems()
    if problems:
        raise NotRealizable("input matrix: " + "; ".join(problems))
    if len(D) == 0:
        raise NotRealizable("no taxa")


def _final_check(net: Network, w: Weighting) -> None:
    problems = validate(net, w)
    if not problems and not is_tree_child(net):
        problems.append("not tree-child")
    if not problems and find_shortcuts(net):
        problems.append("has shortcuts")
    if problems:
        raise NotRealizable("post-validation: " + "; ".join(problems))


def equidistant_normal(D: DistanceMatrix, *, verify: bool = True):
    """Equidistant-weighted normal network realising the minimum distance matrix ``D``.

    Where the equivalence class leaves freedom at a reticulation, the child
    edge takes as much weight as possible so at least one in-edge is zero.
    """
    _require_clean(D)
    original = D
    if len(D) == 1:
        return _single_vertex(D.taxa[0])
    D = D.rescaled(2 * D.den)
    steps = []
    limit = 2 * len(D)
    while len(D) > 2:
        if len(steps) > limit:
            raise NotRealizable("reduction did not terminate within the normal-network step bound")
        pair = select_min_pair(D)
        c = classify_equidistant(D, pair.s, pair.t)
        half = int(D.values[D.index(c.s), D.index(c.t)]) // 2
        if c.is_cherry:
            D = reduce_in_matrix(D, c.t)
        else:
            D, _ = cut_in_matrix(D, c.s, c.t)
        steps.append((c.is_cherry, c.s, c.t, half))

    g = Graph()
    root = g.new_vertex()
    g.root = root
    a, b = D.taxa
    half = int(D.values[0, 1]) // 2
    g.add_leaf(root, a, half)
    g.add_leaf(root, b, half)
    try:
        for is_cherry, s, t, half in reversed(steps):
            if is_cherry:
                _attach_cherry(g, s, t, half, half)
            else:
                _attach_reticulated_cherry_equidistant(g, s, t, half)
    except NetworkError as exc:
        raise NotRealizable(str(exc)) from exc
    net, w = g.freeze(D.den)

    if verify:
        _final_check(net, w)
        if not is_equidistant(net, w):
            raise NotRealizable("post-validation: result is not equidistant")
        if min_distance_matrix(net, w) != original:
            raise NotRealizable("post-validation: result does not realise the input matrix")
    return net, w


def _split_root_evenly(net: Network, w: dict, r: str) -> None:
    root = net.root
    vr = net.leaf(r)
    (u,) = [c for c in net.children(root) if c != vr]
    total = w[(root, vr)] + w[(root, u)]
    w[(root, vr)] = w[(root, u)] = total / 2


def reticulation_pair_normal(D: DistanceMatrix, v: OutgroupMaxVector, *, verify: bool = True):
    """Reticulation-pair weighted normal network with outgroup ``v.outgroup``.

    ``D`` is the minimum distance matrix on the non-outgroup taxa and ``v``
    the maximum-distance outgroup vector.  Every reticulation edge of the
    result has weight zero and the two root edges are equal.
    """
    r = v.outgroup
    if r in D:
        raise NotRealizable(f"outgroup {r!r} must not be a row of the minimum distance matrix")
    if set(v.taxa) != set(D.taxa):
        raise NotRealizable("outgroup vector and matrix cover different taxa")
    if len(D) == 0:
        return _single_vertex(r)
    _require_clean(D)
    if any(x <= 0 for x in v.values):
        raise NotRealizable("outgroup distances must be positive")
    original_D, original_v = D, v
    D, v = common_denominator(D, v)
    den = 2 * D.den
    D, v = D.rescaled(den), v.rescaled(den)

    steps = []
    limit = 2 * len(D)
    while len(D) >= 2:
        if len(steps) > limit:
            raise NotRealizable("reduction did not terminate within the normal-network step bound")
        pair = select_max_qr_pair(D, v)
        c = classify_outgroup(D, v, pair.s, pair.t)
        i, j = D.index(c.s), D.index(c.t)
        vs, vt = int(v.values[i]), int(v.values[j])
        d_st = int(D.values[i, j])
        q = (vs + vt - d_st) // 2
        if c.is_cherry:
            steps.append((True, c.s, c.t, d_st, vs, q))
            D = reduce_in_matrix(D, c.t)
            v = v.without(c.t)
        else:
            row = {x: int(D.values[j, k]) for k, x in enumerate(D.taxa) if k not in (i, j)}
            steps.append((False, c.s, c.t, q, vt, row))
            D, v, _ = isolate_in_matrix(D, v, c.s, c.t)

    g = Graph()
    root = g.new_vertex()
    g.root = root
    (x,) = D.taxa
    # the root split is free; park all of it on the ingroup side and balance at the end
    g.add_leaf(root, r, 0)
    g.add_leaf(root, x, int(v.values[0]))
    try:
        for step in reversed(steps):
            if step[0]:
                _, s, t, d_st, vs, q = step
                w_s = vs - q
                _attach_cherry(g, s, t, w_s, d_st - w_s)
            else:
                _, s, t, q, vt, row = step
                pendant = vt - q
                if pendant <= 0:
                    raise NotRealizable(f"reticulation leaf {t} would get a non-positive pendant edge")
                point = _lowest_point(g, [p for p in _candidate_points(g, s, pendant, row).values() if p is not None])
                _attach_reticulated_cherry_outgroup(g, s, t, point, pendant)
    except NetworkError as exc:
        raise NotRealizable(str(exc)) from exc
    net, w = g.freeze(den)
    _split_root_evenly(net, w, r)

    if verify:
        _final_check(net, w)
        if not is_reticulation_pair(net, w):
            raise NotRealizable("post-validation: result is not a reticulation-pair weighting")
        if any(w[(p, u)] != 0 for u in net.reticulations for p in net.parents(u)):
            raise NotRealizable("post-validation: non-zero reticulation edge")
        if min_distance_matrix(net, w).without(r) != original_D:
            raise NotRealizable("post-validation: result does not realise the minimum distance matrix")
        if outgroup_max_vector(net, w, r) != original_v:
            raise NotRealizable("post-validation: result does not realise the outgroup vector")
    return net, w
