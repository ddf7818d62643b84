"""Slow reference implementations used only to cross-check the library.

None of these share code with ``normnet`` beyond the ``Network`` container.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from normnet.network import Network


def brute_up_down_lengths(net: Network, w, x: str, y: str) -> list[Fraction]:
    """Lengths of all simple x-y paths in the undirected graph whose steps go up then down."""
    vx, vy = net.leaf(x), net.leaf(y)
    if vx == vy:
        return [Fraction(0)]
    nbrs = {v: [] for v in net.vertices}
    for (u, v) in net.edges:
        nbrs[u].append((v, "D", w[(u, v)]))
        nbrs[v].append((u, "U", w[(u, v)]))
    found = []

    def dfs(v, seen, dirs, length):
        if v == vy:
            pattern = "".join(dirs)
            if pattern and pattern == "U" * pattern.count("U") + "D" * pattern.count("D") and "U" in pattern and "D" in pattern:
                found.append(length)
            return
        for nxt, d, wt in nbrs[v]:
            if nxt in seen:
                continue
            # once the path has turned down it may never climb again
            if d == "U" and dirs and dirs[-1] == "D":
                continue
            seen.add(nxt)
            dirs.append(d)
            dfs(nxt, seen, dirs, length + wt)
            dirs.pop()
            seen.discard(nxt)

    dfs(vx, {vx}, [], Fraction(0))
    return sorted(found)


def brute_min_matrix(net: Network, w) -> dict[tuple[str, str], Fraction]:
    out = {}
    for x, y in itertools.combinations(net.taxa, 2):
        d = min(brute_up_down_lengths(net, w, x, y))
        out[(x, y)] = out[(y, x)] = d
    return out


def brute_max_from(net: Network, w, r: str) -> dict[str, Fraction]:
    return {y: max(brute_up_down_lengths(net, w, r, y)) for y in net.taxa if y != r}


def upgma_tree(taxa, d) -> tuple[Network, dict]:
    """Naive hierarchical merge; exact on ultrametric matrices."""
    clusters = {i: (frozenset([t]), Fraction(0)) for i, t in enumerate(taxa)}
    labels = {i: t for i, t in enumerate(taxa)}
    edges = {}
    nxt = len(taxa)
    while len(clusters) > 1:
        best = None
        for a, b in itertools.combinations(sorted(clusters), 2):
            da = min(d[(x, y)] for x in clusters[a][0] for y in clusters[b][0])
            if best is None or da < best[0]:
                best = (da, a, b)
        da, a, b = best
        h = Fraction(da) / 2
        for c in (a, b):
            edges[(nxt, c)] = h - clusters[c][1]
        clusters[nxt] = (clusters[a][0] | clusters[b][0], h)
        del clusters[a], clusters[b]
        nxt += 1
    return Network(edges, labels), edges


def neighbour_joining_rooted(taxa, d, outgroup: str) -> tuple[Network, dict]:
    """Exact neighbour joining on an additive matrix, rooted on the outgroup's pendant edge."""
    nodes = list(taxa)
    dist = {(a, b): Fraction(d[(a, b)]) for a in taxa for b in taxa if a != b}
    adj: dict[object, dict[object, Fraction]] = {t: {} for t in taxa}
    counter = itertools.count()
    while len(nodes) > 2:
        n = len(nodes)
        total = {a: sum(dist[(a, b)] for b in nodes if b != a) for a in nodes}
        best = None
        for a, b in itertools.combinations(nodes, 2):
            q = (n - 2) * dist[(a, b)] - total[a] - total[b]
            if best is None or q < best[0]:
                best = (q, a, b)
        _, a, b = best
        u = ("u", next(counter))
        la = dist[(a, b)] / 2 + (total[a] - total[b]) / (2 * (n - 2))
        lb = dist[(a, b)] - la
        adj[u] = {a: la, b: lb}
        adj[a][u] = la
        adj[b][u] = lb
        for c in nodes:
            if c not in (a, b):
                x = (dist[(a, c)] + dist[(b, c)] - dist[(a, b)]) / 2
                dist[(u, c)] = dist[(c, u)] = x
        nodes = [c for c in nodes if c not in (a, b)] + [u]
    a, b = nodes
    adj[a][b] = adj[b][a] = dist[(a, b)]

    ids = {}

    def vid(x):
        if x not in ids:
            ids[x] = len(ids)
        return ids[x]

    # root in the middle of the outgroup's pendant edge, then orient away from it
    (hub, length), = adj[outgroup].items()
    root = ("root",)
    edges = {(vid(root), vid(outgroup)): length / 2, (vid(root), vid(hub)): length / 2}
    stack = [(hub, outgroup)]
    while stack:
        v, came = stack.pop()
        for nb, wt in adj[v].items():
            if nb != came:
                edges[(vid(v), vid(nb))] = wt
                stack.append((nb, v))
    labels = {vid(t): t for t in taxa}
    return Network(edges, labels), edges
