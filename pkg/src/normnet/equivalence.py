"""Equivalence of weighted networks up to isomorphism and local re-weighting.

Two weighted networks are equivalent when one becomes the other by an
isomorphism together with moving weight between the in-edges and the out-edge
of each reticulation, and (when some leaf hangs directly off the root)
between the two root edges, always keeping path sums intact.

Both freedoms are removed by :func:`canonical_weights`, so equivalence comes
down to comparing canonical weights under the vertex correspondence given by
:func:`canonical_code`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotTreeChild
from .network import Network, Weighting, is_tree_child


@dataclass(frozen=True)
class CanonicalForm:
    code: str
    weights: tuple[Fraction, ...]


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def vertex_keys(net: Network) -> dict[int, str]:
    """Bottom-up structural key of every vertex.

    In a tree-child network distinct vertices get distinct keys: two vertices
    with the same key reach the same leaves by tree paths, hence lie on one
    chain of tree vertices, hence have sub-networks of different sizes.
    """
    if not is_tree_child(net):
        raise NotTreeChild("canonical codes are only defined for tree-child networks")
    return structural_keys(net)


def structural_keys(net: Network) -> dict[int, str]:
    """Same keys as :func:`vertex_keys` with no tree-child check (uniqueness not guaranteed)."""
    keys: dict[int, str] = {}
    for v in reversed(net.topological_order()):
        kids = net.children(v)
        if not kids:
            keys[v] = _digest("L" + (net.label(v) or ""))
        elif net.is_reticulation(v):
            keys[v] = _digest("R" + keys[kids[0]])
        else:
            keys[v] = _digest("T" + ",".join(sorted(keys[c] for c in kids)))
    return keys


def _ranks(net: Network) -> dict[int, int]:
    keys = vertex_keys(net)
    order = sorted(net.vertices, key=keys.__getitem__)
    return {v: i for i, v in enumerate(order)}


def _code_from_ranks(net: Network, rank: dict[int, int]) -> str:
    leaves = sorted((rank[v], label) for v, label in net.labels.items())
    edges = sorted((rank[u], rank[v]) for u, v in net.edges)
    parts = [f"{len(rank)}"]
    parts.append(";".join(f"{i}={label}" for i, label in leaves))
    parts.append(";".join(f"{a}>{b}" for a, b in edges))
    return "|".join(parts)


def canonical_code(net: Network) -> str:
    """String equal for two tree-child networks iff they are isomorphic."""
    return _code_from_ranks(net, _ranks(net))


def canonical_weights(net: Network, w: Weighting) -> dict:
    """Push as much weight as possible below each reticulation; balance an outgroup root."""
    out = dict(w)
    for u in net.reticulations:
        (c,) = net.children(u)
        p, q = net.parents(u)
        a = out[(p, u)] + out[(u, c)]
        b = out[(q, u)] + out[(u, c)]
        m = min(a, b)
        out[(u, c)] = m
        out[(p, u)] = a - m
        out[(q, u)] = b - m
    root = net.root
    if root is not None and net.outgroups():
        kids = net.children(root)
        total = sum(out[(root, c)] for c in kids)
        for c in kids:
            out[(root, c)] = total / 2
    return out


def canonical_form(net: Network, w: Weighting) -> CanonicalForm:
    rank = _ranks(net)
    cw = canonical_weights(net, w)
    ordered = sorted(net.edges, key=lambda e: (rank[e[0]], rank[e[1]]))
    return CanonicalForm(_code_from_ranks(net, rank), tuple(Fraction(cw[e]) for e in ordered))


def are_equivalent(net_a: Network, w_a: Weighting, net_b: Network, w_b: Weighting) -> bool:
    return canonical_form(net_a, w_a) == canonical_form(net_b, w_b)
