"""Inter-taxa distances of weighted networks.

Two routes are provided and are deliberately independent:

* :func:`enumerate_up_down_paths` / :func:`multiset_distances` walk every
  up-down path explicitly (exponential in the worst case; test oracle).
* :func:`min_distance_matrix` and :func:`outgroup_max_vector` use shortest
  and longest path passes over the DAG and run in polynomial time.

Matrices and vectors store integer numerators over one common denominator,
so every entry is an exact rational and comparisons are integer comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, NotAnOutgroup
from .network import Network, Weighting

DEFAULT_PATH_CAP = 10**6

# numerators at or above this magnitude are held in object arrays of Python ints
_INT64_SAFE = 2**52


def _int_array(values, shape=None) -> np.ndarray:
    flat = [int(x) for x in values]
    big = max((abs(x) for x in flat), default=0) >= _INT64_SAFE
    arr = np.array(flat, dtype=object if big else np.int64)
    return arr.reshape(shape) if shape is not None else arr


def _lcm_of_denominators(values: Iterable[Fraction]) -> int:
    den = 1
    for x in values:
        den = math.lcm(den, Fraction(x).denominator)
    return den


def _fractions_to_ints(values: Sequence[Fraction], den: int) -> list[int]:
    out = []
    for x in values:
        x = Fraction(x)
        out.append(x.numerator * (den // x.denominator))
    return out


class DistanceMatrix:
    """Square matrix of exact rationals indexed by taxon names.

    ``values[i, j] / den`` is the entry for ``(taxa[i], taxa[j])``.

    >>> D = DistanceMatrix.from_rows(["a", "b"], [[0, "5/2"], ["5/2", 0]])
    >>> D["a", "b"]
    Fraction(5, 2)
    """

    __slots__ = ("taxa", "values", "den", "_index")

    def __init__(self, taxa: Sequence[str], values: np.ndarray, den: int = 1):
        self.taxa = tuple(taxa)
        self.values = values
        self.den = int(den)
        self._index = {x: i for i, x in enumerate(self.taxa)}
        if len(self._index) != len(self.taxa):
            raise ValueError("duplicate taxon names")
        if values.shape != (len(self.taxa), len(self.taxa)):
            raise ValueError(f"matrix shape {values.shape} does not match {len(self.taxa)} taxa")

    @classmethod
    def from_rows(cls, taxa: Sequence[str], rows) -> "DistanceMatrix":
        entries = [Fraction(x) for row in rows for x in row]
        den = _lcm_of_denominators(entries)
        n = len(taxa)
        if len(entries) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(entries)}")
        return cls(taxa, _int_array(_fractions_to_ints(entries, den), (n, n)), den)

    @classmethod
    def from_dict(cls, taxa: Sequence[str], d: Mapping[tuple[str, str], Fraction]) -> "DistanceMatrix":
        rows = [[Fraction(0) if x == y else d.get((x, y), d.get((y, x))) for y in taxa] for x in taxa]
        return cls.from_rows(taxa, rows)

    def __len__(self):
        return len(self.taxa)

    def index(self, taxon: str) -> int:
        return self._index[taxon]

    def __contains__(self, taxon) -> bool:
        return taxon in self._index

    def __getitem__(self, key: tuple[str, str]) -> Fraction:
        x, y = key
        return Fraction(int(self.values[self._index[x], self._index[y]]), self.den)

    def to_rows(self) -> list[list[Fraction]]:
        return [[Fraction(int(v), self.den) for v in row] for row in self.values]

    def rescaled(self, den: int) -> "DistanceMatrix":
        """Same entries over the denominator ``den`` (a multiple of the current one)."""
        if den % self.den:
            raise ValueError(f"{den} is not a multiple of {self.den}")
        factor = den // self.den
        vals = self.values * factor
        if vals.dtype != object and int(np.abs(vals).max(initial=0)) >= _INT64_SAFE:
            vals = self.values.astype(object) * factor
        return DistanceMatrix(self.taxa, vals, den)

    def restricted(self, taxa: Sequence[str]) -> "DistanceMatrix":
        idx = [self._index[x] for x in taxa]
        return DistanceMatrix(taxa, self.values[np.ix_(idx, idx)].copy(), self.den)

    def without(self, taxon: str) -> "DistanceMatrix":
        return self.restricted([x for x in self.taxa if x != taxon])

    def problems(self) -> list[str]:
        """Violations of symmetry, zero diagonal and positive off-diagonal entries."""
        out = []
        v = self.values
        n = len(self.taxa)
        if n and np.any(v != v.T):
            out.append("matrix is not symmetric")
        if n and np.any(np.diagonal(v) != 0):
            out.append("diagonal is not zero")
        off = v[~np.eye(n, dtype=bool)] if n else v
        if off.size and np.any(off <= 0):
            out.append("off-diagonal entry is not positive")
        return out

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        if set(self.taxa) != set(other.taxa):
            return False
        o = other.restricted(self.taxa)
        return bool(np.all(self.values * o.den == o.values * self.den))

    __hash__ = None

    def __repr__(self):
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.to_rows())
        return f"DistanceMatrix({list(self.taxa)}, [{rows}])"


MinDistanceMatrix = DistanceMatrix


class OutgroupMaxVector:
    """Longest up-down path length from the outgroup ``r`` to every other taxon."""

    __slots__ = ("outgroup", "taxa", "values", "den", "_index")

    def __init__(self, outgroup: str, taxa: Sequence[str], values: np.ndarray, den: int = 1):
        self.outgroup = outgroup
        self.taxa = tuple(taxa)
        self.values = values
        self.den = int(den)
        self._index = {x: i for i, x in enumerate(self.taxa)}
        if outgroup in self._index:
            raise ValueError("the outgroup has no entry of its own")
        if values.shape != (len(self.taxa),):
            raise ValueError("vector length does not match taxa")

    @classmethod
    def from_dict(cls, outgroup: str, d: Mapping[str, Fraction], taxa: Sequence[str] | None = None):
        taxa = tuple(taxa) if taxa is not None else tuple(d)
        entries = [Fraction(d[x]) for x in taxa]
        den = _lcm_of_denominators(entries)
        return cls(outgroup, taxa, _int_array(_fractions_to_ints(entries, den)), den)

    def __len__(self):
        return len(self.taxa)

    def __getitem__(self, taxon: str) -> Fraction:
        return Fraction(int(self.values[self._index[taxon]]), self.den)

    def index(self, taxon: str) -> int:
        return self._index[taxon]

    def to_dict(self) -> dict[str, Fraction]:
        return {x: self[x] for x in self.taxa}

    def rescaled(self, den: int) -> "OutgroupMaxVector":
        if den % self.den:
            raise ValueError(f"{den} is not a multiple of {self.den}")
        factor = den // self.den
        vals = self.values * factor
        if vals.dtype != object and int(np.abs(vals).max(initial=0)) >= _INT64_SAFE:
            vals = self.values.astype(object) * factor
        return OutgroupMaxVector(self.outgroup, self.taxa, vals, den)

    def restricted(self, taxa: Sequence[str]) -> "OutgroupMaxVector":
        idx = [self._index[x] for x in taxa]
        return OutgroupMaxVector(self.outgroup, taxa, self.values[idx].copy(), self.den)

    def without(self, taxon: str) -> "OutgroupMaxVector":
        return self.restricted([x for x in self.taxa if x != taxon])

    def __eq__(self, other):
        if not isinstance(other, OutgroupMaxVector):
            return NotImplemented
        if self.outgroup != other.outgroup or set(self.taxa) != set(other.taxa):
            return False
        o = other.restricted(self.taxa)
        return bool(np.all(self.values * o.den == o.values * self.den))

    __hash__ = None

    def __repr__(self):
        return f"OutgroupMaxVector({self.outgroup!r}, {self.to_dict()})"


# -- enumeration oracle ---------------------------------------------------------


@dataclass(frozen=True)
class UpDownPath:
    vertices: tuple[int, ...]
    peak: int
    length: Fraction


def enumerate_up_down_paths(
    net: Network, w: Weighting, x: str, y: str, cap: int = DEFAULT_PATH_CAP
) -> list[UpDownPath]:
    """Every up-down path from leaf ``x`` to leaf ``y``.

    Raises :class:`CapExceeded` once more than ``cap`` paths have been found.
    """
    vx, vy = net.leaf(x), net.leaf(y)
    if vx == vy:
        return [UpDownPath((vx,), 0, Fraction(0))]
    reaches_y = net.ancestors(vy)
    paths: list[UpDownPath] = []
    up = [vx]
    used = {vx}

    def descend(v, trail, length):
        if v == vy:
            if len(paths) >= cap:
                raise CapExceeded(f"more than {cap} up-down paths between {x} and {y}")
            paths.append(UpDownPath(tuple(up) + tuple(trail), len(up) - 1, length))
            return
        for c in net.children(v):
            if c in reaches_y and c not in used:
                used.add(c)
                trail.append(c)
                descend(c, trail, length + w[(v, c)])
                trail.pop()
                used.discard(c)

    def climb(v, length):
        for p in net.parents(v):
            up.append(p)
            used.add(p)
            reached = length + w[(p, v)]
            if p in reaches_y:
                descend(p, [], reached)
            climb(p, reached)
            used.discard(p)
            up.pop()

    climb(vx, Fraction(0))
    return paths


def multiset_distances(net: Network, w: Weighting, cap: int = DEFAULT_PATH_CAP) -> dict[tuple[str, str], tuple[Fraction, ...]]:
    """Sorted multiset of up-down path lengths for every ordered pair of taxa."""
    out = {}
    taxa = net.taxa
    for i, x in enumerate(taxa):
        for y in taxa[i:]:
            lengths = tuple(sorted(p.length for p in enumerate_up_down_paths(net, w, x, y, cap)))
            out[(x, y)] = out[(y, x)] = lengths
    return out


# -- polynomial passes ----------------------------------------------------------


def _integer_weights(net: Network, w: Weighting) -> tuple[dict, int]:
    den = _lcm_of_denominators(w[e] for e in net.edges)
    return {e: int(w[e] * den) for e in net.edges}, den


def min_distance_matrix(net: Network, w: Weighting) -> DistanceMatrix:
    """Shortest up-down path length between every pair of taxa.

    For every vertex the shortest directed distance down to each leaf is
    computed bottom-up; a top-down sweep then lets each vertex inherit the
    best ``leaf -> ancestor -> vertex`` route from its parents.  A walk that
    revisits a vertex is never shorter than the path it contains, so the
    minimum over these walks equals the minimum over up-down paths.
    """
    taxa = net.taxa
    n = len(taxa)
    if not net.edges:
        return DistanceMatrix(taxa, np.zeros((n, n), dtype=np.int64), 1)
    iw, den = _integer_weights(net, w)
    inf = sum(iw.values()) + 1
    dtype = np.int64 if inf < 2**60 else object
    col = {net.leaf(t): i for i, t in enumerate(taxa)}
    order = net.topological_order()

    down: dict[int, np.ndarray] = {}
    for v in reversed(order):
        kids = net.children(v)
        if not kids:
            vec = np.full(n, inf, dtype=dtype)
            vec[col[v]] = 0
        else:
            vec = down[kids[0]] + iw[(v, kids[0])]
            for c in kids[1:]:
                vec = np.minimum(vec, down[c] + iw[(v, c)])
            vec = np.minimum(vec, inf)
        down[v] = vec

    best: dict[int, np.ndarray] = {}
    for v in order:
        vec = down[v]
        for p in net.parents(v):
            vec = np.minimum(vec, best[p] + iw[(p, v)])
        best[v] = vec

    mat = np.stack([best[net.leaf(t)] for t in taxa])
    if np.any(mat >= inf):
        raise ValueError("network is disconnected: some taxa are joined by no up-down path")
    if dtype is not object and int(mat.max(initial=0)) >= _INT64_SAFE:
        mat = mat.astype(object)
    return DistanceMatrix(taxa, mat, den)


def longest_paths_from(net: Network, w: Weighting, source: int) -> dict[int, Fraction]:
    """Longest directed path length from ``source`` to each vertex it reaches."""
    reach = net.descendants(source)
    dist = {source: Fraction(0)}
    for v in net.topological_order():
        if v == source or v not in reach:
            continue
        dist[v] = max(dist[p] + w[(p, v)] for p in net.parents(v) if p in dist)
    return dist


def outgroup_max_vector(net: Network, w: Weighting, r: str) -> OutgroupMaxVector:
    """Longest up-down path from outgroup ``r`` to each other taxon.

    Every such path peaks at the root, so it is ``w(root, r)`` plus the
    longest directed path from the root into the other subtree.
    """
    root = net.root
    vr = net.leaf(r)
    if root is None or net.parents(vr) != (root,):
        raise NotAnOutgroup(f"{r!r} is not a child of the root")
    (u,) = [c for c in net.children(root) if c != vr]
    longest = longest_paths_from(net, w, u)
    base = w[(root, vr)] + w[(root, u)]
    taxa = [t for t in net.taxa if t != r]
    return OutgroupMaxVector.from_dict(r, {t: base + longest[net.leaf(t)] for t in taxa}, taxa)
