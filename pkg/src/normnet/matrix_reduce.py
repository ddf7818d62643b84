"""Distance-matrix counterparts of reducing, cutting and isolating.

Each reconstruction iteration picks a pair of taxa, decides from the matrix
alone whether it is a cherry or a reticulated cherry, and shrinks the data by
the matching operation.  All arithmetic is on the integer numerators of
:class:`~normnet.distances.DistanceMatrix`, so equality tests are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distances import DistanceMatrix, OutgroupMaxVector
from .errors import EmptyXt, Inconsistent
from .network import PairClassification, PairKind


@dataclass(frozen=True)
class PairScore:
    s: str
    t: str
    score: Fraction


@dataclass(frozen=True)
class CutContext:
    x_t: frozenset[str]
    delta: Fraction
    x_delta: frozenset[str]


@dataclass(frozen=True)
class IsolateContext:
    gamma: Fraction


def common_denominator(D: DistanceMatrix, v: OutgroupMaxVector) -> tuple[DistanceMatrix, OutgroupMaxVector]:
    """Bring ``D`` and ``v`` onto one denominator and one taxon order."""
    if v.taxa != D.taxa:
        v = v.restricted(D.taxa)
    if D.den == v.den:
        return D, v
    den = math.lcm(D.den, v.den)
    return D.rescaled(den), v.rescaled(den)


def _first_pair(taxa, rows, cols) -> tuple[str, str]:
    return min(tuple(sorted((taxa[i], taxa[j]))) for i, j in zip(rows, cols))


def select_min_pair(D: DistanceMatrix) -> PairScore:
    """Pair of distinct taxa at minimum distance; ties go to the lexicographically first pair."""
    n = len(D)
    if n < 2:
        raise ValueError("need at least two taxa")
    vals = D.values.copy()
    np.fill_diagonal(vals, vals.max() + 1)
    m = vals.min()
    rows, cols = np.nonzero(vals == m)
    s, t = _first_pair(D.taxa, rows, cols)
    return PairScore(s, t, Fraction(int(m), D.den))


def _twice_qr(D: DistanceMatrix, v: OutgroupMaxVector) -> np.ndarray:
    return v.values[:, None] + v.values[None, :] - D.values


def qr_score(D: DistanceMatrix, v: OutgroupMaxVector, x: str, y: str) -> Fraction:
    """``(d_max(r, x) + d_max(r, y) - d_min(x, y)) / 2``."""
    return (v[x] + v[y] - D[x, y]) / 2


def select_max_qr_pair(D: DistanceMatrix, v: OutgroupMaxVector) -> PairScore:
    """Pair maximising the outgroup score; ties go to the lexicographically first pair."""
    if len(D) < 2:
        raise ValueError("need at least two taxa")
    D, v = common_denominator(D, v)
    q = _twice_qr(D, v)
    np.fill_diagonal(q, q.min() - 1)
    m = q.max()
    rows, cols = np.nonzero(q == m)
    s, t = _first_pair(D.taxa, rows, cols)
    return PairScore(s, t, Fraction(int(m), 2 * D.den))


def _orient(s: str, t: str, excess: np.ndarray, others: np.ndarray) -> PairClassification:
    """Classify from ``excess[x] > 0`` meaning "x is closer to t than s predicts"."""
    e = excess[others]
    says_t = bool(np.any(e > 0))
    says_s = bool(np.any(e < 0))
    if says_t and says_s:
        raise Inconsistent(f"witnesses disagree on which of {s}, {t} is the reticulation leaf")
    if says_t:
        return PairClassification(PairKind.RETICULATED_CHERRY, s, t)
    if says_s:
        return PairClassification(PairKind.RETICULATED_CHERRY, t, s)
    return PairClassification(PairKind.CHERRY, s, t)


def _others(n: int, i: int, j: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[[i, j]] = False
    return mask


def classify_equidistant(D: DistanceMatrix, s: str, t: str) -> PairClassification:
    """Cherry iff ``s`` and ``t`` are equally far from every other taxon.

    Otherwise ``t`` is the reticulation leaf when some ``x`` has
    ``d(s, x) > d(t, x)`` (and ``s`` is when the inequality goes the other way).
    """
    i, j = D.index(s), D.index(t)
    excess = D.values[i] - D.values[j]
    return _orient(s, t, excess, _others(len(D), i, j))


def classify_outgroup(D: DistanceMatrix, v: OutgroupMaxVector, s: str, t: str) -> PairClassification:
    """Classification by ``d(s, x) + d_max(r, t) - d_max(r, s)`` against ``d(t, x)``."""
    D, v = common_denominator(D, v)
    i, j = D.index(s), D.index(t)
    excess = D.values[i] + (v.values[j] - v.values[i]) - D.values[j]
    return _orient(s, t, excess, _others(len(D), i, j))


def reduce_in_matrix(D: DistanceMatrix, t: str) -> DistanceMatrix:
    """Restriction of ``D`` to every taxon except ``t``."""
    return D.without(t)


def cut_in_matrix(D: DistanceMatrix, s: str, t: str) -> tuple[DistanceMatrix, CutContext]:
    """Replace row ``t`` by distances as if the edge from the parent of ``s`` were gone.

    Members of ``X_delta`` act as stand-ins for ``t``: ``d'(t, y)`` is the
    largest ``d(x, y)`` over ``x`` in ``X_delta - {y}`` when that reaches
    ``delta``, and ``delta`` otherwise (including when the set is empty).
    """
    i, j = D.index(s), D.index(t)
    vals = D.values
    n = len(D)
    in_xt = _others(n, i, j) & (vals[j] != vals[i])
    if not in_xt.any():
        raise EmptyXt(f"no taxon separates {t} from {s}; cutting is undefined")
    delta = vals[j][in_xt].min()
    xd = np.nonzero(in_xt & (vals[j] == delta))[0]
    block = vals[xd, :].copy()
    # distances are non-negative, so -1 stands for the maximum over an empty set
    block[np.arange(len(xd)), xd] = -1
    m = block.max(axis=0)
    row = np.where(m >= delta, m, delta)
    row[j] = 0
    out = vals.copy()
    out[j, :] = row
    out[:, j] = row
    ctx = CutContext(
        frozenset(D.taxa[k] for k in np.nonzero(in_xt)[0]),
        Fraction(int(delta), D.den),
        frozenset(D.taxa[k] for k in xd),
    )
    return DistanceMatrix(D.taxa, out, D.den), ctx


def isolate_in_matrix(
    D: DistanceMatrix, v: OutgroupMaxVector, s: str, t: str
) -> tuple[DistanceMatrix, OutgroupMaxVector, IsolateContext]:
    """Make ``t`` a copy of ``s`` shifted by ``gamma = d_max(r, t) - d_max(r, s)``.

    ``d'(t, s)`` keeps its old value and the outgroup vector is unchanged.
    """
    D, v = common_denominator(D, v)
    i, j = D.index(s), D.index(t)
    gamma = v.values[j] - v.values[i]
    vals = D.values
    row = vals[i] + gamma
    row[i] = vals[j, i]
    row[j] = 0
    out = vals.copy()
    out[j, :] = row
    out[:, j] = row
    return DistanceMatrix(D.taxa, out, D.den), v, IsolateContext(Fraction(int(gamma), D.den))
