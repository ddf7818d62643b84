"""Small hand-checked networks shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from normnet.network import Network

RHO, A, B, P, V = 0, 1, 2, 3, 4


def n3():
    """Three leaves, one reticulation, equidistant with height 5."""
    labels = {10: "x1", 11: "x2", 12: "x3"}
    wts = {
        (RHO, A): 3, (RHO, B): 2, (A, 10): 2, (A, P): 1,
        (B, 12): 3, (B, P): 2, (P, 11): 1,
    }
    return Network(wts, labels), {e: Fraction(x) for e, x in wts.items()}


def n3r():
    """Reticulation-pair weighted, outgroup r hanging off the root."""
    labels = {9: "r", 10: "x1", 11: "x2", 12: "x3"}
    wts = {
        (RHO, 9): 1, (RHO, V): 1, (V, A): 1, (V, B): 2, (A, 10): 3,
        (A, P): 1, (B, P): 1, (B, 12): 2, (P, 11): 2,
    }
    return Network(wts, labels), {e: Fraction(x) for e, x in wts.items()}
