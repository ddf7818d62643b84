from __future__ import annotations

import random
from fractions import Fraction

import pytest

from oracles import neighbour_joining_rooted, upgma_tree
from normnet.distances import DistanceMatrix, OutgroupMaxVector, min_distance_matrix, outgroup_max_vector
from normnet.equivalence import are_equivalent
from normnet.errors import NoCandidate, NotRealizable, NoUniqueDescendant
from normnet.generator import GenSpec, generate
from normnet.matrix_reduce import (
    classify_equidistant,
    classify_outgroup,
    cut_in_matrix,
    isolate_in_matrix,
    reduce_in_matrix,
    select_max_qr_pair,
    select_min_pair,
)
from normnet.network import (
    Network,
    is_equidistant,
    is_normal,
    is_reticulation_pair,
    isolate_reticulated_cherry,
    validate,
)
from normnet.reconstruct import (
    AttachmentPoint,
    attach_cherry_equidistant,
    attach_cherry_outgroup,
    attach_reticulated_cherry_equidistant,
    attach_reticulated_cherry_outgroup,
    candidate_points,
    equidistant_normal,
    find_gt_insertion,
    reticulation_pair_normal,
)

F = Fraction


def pendant(net, w, taxon):
    v = net.leaf(taxon)
    return w[(net.parent(v), v)]


def two_leaf(a, b, wa, wb):
    w = {(0, 1): F(wa), (0, 2): F(wb)}
    return Network(w, {1: a, 2: b}), w


def n3r_data(N3R):
    net, w = N3R
    return min_distance_matrix(net, w).without("r"), outgroup_max_vector(net, w, "r")


class TestEquidistant:
    def test_n3_roundtrip(self, N3):
        net, w = equidistant_normal(min_distance_matrix(*N3))
        assert are_equivalent(*N3, net, w)
        assert min_distance_matrix(net, w) == min_distance_matrix(*N3)

    def test_n3_hand_trace(self, N3):
        # after cutting {x1, x2} and reducing x2 the base case is x1, x3 at distance 10
        net, w = two_leaf("x1", "x3", 5, 5)
        net, w = attach_cherry_equidistant(net, w, "x3", "x2", 6)
        b = net.parent(net.leaf("x3"))
        assert pendant(net, w, "x3") == pendant(net, w, "x2") == 3
        assert w[(net.root, b)] == 2 and pendant(net, w, "x1") == 5
        net, w = attach_reticulated_cherry_equidistant(net, w, "x1", "x2", 4)
        ps = net.parent(net.leaf("x1"))
        pt = net.parent(net.leaf("x2"))
        assert pendant(net, w, "x1") == 2 and w[(net.root, ps)] == 3
        assert w[(ps, pt)] + w[(pt, net.leaf("x2"))] == 2
        assert w[(b, pt)] + w[(pt, net.leaf("x2"))] == 3
        assert (w[(ps, pt)], w[(b, pt)], pendant(net, w, "x2")) == (0, 1, 2)
        assert are_equivalent(*N3, net, w)

    def test_single_and_two_taxa(self):
        net, w = equidistant_normal(DistanceMatrix.from_rows(["a"], [[0]]))
        assert net.taxa == ("a",) and not w
        net, w = equidistant_normal(DistanceMatrix.from_rows(["a", "b"], [[0, 5], [5, 0]]))
        assert pendant(net, w, "a") == pendant(net, w, "b") == F(5, 2)

    def test_cherry_attach_needs_room(self):
        net, w = two_leaf("a", "b", 3, 3)
        with pytest.raises(NotRealizable):
            attach_cherry_equidistant(net, w, "a", "c", 6)
        net2, w2 = attach_cherry_equidistant(net, w, "a", "c", 2)
        assert validate(net2, w2) == [] and is_equidistant(net2, w2)

    def test_reticulated_attach_needs_room(self):
        net, w = two_leaf("a", "b", 3, 3)
        with pytest.raises(NotRealizable):
            attach_reticulated_cherry_equidistant(net, w, "a", "b", 6)

    def test_ultrametric_tree_matches_upgma(self):
        for seed in range(10):
            net, w = generate(GenSpec(5, 0, "eq", seed=seed))
            D = min_distance_matrix(net, w)
            d = {(x, y): D[x, y] for x in D.taxa for y in D.taxa}
            ref = upgma_tree(D.taxa, d)
            got = equidistant_normal(D)
            assert are_equivalent(*ref, *got)
            assert are_equivalent(net, w, *got)

    def test_intermediate_matrices_realisable(self):
        """Each matrix met during the reduction is itself reconstructed as a normal equidistant network."""
        for seed in range(15):
            net, w = generate(GenSpec(9, 5, "eq", seed=seed))
            D = min_distance_matrix(net, w)
            while len(D) > 2:
                out = equidistant_normal(D)
                assert is_normal(out[0]) and is_equidistant(*out)
                p = select_min_pair(D)
                c = classify_equidistant(D, p.s, p.t)
                D = reduce_in_matrix(D, c.t) if c.is_cherry else cut_in_matrix(D, c.s, c.t)[0]

    def test_rejects_malformed(self):
        with pytest.raises(NotRealizable):
            equidistant_normal(DistanceMatrix.from_rows(["a", "b"], [[0, 1], [2, 0]]))
        with pytest.raises(NotRealizable):
            equidistant_normal(DistanceMatrix.from_rows(["a", "b"], [[0, 0], [0, 0]]))

    def test_rejects_inconsistent(self):
        D = DistanceMatrix.from_rows(["s", "t", "x", "y"], [
            [0, 1, 5, 3], [1, 0, 3, 5], [5, 3, 0, 4], [3, 5, 4, 0]])
        with pytest.raises(NotRealizable):
            equidistant_normal(D)


class TestReticulationPair:
    def test_n3r_roundtrip(self, N3R):
        D, v = n3r_data(N3R)
        net, w = reticulation_pair_normal(D, v)
        assert are_equivalent(*N3R, net, w)
        p = net.reticulations[0]
        assert all(w[(q, p)] == 0 for q in net.parents(p))
        assert pendant(net, w, "x2") == 3

    def test_two_leaf_base(self):
        D = DistanceMatrix.from_rows(["s"], [[0]])
        v = OutgroupMaxVector.from_dict("r", {"s": 2})
        net, w = reticulation_pair_normal(D, v)
        assert pendant(net, w, "r") == pendant(net, w, "s") == 1

    def test_outgroup_only(self):
        net, _ = reticulation_pair_normal(DistanceMatrix.from_rows([], []), OutgroupMaxVector.from_dict("r", {}))
        assert net.taxa == ("r",)

    def test_tree_matches_neighbour_joining(self):
        for seed in range(10):
            net, w = generate(GenSpec(5, 0, "rp", with_outgroup=True, seed=seed))
            full = min_distance_matrix(net, w)
            d = {(x, y): full[x, y] for x in full.taxa for y in full.taxa if x != y}
            ref = neighbour_joining_rooted(full.taxa, d, "r")
            got = reticulation_pair_normal(full.without("r"), outgroup_max_vector(net, w, "r"))
            assert are_equivalent(*ref, *got)
            assert are_equivalent(net, w, *got)

    def test_cherry_attach(self):
        net, w = two_leaf("r", "s", 1, 6)
        D = DistanceMatrix.from_rows(["s", "t"], [[0, 5], [5, 0]])
        v = OutgroupMaxVector.from_dict("r", {"s": 7, "t": 7})
        # symmetric cherry: Q = 7 - c with c = 5/2
        net2, w2 = attach_cherry_outgroup(net, w, "s", "t", D, v)
        assert pendant(net2, w2, "s") == pendant(net2, w2, "t") == F(5, 2)
        v_bad = OutgroupMaxVector.from_dict("r", {"s": 7, "t": 1})
        with pytest.raises(NotRealizable):
            attach_cherry_outgroup(net, w, "s", "t", D, v_bad)

    def test_gt_insertion_n3r(self, N3R):
        D, v = n3r_data(N3R)
        reduced = isolate_reticulated_cherry(*N3R, "x3", "x2")
        pt = find_gt_insertion(*reduced, "x3", "x2", D, v)
        net, w = reduced
        x1 = net.leaf("x1")
        assert (pt.head, pt.offset) == (x1, 3) and pt.tail == net.parent(x1)
        out, wo = attach_reticulated_cherry_outgroup(net, w, "x3", "x2", pt, D, v)
        ret = out.reticulations[0]
        assert {wo[(p, ret)] for p in out.parents(ret)} == {0}
        assert pendant(out, wo, "x2") == 3
        a = out.parent(out.leaf("x1"))
        assert wo[(a, out.leaf("x1"))] == 3 and wo[(out.parent(a), a)] == 1
        assert are_equivalent(*N3R, out, wo)
        assert is_reticulation_pair(out, wo) and is_normal(out)

    def test_walk_landing_on_vertex(self, N3R):
        D, v = n3r_data(N3R)
        rows = D.to_rows()
        rows[0][1] = rows[1][0] = F(7)  # x1 walks 7 - 3 = 4, exactly to its parent
        D2 = DistanceMatrix.from_rows(D.taxa, rows)
        reduced = isolate_reticulated_cherry(*N3R, "x3", "x2")
        assert candidate_points(*reduced, "x3", "x2", D2, v) == {"x1": None}
        with pytest.raises(NoCandidate):
            find_gt_insertion(*reduced, "x3", "x2", D2, v)

    def test_ancestor_of_ps_excluded(self, N3R):
        D, v = n3r_data(N3R)
        rows = D.to_rows()
        rows[0][1] = rows[1][0] = F(15, 2)  # lands mid-way on the root edge above p_s
        D2 = DistanceMatrix.from_rows(D.taxa, rows)
        reduced = isolate_reticulated_cherry(*N3R, "x3", "x2")
        assert candidate_points(*reduced, "x3", "x2", D2, v) == {"x1": None}

    def test_incomparable_candidates(self):
        edges = {(0, 9): 1, (0, 1): 1, (1, 2): 1, (1, 3): 2, (2, 10): 3, (2, 13): 3, (3, 12): 2, (3, 11): 3}
        w = {e: F(x) for e, x in edges.items()}
        net = Network(w, {9: "r", 10: "x1", 11: "x2", 12: "x3", 13: "x4"})
        taxa = ["x1", "x2", "x3", "x4"]
        D = DistanceMatrix.from_rows(taxa, [[0, 4, 8, 6], [4, 0, 5, 4], [8, 5, 0, 8], [6, 4, 8, 0]])
        v = OutgroupMaxVector.from_dict("r", {"x1": 6, "x2": 7, "x3": 6, "x4": 6})
        pts = candidate_points(net, w, "x3", "x2", D, v)
        assert pts["x1"].offset == pts["x4"].offset == 1
        with pytest.raises(NoUniqueDescendant):
            find_gt_insertion(net, w, "x3", "x2", D, v)

    def test_attach_rejects_wrong_pendant(self, N3R):
        D, v = n3r_data(N3R)
        reduced = isolate_reticulated_cherry(*N3R, "x3", "x2")
        pt = find_gt_insertion(*reduced, "x3", "x2", D, v)
        v_bad = OutgroupMaxVector.from_dict("r", {"x1": 6, "x2": 8, "x3": 6})
        with pytest.raises(NotRealizable):
            attach_reticulated_cherry_outgroup(*reduced, "x3", "x2", AttachmentPoint(pt.tail, pt.head, pt.offset), D, v_bad)

    def test_intermediate_data_realisable(self):
        for seed in range(15):
            net, w = generate(GenSpec(9, 5, "rp", with_outgroup=True, seed=seed))
            D, v = min_distance_matrix(net, w).without("r"), outgroup_max_vector(net, w, "r")
            while len(D) >= 2:
                out = reticulation_pair_normal(D, v)
                assert is_normal(out[0]) and is_reticulation_pair(*out)
                p = select_max_qr_pair(D, v)
                c = classify_outgroup(D, v, p.s, p.t)
                if c.is_cherry:
                    D, v = reduce_in_matrix(D, c.t), v.without(c.t)
                else:
                    D, v, _ = isolate_in_matrix(D, v, c.s, c.t)

    def test_rejects_bad_inputs(self):
        D = DistanceMatrix.from_rows(["a", "b"], [[0, 3], [3, 0]])
        with pytest.raises(NotRealizable):
            reticulation_pair_normal(D, OutgroupMaxVector.from_dict("r", {"a": 1}))
        with pytest.raises(NotRealizable):
            reticulation_pair_normal(D, OutgroupMaxVector.from_dict("a", {"b": 2}))
        with pytest.raises(NotRealizable):
            reticulation_pair_normal(D, OutgroupMaxVector.from_dict("r", {"a": 0, "b": 2}))


def test_outputs_deterministic():
    rng = random.Random(3)
    for seed in range(5):
        n = rng.randint(4, 12)
        net, w = generate(GenSpec(n, n // 2, "eq", seed=seed))
        D = min_distance_matrix(net, w)
        a, b = equidistant_normal(D), equidistant_normal(D)
        assert a[0] == b[0] and a[1] == b[1]
