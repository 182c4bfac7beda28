"""Toric construction: layout, cycle families, logicals, distance."""

import numpy as np
import pytest

from toriq.expand import expand_vec
from toriq.gf import GF2m
from toriq.lift import LiftError, lift_pair, quantum_dimension
from toriq.qmatrix import gf_dot, graph_of, product_over_cycle
from toriq.toric import (
    ToricLayout,
    assemble_code,
    big_cycles,
    brute_force_distance,
    build_extended,
    build_skeleton,
    is_logical_error,
    minimal_cycles,
)


class TestLayout:
    def test_counts(self):
        for n in (2, 3, 5):
            lay = ToricLayout(n)
            assert len(lay.var_coords) == 2 * n * n
            assert len(lay.x_check_coords) == n * n
            assert len(lay.z_check_coords) == n * n

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            ToricLayout(1)

    def test_neighbor_parity(self):
        lay = ToricLayout(3)
        for (i, j) in lay.x_check_coords + lay.z_check_coords:
            for nb in lay.neighbors(i, j):
                assert nb in lay.var_index


class TestSkeleton:
    def test_n2_shape_and_regularity(self):
        pair, lay = build_skeleton(2)
        assert pair.HX.shape == (4, 8) and pair.HZ.shape == (4, 8)
        assert all(pair.HX.row_degree(i) == 4 for i in range(4))
        assert all(pair.HX.col_degree(j) == 2 for j in range(8))
        assert all(pair.HZ.row_degree(i) == 4 for i in range(4))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rank_and_orthogonality(self, n):
        pair, _ = build_skeleton(n)
        assert pair.HX.rank() == n * n - 1
        assert pair.HZ.rank() == n * n - 1
        # orthogonality enforced by the BinaryCssPair constructor already

    def test_length_1152_configuration(self):
        pair, _ = build_skeleton(24)
        assert pair.HX.cols == 2 * 24 * 24 == 1152


class TestCycleFamilies:
    def test_minimal_cycle_counts(self):
        for n in (2, 3):
            lay = ToricLayout(n)
            for side in ("X", "Z"):
                cycles = minimal_cycles(lay, side)
                assert len(cycles) == n * n  # one per opposite-side check
                for cyc in cycles:
                    assert len(cyc.vars) == 4 and len(cyc.checks) == 4

    def test_minimal_cycles_are_valid_walks(self):
        pair, lay = build_skeleton(3)
        gx, gz = graph_of(pair.HX), graph_of(pair.HZ)
        for cyc in minimal_cycles(lay, "X"):
            cyc.validate(gx)
        for cyc in minimal_cycles(lay, "Z"):
            cyc.validate(gz)

    def test_big_cycle_counts_and_support(self):
        for n in (2, 3):
            lay = ToricLayout(n)
            for side in ("X", "Z"):
                cycles = big_cycles(lay, side)
                assert len(cycles) == 2 * n
                for cyc in cycles:
                    assert len(cyc.vars) == n

    def test_big_horizontal_support_is_one_height(self):
        lay = ToricLayout(3)
        for cyc in big_cycles(lay, "X"):
            coords = [lay.var_coords[v] for v in cyc.vars]
            same_row = len({c[1] for c in coords}) == 1
            same_col = len({c[0] for c in coords}) == 1
            assert same_row or same_col

    def test_big_cycles_are_valid_walks(self):
        pair, lay = build_skeleton(2)
        gx, gz = graph_of(pair.HX), graph_of(pair.HZ)
        for cyc in big_cycles(lay, "X"):
            cyc.validate(gx)
        for cyc in big_cycles(lay, "Z"):
            cyc.validate(gz)

    def test_bad_side_rejected(self):
        lay = ToricLayout(2)
        with pytest.raises(ValueError):
            minimal_cycles(lay, "Y")


class TestLemmaL1:
    @pytest.mark.parametrize("n,m", [(2, 2), (3, 3), (4, 2)])
    def test_z_side_products_all_one(self, n, m):
        code = build_extended(n, m, seed=n * 100 + m)
        gz = graph_of(code.pair.HZq)
        lay = code.layout
        for cyc in minimal_cycles(lay, "Z") + big_cycles(lay, "Z"):
            assert product_over_cycle(gz, cyc) == 1


class TestBuildExtended:
    def test_fig2_configurations(self):
        # all three n_qubits = 1152 configurations; n=8/m=9 kept smallest
        code = build_extended(12, 4, 0)
        assert code.n_qubits == 1152 and code.qubit_dimension == 8
        code = build_extended(24, 1, 0)
        assert code.n_qubits == 1152 and code.qubit_dimension == 2
        assert code.rate == pytest.approx(1 / 576)

    def test_n8_m9(self):
        code = build_extended(8, 9, 1)
        assert code.n_qubits == 1152
        assert code.qubit_dimension == 18
        assert code.rate == pytest.approx(1 / 64)

    def test_logical_invariants(self):
        code = build_extended(3, 4, 5)
        logs = code.logicals
        f = code.field
        n = code.n
        for vec, H in ((logs.xbar1, code.pair.HZq), (logs.xbar2, code.pair.HZq),
                       (logs.zbar1, code.pair.HXq), (logs.zbar2, code.pair.HXq)):
            assert np.count_nonzero(vec) == n
            assert not np.any(H.apply(vec))
        assert gf_dot(f, logs.xbar1, logs.zbar1) != 0
        assert gf_dot(f, logs.xbar2, logs.zbar2) != 0
        assert gf_dot(f, logs.xbar1, logs.zbar2) == 0
        assert gf_dot(f, logs.xbar2, logs.zbar1) == 0

    def test_shifts_partition_n_squared_vars(self):
        code = build_extended(3, 2, 7)
        support = np.zeros(code.pair.n, dtype=int)
        for s in code.logicals.zbar1_shifts:
            support += (s != 0)
        assert support.max() == 1 and support.sum() == 9

    def test_syndrome_realizability(self):
        # delete one X check; the rest stay independent (rank n^2 - 1)
        code = build_extended(3, 3, 2)
        H = code.pair.HXq
        keep = [(i, j, v) for (i, j), v in H.entries.items() if i != 0]
        from toriq.qmatrix import SparseQMatrix
        M = SparseQMatrix(H.field, H.rows, H.cols, keep)
        assert M.rank() == 3 * 3 - 1

    def test_assemble_rejects_wrong_size(self):
        skeleton, _ = build_skeleton(2)
        pair = lift_pair(skeleton, 2, 0)
        with pytest.raises(LiftError):
            assemble_code(pair, 3)


@pytest.fixture(scope="module")
def small_code():
    return build_extended(2, 2, 11)


class TestIsLogicalError:
    @pytest.fixture()
    def code(self, small_code):
        return small_code

    def test_zero_residual(self, code):
        zero = np.zeros(code.pair.n, dtype=int)
        assert is_logical_error(code, zero, "X") is False
        assert is_logical_error(code, zero, "Z") is False

    def test_xbar1_is_logical(self, code):
        assert is_logical_error(code, code.logicals.xbar1, "X") is True
        assert is_logical_error(code, code.logicals.zbar1, "Z") is True

    def test_stabilizer_row_is_not_logical(self, code):
        row = np.zeros(code.pair.n, dtype=int)
        for j, v in code.pair.HXq.row_adj[1]:
            row[j] = v
        for method in ("pairing", "rowspace", "both"):
            assert is_logical_error(code, row, "X", method=method) is False

    def test_methods_agree_on_kernel_sample(self, code):
        rng = np.random.default_rng(0)
        basis = code.pair.HZq.kernel_basis()
        f = code.field
        for _ in range(25):
            coeffs = rng.integers(0, f.q, size=len(basis))
            vec = np.zeros(code.pair.n, dtype=np.int64)
            for c, b in zip(coeffs, basis):
                vec ^= f.mul_vec(int(c), b)
            a = is_logical_error(code, vec, "X", method="pairing")
            b2 = is_logical_error(code, vec, "X", method="rowspace")
            assert a == b2

    def test_nonzero_syndrome_rejected(self, code):
        probe = np.zeros(code.pair.n, dtype=int)
        probe[0] = 1
        if np.any(code.pair.HZq.apply(probe)):
            with pytest.raises(ValueError, match="syndrome"):
                is_logical_error(code, probe, "X")


class TestBruteForceDistance:
    def test_known_distances(self):
        skeleton2, _ = build_skeleton(2)
        pair = lift_pair(skeleton2, 1, 0)
        assert brute_force_distance(pair, "X") == 2
        assert brute_force_distance(pair, "Z") == 2
        pair4 = lift_pair(skeleton2, 2, 3)
        assert brute_force_distance(pair4, "X") == 2
        skeleton3, _ = build_skeleton(3)
        pair3 = lift_pair(skeleton3, 1, 0)
        assert brute_force_distance(pair3, "Z") == 3

    def test_minimizer_weight_bracket(self):
        skeleton, _ = build_skeleton(2)
        pair = lift_pair(skeleton, 2, 1)
        d, mins = brute_force_distance(pair, "X", return_minimizers=True)
        assert d == 2
        for w in mins:
            bits = expand_vec(pair.field, w)
            assert d <= int(bits.sum()) <= pair.field.m * d

    def test_budget_guard(self):
        skeleton, _ = build_skeleton(4)
        pair = lift_pair(skeleton, 2, 0)  # 4^17 codewords >> 2^24
        with pytest.raises(ValueError, match="budget"):
            brute_force_distance(pair, "X")
