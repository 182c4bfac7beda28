"""Channel sampling, trial classification, sweep aggregation."""

import numpy as np
import pytest

from toriq.decode import DecoderConfig
from toriq.expand import expand_vec
from toriq.sim import (
    CSV_HEADER,
    ChannelModel,
    SimConfig,
    Tally,
    TrialRunner,
    rows_to_csv,
    run_point,
    run_sweep,
    run_trial,
    sample_error,
    stats_row,
    sweep_metadata,
    trial_rng,
    wilson_interval,
)
from toriq.toric import build_extended


@pytest.fixture(scope="module")
def code():
    return build_extended(3, 2, seed=7)


class TestChannel:
    def test_validation(self):
        with pytest.raises(ValueError):
            ChannelModel(-0.1)
        with pytest.raises(ValueError):
            ChannelModel(0.75)
        assert ChannelModel(0.3).p_bit == pytest.approx(0.2)

    def test_zero_probability(self):
        ex, ez = sample_error(100, 0.0, np.random.default_rng(0))
        assert not ex.any() and not ez.any()

    def test_marginals_and_correlation(self):
        p = 0.15
        n = 1_000_000
        ex, ez = sample_error(n, p, np.random.default_rng(123))
        sigma = np.sqrt((2 * p / 3) * (1 - 2 * p / 3) / n)
        assert abs(ex.mean() - 2 * p / 3) < 4 * sigma
        assert abs(ez.mean() - 2 * p / 3) < 4 * sigma
        both = (ex & ez).mean()
        sigma_y = np.sqrt((p / 3) * (1 - p / 3) / n)
        assert abs(both - p / 3) < 4 * sigma_y


class TestWilson:
    def test_basic_properties(self):
        lo, hi = wilson_interval(0, 100)
        assert lo == 0.0 and 0 < hi < 0.05
        lo, hi = wilson_interval(50, 100)
        assert lo < 0.5 < hi
        lo1, hi1 = wilson_interval(50, 100)
        lo2, hi2 = wilson_interval(500, 1000)
        assert (hi2 - lo2) < (hi1 - lo1)  # shrinks with n

    def test_bounds_clipped(self):
        lo, hi = wilson_interval(100, 100)
        assert hi == 1.0 and 0.95 < lo < 1.0


class TestTrialClassification:
    def test_zero_error_is_success(self, code):
        runner = TrialRunner(code, ChannelModel(0.05), DecoderConfig())
        nq = code.n_qubits
        out = runner.run_with_error(np.zeros(nq, np.uint8), np.zeros(nq, np.uint8))
        assert out.x_result == "success" and out.z_result == "success"
        assert not out.word_error
        assert out.residual_qubit_count == 0

    def test_injected_logical_is_flagged(self, code):
        runner = TrialRunner(code, ChannelModel(0.05), DecoderConfig())
        f = code.field
        ex_bits = expand_vec(f, code.logicals.xbar1)
        out = runner.run_with_error(ex_bits, np.zeros(code.n_qubits, np.uint8))
        # zero syndrome: the decoder returns 0 immediately and the residual
        # is the injected logical itself
        assert out.x_result == "logical"
        assert out.z_result == "success"
        assert out.word_error

    def test_injected_stabilizer_is_success(self, code):
        runner = TrialRunner(code, ChannelModel(0.05), DecoderConfig())
        f = code.field
        row = np.zeros(code.pair.n, dtype=np.int64)
        for j, v in code.pair.HXq.row_adj[2]:
            row[j] = v
        out = runner.run_with_error(expand_vec(f, row), np.zeros(code.n_qubits, np.uint8),
                                    audit=True)
        assert out.x_result == "success"

    def test_run_trial_deterministic(self, code):
        channel = ChannelModel(0.08)
        out1 = run_trial(code, channel, DecoderConfig(), trial_rng(9, 0, 4))
        out2 = run_trial(code, channel, DecoderConfig(), trial_rng(9, 0, 4))
        assert out1 == out2


class TestSweep:
    def test_config_validation(self, code):
        with pytest.raises(ValueError):
            SimConfig(n=3, m=2, code_seed=7, p_grid=[0.01], trials=0, master_seed=1)
        with pytest.raises(ValueError):
            SimConfig(n=3, m=2, code_seed=7, p_grid=[0.9], trials=5, master_seed=1)

    def test_mismatched_code_rejected(self, code):
        cfg = SimConfig(n=4, m=2, code_seed=7, p_grid=[0.01], trials=1, master_seed=1)
        with pytest.raises(ValueError):
            run_sweep(code, cfg)

    def test_zero_p_single_trial(self, code):
        cfg = SimConfig(n=3, m=2, code_seed=7, p_grid=[0.0], trials=1, master_seed=5)
        rows = run_sweep(code, cfg)
        assert rows[0]["wer"] == 0.0 and rows[0]["qer"] == 0.0
        assert rows[0]["trials"] == 1

    def test_deterministic_and_partition_invariant(self, code):
        cfg = SimConfig(n=3, m=2, code_seed=7, p_grid=[0.06], trials=40, master_seed=11)
        rows1 = run_sweep(code, cfg)
        rows2 = run_sweep(code, cfg)
        assert rows_to_csv(rows1) == rows_to_csv(rows2)
        # split the same trials across two batches and merge
        channel = ChannelModel(0.06)
        t1 = run_point(code, channel, cfg, 0, range(0, 17))
        t2 = run_point(code, channel, cfg, 0, range(17, 40))
        merged = t1 + t2
        whole = run_point(code, channel, cfg, 0, range(40))
        assert merged == whole
        assert stats_row(code, cfg, 0.06, merged) == rows1[0]

    def test_csv_shape(self, code):
        cfg = SimConfig(n=3, m=2, code_seed=7, p_grid=[0.02, 0.05], trials=10,
                        master_seed=3)
        rows = run_sweep(code, cfg)
        text = rows_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        first = lines[1].split(",")
        assert first[0] == "0.02" and first[1] == "10"
        assert len(first) == len(CSV_HEADER.split(","))

    def test_counts_within_trials(self, code):
        cfg = SimConfig(n=3, m=2, code_seed=7, p_grid=[0.1], trials=25, master_seed=2)
        rows = run_sweep(code, cfg)
        row = rows[0]
        assert 0.0 <= row["wer_lo"] <= row["wer"] <= row["wer_hi"] <= 1.0
        assert row["x_word_errors"] <= 25 and row["z_word_errors"] <= 25
        assert 0.0 <= row["qer"] <= 1.0

    def test_metadata_sidecar(self, code):
        cfg = SimConfig(n=3, m=2, code_seed=7, p_grid=[0.02], trials=2, master_seed=3)
        meta = sweep_metadata(code, cfg)
        assert meta["field_poly"] == code.field.poly
        assert meta["decoder"]["schedule"] == "flooding"
        assert "qer_definition" in meta


def test_tally_merge_is_componentwise():
    a = Tally(trials=3, x_word_errors=1, z_word_errors=0, word_errors=1,
              nonconverged=1, residual_qubits=17)
    b = Tally(trials=2, x_word_errors=0, z_word_errors=2, word_errors=2,
              nonconverged=0, residual_qubits=5)
    c = a + b
    assert c == Tally(5, 1, 2, 3, 1, 22)
