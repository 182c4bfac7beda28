"""Depolarizing-channel Monte Carlo harness for extended toric codes.

Each qubit independently suffers X, Y, or Z with probability p/3 each, so
the X-part and Z-part bit vectors are each marginally BSC(2p/3) (Y sets
both).  Bits are grouped into GF(2^m) symbols, each side is decoded in
the q-ary domain against its own syndrome, and residuals are classified
as stabilizer or logical via the big-cycle pairing (with a 1% audit
against the exact rowspace test).

Trials are deterministic given (master seed, p index, trial index) and
tallies merge associatively, so sweeps can be partitioned freely across
workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from toriq.decode import BpDecoder, DecoderConfig, prior_from_bsc
from toriq.expand import contract_vec, expand_vec
from toriq.toric import ExtendedToricCode, is_logical_error

CSV_HEADER = "p,trials,wer,wer_lo,wer_hi,qer,x_word_errors,z_word_errors,nonconverged,seed,n,m,max_iters"

# 97.5% normal quantile for two-sided 95% Wilson intervals
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ChannelModel:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p < 0.75:
            raise ValueError(f"depolarizing probability {self.p} must be in [0, 0.75)")

    @property
    def p_bit(self) -> float:
        """Marginal flip rate seen by each CSS side."""
        return 2.0 * self.p / 3.0


@dataclass
class SimConfig:
    n: int
    m: int
    code_seed: int
    p_grid: list[float]
    trials: int
    master_seed: int
    decoder: DecoderConfig = dc_field(default_factory=DecoderConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for p in self.p_grid:
            ChannelModel(p)


@dataclass
class Tally:
    """Order-independent per-p counters; merge with +."""

    trials: int = 0
    x_word_errors: int = 0
    z_word_errors: int = 0
    word_errors: int = 0
    nonconverged: int = 0
    residual_qubits: int = 0

    def __add__(self, other: "Tally") -> "Tally":
        return Tally(*(getattr(self, f) + getattr(other, f)
                       for f in ("trials", "x_word_errors", "z_word_errors",
                                 "word_errors", "nonconverged", "residual_qubits")))


def wilson_interval(k: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return (lo, hi)


def sample_error(n_qubits: int, p: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Pauli error on n_qubits: returns (X-part bits, Z-part bits).

    Per qubit: X w.p. p/3 (sets the X bit), Z w.p. p/3 (sets the Z bit),
    Y w.p. p/3 (sets both), identity otherwise.
    """
    ChannelModel(p)
    u = rng.random(n_qubits)
    ex = (u < 2 * p / 3).astype(np.uint8)          # X or Y
    ez = ((u >= p / 3) & (u < p)).astype(np.uint8)  # Y or Z
    return ex, ez


@dataclass
class TrialOutcome:
    x_result: str  # success | logical | detected
    z_result: str
    nonconverged_sides: int
    residual_qubit_count: int

    @property
    def word_error(self) -> bool:
        return self.x_result != "success" or self.z_result != "success"


class TrialRunner:
    """Shared read-only state for running trials of one code at one p."""

    def __init__(self, code: ExtendedToricCode, channel: ChannelModel,
                 decoder_cfg: DecoderConfig):
        self.code = code
        self.channel = channel
        self.cfg = decoder_cfg
        self.prior = prior_from_bsc(channel.p_bit, code.m)
        self.dec_x_errors = BpDecoder(code.pair.HZq)  # X errors hit Z checks
        self.dec_z_errors = BpDecoder(code.pair.HXq)

    def run(self, rng: np.random.Generator, audit: bool = False) -> TrialOutcome:
        ex_bits, ez_bits = sample_error(self.code.n_qubits, self.channel.p, rng)
        return self.run_with_error(ex_bits, ez_bits, audit=audit)

    def run_with_error(self, ex_bits, ez_bits, audit: bool = False) -> TrialOutcome:
        code = self.code
        field = code.field
        ex = contract_vec(field, ex_bits)
        ez = contract_vec(field, ez_bits)

        results = {}
        residual_bits = np.zeros(code.n_qubits, dtype=np.uint8)
        nonconv = 0
        for side, e, dec in (("X", ex, self.dec_x_errors), ("Z", ez, self.dec_z_errors)):
            syndrome = dec.H.apply(e)
            res, _ = dec.decode(syndrome, self.prior, self.cfg)
            residual = e ^ res.estimate
            residual_bits |= expand_vec(field, residual)
            if not res.converged:
                results[side] = "detected"
                nonconv += 1
            else:
                method = "both" if audit else "pairing"
                logical = is_logical_error(code, residual, side, method=method)
                results[side] = "logical" if logical else "success"
        return TrialOutcome(
            x_result=results["X"],
            z_result=results["Z"],
            nonconverged_sides=nonconv,
            residual_qubit_count=int(residual_bits.sum()),
        )


def run_trial(code: ExtendedToricCode, channel: ChannelModel,
              decoder_cfg: DecoderConfig, rng: np.random.Generator,
              audit: bool = False) -> TrialOutcome:
    return TrialRunner(code, channel, decoder_cfg).run(rng, audit=audit)


def trial_rng(master_seed: int, p_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, p_index, trial_index])


def run_point(code: ExtendedToricCode, channel: ChannelModel, cfg: SimConfig,
              p_index: int, trial_indices: range) -> Tally:
    """Tally a batch of trials for one p; every 100th trial is audited."""
    runner = TrialRunner(code, channel, cfg.decoder)
    tally = Tally()
    for t in trial_indices:
        rng = trial_rng(cfg.master_seed, p_index, t)
        out = runner.run(rng, audit=(t % 100 == 0))
        tally = tally + Tally(
            trials=1,
            x_word_errors=int(out.x_result != "success"),
            z_word_errors=int(out.z_result != "success"),
            word_errors=int(out.word_error),
            nonconverged=int(out.nonconverged_sides > 0),
            residual_qubits=out.residual_qubit_count,
        )
    return tally


def run_sweep(code: ExtendedToricCode, cfg: SimConfig) -> list[dict]:
    """Monte Carlo sweep over the p grid; returns one row dict per p.

    Deterministic for a fixed master seed regardless of how trials are
    batched (each trial re-derives its generator from the indices).
    """
    if (code.n, code.m, code.seed) != (cfg.n, cfg.m, cfg.code_seed):
        raise ValueError("config does not describe the supplied code")
    rows = []
    for p_index, p in enumerate(cfg.p_grid):
        channel = ChannelModel(p)
        tally = run_point(code, channel, cfg, p_index, range(cfg.trials))
        rows.append(stats_row(code, cfg, p, tally))
    return rows


def stats_row(code: ExtendedToricCode, cfg: SimConfig, p: float, tally: Tally) -> dict:
    lo, hi = wilson_interval(tally.word_errors, tally.trials)
    return {
        "p": p,
        "trials": tally.trials,
        "wer": tally.word_errors / tally.trials,
        "wer_lo": lo,
        "wer_hi": hi,
        "qer": tally.residual_qubits / (tally.trials * code.n_qubits),
        "x_word_errors": tally.x_word_errors,
        "z_word_errors": tally.z_word_errors,
        "nonconverged": tally.nonconverged,
        "seed": cfg.master_seed,
        "n": code.n,
        "m": code.m,
        "max_iters": cfg.decoder.max_iters,
    }


def rows_to_csv(rows: list[dict]) -> str:
    """Render sweep rows with the documented bit-exact header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow([repr(row[k]) if isinstance(row[k], float) else row[k]
                         for k in CSV_HEADER.split(",")])
    return buf.getvalue()


def sweep_metadata(code: ExtendedToricCode, cfg: SimConfig) -> dict:
    """JSON sidecar describing exactly what produced a CSV."""
    return {
        "construction": "extended-toric",
        "n": code.n,
        "m": code.m,
        "code_seed": code.seed,
        "field_poly": code.field.poly,
        "master_seed": cfg.master_seed,
        "p_grid": cfg.p_grid,
        "trials": cfg.trials,
        "decoder": {"max_iters": cfg.decoder.max_iters, "damping": cfg.decoder.damping,
                    "schedule": "flooding"},
        "wer_definition": "trial with a logical or detected-uncorrected outcome on either side",
        "qer_definition": "post-decoding physical-residual mismatch frequency "
                          "(binary expansion of both residuals, OR of X/Z parts)",
        "interval": "wilson-95",
    }


def write_sweep(path_csv: str, path_meta: str, code: ExtendedToricCode,
                cfg: SimConfig, rows: list[dict]) -> None:
    with open(path_csv, "w") as fh:
        fh.write(rows_to_csv(rows))
    with open(path_meta, "w") as fh:
        json.dump(sweep_metadata(code, cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
