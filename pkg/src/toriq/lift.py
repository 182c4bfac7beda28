"""Lift a binary column-weight-2 CSS pair to a q-ary CSS pair.

The construction labels the X-side Tanner graph so that the product of
edge labels around every cycle is 1 (a potential/telescoping choice of
coefficients per check and per edge), then solves a one-dimensional cycle
code per Z row to pick nonzero Z labels, preserving orthogonality.

Every lift is validated before it is returned: silent invariant
violations here would corrupt every downstream dimension, distance, and
decoding result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from toriq.gf import GF2m
from toriq.qmatrix import (
    SparseQMatrix,
    check_graph_cycle_basis,
    cycle_decomposition,
    graph_of,
    orthogonality_violation,
    product_over_cycle,
    restricted_graph,
)


class LiftError(ValueError):
    """Raised when an input or constructed pair violates a CSS invariant."""


@dataclass(frozen=True)
class BinaryCssPair:
    """Binary CSS pair with column weight exactly 2 on both sides.

    HX . HZ^T = 0 over GF(2) and every column of HX and HZ has exactly two
    ones; both are checked at construction.
    """

    HX: SparseQMatrix
    HZ: SparseQMatrix

    def __post_init__(self):
        if self.HX.field.q != 2 or self.HZ.field.q != 2:
            raise LiftError("skeleton matrices must be over GF(2)")
        if self.HX.cols != self.HZ.cols:
            raise LiftError(
                f"column counts differ: HX has {self.HX.cols}, HZ has {self.HZ.cols}")
        for name, M in (("HX", self.HX), ("HZ", self.HZ)):
            for j in range(M.cols):
                if M.col_degree(j) != 2:
                    raise LiftError(
                        f"column {j} of {name} has weight {M.col_degree(j)}, expected 2")
        bad = orthogonality_violation(self.HX, self.HZ)
        if bad is not None:
            raise LiftError(f"HX . HZ^T != 0 at row pair {bad}")

    @property
    def n(self) -> int:
        return self.HX.cols


@dataclass(frozen=True)
class CssPairQ:
    """Q-ary CSS pair together with its binary skeleton and the seed used.

    Invariants (enforced by lift_pair): entrywise support equals the
    skeleton's, HXq . HZq^T = 0 over GF(q), and the product over every
    cycle of the X-side Tanner graph is 1.
    """

    HXq: SparseQMatrix
    HZq: SparseQMatrix
    skeleton: BinaryCssPair
    seed: int | None = None

    @property
    def field(self) -> GF2m:
        return self.HXq.field

    @property
    def n(self) -> int:
        return self.HXq.cols


def _support_matches(Mq: SparseQMatrix, Mb: SparseQMatrix) -> tuple[int, int] | None:
    """First (i, j) where the q-ary support disagrees with the binary one."""
    keys_q = set(Mq.entries)
    keys_b = set(Mb.entries)
    diff = keys_q ^ keys_b
    return min(diff) if diff else None


def label_x(skeleton: BinaryCssPair, field: GF2m,
            rng: np.random.Generator) -> SparseQMatrix:
    """Assign nonzero GF(q) labels to HX so all cycle products equal 1.

    Per check i draw a nonzero a_i, per edge (i, j) a nonzero b_ij; the
    entry at (i, j) becomes a_i * b_ij * b_kj where k is the other check
    of column j.  Walking any cycle, the b factors cancel within each
    variable and the a factors cancel within each check, so the product
    telescopes to 1.
    """
    HX = skeleton.HX
    q = field.q
    a: dict[int, int] = {}
    b: dict[tuple[int, int], int] = {}
    for i in range(HX.rows):
        a[i] = int(rng.integers(1, q)) if q > 2 else 1
        for j, _ in HX.row_adj[i]:
            b[(i, j)] = int(rng.integers(1, q)) if q > 2 else 1
    entries = []
    for j in range(HX.cols):
        (i, _), (k, _) = HX.col_adj[j]
        pair = field.mul(b[(i, j)], b[(k, j)])
        entries.append((i, j, field.mul(a[i], pair)))
        entries.append((k, j, field.mul(a[k], pair)))
    return SparseQMatrix(field, HX.rows, HX.cols, entries)


def solve_cycle_code(HXq: SparseQMatrix, cycle, first_value: int) -> dict[int, int]:
    """Nonzero codeword of the one-dimensional code of a labeled cycle.

    The cycle's checks impose x[c, v] * w[v] + x[c, v'] * w[v'] = 0 between
    consecutive variables; fixing w at the cycle's first variable node and
    propagating determines the rest.  Closure is consistent iff the product
    over the cycle is 1; inconsistency means the labeling is corrupt.
    """
    field = HXq.field
    if first_value == 0:
        raise LiftError("cycle codeword seed value must be nonzero")
    k = len(cycle.vars)
    w = {cycle.vars[0]: first_value}
    for t in range(k):
        c = cycle.checks[t]
        v, v_next = cycle.vars[t], cycle.vars[(t + 1) % k]
        ratio = field.mul(HXq.entries[(c, v)], field.inv(HXq.entries[(c, v_next)]))
        propagated = field.mul(w[v], ratio)
        if t + 1 < k:
            w[v_next] = propagated
        elif propagated != w[cycle.vars[0]]:
            raise LiftError(
                f"cycle through variables {cycle.vars} closes inconsistently; "
                "its label product is not 1")
    return w


def label_z(HXq: SparseQMatrix, skeleton: BinaryCssPair,
            rng: np.random.Generator) -> SparseQMatrix:
    """Choose nonzero Z labels row by row so that HXq . HZq^T = 0.

    For each Z row the X-side subgraph on its support splits into
    edge-disjoint cycles; each cycle's code is one-dimensional with
    all-nonzero codewords, and any such codeword gives Z labels that
    cancel both entries of every X check on the cycle.
    """
    field = HXq.field
    HZ = skeleton.HZ
    entries = []
    for k in range(HZ.rows):
        sub = restricted_graph(HXq, HZ, k)
        if not sub.var_ids:
            continue
        for cycle in cycle_decomposition(sub):
            seed_val = int(rng.integers(1, field.q)) if field.q > 2 else 1
            w = solve_cycle_code(HXq, cycle, seed_val)
            for j, val in sorted(w.items()):
                entries.append((k, j, val))
    return SparseQMatrix(field, HZ.rows, HZ.cols, entries)


def validate_pair(pair: CssPairQ) -> None:
    """Check support, orthogonality, and the cycle-product condition; raise on failure."""
    bad = _support_matches(pair.HXq, pair.skeleton.HX)
    if bad is not None:
        raise LiftError(f"X support condition violated at {bad}")
    bad = _support_matches(pair.HZq, pair.skeleton.HZ)
    if bad is not None:
        raise LiftError(f"Z support condition violated at {bad}")
    bad = orthogonality_violation(pair.HXq, pair.HZq)
    if bad is not None:
        raise LiftError(f"HXq . HZq^T != 0 at row pair {bad}")
    gx = graph_of(pair.HXq)
    for cycle in check_graph_cycle_basis(gx):
        if product_over_cycle(gx, cycle) != 1:
            raise LiftError(
                f"cycle product != 1 on basis cycle through variables {cycle.vars}")


def lift_pair(skeleton: BinaryCssPair, m: int, seed: int) -> CssPairQ:
    """Lift a binary column-weight-2 CSS pair to GF(2^m).

    Labels the X side, then the Z side, then validates all invariants of
    the result.  The same seed always reproduces the same pair.
    """
    field = GF2m(m)
    rng = np.random.default_rng(seed)
    HXq = label_x(skeleton, field, rng)
    HZq = label_z(HXq, skeleton, rng)
    pair = CssPairQ(HXq=HXq, HZq=HZq, skeleton=skeleton, seed=seed)
    validate_pair(pair)
    return pair


def quantum_dimension(pair: CssPairQ) -> int:
    """Q-ary quantum dimension (n - rank HXq) - rank HZq.

    Multiply by m for the number of protected qubits of the binary
    expansion.
    """
    return (pair.n - pair.HXq.rank()) - pair.HZq.rank()
