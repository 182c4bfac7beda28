"""Toric CSS skeleton on a 2n x 2n torus, its q-ary extension, and verifiers.

Grid coordinates (i, j) live in [0, 2n) x [0, 2n) with wraparound.
Variable nodes sit where i+j is even; X checks where i is odd and j even;
Z checks where i is even and j odd.  A check touches its four lattice
neighbours (i +/- 1, j) and (i, j +/- 1), so both sides are (2, 4)-regular.

The q-ary extension also carries the four big-cycle logical operators and
the n shifted horizontal cycles used to classify residual errors exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from toriq.gf import GF2m
from toriq.lift import BinaryCssPair, CssPairQ, LiftError, lift_pair, quantum_dimension, solve_cycle_code
from toriq.qmatrix import CycleWalk, SparseQMatrix, gf_dot


class ToricLayout:
    """Coordinate maps for the 2n x 2n torus; bijections coords <-> indices.

    Indices are assigned row-major over (i, j) with i the first axis,
    separately for variables, X checks, and Z checks.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"half-period n={n} must be at least 2")
        self.n = n
        self.period = 2 * n
        self.var_coords = [(i, j) for i in range(self.period) for j in range(self.period)
                           if (i + j) % 2 == 0]
        self.x_check_coords = [(i, j) for i in range(self.period) for j in range(self.period)
                               if i % 2 == 1 and j % 2 == 0]
        self.z_check_coords = [(i, j) for i in range(self.period) for j in range(self.period)
                               if i % 2 == 0 and j % 2 == 1]
        self.var_index = {c: t for t, c in enumerate(self.var_coords)}
        self.x_check_index = {c: t for t, c in enumerate(self.x_check_coords)}
        self.z_check_index = {c: t for t, c in enumerate(self.z_check_coords)}

    def wrap(self, i: int, j: int) -> tuple[int, int]:
        return (i % self.period, j % self.period)

    def neighbors(self, i: int, j: int) -> list[tuple[int, int]]:
        """The four lattice neighbours of a node, wrapped."""
        return [self.wrap(i - 1, j), self.wrap(i + 1, j),
                self.wrap(i, j - 1), self.wrap(i, j + 1)]

    def check_index(self, side: str):
        return self.x_check_index if side == "X" else self.z_check_index

    def check_coords(self, side: str):
        return self.x_check_coords if side == "X" else self.z_check_coords


def _side_ok(side: str) -> str:
    if side not in ("X", "Z"):
        raise ValueError(f"side must be 'X' or 'Z', got {side!r}")
    return side


def build_skeleton(n: int) -> tuple[BinaryCssPair, ToricLayout]:
    """Binary toric pair: n^2 x 2n^2 matrices, (2, 4)-regular, orthogonal."""
    layout = ToricLayout(n)
    field2 = GF2m(1)

    def check_matrix(coords, index):
        entries = []
        for (i, j) in coords:
            row = index[(i, j)]
            for nb in layout.neighbors(i, j):
                entries.append((row, layout.var_index[nb], 1))
        return SparseQMatrix(field2, len(coords), len(layout.var_coords), entries)

    HX = check_matrix(layout.x_check_coords, layout.x_check_index)
    HZ = check_matrix(layout.z_check_coords, layout.z_check_index)
    return BinaryCssPair(HX=HX, HZ=HZ), layout


def minimal_cycles(layout: ToricLayout, side: str) -> list[CycleWalk]:
    """All length-8 cycles of the side's Tanner graph, one ringing each
    check of the opposite side."""
    _side_ok(side)
    centers = layout.check_coords("Z" if side == "X" else "X")
    check_index = layout.check_index(side)
    cycles = []
    for (a, b) in centers:
        ring_vars = [layout.wrap(a, b + 1), layout.wrap(a + 1, b),
                     layout.wrap(a, b - 1), layout.wrap(a - 1, b)]
        ring_checks = [layout.wrap(a + 1, b + 1), layout.wrap(a + 1, b - 1),
                       layout.wrap(a - 1, b - 1), layout.wrap(a - 1, b + 1)]
        walk = CycleWalk(
            vars=tuple(layout.var_index[c] for c in ring_vars),
            checks=tuple(check_index[c] for c in ring_checks),
        )
        cycles.append(walk.canonical())
    return cycles


def big_cycles(layout: ToricLayout, side: str) -> list[CycleWalk]:
    """The 2n torus-wrapping cycles of the side's graph: n horizontal ones
    (fixed j) and n vertical ones (fixed i), each with n variable nodes.

    A line at fixed height j belongs to the X graph iff j is even (its odd
    positions are then X checks), and to the Z graph iff j is odd;
    vertical lines work the same way with the roles of i and j swapped.
    """
    _side_ok(side)
    check_index = layout.check_index(side)
    p = layout.period
    cycles = []
    for j in range(0 if side == "X" else 1, p, 2):
        cycles.append(_line_walk(layout, check_index, "h", j).canonical())
    for i in range(1 if side == "X" else 0, p, 2):
        cycles.append(_line_walk(layout, check_index, "v", i).canonical())
    return cycles


def _line_walk(layout: ToricLayout, check_index, orientation: str, fixed: int) -> CycleWalk:
    """Alternating walk along a full grid line; starts at the first variable
    (moving coordinate parity equal to the fixed one, so i+j stays even)."""
    p = layout.period
    start = fixed % 2
    vars_, checks = [], []
    for t in range(p // 2):
        kv = (start + 2 * t) % p
        kc = (start + 2 * t + 1) % p
        if orientation == "h":
            vars_.append(layout.var_index[(kv, fixed)])
            checks.append(check_index[(kc, fixed)])
        else:
            vars_.append(layout.var_index[(fixed, kv)])
            checks.append(check_index[(fixed, kc)])
    return CycleWalk(vars=tuple(vars_), checks=tuple(checks))


@dataclass(frozen=True)
class LogicalSet:
    """Big-cycle logical representatives and the shifted classifier family.

    xbar1/xbar2 are codewords of ker HZq (from a vertical resp. horizontal
    big cycle of the Z-side graph); zbar1/zbar2 are codewords of ker HXq
    (horizontal resp. vertical big cycle of the X side).  zbar1_shifts are
    the n disjoint horizontal X-side cycles at even heights; their pairing
    with any zero-syndrome X residual decides logical vs stabilizer
    exactly.
    """

    xbar1: np.ndarray
    xbar2: np.ndarray
    zbar1: np.ndarray
    zbar2: np.ndarray
    zbar1_shifts: list[np.ndarray]


@dataclass(frozen=True)
class ExtendedToricCode:
    layout: ToricLayout
    pair: CssPairQ
    logicals: LogicalSet
    n: int
    m: int
    seed: int

    @property
    def field(self) -> GF2m:
        return self.pair.field

    @property
    def n_symbols(self) -> int:
        return 2 * self.n * self.n

    @property
    def n_qubits(self) -> int:
        return self.m * self.n_symbols

    @property
    def qubit_dimension(self) -> int:
        return 2 * self.m

    @property
    def rate(self) -> float:
        return self.qubit_dimension / self.n_qubits


def _cycle_codeword(H: SparseQMatrix, cycle: CycleWalk) -> np.ndarray:
    """Codeword supported exactly on a big cycle, first node set to 1."""
    w = solve_cycle_code(H, cycle, 1)
    vec = np.zeros(H.cols, dtype=np.int64)
    for j, val in w.items():
        vec[j] = val
    return vec


def build_logicals(layout: ToricLayout, pair: CssPairQ) -> LogicalSet:
    """Solve the big-cycle codes of both Tanner graphs for the logical set."""
    z_big = big_cycles(layout, "Z")
    x_big = big_cycles(layout, "X")
    n, p = layout.n, layout.period

    def pick(cycles, orientation, coord_value):
        # horizontal cycles (fixed j) have all vars at one height; vertical
        # ones at one column; select by the fixed coordinate's value
        for c in cycles:
            coords = [layout.var_coords[v] for v in c.vars]
            if orientation == "h" and all(xy[1] == coord_value for xy in coords):
                return c
            if orientation == "v" and all(xy[0] == coord_value for xy in coords):
                return c
        raise LiftError(f"missing big cycle {orientation} at {coord_value}")

    xbar1 = _cycle_codeword(pair.HZq, pick(z_big, "v", 0))
    xbar2 = _cycle_codeword(pair.HZq, pick(z_big, "h", 1))
    zbar1 = _cycle_codeword(pair.HXq, pick(x_big, "h", 0))
    zbar2 = _cycle_codeword(pair.HXq, pick(x_big, "v", 1))
    shifts = [_cycle_codeword(pair.HXq, pick(x_big, "h", j)) for j in range(0, p, 2)]
    return LogicalSet(xbar1=xbar1, xbar2=xbar2, zbar1=zbar1, zbar2=zbar2,
                      zbar1_shifts=shifts)


def validate_logicals(code: ExtendedToricCode) -> None:
    pair, logicals, layout = code.pair, code.logicals, code.layout
    n = layout.n
    for name, vec, H in (("xbar1", logicals.xbar1, pair.HZq),
                         ("xbar2", logicals.xbar2, pair.HZq),
                         ("zbar1", logicals.zbar1, pair.HXq),
                         ("zbar2", logicals.zbar2, pair.HXq)):
        if np.count_nonzero(vec) != n:
            raise LiftError(f"{name} support size {np.count_nonzero(vec)} != n")
        if np.any(H.apply(vec)):
            raise LiftError(f"{name} has nonzero syndrome")
    f = pair.field
    if gf_dot(f, logicals.xbar1, logicals.zbar1) == 0:
        raise LiftError("<xbar1, zbar1> vanished")
    if gf_dot(f, logicals.xbar2, logicals.zbar2) == 0:
        raise LiftError("<xbar2, zbar2> vanished")
    if gf_dot(f, logicals.xbar1, logicals.zbar2) != 0:
        raise LiftError("<xbar1, zbar2> should be 0 (disjoint supports)")
    if gf_dot(f, logicals.xbar2, logicals.zbar1) != 0:
        raise LiftError("<xbar2, zbar1> should be 0 (disjoint supports)")
    support = np.zeros(pair.n, dtype=np.int64)
    for s in logicals.zbar1_shifts:
        support += (np.asarray(s) != 0)
    if support.max() > 1 or support.sum() != n * n:
        raise LiftError("shifted big cycles do not have disjoint size-n supports")


def assemble_code(pair: CssPairQ, n: int, seed: int | None = None) -> ExtendedToricCode:
    """Attach layout and validated logical operators to a lifted toric pair.

    The q-ary quantum dimension must come out as exactly 2 (hence 2m
    qubits after binary expansion); anything else is treated as a fatal
    construction failure.
    """
    layout = ToricLayout(n)
    if pair.n != 2 * n * n:
        raise LiftError(f"pair has {pair.n} symbols, expected {2 * n * n} for n={n}")
    logicals = build_logicals(layout, pair)
    code = ExtendedToricCode(layout=layout, pair=pair, logicals=logicals,
                             n=n, m=pair.field.m,
                             seed=pair.seed if seed is None else seed)
    validate_logicals(code)
    kq = quantum_dimension(pair)
    if kq != 2:
        raise LiftError(f"q-ary quantum dimension {kq} != 2")
    return code


def build_extended(n: int, m: int, seed: int) -> ExtendedToricCode:
    """Construct the extended toric code: build, lift, attach logicals."""
    skeleton, _ = build_skeleton(n)
    pair = lift_pair(skeleton, m, seed)
    return assemble_code(pair, n, seed)


def is_logical_error(code: ExtendedToricCode, residual, side: str,
                     method: str = "both") -> bool:
    """Classify a zero-syndrome residual as logical (True) or stabilizer (False).

    side "X" means residual is an X-error pattern: it must satisfy
    HZq . r = 0 and is logical iff it pairs nontrivially with zbar1 or
    zbar2 (equivalently, iff it lies outside the rowspace of HXq).  Side
    "Z" swaps the roles.  method selects the pairing test, the rowspace
    test, or both (which must agree).
    """
    _side_ok(side)
    if method not in ("pairing", "rowspace", "both"):
        raise ValueError(f"unknown method {method!r}")
    r = np.asarray(residual, dtype=np.int64)
    pair, logicals = code.pair, code.logicals
    detect = pair.HZq if side == "X" else pair.HXq
    stab = pair.HXq if side == "X" else pair.HZq
    partners = ((logicals.zbar1, logicals.zbar2) if side == "X"
                else (logicals.xbar1, logicals.xbar2))
    if np.any(detect.apply(r)):
        raise ValueError("residual has nonzero syndrome; not classifiable")
    results = {}
    if method in ("pairing", "both"):
        f = pair.field
        results["pairing"] = any(gf_dot(f, r, w) != 0 for w in partners)
    if method in ("rowspace", "both"):
        results["rowspace"] = not stab.in_rowspace(r)
    if len(results) == 2 and results["pairing"] != results["rowspace"]:
        raise LiftError(
            f"logical classification methods disagree: {results}; code is corrupt")
    return next(iter(results.values()))


DISTANCE_BUDGET = 1 << 24


def brute_force_distance(pair: CssPairQ, side: str,
                         return_minimizers: bool = False):
    """Exact quantum distance on one side by full codeword enumeration.

    Enumerates ker(H_detect) via its kernel basis and takes the minimum
    weight over vectors outside the stabilizer rowspace.  Refuses budgets
    above 2^24 enumerations outright rather than truncating.
    """
    _side_ok(side)
    detect = pair.HZq if side == "X" else pair.HXq
    stab = pair.HXq if side == "X" else pair.HZq
    field = pair.field
    basis = detect.kernel_basis()
    dim = len(basis)
    total = field.q ** dim
    if total > DISTANCE_BUDGET:
        raise ValueError(
            f"enumeration of {field.q}^{dim} codewords exceeds the 2^24 budget")
    basis_arr = np.array(basis, dtype=np.int64)
    best = None
    minimizers: list[np.ndarray] = []
    coeffs = np.zeros(dim, dtype=np.int64)
    # odometer over all coefficient vectors, updating the running codeword
    # incrementally would be premature here; recompute per step
    for idx in range(1, total):
        t, rem = 0, idx
        while rem:
            coeffs[t] = rem % field.q
            rem //= field.q
            t += 1
        coeffs[t:] = 0
        word = np.bitwise_xor.reduce(field.mul_vec(coeffs[:, None], basis_arr), axis=0)
        wt = int(np.count_nonzero(word))
        if best is not None and wt > best:
            continue
        if stab.in_rowspace(word):
            continue
        if best is None or wt < best:
            best = wt
            minimizers = [word.copy()]
        elif wt == best:
            minimizers.append(word.copy())
    if best is None:
        raise ValueError("no logical codeword found; quantum dimension is 0")
    if return_minimizers:
        return best, minimizers
    return best
