"""Sparse matrices over GF(q), Tanner graphs, cycle machinery, exact linear algebra.

The Tanner graph of an r x n matrix has variable nodes 0..n-1 (columns),
check nodes 0..r-1 (rows), and a labeled edge per nonzero entry.  Cycle
products, edge-disjoint cycle decompositions of even-degree graphs, and
spanning-tree fundamental cycle bases are the working tools of the q-ary
lifting construction; rank/kernel/membership are done by dense Gaussian
elimination over GF(q), which is ample at the code lengths handled here.

All traversals use adjacency sorted by node index, so every derived object
is deterministic for a given matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from toriq.gf import GF2m


class SparseQMatrix:
    """Immutable sparse matrix over GF(q); stored values are all nonzero.

    Entries are given as (row, col, value) triples with unique (row, col)
    keys.  Values are integer bitmasks in [1, q).
    """

    def __init__(self, field: GF2m, rows: int, cols: int,
                 entries: Iterable[tuple[int, int, int]]):
        self.field = field
        self.rows = rows
        self.cols = cols
        ent: dict[tuple[int, int], int] = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) outside {rows}x{cols} matrix")
            if not 0 < v < field.q:
                raise ValueError(f"entry ({i}, {j}) value {v} not in [1, {field.q})")
            if (i, j) in ent:
                raise ValueError(f"duplicate entry ({i}, {j})")
            ent[(i, j)] = v
        self.entries = ent
        items = sorted(ent.items())
        self._rows_idx = np.array([i for (i, _), _ in items], dtype=np.int64)
        self._cols_idx = np.array([j for (_, j), _ in items], dtype=np.int64)
        self._vals = np.array([v for _, v in items], dtype=np.int64)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseQMatrix) and self.field == other.field
                and self.shape == other.shape and self.entries == other.entries)

    def __repr__(self) -> str:
        return (f"SparseQMatrix({self.rows}x{self.cols} over GF({self.field.q}), "
                f"{len(self.entries)} entries)")

    @cached_property
    def row_adj(self) -> list[list[tuple[int, int]]]:
        """Per row: sorted list of (col, value)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.rows)]
        for (i, j), v in sorted(self.entries.items()):
            adj[i].append((j, v))
        return adj

    @cached_property
    def col_adj(self) -> list[list[tuple[int, int]]]:
        """Per column: sorted list of (row, value)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.cols)]
        for (i, j), v in sorted(self.entries.items()):
            adj[j].append((i, v))
        return adj

    def row_degree(self, i: int) -> int:
        return len(self.row_adj[i])

    def col_degree(self, j: int) -> int:
        return len(self.col_adj[j])

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.int64)
        dense[self._rows_idx, self._cols_idx] = self._vals
        return dense

    def replace_entry(self, i: int, j: int, value: int) -> "SparseQMatrix":
        """New matrix with entry (i, j) set to value (0 deletes the entry)."""
        ent = dict(self.entries)
        if value == 0:
            ent.pop((i, j), None)
        else:
            ent[(i, j)] = value
        return SparseQMatrix(self.field, self.rows, self.cols,
                             [(i, j, v) for (i, j), v in ent.items()])

    def apply(self, e) -> np.ndarray:
        """Syndrome s = M . e^T over GF(q)."""
        e = np.asarray(e, dtype=np.int64)
        if e.shape != (self.cols,):
            raise ValueError(f"vector length {e.shape} does not match {self.cols} columns")
        s = np.zeros(self.rows, dtype=np.int64)
        prod = self.field.mul_vec(self._vals, e[self._cols_idx])
        np.bitwise_xor.at(s, self._rows_idx, prod)
        return s

    def tanner_graph(self) -> "TannerGraph":
        return TannerGraph(
            var_ids=list(range(self.cols)),
            check_ids=list(range(self.rows)),
            labels={(i, j): v for (i, j), v in self.entries.items()},
        )

    # -- exact linear algebra ----------------------------------------------

    @cached_property
    def _rref(self) -> tuple[np.ndarray, list[tuple[int, int]]]:
        return _row_reduce(self.field, self.to_dense())

    def rank(self) -> int:
        return len(self._rref[1])

    def kernel_basis(self) -> list[np.ndarray]:
        """Vectors spanning ker(M) = { v : M . v^T = 0 }."""
        R, pivots = self._rref
        pivot_cols = {c for _, c in pivots}
        basis = []
        for free in range(self.cols):
            if free in pivot_cols:
                continue
            v = np.zeros(self.cols, dtype=np.int64)
            v[free] = 1
            for pr, pc in pivots:
                v[pc] = R[pr, free]
            basis.append(v)
        return basis

    def in_rowspace(self, v) -> bool:
        """Whether v = x . M has an exact solution x over GF(q)."""
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.cols,):
            raise ValueError(f"vector length {v.shape} does not match {self.cols} columns")
        return not np.any(self.reduce_by_rowspace(v))

    def reduce_by_rowspace(self, v: np.ndarray) -> np.ndarray:
        """Residue of v after elimination against the RREF rows of M."""
        R, pivots = self._rref
        w = np.asarray(v, dtype=np.int64).copy()
        for pr, pc in pivots:
            if w[pc]:
                w ^= self.field.mul_vec(w[pc], R[pr])
        return w


def _row_reduce(field: GF2m, dense: np.ndarray) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Reduced row-echelon form over GF(q); returns (R, [(pivot_row, pivot_col)])."""
    R = dense.copy()
    r, n = R.shape
    pivots: list[tuple[int, int]] = []
    pr = 0
    for col in range(n):
        if pr >= r:
            break
        nz = np.nonzero(R[pr:, col])[0]
        if nz.size == 0:
            continue
        sel = pr + int(nz[0])
        if sel != pr:
            R[[pr, sel]] = R[[sel, pr]]
        if R[pr, col] != 1:
            R[pr] = field.mul_vec(field.inv(int(R[pr, col])), R[pr])
        colvals = R[:, col].copy()
        colvals[pr] = 0
        mask = colvals != 0
        if mask.any():
            R[mask] ^= field.mul_vec(colvals[mask, None], R[pr][None, :])
        pivots.append((pr, col))
        pr += 1
    return R, pivots


def gf_dot(field: GF2m, a, b) -> int:
    """Inner product <a, b> over GF(q)."""
    prods = field.mul_vec(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    return int(np.bitwise_xor.reduce(prods)) if prods.size else 0


def orthogonality_violation(A: SparseQMatrix, B: SparseQMatrix) -> tuple[int, int] | None:
    """First (i, k) with row_i(A) . row_k(B) != 0, or None if A . B^T = 0.

    Accumulates the sparse product column by column, so the cost is driven
    by column weights rather than the dense triple product.
    """
    if A.cols != B.cols:
        raise ValueError(f"column counts differ: {A.cols} vs {B.cols}")
    if A.field != B.field:
        raise ValueError("matrices are over different fields")
    field = A.field
    acc: dict[tuple[int, int], int] = {}
    for j in range(A.cols):
        for i, va in A.col_adj[j]:
            for k, vb in B.col_adj[j]:
                key = (i, k)
                acc[key] = acc.get(key, 0) ^ field.mul(va, vb)
    for key in sorted(acc):
        if acc[key]:
            return key
    return None


# -- Tanner graphs and cycles -----------------------------------------------


class TannerGraph:
    """Bipartite labeled graph view; node ids are matrix row/column indices.

    Restricted graphs keep the parent matrix's ids, so cycles found here
    refer directly to rows and columns of the originating matrices.
    """

    def __init__(self, var_ids: list[int], check_ids: list[int],
                 labels: dict[tuple[int, int], int]):
        self.var_ids = sorted(var_ids)
        self.check_ids = sorted(check_ids)
        self.labels = dict(labels)
        var_set = set(self.var_ids)
        check_set = set(self.check_ids)
        for c, v in labels:
            if c not in check_set or v not in var_set:
                raise ValueError(f"edge ({c}, {v}) references unknown node")
        self.var_adj: dict[int, list[int]] = {v: [] for v in self.var_ids}
        self.check_adj: dict[int, list[int]] = {c: [] for c in self.check_ids}
        for c, v in sorted(labels):
            self.var_adj[v].append(c)
            self.check_adj[c].append(v)

    @property
    def n_edges(self) -> int:
        return len(self.labels)

    def label(self, check: int, var: int) -> int:
        return self.labels[(check, var)]

    def var_degree(self, v: int) -> int:
        return len(self.var_adj[v])

    def check_degree(self, c: int) -> int:
        return len(self.check_adj[c])


@dataclass(frozen=True)
class CycleWalk:
    """Closed alternating walk v[0], c[0], v[1], c[1], ..., c[k-1], back to v[0].

    v[t] is adjacent to c[t-1] and c[t] (indices mod k).  Traversal direction
    is part of the walk: v[t] -> c[t] is variable-to-check, c[t] -> v[t+1] is
    check-to-variable.
    """

    vars: tuple[int, ...]
    checks: tuple[int, ...]

    def __post_init__(self):
        if len(self.vars) != len(self.checks) or not self.vars:
            raise ValueError("cycle walk needs equally many variable and check nodes, at least one each")

    def __len__(self) -> int:
        return len(self.vars)

    def edges(self) -> list[tuple[int, int, bool]]:
        """(check, var, check_to_var) per traversed edge, in walk order."""
        k = len(self.vars)
        out = []
        for t in range(k):
            out.append((self.checks[t], self.vars[t], False))
            out.append((self.checks[t], self.vars[(t + 1) % k], True))
        return out

    def reverse(self) -> "CycleWalk":
        k = len(self.vars)
        vars_rev = (self.vars[0],) + tuple(self.vars[:0:-1])
        checks_rev = tuple(self.checks[::-1])
        return CycleWalk(vars_rev, checks_rev)

    def validate(self, g: TannerGraph) -> None:
        """Raise if any traversed edge is missing from g."""
        for c, v, _ in self.edges():
            if (c, v) not in g.labels:
                raise ValueError(f"walk uses ({c}, {v}) which is not an edge of the graph")

    def canonical(self) -> "CycleWalk":
        """Rotate so the smallest variable id is first, then orient toward the
        smaller of its two check neighbors."""
        k = len(self.vars)
        i = min(range(k), key=lambda t: self.vars[t])
        rot = CycleWalk(self.vars[i:] + self.vars[:i], self.checks[i:] + self.checks[:i])
        if k > 1 and rot.checks[-1] < rot.checks[0]:
            rot = rot.reverse()
        return rot


def product_over_cycle(g: TannerGraph, cycle: CycleWalk) -> int:
    """Product of edge labels around the cycle, +1 exponent on check-to-variable
    traversals and -1 on variable-to-check ones."""
    cycle.validate(g)
    field = _field_of(g)
    prod = 1
    for c, v, check_to_var in cycle.edges():
        lab = g.labels[(c, v)]
        prod = field.mul(prod, lab if check_to_var else field.inv(lab))
    return prod


def _field_of(g: TannerGraph) -> GF2m:
    field = getattr(g, "field", None)
    if field is None:
        raise ValueError("graph has no field attached; build it from a matrix")
    return field


def graph_of(matrix: SparseQMatrix) -> TannerGraph:
    g = matrix.tanner_graph()
    g.field = matrix.field
    return g


def restricted_graph(HX: SparseQMatrix, HZ: SparseQMatrix, k: int) -> TannerGraph:
    """Tanner graph of the submatrix of HX on the support of row k of HZ,
    with all-zero rows dropped.  Node ids stay those of HX."""
    cols = [j for j, _ in HZ.row_adj[k]]
    col_set = set(cols)
    labels = {(i, j): v for (i, j), v in HX.entries.items() if j in col_set}
    rows = sorted({i for i, _ in labels})
    g = TannerGraph(var_ids=cols, check_ids=rows, labels=labels)
    g.field = HX.field
    return g


def _check_graph(g: TannerGraph) -> dict[int, list[tuple[int, int]]]:
    """Contract degree-2 variable nodes to edges: check -> [(other_check, var)].

    Requires every variable node to have degree exactly 2.
    """
    adj: dict[int, list[tuple[int, int]]] = {c: [] for c in g.check_ids}
    for v in g.var_ids:
        nbrs = g.var_adj[v]
        if len(nbrs) != 2:
            raise ValueError(f"variable node {v} has degree {len(nbrs)}, expected 2")
        a, b = nbrs
        adj[a].append((b, v))
        adj[b].append((a, v))
    for c in adj:
        adj[c].sort()
    return adj


def cycle_decomposition(g: TannerGraph) -> list[CycleWalk]:
    """Edge-disjoint cycles covering every edge exactly once.

    Requires variable degrees exactly 2 and check degrees even; each
    variable node then lies in exactly one returned cycle, while a check
    node may appear in several (but at most once per cycle).
    """
    adj = _check_graph(g)
    for c in g.check_ids:
        if len(adj[c]) % 2 != 0:
            raise ValueError(f"check node {c} has odd degree {len(adj[c])}")
    used: set[int] = set()
    ptr = {c: 0 for c in g.check_ids}

    def next_edge(c: int) -> tuple[int, int] | None:
        lst = adj[c]
        while ptr[c] < len(lst):
            other, var = lst[ptr[c]]
            if var not in used:
                return other, var
            ptr[c] += 1
        return None

    cycles: list[CycleWalk] = []
    for start in g.check_ids:
        while next_edge(start) is not None:
            stack_checks = [start]
            stack_vars: list[int] = []
            index_of = {start: 0}
            while True:
                cur = stack_checks[-1]
                step = next_edge(cur)
                if step is None:
                    if cur != start or stack_vars:
                        raise ValueError(f"walk stuck at check {cur}; degrees are inconsistent")
                    break
                other, var = step
                used.add(var)
                if other in index_of:
                    i = index_of[other]
                    cyc_checks = tuple(stack_checks[i:])
                    cyc_vars = tuple(stack_vars[i:]) + (var,)
                    # v[t] joins c[t-1] and c[t]: lead with the closing variable
                    walk = CycleWalk(vars=(cyc_vars[-1],) + cyc_vars[:-1], checks=cyc_checks)
                    cycles.append(walk.canonical())
                    for c in stack_checks[i + 1:]:
                        del index_of[c]
                    del stack_checks[i + 1:]
                    del stack_vars[i:]
                else:
                    index_of[other] = len(stack_checks)
                    stack_checks.append(other)
                    stack_vars.append(var)
    return sorted(cycles, key=lambda w: w.vars)


def check_graph_cycle_basis(g: TannerGraph) -> list[CycleWalk]:
    """Fundamental cycles of the check graph w.r.t. a BFS spanning forest.

    One cycle per non-tree edge (i.e. per variable node not used by the
    forest); |basis| = #edges - #checks + #components.  Checking a cycle
    product condition on these suffices for all cycles of the graph, since
    the product is multiplicative over closed walks.
    """
    adj = _check_graph(g)
    parent: dict[int, tuple[int, int] | None] = {}
    depth: dict[int, int] = {}
    tree_vars: set[int] = set()
    for root in g.check_ids:
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = deque([root])
        while queue:
            cur = queue.popleft()
            for other, var in adj[cur]:
                if other not in parent:
                    parent[other] = (cur, var)
                    depth[other] = depth[cur] + 1
                    tree_vars.add(var)
                    queue.append(other)

    basis = []
    for v in g.var_ids:
        if v in tree_vars:
            continue
        a, b = g.var_adj[v]
        # climb to the common ancestor, collecting (check, var) steps
        path_a: list[tuple[int, int]] = []
        path_b: list[tuple[int, int]] = []
        ua, ub = a, b
        while depth[ua] > depth[ub]:
            pc, pv = parent[ua]
            path_a.append((ua, pv))
            ua = pc
        while depth[ub] > depth[ua]:
            pc, pv = parent[ub]
            path_b.append((ub, pv))
            ub = pc
        while ua != ub:
            pc, pv = parent[ua]
            path_a.append((ua, pv))
            ua = pc
            pc, pv = parent[ub]
            path_b.append((ub, pv))
            ub = pc
        # cycle: a -> ... -> lca -> ... -> b -> (v) -> a
        checks = [a]
        vars_: list[int] = [v]  # v joins the final check b back to a
        for node, pv in path_a:
            vars_.append(pv)
            checks.append(parent[node][0])
        for node, pv in reversed(path_b):
            vars_.append(pv)
            checks.append(node)
        # CycleWalk convention: v[t] joins c[t-1] and c[t]
        walk = CycleWalk(vars=tuple(vars_), checks=tuple(checks))
        walk.validate(g)
        basis.append(walk.canonical())
    return sorted(basis, key=lambda w: w.vars)
