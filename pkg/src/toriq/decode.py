"""Syndrome belief propagation over GF(2^m) on a labeled Tanner graph.

Flooding sum-product in the probability domain.  Check-node updates run in
the Walsh-Hadamard domain of the additive group of GF(2^m): a check with
syndrome s constrains the labeled contributions h_ij * e_j to XOR to s, so
each update is a permutation by the edge label, an XOR-convolution of the
other edges' messages, an offset by s, and the inverse permutation.

Messages are renormalized every step with a 1e-30 floor on components to
survive long runs at q = 512.  Hard decisions break ties toward the
smaller field value; a decode stops as soon as the hard decision
reproduces the target syndrome.

The message-passing inner loop is a compiled kernel (numba) that walks
checks and variables in CSR order with per-check scratch rows, so one
iteration at q = 512 stays cache-resident instead of streaming dozens of
large arrays.  Decoding is batched (axis 0 = batch) with converged
elements compacted away each iteration; batch composition never changes
results, since nothing couples batch elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from toriq.gf import GF2m
from toriq.qmatrix import SparseQMatrix

MSG_FLOOR = 1e-30


def prior_from_bsc(p_bit: float, m: int) -> np.ndarray:
    """Symbol-error prior for m independent bits through a BSC(p_bit).

    P(a) = p_bit^w(a) * (1-p_bit)^(m-w(a)) with w(a) the bit weight of a.
    """
    if not 0.0 <= p_bit < 0.5:
        raise ValueError(f"bit flip probability {p_bit} must be in [0, 0.5)")
    q = 1 << m
    weights = np.array([bin(a).count("1") for a in range(q)])
    prior = p_bit ** weights * (1.0 - p_bit) ** (m - weights)
    return prior / prior.sum()


@dataclass
class DecoderConfig:
    max_iters: int = 100
    damping: float = 1.0  # 1.0 = no damping

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must be in (0, 1]")


@dataclass
class BpResult:
    estimate: np.ndarray
    converged: bool
    iterations: int


@dataclass
class BpBatchResult:
    estimates: np.ndarray   # (B, n)
    converged: np.ndarray   # (B,) bool
    iterations: np.ndarray  # (B,) int


@njit(cache=True, fastmath=True, inline="always")
def _wht1d(vec, q):
    # in-place Walsh-Hadamard butterflies, radix-4 with a radix-2 tail for
    # odd log2(q); levels commute, so the order is free; self-inverse up
    # to a factor q
    h = 1
    while 4 * h <= q:
        i = 0
        while i < q:
            for t in range(i, i + h):
                a = vec[t]
                b = vec[t + h]
                c = vec[t + 2 * h]
                d = vec[t + 3 * h]
                apb = a + b
                amb = a - b
                cpd = c + d
                cmd = c - d
                vec[t] = apb + cpd
                vec[t + h] = amb + cmd
                vec[t + 2 * h] = apb - cpd
                vec[t + 3 * h] = amb - cmd
            i += 4 * h
        h *= 4
    if h < q:  # one radix-2 level remains
        for t in range(h):
            a = vec[t]
            b = vec[t + h]
            vec[t] = a + b
            vec[t + h] = a - b


@njit(cache=True, fastmath=True)
def _bp_iteration(active, priors, c2v, v2c, syndromes, var_ptr, var_edges,
                  check_ptr, check_edges, to_contrib, from_contrib,
                  mul_table, edge_vals, edge_cols, estimates, scratch,
                  acc_pre, floor):
    """One flooding iteration for the batch elements listed in active;
    returns, per active element, whether the new hard decision reproduces
    the syndrome.

    scratch holds 2*d_max rows of length q (forward spectra, then outgoing
    messages); acc_pre is one extra accumulator row.
    """
    E, q = c2v.shape[1], c2v.shape[2]
    n = var_ptr.shape[0] - 1
    r = check_ptr.shape[0] - 1
    matched = np.zeros(active.shape[0], dtype=np.bool_)
    for bi in range(active.shape[0]):
        b = active[bi]
        # variable-to-check: prior times the other incoming messages
        for vi in range(n):
            lo, hi = var_ptr[vi], var_ptr[vi + 1]
            d = hi - lo
            if d == 2:
                e1, e2 = var_edges[lo], var_edges[lo + 1]
                s1 = 0.0
                s2 = 0.0
                for u in range(q):
                    a = priors[vi, u] * c2v[b, e2, u]
                    w = priors[vi, u] * c2v[b, e1, u]
                    if a < floor:
                        a = floor
                    if w < floor:
                        w = floor
                    v2c[b, e1, u] = a
                    s1 += a
                    v2c[b, e2, u] = w
                    s2 += w
                inv1 = 1.0 / s1
                inv2 = 1.0 / s2
                for u in range(q):
                    v2c[b, e1, u] *= inv1
                    v2c[b, e2, u] *= inv2
            else:
                for t in range(d):
                    e = var_edges[lo + t]
                    ssum = 0.0
                    for u in range(q):
                        prod = priors[vi, u]
                        for t2 in range(d):
                            if t2 != t:
                                prod *= c2v[b, var_edges[lo + t2], u]
                        if prod < floor:
                            prod = floor
                        acc_pre[u] = prod
                        ssum += prod
                    inv = 1.0 / ssum
                    for u in range(q):
                        v2c[b, e, u] = acc_pre[u] * inv
        # check-to-variable: XOR-convolution in the spectrum domain
        for c in range(r):
            lo, hi = check_ptr[c], check_ptr[c + 1]
            d = hi - lo
            if d == 0:
                continue
            s = syndromes[b, c]
            for t in range(d):
                e = check_edges[lo + t]
                row = scratch[t]
                tc = to_contrib[e]
                for u in range(q):
                    row[u] = v2c[b, e, tc[u]]
                _wht1d(row, q)
            # leave-one-out spectrum products: prefix into scratch[d+t],
            # then multiply suffixes in place
            for u in range(q):
                acc_pre[u] = 1.0
            for t in range(d):
                dst = scratch[d + t]
                for u in range(q):
                    dst[u] = acc_pre[u]
                if t < d - 1:
                    row = scratch[t]
                    for u in range(q):
                        acc_pre[u] *= row[u]
            for u in range(q):
                acc_pre[u] = 1.0
            for t in range(d - 1, 0, -1):
                row = scratch[t]
                for u in range(q):
                    acc_pre[u] *= row[u]
                dst = scratch[d + t - 1]
                for u in range(q):
                    dst[u] *= acc_pre[u]
            qinv = 1.0 / q
            for t in range(d):
                e = check_edges[lo + t]
                vec = scratch[d + t]
                _wht1d(vec, q)
                ssum = 0.0
                for u in range(q):
                    vv = vec[u] * qinv
                    if vv < floor:
                        vv = floor
                    vec[u] = vv
                    ssum += vv
                inv = 1.0 / ssum
                fc = from_contrib[e]
                for u in range(q):
                    c2v[b, e, u] = vec[fc[u] ^ s] * inv
        # hard decision and syndrome check
        for vi in range(n):
            lo, hi = var_ptr[vi], var_ptr[vi + 1]
            best = -1.0
            bestu = 0
            for u in range(q):
                prod = priors[vi, u]
                for t in range(hi - lo):
                    prod *= c2v[b, var_edges[lo + t], u]
                if prod > best:
                    best = prod
                    bestu = u
            estimates[b, vi] = bestu
        ok = True
        for c in range(r):
            acc = 0
            for t in range(check_ptr[c], check_ptr[c + 1]):
                e = check_edges[t]
                acc ^= mul_table[edge_vals[e], estimates[b, edge_cols[e]]]
            if acc != syndromes[b, c]:
                ok = False
        matched[bi] = ok
    return matched


class BpDecoder:
    """Compiled flooding BP engine for one parity-check matrix.

    Construction precomputes edge orderings, label permutations, and CSR
    adjacency; decode calls then share all of it read-only, so one
    instance serves any number of concurrent decodes.
    """

    def __init__(self, H: SparseQMatrix):
        self.H = H
        self.field = H.field
        q = self.field.q
        self.q = q
        items = sorted(H.entries.items())  # row-major edge order
        self.edge_rows = np.array([i for (i, _), _ in items], dtype=np.int64)
        self.edge_cols = np.array([j for (_, j), _ in items], dtype=np.int64)
        self.edge_vals = np.array([v for _, v in items], dtype=np.int64)
        self.n_edges = len(items)
        # permutations between the symbol domain e and the contribution
        # domain u = h*e: reading a message mu at to_contrib[u] gives
        # mu~(u) = mu(h^-1 u); from_contrib undoes it (composed with the
        # syndrome XOR offset inside the kernel)
        self.to_contrib = np.stack(
            [self.field.mul_row(self.field.inv(int(h))) for h in self.edge_vals])
        self.from_contrib = np.stack(
            [self.field.mul_row(int(h)) for h in self.edge_vals])
        # CSR adjacency; check_edges is the identity because edges are
        # already sorted row-major
        col_degs = np.bincount(self.edge_cols, minlength=H.cols)
        self.var_ptr = np.concatenate([[0], np.cumsum(col_degs)]).astype(np.int64)
        self.var_edges = np.argsort(self.edge_cols, kind="stable").astype(np.int64)
        row_degs = np.bincount(self.edge_rows, minlength=H.rows)
        self.check_ptr = np.concatenate([[0], np.cumsum(row_degs)]).astype(np.int64)
        self.check_edges = np.arange(self.n_edges, dtype=np.int64)
        self.max_check_degree = int(row_degs.max()) if self.n_edges else 0
        self.mul_table = np.stack([self.field.mul_row(a) for a in range(q)])
        # segment starts of nonempty rows, for batched syndrome evaluation
        self.rows_present = np.nonzero(row_degs > 0)[0]
        self.row_starts = np.concatenate(
            [[0], np.cumsum(row_degs[self.rows_present])[:-1]]).astype(np.int64)

    def syndromes_of(self, estimates: np.ndarray) -> np.ndarray:
        """H . e^T for a (B, n) batch of estimates; returns (B, rows)."""
        prod = self.field.mul_vec(self.edge_vals[None, :], estimates[:, self.edge_cols])
        out = np.zeros((estimates.shape[0], self.H.rows), dtype=np.int64)
        if self.rows_present.size:
            seg = np.bitwise_xor.reduceat(prod, self.row_starts, axis=1)
            out[:, self.rows_present] = seg
        return out

    def _posteriors(self, priors: np.ndarray, c2v: np.ndarray) -> np.ndarray:
        """Normalized per-symbol beliefs for the current messages (numpy
        path; only marginal-reporting callers need it)."""
        B = c2v.shape[0]
        post = np.broadcast_to(priors[None], (B,) + priors.shape).copy()
        for vi in range(self.H.cols):
            edges = self.var_edges[self.var_ptr[vi]:self.var_ptr[vi + 1]]
            for e in edges:
                post[:, vi, :] *= c2v[:, e, :]
        post /= post.sum(axis=2, keepdims=True)
        return post

    def decode_batch(self, syndromes, priors, cfg: DecoderConfig,
                     early_stop: bool = True,
                     want_marginals: bool = False) -> tuple[BpBatchResult, np.ndarray | None]:
        """Decode a (B, rows) batch of syndromes under shared (n, q) priors."""
        H, q = self.H, self.q
        syndromes = np.atleast_2d(np.asarray(syndromes, dtype=np.int64))
        B = syndromes.shape[0]
        if syndromes.shape[1] != H.rows:
            raise ValueError(f"syndrome length {syndromes.shape[1]} != {H.rows} rows")
        priors = np.asarray(priors, dtype=np.float64)
        if priors.ndim == 1:
            priors = np.broadcast_to(priors, (H.cols, q))
        if priors.shape != (H.cols, q):
            raise ValueError(f"priors shape {priors.shape} != ({H.cols}, {q})")
        priors = priors / priors.sum(axis=1, keepdims=True)

        estimates = np.empty((B, H.cols), dtype=np.int64)
        converged = np.zeros(B, dtype=bool)
        iterations = np.zeros(B, dtype=np.int64)
        marginals = np.empty((B, H.cols, q)) if want_marginals else None

        estimates[:] = np.argmax(priors, axis=1)  # first max = smallest value
        if want_marginals:
            marginals[:] = priors[None]
        active = np.arange(B)
        if early_stop:
            match = np.all(self.syndromes_of(estimates) == syndromes, axis=1)
            converged[match] = True
            active = active[~match]
        elif cfg.max_iters == 0:
            converged[:] = np.all(self.syndromes_of(estimates) == syndromes, axis=1)

        if cfg.max_iters > 0 and active.size > 0:
            c2v = np.full((B, self.n_edges, q), 1.0 / q)
            v2c = np.empty_like(c2v)
            scratch = np.empty((2 * max(self.max_check_degree, 1), q))
            acc = np.empty(q)
            for it in range(1, cfg.max_iters + 1):
                if active.size == 0:
                    break
                if cfg.damping < 1.0:
                    old_c2v = c2v[active].copy()
                match = _bp_iteration(active, priors, c2v, v2c, syndromes,
                                      self.var_ptr, self.var_edges,
                                      self.check_ptr, self.check_edges,
                                      self.to_contrib, self.from_contrib,
                                      self.mul_table, self.edge_vals, self.edge_cols,
                                      estimates, scratch, acc, MSG_FLOOR)
                if cfg.damping < 1.0:
                    blended = cfg.damping * c2v[active] + (1.0 - cfg.damping) * old_c2v
                    blended /= blended.sum(axis=2, keepdims=True)
                    c2v[active] = blended
                    # the kernel's decision used undamped messages; redo it
                    post = self._posteriors(priors, blended)
                    estimates[active] = np.argmax(post, axis=2)
                    match = np.all(
                        self.syndromes_of(estimates[active]) == syndromes[active], axis=1)
                iterations[active] = it
                if want_marginals:
                    marginals[active] = self._posteriors(priors, c2v[active])
                if early_stop:
                    if match.any():
                        converged[active[match]] = True
                        active = active[~match]
                elif it == cfg.max_iters:
                    converged[active] = match
        return BpBatchResult(estimates=estimates, converged=converged,
                             iterations=iterations), marginals

    def decode(self, syndrome, priors, cfg: DecoderConfig,
               early_stop: bool = True,
               want_marginals: bool = False) -> tuple[BpResult, np.ndarray | None]:
        """Single-syndrome convenience wrapper around decode_batch."""
        batch, marg = self.decode_batch(np.asarray(syndrome)[None, :], priors, cfg,
                                        early_stop=early_stop,
                                        want_marginals=want_marginals)
        result = BpResult(estimate=batch.estimates[0],
                          converged=bool(batch.converged[0]),
                          iterations=int(batch.iterations[0]))
        return result, (marg[0] if marg is not None else None)


def bp_decode(H: SparseQMatrix, syndrome, priors, cfg: DecoderConfig | None = None) -> BpResult:
    """Decode one syndrome; see BpDecoder for the message schedule.

    Stops as soon as the running hard decision reproduces the syndrome;
    non-convergence within max_iters is a normal, flagged outcome.
    """
    cfg = cfg or DecoderConfig()
    result, _ = BpDecoder(H).decode(syndrome, priors, cfg)
    return result


def posterior_marginals(H: SparseQMatrix, syndrome, priors,
                        cfg: DecoderConfig | None = None) -> np.ndarray:
    """Per-symbol posteriors after exactly cfg.max_iters flooding iterations.

    No early stopping: the iteration count is part of the estimator's
    definition (with max_iters=0 the marginals are the normalized priors).
    """
    cfg = cfg or DecoderConfig()
    _, marg = BpDecoder(H).decode(syndrome, priors, cfg,
                                  early_stop=False, want_marginals=True)
    return marg
