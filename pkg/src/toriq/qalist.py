"""On-disk formats: q-ary alist matrices, code bundles, binary alist export.

The q-ary grammar extends the classical alist interchange format:

    line 1: n r q
    line 2: max_col_degree max_row_degree
    line 3: n per-column degrees
    line 4: r per-row degrees
    next n lines: per column, (row_index value) pairs, 1-based indices,
        values as integer bitmasks, padded with (0 0) to max_col_degree
    next r lines: per row, (col_index value) pairs, padded likewise

A code bundle is a directory holding hx.qalist, hz.qalist and meta.json
(n, m, seed, poly, construction).  Writers emit entries in ascending
index order so bundles are byte-stable for a fixed seed.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from toriq.gf import GF2m, PRIMITIVE_POLY
from toriq.lift import BinaryCssPair, CssPairQ, validate_pair
from toriq.qmatrix import SparseQMatrix


class FormatError(ValueError):
    """Malformed alist/bundle content."""


def dump_qalist(M: SparseQMatrix) -> str:
    lines = [f"{M.cols} {M.rows} {M.field.q}"]
    col_degs = [M.col_degree(j) for j in range(M.cols)]
    row_degs = [M.row_degree(i) for i in range(M.rows)]
    max_col = max(col_degs, default=0)
    max_row = max(row_degs, default=0)
    lines.append(f"{max_col} {max_row}")
    lines.append(" ".join(map(str, col_degs)))
    lines.append(" ".join(map(str, row_degs)))
    for j in range(M.cols):
        pairs = [(i + 1, v) for i, v in M.col_adj[j]]
        pairs += [(0, 0)] * (max_col - len(pairs))
        lines.append(" ".join(f"{i} {v}" for i, v in pairs))
    for i in range(M.rows):
        pairs = [(j + 1, v) for j, v in M.row_adj[i]]
        pairs += [(0, 0)] * (max_row - len(pairs))
        lines.append(" ".join(f"{j} {v}" for j, v in pairs))
    return "\n".join(lines) + "\n"


def parse_qalist(text: str) -> SparseQMatrix:
    rows_of_ints = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip() == "":
            continue
        try:
            rows_of_ints.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-integer token ({exc})") from None
    if len(rows_of_ints) < 4:
        raise FormatError("alist needs at least 4 header lines")
    (n, r, q), (max_col, max_row) = rows_of_ints[0], rows_of_ints[1]
    m = q.bit_length() - 1
    if q != 1 << m or m not in PRIMITIVE_POLY:
        raise FormatError(f"field size {q} is not a supported power of two")
    col_degs, row_degs = rows_of_ints[2], rows_of_ints[3]
    if len(col_degs) != n or len(row_degs) != r:
        raise FormatError("degree list lengths do not match the header")
    if len(rows_of_ints) != 4 + n + r:
        raise FormatError(f"expected {4 + n + r} lines, got {len(rows_of_ints)}")
    field = GF2m(m)
    entries = []
    for j in range(n):
        toks = rows_of_ints[4 + j]
        if len(toks) != 2 * max_col:
            raise FormatError(f"column {j}: expected {max_col} (index value) pairs")
        pairs = [(toks[2 * t], toks[2 * t + 1]) for t in range(max_col)]
        live = [(i - 1, v) for i, v in pairs if i != 0]
        if len(live) != col_degs[j]:
            raise FormatError(f"column {j}: {len(live)} entries but degree {col_degs[j]}")
        entries.extend((i, j, v) for i, v in live)
    # row section is redundant with the column section; parse and cross-check
    seen_by_row: dict[int, list[tuple[int, int]]] = {}
    for i in range(r):
        toks = rows_of_ints[4 + n + i]
        if len(toks) != 2 * max_row:
            raise FormatError(f"row {i}: expected {max_row} (index value) pairs")
        pairs = [(toks[2 * t], toks[2 * t + 1]) for t in range(max_row)]
        live = [(j - 1, v) for j, v in pairs if j != 0]
        if len(live) != row_degs[i]:
            raise FormatError(f"row {i}: {len(live)} entries but degree {row_degs[i]}")
        seen_by_row[i] = sorted(live)
    try:
        M = SparseQMatrix(field, r, n, entries)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    for i in range(r):
        if M.row_adj[i] != seen_by_row.get(i, []):
            raise FormatError(f"row {i}: row section contradicts column section")
    return M


def load_qalist(path: str | Path) -> SparseQMatrix:
    return parse_qalist(Path(path).read_text())


def save_qalist(path: str | Path, M: SparseQMatrix) -> None:
    Path(path).write_text(dump_qalist(M))


# -- code bundles -------------------------------------------------------------

HX_NAME = "hx.qalist"
HZ_NAME = "hz.qalist"
META_NAME = "meta.json"


def save_bundle(out_dir: str | Path, pair: CssPairQ, construction: str,
                n: int | None = None) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / HX_NAME).write_text(dump_qalist(pair.HXq))
    (out / HZ_NAME).write_text(dump_qalist(pair.HZq))
    meta = {
        "construction": construction,
        "n": n,
        "m": pair.field.m,
        "seed": pair.seed,
        "poly": pair.field.poly,
        "n_symbols": pair.n,
    }
    (out / META_NAME).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def skeleton_from_support(HXq: SparseQMatrix, HZq: SparseQMatrix) -> BinaryCssPair:
    """Binary pair with a 1 wherever the q-ary matrix is nonzero."""
    f2 = GF2m(1)
    bx = SparseQMatrix(f2, HXq.rows, HXq.cols, [(i, j, 1) for (i, j) in HXq.entries])
    bz = SparseQMatrix(f2, HZq.rows, HZq.cols, [(i, j, 1) for (i, j) in HZq.entries])
    return BinaryCssPair(HX=bx, HZ=bz)


def load_bundle(bundle_dir: str | Path, validate: bool = False) -> tuple[CssPairQ, dict]:
    """Re-load a bundle into a CssPairQ plus its metadata dict.

    With validate=True the full lift invariant suite runs (support,
    orthogonality, cycle products); cmd_verify uses its own finer-grained
    reporting instead.
    """
    bdir = Path(bundle_dir)
    for name in (HX_NAME, HZ_NAME, META_NAME):
        if not (bdir / name).exists():
            raise FormatError(f"bundle is missing {name}")
    HXq = load_qalist(bdir / HX_NAME)
    HZq = load_qalist(bdir / HZ_NAME)
    meta = json.loads((bdir / META_NAME).read_text())
    if HXq.field != HZq.field:
        raise FormatError("hx and hz are over different fields")
    if meta.get("m") != HXq.field.m:
        raise FormatError(f"metadata m={meta.get('m')} but field has m={HXq.field.m}")
    if meta.get("poly") != HXq.field.poly:
        raise FormatError(f"metadata poly {meta.get('poly')} != field poly {HXq.field.poly}")
    skeleton = skeleton_from_support(HXq, HZq)
    pair = CssPairQ(HXq=HXq, HZq=HZq, skeleton=skeleton, seed=meta.get("seed"))
    if validate:
        validate_pair(pair)
    return pair, meta


# -- classic binary alist (values omitted; entries are ones) ------------------


def dump_binary_alist(M: np.ndarray) -> str:
    M = np.asarray(M) % 2
    r, n = M.shape
    col_idx = [list(np.nonzero(M[:, j])[0] + 1) for j in range(n)]
    row_idx = [list(np.nonzero(M[i, :])[0] + 1) for i in range(r)]
    max_col = max((len(c) for c in col_idx), default=0)
    max_row = max((len(c) for c in row_idx), default=0)
    lines = [f"{n} {r}", f"{max_col} {max_row}",
             " ".join(str(len(c)) for c in col_idx),
             " ".join(str(len(c)) for c in row_idx)]
    for c in col_idx:
        lines.append(" ".join(map(str, c + [0] * (max_col - len(c)))))
    for c in row_idx:
        lines.append(" ".join(map(str, c + [0] * (max_row - len(c)))))
    return "\n".join(lines) + "\n"


def parse_binary_alist(text: str) -> np.ndarray:
    rows_of_ints = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip() == "":
            continue
        try:
            rows_of_ints.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-integer token ({exc})") from None
    n, r = rows_of_ints[0][:2]
    out = np.zeros((r, n), dtype=np.uint8)
    for j in range(n):
        for i in rows_of_ints[4 + j]:
            if i:
                out[i - 1, j] = 1
    return out
