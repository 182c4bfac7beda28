"""Binary expansion of q-ary matrices and vectors via companion matrices.

Each nonzero entry a becomes the m x m binary matrix of v -> a*v in the
coefficient basis, so expansion commutes with matrix-vector products:
expand_matrix(M) @ expand_vec(v) = expand_vec(M.apply(v)).  For a CSS
pair the Z side is expanded with transposed blocks; the transposes cancel
inside HXb . HZb^T, which therefore vanishes over GF(2) exactly when
HXq . HZq^T = 0 over GF(q).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from toriq.lift import CssPairQ
from toriq.qmatrix import SparseQMatrix


def expand_matrix(M: SparseQMatrix, transpose_blocks: bool = False) -> np.ndarray:
    """(m*rows) x (m*cols) binary matrix; zero entries become zero blocks."""
    m = M.field.m
    out = np.zeros((m * M.rows, m * M.cols), dtype=np.uint8)
    for (i, j), v in M.entries.items():
        block = M.field.companion(v)
        if transpose_blocks:
            block = block.T
        out[m * i:m * (i + 1), m * j:m * (j + 1)] = block
    return out


def expand_vec(field, v) -> np.ndarray:
    """Binary vector of length m*len(v); symbol t occupies bits [m*t, m*(t+1))."""
    v = np.asarray(v, dtype=np.int64)
    bits = (v[:, None] >> np.arange(field.m)) & 1
    return bits.reshape(-1).astype(np.uint8)


def contract_vec(field, bits) -> np.ndarray:
    """Group consecutive m-bit blocks back into symbols; inverse of expand_vec."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.size % field.m != 0:
        raise ValueError(f"bit vector length {bits.size} is not a multiple of m={field.m}")
    blocks = bits.reshape(-1, field.m) & 1
    return (blocks << np.arange(field.m)).sum(axis=1)


@dataclass(frozen=True)
class BinaryExpandedPair:
    """Binary CSS pair (HXb, HZb) expanded from a q-ary pair.

    HXb uses direct companion blocks (so q-ary X syndromes expand
    blockwise); HZb uses transposed blocks so that HXb . HZb^T = 0.
    """

    HXb: np.ndarray
    HZb: np.ndarray
    origin: CssPairQ


def expand_pair(pair: CssPairQ) -> BinaryExpandedPair:
    return BinaryExpandedPair(
        HXb=expand_matrix(pair.HXq, transpose_blocks=False),
        HZb=expand_matrix(pair.HZq, transpose_blocks=True),
        origin=pair,
    )
