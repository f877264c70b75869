"""Periodic and flip-fixed point counts from transition matrices.

For a vertex shift with flip matrix J (one-block flip ``tau``), and for
sofic shifts through the signed level matrices of a diamond-free cover,

    p_m        = sum_k (-1)^(k+1) tr(A_k^m)
    p_{2m,0}   = sum_k (-1)^(k+1) S[J_k^D B_k^m J_k^D]
    p_{2m,1}   = sum_k (-1)^(k+1) S[(J_k A_k)^D B_k^(m-1) (A_k J_k)^D]
    p_{2m-1,0} = sum_k (-1)^(k+1) S[J_k^D B_k^(m-1) (A_k J_k)^D]

where ``S`` sums all entries and ``^D`` keeps the diagonal.  The vertex
shift case is the single level ``A_1 = B_1 = A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import diag_part, entry_sum, matmul, matpow, trace


class FlipIncompatible(ValueError):
    """J is not an involution compatible with A (JA != A^T J or J^2 != I)."""


class IncompleteLevels(ValueError):
    pass


def reduce_index(m: int, n: int) -> tuple[int, int]:
    """Canonical ``(N, delta)`` with ``p_{m,n} = p_{N,delta}``."""
    if m < 1:
        raise ValueError("m must be positive")
    if m % 2:
        return m, 0
    return m, n % 2


def matrix_diag(m: np.ndarray) -> np.ndarray:
    return diag_part(m)


def _matrix(rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows.astype(object)
    return np.array([list(r) for r in rows], dtype=object)


def _flip_term(A: np.ndarray, B: np.ndarray, J: np.ndarray, N: int, delta: int) -> int:
    half = N // 2
    if N % 2:
        left, right = diag_part(J), diag_part(matmul(A, J))
        return entry_sum(matmul(matmul(left, matpow(B, half)), right))
    if delta == 0:
        d = diag_part(J)
        return entry_sum(matmul(matmul(d, matpow(B, half)), d))
    left, right = diag_part(matmul(J, A)), diag_part(matmul(A, J))
    return entry_sum(matmul(matmul(left, matpow(B, half - 1)), right))


def count_thmA(A, J, N: int, delta: int | None = None) -> int:
    """``p_N`` (``delta`` None) or ``p_{N,delta}`` for the vertex shift of ``A``."""
    A, J = _matrix(A), _matrix(J)
    n = A.shape[0]
    eye = np.identity(n, dtype=int)
    if J.shape != A.shape or (matmul(J, J) != eye).any() or (matmul(J, A) != matmul(A.T, J)).any():
        raise FlipIncompatible("need J^2 = I and J A = A^T J")
    if N < 1:
        raise ValueError("period must be positive")
    if delta is None:
        return trace(matpow(A, N))
    N, delta = reduce_index(N, delta)
    return _flip_term(A, A, J, N, delta)


def count_thmB(levels, N: int, delta: int | None = None) -> int:
    """``p_N`` or ``p_{N,delta}`` from the signed level matrices."""
    if N < 1:
        raise ValueError("period must be positive")
    ks = [lv.k for lv in levels]
    if ks != list(range(1, len(levels) + 1)):
        raise IncompleteLevels(f"levels must be 1..r in order, got {ks}")
    if delta is not None:
        N, delta = reduce_index(N, delta)
    total = 0
    for lv in levels:
        if lv.size == 0:
            continue
        if delta is None:
            term = trace(matpow(lv.A, N))
        else:
            term = _flip_term(lv.A, lv.B, lv.J, N, delta)
        total += term if lv.k % 2 else -term
    return total


@dataclass
class CountTable:
    """Rows ``(m, p_m, p_{m,0}, p_{m,1})``; ``p_{m,1}`` is None for odd m."""

    rows: list = field(default_factory=list)
    provenance: str = ""

    def as_tsv(self) -> str:
        lines = ["m\tp_m\tp_{m,0}\tp_{m,1}"]
        for m, p, p0, p1 in self.rows:
            lines.append(f"{m}\t{p}\t{p0}\t{'-' if p1 is None else p1}")
        return "\n".join(lines) + "\n"


def count_table(levels, max_m: int) -> CountTable:
    rows = []
    for m in range(1, max_m + 1):
        p1 = count_thmB(levels, m, 1) if m % 2 == 0 else None
        rows.append((m, count_thmB(levels, m), count_thmB(levels, m, 0), p1))
    table = CountTable(rows, "signed subset matrices of the cover")
    _check_table(table)
    return table


def count_table_thmA(A, J, max_m: int) -> CountTable:
    rows = []
    for m in range(1, max_m + 1):
        p1 = count_thmA(A, J, m, 1) if m % 2 == 0 else None
        rows.append((m, count_thmA(A, J, m), count_thmA(A, J, m, 0), p1))
    table = CountTable(rows, "vertex-shift matrices")
    _check_table(table)
    return table


def _check_table(table: CountTable) -> None:
    for row in table.rows:
        if any(v is not None and v < 0 for v in row[1:]):
            raise ArithmeticError(f"negative count in row {row}: sign convention broken")
