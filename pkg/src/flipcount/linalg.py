"""Exact integer matrix arithmetic.

Matrices are numpy arrays of Python ints (``dtype=object``).  Products are
routed through int64 whenever an a-priori bound on the result fits, so the
fast path never overflows; otherwise the object path keeps full precision.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

_INT64_SAFE = 2**62


def int_matrix(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    if arr.size == 0:
        n = len(rows)
        return np.zeros((n, n), dtype=object)
    return arr


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _abs_max(m: np.ndarray) -> int:
    return max((abs(int(x)) for x in m.flat), default=0)


def matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape[1] != y.shape[0]:
        raise ValueError("shape mismatch")
    if x.size == 0 or y.size == 0:
        return np.zeros((x.shape[0], y.shape[1]), dtype=object)
    bound = _abs_max(x) * _abs_max(y) * x.shape[1]
    if bound < _INT64_SAFE:
        prod = x.astype(np.int64) @ y.astype(np.int64)
        return prod.astype(object)
    return x.dot(y)


def matpow(m: np.ndarray, e: int) -> np.ndarray:
    """``m**e`` by repeated squaring; ``m**0`` is the identity."""
    if e < 0:
        raise ValueError("negative exponent")
    result = identity(m.shape[0])
    base = m
    while e:
        if e & 1:
            result = matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return result


def diag_part(m: np.ndarray) -> np.ndarray:
    out = np.zeros_like(m)
    for i in range(min(m.shape)):
        out[i, i] = m[i, i]
    return out


def entry_sum(m: np.ndarray) -> int:
    return int(sum(int(x) for x in m.flat))


def trace(m: np.ndarray) -> int:
    return int(sum(int(m[i, i]) for i in range(m.shape[0])))


def support_components(m: np.ndarray) -> list[list[int]]:
    """Strongly connected components of the support graph that carry a cycle."""
    n = m.shape[0]
    if n == 0:
        return []
    nz = np.array([[x != 0 for x in row] for row in m], dtype=bool)
    count, labels = connected_components(csr_matrix(nz), directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        comps.setdefault(int(c), []).append(i)
    out = []
    for members in comps.values():
        if len(members) > 1 or nz[members[0], members[0]]:
            out.append(sorted(members))
    out.sort()
    return out


def charpoly(m: np.ndarray) -> list[int]:
    """Coefficients ``c`` with ``det(x I - m) = sum c[i] x**(n-i)``, ``c[0] = 1``.

    Hessenberg reduction over the rationals followed by the standard
    recurrence on leading principal minors.
    """
    n = m.shape[0]
    h = [[Fraction(int(m[i, j])) for j in range(n)] for i in range(n)]
    for k in range(n - 2):
        pivot = next((i for i in range(k + 1, n) if h[i][k] != 0), None)
        if pivot is None:
            continue
        if pivot != k + 1:
            h[pivot], h[k + 1] = h[k + 1], h[pivot]
            for row in h:
                row[pivot], row[k + 1] = row[k + 1], row[pivot]
        for i in range(k + 2, n):
            if h[i][k] == 0:
                continue
            f = h[i][k] / h[k + 1][k]
            hi, hk = h[i], h[k + 1]
            for j in range(k, n):
                hi[j] -= f * hk[j]
            for row in h:
                row[k + 1] += f * row[i]
    # p[j] holds det(x I - H_j) for the leading j x j block, low degree first
    p: list[list[Fraction]] = [[Fraction(1)]]
    for j in range(1, n + 1):
        prev = p[j - 1]
        nxt = [Fraction(0)] + prev[:]  # x * p_{j-1}
        for i, c in enumerate(prev):
            nxt[i] -= h[j - 1][j - 1] * c
        prod = Fraction(1)
        for i in range(j - 1, 0, -1):
            prod *= h[i][i - 1]
            coef = prod * h[i - 1][j - 1]
            for d, c in enumerate(p[i - 1]):
                nxt[d] -= coef * c
        p.append(nxt)
    top = p[n]
    coeffs = [top[n - i] for i in range(n + 1)]
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]


def det_one_minus_t(m: np.ndarray) -> list[int]:
    """Coefficients of ``det(I - t m)`` in ascending powers of t.

    Only cyclic strongly connected components of the support contribute;
    the matrix is block triangular in any topological order of them.
    """
    poly = [1]
    for comp in support_components(m):
        block = m[np.ix_(comp, comp)]
        factor = charpoly(block)  # det(I - t B) = t^n det(t^{-1} I - B)
        poly = poly_mul_int(poly, factor)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out
