import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from flipcount.linalg import charpoly, det_one_minus_t, matmul, matpow, support_components

small_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_charpoly_matches_float_roots(rows):
    m = np.array(rows, dtype=object)
    expected = np.rint(np.poly(np.array(rows, dtype=float))).astype(int).tolist()
    assert charpoly(m) == expected


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_det_one_minus_t_is_reversed_charpoly(rows):
    m = np.array(rows, dtype=object)
    c = det_one_minus_t(m)
    # det(I - tM) = t^n charpoly(1/t), so ascending coefficients are charpoly's
    trimmed = charpoly(m)
    while len(trimmed) > 1 and trimmed[-1] == 0:
        trimmed.pop()
    assert c == trimmed


def test_support_components_skips_acyclic_vertices():
    m = np.array([[1, 1, 0], [0, 0, 1], [0, 1, 0]], dtype=object)
    assert sorted(map(sorted, support_components(m))) == [[0], [1, 2]]
    assert support_components(np.array([[0, 1], [0, 0]], dtype=object)) == []


def test_big_integers_stay_exact():
    m = np.array([[3, 1], [1, 0]], dtype=object)
    p = matpow(m, 80)
    assert p[0, 0] == matmul(matpow(m, 40), matpow(m, 40))[0, 0]
    assert isinstance(p[0, 0], int) and p[0, 0] > 2**63
