import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flipcount.counting import (
    CountTable,
    FlipIncompatible,
    IncompleteLevels,
    count_table,
    count_table_thmA,
    count_thmA,
    count_thmB,
    matrix_diag,
    reduce_index,
)
from flipcount.linalg import entry_sum, trace
from flipcount.oracle import CORPUS, oracle_flip_fixed_general

import support

GOLDEN = [[1, 1], [1, 0]]
FULL2 = [[1, 1], [1, 1]]
SWAP = [[0, 1], [1, 0]]
EYE = [[1, 0], [0, 1]]


@pytest.mark.parametrize("m, n, expected", [(4, 7, (4, 1)), (5, -3, (5, 0)), (6, 0, (6, 0)), (1, 1, (1, 0))])
def test_reduce_index(m, n, expected):
    assert reduce_index(m, n) == expected


@given(st.integers(1, 50), st.integers(-100, 100))
def test_reduce_index_periodicity(m, n):
    assert reduce_index(m, n) == reduce_index(m, n + 2) == reduce_index(m, n + m)


def test_reduce_index_rejects_zero():
    with pytest.raises(ValueError):
        reduce_index(0, 0)


def test_diag_and_sum():
    M = np.array([[1, 2], [3, 4]], dtype=object)
    assert entry_sum(M) == 10
    assert matrix_diag(M).tolist() == [[1, 0], [0, 4]]
    assert entry_sum(matrix_diag(M)) == trace(M)
    Z = np.zeros((3, 3), dtype=object)
    assert entry_sum(Z) == 0
    assert (matrix_diag(Z) == Z).all()


@pytest.mark.parametrize(
    "A, J, N, delta, expected",
    [
        (GOLDEN, EYE, 2, 0, 3),
        (GOLDEN, EYE, 1, 0, 1),
        (FULL2, SWAP, 2, 1, 2),
        (FULL2, SWAP, 3, None, 8),
        (FULL2, SWAP, 1, 0, 0),
    ],
)
def test_count_thmA(A, J, N, delta, expected):
    assert count_thmA(A, J, N, delta) == expected


def test_count_thmA_incompatible():
    with pytest.raises(FlipIncompatible):
        count_thmA([[1, 1], [0, 1]], EYE, 2, 0)
    with pytest.raises(FlipIncompatible):
        count_thmA(GOLDEN, [[1, 1], [0, 1]], 2, 0)


@pytest.mark.parametrize("N, delta, expected", [(1, 0, 2), (3, 0, 3), (2, 0, 2), (2, 1, 2), (3, None, 5)])
def test_count_thmB_even(N, delta, expected):
    assert count_thmB(support.levels("even"), N, delta) == expected


def test_incomplete_levels():
    levels = support.levels("even")
    with pytest.raises(IncompleteLevels):
        count_thmB(levels[1:], 2, 0)
    with pytest.raises(IncompleteLevels):
        count_thmB(levels[:1] + levels[2:], 2)


@pytest.mark.parametrize("name", support.NAMES)
def test_count_thmB_matches_oracle(name):
    levels = support.levels(name)
    for N in range(1, 7):
        assert count_thmB(levels, N) == support.periodic(name, N)
        for delta in (0, 1):
            assert count_thmB(levels, N, delta) == support.flip_fixed(name, N, delta)


@pytest.mark.parametrize("name", support.NAMES)
def test_reduce_index_consistency(name):
    system = CORPUS[name]
    for m in range(1, 7):
        for n in range(-4, 5):
            N, delta = reduce_index(m, n)
            assert oracle_flip_fixed_general(system, m, n) == support.flip_fixed(name, N, delta)


def test_odd_periods_ignore_the_shift():
    levels = support.levels("even")
    for m in (1, 3, 5):
        assert count_thmB(levels, m, 0) == count_thmB(levels, m, 1)


def test_tables():
    table = count_table(support.levels("even"), 3)
    assert table.rows == [(1, 2, 2, None), (2, 2, 2, 2), (3, 5, 3, None)]
    assert table.as_tsv().splitlines() == ["m\tp_m\tp_{m,0}\tp_{m,1}", "1\t2\t2\t-", "2\t2\t2\t2", "3\t5\t3\t-"]
    assert count_table_thmA(GOLDEN, EYE, 4).rows == count_table(support.levels("golden"), 4).rows
    assert all(v is None or v >= 0 for row in count_table(support.levels("even"), 8).rows for v in row)


def test_negative_count_is_rejected():
    from flipcount.counting import _check_table

    with pytest.raises(ArithmeticError):
        _check_table(CountTable([(1, -1, 0, None)]))
