import random

import pytest

from flipcount.oracle import (
    CORPUS,
    closure,
    invariant_subsets,
    is_flip_fixed,
    lemma_2_3_check,
    oracle_flip_fixed,
    oracle_periodic,
    random_instance,
    restricted_sign,
    signed_sum,
    _check_hypotheses,
    _is_closed,
)
from flipcount.presentations import flip_axiom_check

LUCAS = [2, 1, 3, 4, 7, 11, 18, 29, 47]


@pytest.mark.parametrize("name", list(CORPUS))
def test_corpus_systems_are_flips(name):
    system = CORPUS[name]
    assert flip_axiom_check(system.graph, system.flip)


@pytest.mark.parametrize("m, expected", [(1, 2), (3, 5)])
def test_even_periodic(m, expected):
    assert oracle_periodic(CORPUS["even"], m) == expected


@pytest.mark.parametrize("m", range(1, 9))
def test_even_periodic_lucas(m):
    assert oracle_periodic(CORPUS["even"], m) == LUCAS[m] + (-1) ** (m + 1)


@pytest.mark.parametrize("m", range(1, 7))
def test_full1_periodic(m):
    assert oracle_periodic(CORPUS["full1"], m) == 1


@pytest.mark.parametrize(
    "name, N, delta, expected", [("even", 1, 0, 2), ("even", 3, 0, 3), ("full2swap", 2, 1, 2)]
)
def test_flip_fixed_examples(name, N, delta, expected):
    assert oracle_flip_fixed(CORPUS[name], N, delta) == expected


def test_flip_fixed_words():
    flip = CORPUS["full2swap"].flip
    assert is_flip_fixed(flip, ("0", "1"), 1)
    assert not is_flip_fixed(flip, ("0", "0"), 1)


def test_oracle_rejects_bad_arguments():
    with pytest.raises(ValueError):
        oracle_periodic(CORPUS["even"], 0)
    with pytest.raises(ValueError):
        oracle_flip_fixed(CORPUS["even"], 2, 2)
    with pytest.raises(ValueError):
        lemma_2_3_check(0, 3, 0)


def test_signed_sum_single_point():
    assert signed_sum([0], [frozenset(), frozenset({0})]) == 1


def test_signed_sum_transposition():
    family = invariant_subsets([1, 0])
    assert restricted_sign([1, 0], {0, 1}) == -1
    assert signed_sum([1, 0], family) == 1


def test_closure_is_closed():
    family = closure([{0, 1}, {1, 2}])
    assert _is_closed(family)
    assert frozenset({1}) in family and frozenset() in family


@pytest.mark.parametrize("seed", range(20))
def test_random_instances_meet_hypotheses(seed):
    perm, family, g = random_instance(random.Random(seed), 8)
    _check_hypotheses(perm, family, g)
    assert signed_sum(perm, family) == 1


def test_signed_sum_checker_is_seeded():
    assert lemma_2_3_check(200, 8, seed=7)
    assert lemma_2_3_check(200, 8, seed=7) == lemma_2_3_check(200, 8, seed=7)
