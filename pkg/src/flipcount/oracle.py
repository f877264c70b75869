"""Brute-force ground truth for periodic and flip-fixed point counts.

Points fixed by ``sigma^N`` correspond one-to-one to words ``w`` of length N
with ``w^inf`` in X, so counting reduces to enumerating blocks and testing
periodic words directly on the presentation.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .automata import Dfa
from .presentations import (
    FlipSpec,
    FlipSystem,
    LabeledGraph,
    SftMatrix,
    factor_dfa,
    periodic_word_test,
    trim_essential,
)


class HypothesisConstructionFailure(RuntimeError):
    pass


def _corpus() -> dict[str, FlipSystem]:
    even = LabeledGraph(
        ["p", "q"], [("p", "1", "p"), ("p", "0", "q"), ("q", "0", "p")], ["0", "1"]
    )
    golden_sft = SftMatrix(["a", "b"], [[1, 1], [1, 0]])
    full2_sft = SftMatrix(["0", "1"], [[1, 1], [1, 1]])
    full2 = LabeledGraph(["v"], [("v", "0", "v"), ("v", "1", "v")], ["0", "1"])
    full1 = LabeledGraph(["v"], [("v", "a", "v")], ["a"])
    return {
        "even": FlipSystem("even", even, FlipSpec.one_block({"0": "0", "1": "1"})),
        "golden": FlipSystem(
            "golden", golden_sft.to_graph(), FlipSpec.one_block({"a": "a", "b": "b"}), golden_sft
        ),
        "full2swap": FlipSystem(
            "full2swap", full2, FlipSpec.one_block({"0": "1", "1": "0"}), full2_sft
        ),
        "full1": FlipSystem("full1", full1, FlipSpec.one_block({"a": "a"})),
    }


CORPUS = _corpus()


@lru_cache(maxsize=None)
def _dfa(graph: LabeledGraph) -> Dfa:
    return factor_dfa(trim_essential(graph))


def periodic_words(system: FlipSystem, m: int):
    """Words ``w`` of length m with ``w^inf`` in X, prefixes pruned by the factor DFA."""
    if m < 1:
        raise ValueError("period must be positive")
    graph = system.graph
    dfa = _dfa(graph)

    def walk(q, prefix):
        if len(prefix) == m:
            w = tuple(prefix)
            if periodic_word_test(graph, w):
                yield w
            return
        for i, a in enumerate(dfa.alphabet):
            r = dfa.delta[q][i]
            if r != dfa.dead:
                prefix.append(a)
                yield from walk(r, prefix)
                prefix.pop()

    yield from walk(dfa.initial, [])


def oracle_periodic(system: FlipSystem, m: int) -> int:
    return sum(1 for _ in periodic_words(system, m))


def is_flip_fixed(flip: FlipSpec, word: tuple, delta: int) -> bool:
    """Does ``sigma^delta phi`` fix the periodic point ``word^inf``?"""
    n = len(word)
    r = flip.radius if flip.kind == "sliding-block" else 0
    for i in range(n):
        # (sigma^delta phi x)_i = phi(x)_{i+delta}, read from x around -(i+delta)
        centre = -(i + delta)
        block = tuple(word[(centre + j) % n] for j in range(-r, r + 1))
        if flip.local(block) != word[i]:
            return False
    return True


def oracle_flip_fixed(system: FlipSystem, N: int, delta: int) -> int:
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    return sum(1 for w in periodic_words(system, N) if is_flip_fixed(system.flip, w, delta))


def oracle_flip_fixed_general(system: FlipSystem, m: int, n: int) -> int:
    """``p_{m,n}`` for any integer n, straight from the definition."""
    return sum(1 for w in periodic_words(system, m) if is_flip_fixed(system.flip, w, n))


# -- signed inclusion-exclusion over invariant subsets -------------------------


def _orbits(perm: list[int]) -> list[list[int]]:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        orbit = []
        x = start
        while x not in seen:
            seen.add(x)
            orbit.append(x)
            x = perm[x]
        out.append(orbit)
    return out


def restricted_sign(perm: list[int], subset) -> int:
    """Sign of ``perm`` restricted to an invariant subset."""
    sign = 1
    for orbit in _orbits(perm):
        if orbit[0] in subset:
            if (len(orbit) - 1) % 2:
                sign = -sign
    return sign


def signed_sum(perm: list[int], family) -> int:
    """Sum over nonempty E in the family of ``(-1)^(|E|+1) sgn(perm|_E)``."""
    total = 0
    for e in family:
        if e:
            total += (-1) ** (len(e) + 1) * restricted_sign(perm, e)
    return total


def closure(family) -> set[frozenset]:
    """Smallest family containing ``family`` closed under union and difference.

    That is the ring of sets generated by ``family``: all unions of the
    atoms (points grouped by which members contain them), plus the empty set.
    """
    family = [frozenset(e) for e in family]
    atoms: dict = {}
    for x in set().union(*family):
        atoms.setdefault(tuple(x in e for e in family), set()).add(x)
    cells = list(atoms.values())
    out = set()
    for mask in range(1 << len(cells)):
        out.add(frozenset(x for i, c in enumerate(cells) if mask >> i & 1 for x in c))
    return out


def _is_closed(family) -> bool:
    masks = {sum(1 << x for x in e) for e in family}
    return all(a | b in masks and a & ~b in masks for a in masks for b in masks)


def invariant_subsets(perm: list[int], within=None) -> list[frozenset]:
    orbits = [o for o in _orbits(perm) if within is None or set(o) <= set(within)]
    out = []
    for mask in range(1 << len(orbits)):
        out.append(frozenset(x for i, o in enumerate(orbits) if mask >> i & 1 for x in o))
    return out


def random_instance(rng: random.Random, max_size: int):
    """A permutation, a nonempty invariant G, and a family satisfying the signed-sum hypotheses."""
    n = rng.randint(1, max_size)
    perm = list(range(n))
    rng.shuffle(perm)
    orbits = _orbits(perm)
    chosen = [o for o in orbits if rng.random() < 0.5] or [rng.choice(orbits)]
    g = frozenset(x for o in chosen for x in o)
    extra = []
    for _ in range(rng.randint(0, 3)):
        pick = [o for o in orbits if rng.random() < 0.5]
        extra.append(frozenset(x for o in pick for x in o))
    family = closure(invariant_subsets(perm, g) + extra)
    _check_hypotheses(perm, family, g)
    return perm, family, g


def _check_hypotheses(perm, family, g) -> None:
    def invariant(e):
        return frozenset(perm[x] for x in e) == e

    if not all(invariant(e) for e in family):
        raise HypothesisConstructionFailure("family member not invariant")
    if not _is_closed(family):
        raise HypothesisConstructionFailure("family not closed under union/difference")
    if not g or not invariant(g):
        raise HypothesisConstructionFailure("G must be nonempty and invariant")
    if not set(invariant_subsets(perm, g)) <= set(family):
        raise HypothesisConstructionFailure("invariant subsets of G missing")


def lemma_2_3_check(trials: int, max_size: int, seed: int) -> bool:
    """Seeded random check that the signed sum is 1 for every admissible family."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    for _ in range(trials):
        perm, family, _ = random_instance(rng, max_size)
        if signed_sum(perm, family) != 1:
            return False
    return True
