"""End-to-end helpers: from a flip system to chains, level matrices and counts."""

from __future__ import annotations

import numpy as np

from .counting import CountTable, count_table, count_table_thmA
from .krieger import (
    JointStateChain,
    build_finitary_chain,
    build_irreducible_component,
    build_joint_chain,
)
from .oracle import oracle_flip_fixed, oracle_periodic
from .presentations import FlipSpec, FlipSystem, SftMatrix, as_one_block
from .series import RationalFunction, generating_rational, zeta_rational
from .signed_subsets import LevelMatrices, build_all_levels

CHAINS = ("joint", "finitary", "component")


def chain_for(system: FlipSystem, which: str = "joint") -> JointStateChain:
    if which not in CHAINS:
        raise ValueError(f"unknown chain {which!r}, expected one of {CHAINS}")
    graph, tau = as_one_block(system)
    chain = build_joint_chain(graph, tau)
    if which == "joint":
        return chain
    chain = build_finitary_chain(chain, graph, tau)
    if which == "finitary":
        return chain
    return build_irreducible_component(chain, graph)


def levels_for(system: FlipSystem, which: str = "joint") -> list[LevelMatrices]:
    return build_all_levels(chain_for(system, which))


def counts(system: FlipSystem, max_m: int, which: str = "joint") -> CountTable:
    return count_table(levels_for(system, which), max_m)


def sft_flip_matrix(sft: SftMatrix, flip: FlipSpec) -> np.ndarray:
    """Permutation matrix of a one-block flip acting on the states of a vertex shift."""
    if flip.kind != "one-block":
        raise ValueError("the direct vertex-shift formulas need a one-block flip")
    where = {s: i for i, s in enumerate(sft.states)}
    n = len(sft.states)
    J = np.zeros((n, n), dtype=object)
    for s in sft.states:
        J[where[s], where[flip.tau[s]]] = 1
    return J


def direct_counts(system: FlipSystem, max_m: int) -> CountTable:
    if system.sft is None:
        raise ValueError("direct counting needs a matrix presentation")
    A = np.array(system.sft.entries, dtype=object)
    return count_table_thmA(A, sft_flip_matrix(system.sft, system.flip), max_m)


def oracle_counts(system: FlipSystem, max_m: int) -> CountTable:
    rows = []
    for m in range(1, max_m + 1):
        p1 = oracle_flip_fixed(system, m, 1) if m % 2 == 0 else None
        rows.append((m, oracle_periodic(system, m), oracle_flip_fixed(system, m, 0), p1))
    return CountTable(rows, "brute-force enumeration")


def chain_vertex_system(chain: JointStateChain, name: str = "chain") -> FlipSystem:
    """The vertex shift of a chain's transition matrix with the flip given by J."""
    states = list(range(len(chain)))
    sft = SftMatrix(states, [[int(x) for x in row] for row in chain.A])
    tau = {i: chain.star(i) for i in states}
    return FlipSystem(name, sft.to_graph(), FlipSpec.one_block(tau), sft)


def closed_forms(system: FlipSystem, which: str = "joint") -> tuple[RationalFunction, RationalFunction]:
    """``(zeta_T, G)`` as exact rational functions."""
    levels = levels_for(system, which)
    return zeta_rational(levels), generating_rational(levels)
