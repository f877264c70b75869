"""Flip-fixed periodic points of sofic shifts, counted exactly.

Typical use::

    from flipcount import CORPUS, counts, closed_forms
    print(counts(CORPUS["even"], 6).as_tsv())
    zeta, G = closed_forms(CORPUS["even"])
"""

from .counting import CountTable, count_table, count_thmA, count_thmB, reduce_index
from .krieger import (
    JointStateChain,
    build_finitary_chain,
    build_irreducible_component,
    build_joint_chain,
    compute_future_classes,
    compute_past_classes,
    to_dot,
)
from .oracle import CORPUS, lemma_2_3_check, oracle_flip_fixed, oracle_periodic
from .pipeline import chain_for, closed_forms, counts, levels_for
from .presentations import FlipSpec, FlipSystem, LabeledGraph, SftMatrix, factor_dfa
from .series import PowerSeries, RationalFunction, flip_zeta_series, generating_rational, zeta_rational
from .signed_subsets import build_all_levels, build_level_matrices

__all__ = [
    "CORPUS",
    "CountTable",
    "FlipSpec",
    "FlipSystem",
    "JointStateChain",
    "LabeledGraph",
    "PowerSeries",
    "RationalFunction",
    "SftMatrix",
    "build_all_levels",
    "build_finitary_chain",
    "build_irreducible_component",
    "build_joint_chain",
    "build_level_matrices",
    "chain_for",
    "closed_forms",
    "compute_future_classes",
    "compute_past_classes",
    "count_table",
    "count_thmA",
    "count_thmB",
    "counts",
    "factor_dfa",
    "flip_zeta_series",
    "generating_rational",
    "lemma_2_3_check",
    "levels_for",
    "oracle_flip_fixed",
    "oracle_periodic",
    "reduce_index",
    "to_dot",
    "zeta_rational",
]
