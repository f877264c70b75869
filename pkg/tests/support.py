"""Cached pipeline results shared by the test modules."""

from functools import lru_cache
from pathlib import Path

from flipcount.oracle import CORPUS, oracle_flip_fixed, oracle_periodic
from flipcount.pipeline import chain_for
from flipcount.signed_subsets import build_all_levels

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "systems"
NAMES = tuple(CORPUS)


@lru_cache(maxsize=None)
def chain(name, which="joint"):
    return chain_for(CORPUS[name], which)


@lru_cache(maxsize=None)
def levels(name, which="joint"):
    return build_all_levels(chain(name, which))


@lru_cache(maxsize=None)
def periodic(name, m):
    return oracle_periodic(CORPUS[name], m)


@lru_cache(maxsize=None)
def flip_fixed(name, n, delta):
    return oracle_flip_fixed(CORPUS[name], n, delta)


def system_file(name):
    return str(SYSTEMS_DIR / f"{name}.json")
