"""Deterministic automata for factorial languages.

Every language handled in this package is the set of labels of finite
paths that start in some vertex set of a labeled graph.  Such languages are
prefix closed, so in a complete DFA every non-dead state accepts, and the
only distinguished states are the initial state and the dead state.

A language is identified with the canonical form of its minimal DFA: states
numbered in breadth-first order from the initial state (symbols visited in
alphabet order) with the dead state last.  Two languages over the same
alphabet are equal iff their signatures are equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Dfa:
    """Complete DFA whose live states all accept.

    ``delta[q][i]`` is the successor of ``q`` on ``alphabet[i]``.  ``dead``
    is absorbing.
    """

    alphabet: tuple
    delta: tuple
    initial: int
    dead: int

    @property
    def states(self) -> range:
        return range(len(self.delta))

    @property
    def live_states(self) -> list[int]:
        return [q for q in self.states if q != self.dead]

    def index(self, symbol) -> int:
        try:
            return self._symbol_index[symbol]
        except KeyError:
            raise KeyError(f"symbol {symbol!r} not in alphabet") from None

    @property
    def _symbol_index(self) -> dict:
        cache = self.__dict__.get("_sym_cache")
        if cache is None:
            cache = {a: i for i, a in enumerate(self.alphabet)}
            object.__setattr__(self, "_sym_cache", cache)
        return cache

    def step(self, q: int, symbol) -> int:
        return self.delta[q][self.index(symbol)]

    def run(self, q: int, word: Iterable) -> int:
        for a in word:
            if q == self.dead:
                return q
            q = self.delta[q][self.index(a)]
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(self.initial, word) != self.dead

    def signature(self, root: int | None = None) -> tuple:
        """Canonical key of the language accepted from ``root``."""
        return minimize(self, root).delta

    def __len__(self) -> int:
        return len(self.delta)


def determinize(
    successors: Mapping[tuple[Hashable, Hashable], Iterable[Hashable]],
    initial: Iterable[Hashable],
    alphabet: Sequence,
) -> tuple[Dfa, list[frozenset]]:
    """Subset construction; returns the DFA and the vertex set of each state.

    ``successors[(v, a)]`` lists the targets of ``a``-edges out of ``v``
    (missing keys mean no edge).  The empty subset is the dead state.
    """
    alphabet = tuple(alphabet)
    empty: frozenset = frozenset()
    subsets = [frozenset(initial)]
    index = {subsets[0]: 0}
    rows: list[tuple[int, ...]] = []
    for current in subsets:  # grows while iterating
        row = []
        for a in alphabet:
            image = frozenset(
                w for v in current for w in successors.get((v, a), ())
            )
            if image not in index:
                index[image] = len(subsets)
                subsets.append(image)
            row.append(index[image])
        rows.append(tuple(row))
    if empty not in index:
        index[empty] = len(subsets)
        subsets.append(empty)
        rows.append(tuple([index[empty]] * len(alphabet)))
    return Dfa(alphabet, tuple(rows), 0, index[empty]), subsets


def minimize(dfa: Dfa, root: int | None = None) -> Dfa:
    """Minimal complete DFA for the language accepted from ``root``.

    The result is in canonical form (see module docstring).
    """
    root = dfa.initial if root is None else root
    nsym = len(dfa.alphabet)

    reach = [root]
    seen = {root}
    for q in reach:
        for r in dfa.delta[q]:
            if r not in seen:
                seen.add(r)
                reach.append(r)
    if dfa.dead not in seen:
        seen.add(dfa.dead)
        reach.append(dfa.dead)

    # Moore refinement; initial partition separates dead from live.
    block = {q: (0 if q == dfa.dead else 1) for q in reach}
    while True:
        keys = {}
        new_block = {}
        for q in reach:
            key = (block[q],) + tuple(block[dfa.delta[q][i]] for i in range(nsym))
            new_block[q] = keys.setdefault(key, len(keys))
        if len(keys) == len(set(block.values())):
            block = new_block
            break
        block = new_block

    rep = {}
    for q in reach:
        rep.setdefault(block[q], q)
    dead_block = block[dfa.dead]

    number: dict[int, int] = {}
    order: list[int] = []
    if block[root] != dead_block:
        number[block[root]] = 0
        order.append(block[root])
        for b in order:
            for i in range(nsym):
                c = block[dfa.delta[rep[b]][i]]
                if c != dead_block and c not in number:
                    number[c] = len(order)
                    order.append(c)
    dead = len(order)
    number[dead_block] = dead
    delta = tuple(
        tuple(number[block[dfa.delta[rep[b]][i]]] for i in range(nsym))
        for b in order
    ) + (tuple([dead] * nsym),)
    return Dfa(dfa.alphabet, delta, 0 if order else dead, dead)


def language_dfa(edges: Iterable[tuple], initial: Iterable, alphabet: Sequence) -> Dfa:
    """Minimal DFA for the labels of finite paths starting in ``initial``."""
    successors: dict = {}
    for src, label, dst in edges:
        successors.setdefault((src, label), []).append(dst)
    dfa, _ = determinize(successors, initial, alphabet)
    return minimize(dfa)


def language_key(edges: Iterable[tuple], initial: Iterable, alphabet: Sequence) -> tuple:
    return language_dfa(edges, initial, alphabet).delta


def dfa_edges(dfa: Dfa) -> list[tuple[int, object, int]]:
    """Transitions between live states, as labeled-graph edges."""
    return [
        (q, a, dfa.delta[q][i])
        for q in dfa.live_states
        for i, a in enumerate(dfa.alphabet)
        if dfa.delta[q][i] != dfa.dead
    ]


def shortest_difference(left: Dfa, right: Dfa) -> tuple | None:
    """Shortest word accepted by ``left`` but not by ``right``, or None."""
    if left.alphabet != right.alphabet:
        raise ValueError("alphabets differ")
    start = (left.initial, right.initial)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        if p != left.dead and q == right.dead:
            word = []
            while parent[pair] is not None:
                pair, a = parent[pair]
                word.append(a)
            return tuple(reversed(word))
        if p == left.dead:
            continue
        for i, a in enumerate(left.alphabet):
            nxt = (left.delta[p][i], right.delta[q][i])
            if nxt not in parent:
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return None
