"""Labeled-graph presentations of sofic shifts and flips on them.

A sofic shift X is given by a finite labeled graph; X is the set of label
sequences of bi-infinite paths.  Nothing here requires the presentation to
be right-resolving or irreducible.  Words are tuples of symbols; a plain
string is accepted wherever every symbol is a single character.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .automata import Dfa, dfa_edges, language_dfa, shortest_difference


class EmptyShift(ValueError):
    """The presentation has no bi-infinite path."""


class BadSymbol(ValueError):
    pass


class FlipError(ValueError):
    """A proposed flip fails one of the flip axioms.

    ``witness`` is a block (or symbol) exhibiting the failure.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotInvolution(FlipError):
    pass


class NotReversing(FlipError):
    pass


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple
    edges: tuple
    alphabet: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        symbols = set(self.alphabet)
        seen = set()
        for e in self.edges:
            if len(e) != 3:
                raise ValueError(f"edge {e!r} is not (source, label, target)")
            src, label, dst = e
            if src not in vs or dst not in vs:
                raise ValueError(f"edge {e!r} has an unknown endpoint")
            if label not in symbols:
                raise BadSymbol(f"edge {e!r} has label outside the alphabet")
            if e in seen:
                raise ValueError(f"duplicate edge {e!r}")
            seen.add(e)

    @cached_property
    def successors(self) -> dict:
        out: dict = {}
        for src, label, dst in self.edges:
            out.setdefault((src, label), []).append(dst)
        return out

    def image(self, vertices: Iterable, word: Iterable) -> frozenset:
        """Endpoints of paths labeled ``word`` that start in ``vertices``."""
        current = frozenset(vertices)
        succ = self.successors
        for a in word:
            current = frozenset(w for v in current for w in succ.get((v, a), ()))
            if not current:
                break
        return current

    def reversed(self) -> LabeledGraph:
        return LabeledGraph(
            self.vertices, [(d, a, s) for s, a, d in self.edges], self.alphabet
        )

    def relabeled(self, mapping: Mapping) -> LabeledGraph:
        return LabeledGraph(
            self.vertices, [(s, mapping[a], d) for s, a, d in self.edges], self.alphabet
        )

    def check_word(self, word: Iterable) -> tuple:
        word = tuple(word)
        symbols = set(self.alphabet)
        for a in word:
            if a not in symbols:
                raise BadSymbol(f"symbol {a!r} not in alphabet {self.alphabet}")
        return word

    def is_irreducible(self) -> bool:
        """Strong connectivity of the trimmed graph."""
        g = trim_essential(self)
        fwd: dict = {}
        bwd: dict = {}
        for s, _, d in g.edges:
            fwd.setdefault(s, set()).add(d)
            bwd.setdefault(d, set()).add(s)
        start = g.vertices[0]
        for adj in (fwd, bwd):
            seen = {start}
            stack = [start]
            while stack:
                for w in adj.get(stack.pop(), ()):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(g.vertices):
                return False
        return True


@dataclass(frozen=True)
class SftMatrix:
    """Zero-one transition matrix of a vertex shift."""

    states: tuple
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "entries", tuple(tuple(r) for r in self.entries))
        n = len(self.states)
        if len(set(self.states)) != n:
            raise ValueError("duplicate state ids")
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError("matrix must be square and match the state list")
        if any(x not in (0, 1) for r in self.entries for x in r):
            raise ValueError("matrix entries must be 0 or 1")

    def to_graph(self) -> LabeledGraph:
        """The vertex shift as a labeled graph; each edge carries its source."""
        edges = [
            (s, s, t)
            for i, s in enumerate(self.states)
            for j, t in enumerate(self.states)
            if self.entries[i][j]
        ]
        return trim_essential(LabeledGraph(self.states, edges, self.states))


@dataclass(frozen=True)
class FlipSpec:
    """A flip given either by a symbol involution or by a local rule.

    For a sliding-block flip with radius N, the induced map is
    ``phi(x)_j = table[x_{-j-N} ... x_{-j+N}]``; with N = 0 this is the
    one-block flip ``phi(x)_j = tau(x_{-j})``.
    """

    kind: str
    tau: Mapping | None = None
    radius: int = 0
    table: Mapping | None = field(default=None)

    @classmethod
    def one_block(cls, tau: Mapping) -> FlipSpec:
        return cls("one-block", tau=dict(tau))

    @classmethod
    def sliding(cls, radius: int, table: Mapping) -> FlipSpec:
        if radius < 0:
            raise ValueError("radius must be non-negative")
        return cls(
            "sliding-block",
            radius=radius,
            table={tuple(k): v for k, v in table.items()},
        )

    def __post_init__(self):
        if self.kind not in ("one-block", "sliding-block"):
            raise ValueError(f"unknown flip kind {self.kind!r}")

    def __hash__(self):
        return hash((self.kind, self.radius))

    def local(self, block: Sequence):
        """Image symbol at the centre of a (2N+1)-block."""
        if self.kind == "one-block":
            (a,) = block
            return self.tau[a]
        return self.table[tuple(block)]

    @property
    def window(self) -> int:
        return 2 * self.radius + 1 if self.kind == "sliding-block" else 1


@dataclass(frozen=True)
class FlipSystem:
    name: str
    graph: LabeledGraph
    flip: FlipSpec
    sft: SftMatrix | None = None


def trim_essential(graph: LabeledGraph) -> LabeledGraph:
    """Drop vertices that lie on no bi-infinite path."""
    alive = set(graph.vertices)
    edges = list(graph.edges)
    while True:
        has_out = {s for s, _, d in edges}
        has_in = {d for s, _, d in edges}
        keep = alive & has_out & has_in
        if keep == alive:
            break
        alive = keep
        edges = [e for e in edges if e[0] in alive and e[2] in alive]
    if not alive:
        raise EmptyShift("the presented shift space is empty")
    return LabeledGraph(
        [v for v in graph.vertices if v in alive], edges, graph.alphabet
    )


def factor_dfa(graph: LabeledGraph) -> Dfa:
    """Minimal DFA of the block language of an essential presentation."""
    return language_dfa(graph.edges, graph.vertices, graph.alphabet)


def blocks(dfa: Dfa, length: int) -> Iterator[tuple]:
    """All accepted words of the given length, in lexicographic alphabet order."""

    def walk(q, prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for i, a in enumerate(dfa.alphabet):
            r = dfa.delta[q][i]
            if r != dfa.dead:
                prefix.append(a)
                yield from walk(r, prefix)
                prefix.pop()

    if dfa.initial != dfa.dead:
        yield from walk(dfa.initial, [])


def _flipped_dfa(dfa: Dfa, tau: Mapping) -> Dfa:
    # Block languages are factorial: reversing the live transition graph and
    # starting everywhere yields exactly the reversed language.
    edges = [(d, tau[a], s) for s, a, d in dfa_edges(dfa)]
    return language_dfa(edges, dfa.live_states, dfa.alphabet)


def reversal_flip_check(dfa: Dfa, tau: Mapping) -> bool:
    """Is the block language closed under ``w -> tau(reverse(w))``?"""
    return _flipped_dfa(dfa, tau).delta == dfa.delta


def periodic_word_test(graph: LabeledGraph, word: Iterable) -> bool:
    """Does the bi-infinite repetition of ``word`` lie in the shift?"""
    word = graph.check_word(word)
    if not word:
        raise ValueError("word must be nonempty")
    current = frozenset(graph.vertices)
    for _ in range(len(graph.vertices) + 1):
        nxt = graph.image(current, word)
        if nxt == current:
            break
        current = nxt
    return bool(current)


def higher_block_graph(graph: LabeledGraph, window: int, relabel) -> LabeledGraph:
    """Window-``window`` presentation whose edge labels are ``relabel(block)``.

    Vertices are edge paths of length ``window - 1``; edges are paths of
    length ``window``.  Bi-infinite paths correspond to those of ``graph``.
    """
    if window == 1:
        edges = [(s, relabel((a,)), d) for s, a, d in graph.edges]
        return LabeledGraph(graph.vertices, edges, _labels_in_order(edges))
    out_edges: dict = {}
    for i, (s, _, _) in enumerate(graph.edges):
        out_edges.setdefault(s, []).append(i)

    def paths(n):
        frontier = [(i,) for i in range(len(graph.edges))]
        for _ in range(n - 1):
            frontier = [
                p + (j,) for p in frontier for j in out_edges.get(graph.edges[p[-1]][2], ())
            ]
        return frontier

    vertices = paths(window - 1)
    edges = []
    for p in paths(window):
        word = tuple(graph.edges[i][1] for i in p)
        edges.append((p[:-1], relabel(word), p[1:]))
    return LabeledGraph(vertices, edges, _labels_in_order(edges))


def _labels_in_order(edges) -> list:
    return list(dict.fromkeys(e[1] for e in edges))


def _check_table(dfa: Dfa, flip: FlipSpec) -> None:
    for w in blocks(dfa, flip.window):
        if w not in flip.table:
            raise FlipError(f"local rule undefined on block {w!r}", witness=w)
        if flip.table[w] not in dfa.alphabet:
            raise BadSymbol(f"local rule maps {w!r} outside the alphabet")


def require_flip(graph: LabeledGraph, flip: FlipSpec) -> None:
    """Raise NotInvolution/NotReversing (with a witness) unless ``flip`` is a flip.

    The induced map reverses the shift by construction (it is defined from
    the local rule at mirrored coordinates), so what can fail is that it
    maps X into X and that it squares to the identity.
    """
    dfa = factor_dfa(graph)
    if flip.kind == "one-block":
        tau = flip.tau
        for a in graph.alphabet:
            if a not in tau or tau[a] not in tau:
                raise FlipError(f"tau undefined on {a!r}", witness=(a,))
            if tau[tau[a]] != a:
                raise NotInvolution(f"tau(tau({a!r})) != {a!r}", witness=(a,))
        witness = shortest_difference(_flipped_dfa(dfa, tau), dfa)
        if witness is not None:
            raise NotReversing(
                f"tau-reversed block {witness!r} is not a block", witness=witness
            )
        return

    n = flip.radius
    _check_table(dfa, flip)
    image = higher_block_graph(trim_essential(graph), flip.window, flip.local)
    image_dfa = language_dfa(
        [(d, a, s) for s, a, d in image.edges], image.vertices, dfa.alphabet
    )
    witness = shortest_difference(image_dfa, dfa)
    if witness is not None:
        raise NotReversing(f"image block {witness!r} is not a block", witness=witness)
    # phi(phi(x))_0 is determined by x_{[-2N, 2N]}
    for w in blocks(dfa, 4 * n + 1):
        centre = 2 * n
        inner = tuple(
            flip.local(w[centre - j - n: centre - j + n + 1]) for j in range(-n, n + 1)
        )
        if flip.local(inner) != w[centre]:
            raise NotInvolution(f"phi o phi moves the centre of {w!r}", witness=w)


def flip_axiom_check(graph: LabeledGraph, flip: FlipSpec) -> bool:
    try:
        require_flip(graph, flip)
    except FlipError:
        return False
    return True


def one_block_recode(
    graph: LabeledGraph, flip: FlipSpec
) -> tuple[LabeledGraph, FlipSpec, dict]:
    """Conjugate a flip system to one whose flip is one-block.

    The new symbols are pairs ``(x_i, phi(x)_{-i})``; the flip swaps the
    coordinates and projecting to the first coordinate is the conjugacy.
    Returns the new graph, its flip, and the projection on symbols.
    """
    require_flip(graph, flip)
    n = flip.radius if flip.kind == "sliding-block" else 0
    recoded = higher_block_graph(
        trim_essential(graph), 2 * n + 1, lambda w: (w[n], flip.local(w))
    )
    rank = {a: i for i, a in enumerate(graph.alphabet)}
    recoded = trim_essential(recoded)
    recoded = LabeledGraph(
        recoded.vertices,
        recoded.edges,
        sorted(recoded.alphabet, key=lambda s: (rank[s[0]], rank[s[1]])),
    )
    tau = {(a, b): (b, a) for a, b in recoded.alphabet}
    projection = {s: s[0] for s in recoded.alphabet}
    return recoded, FlipSpec.one_block(tau), projection


def as_one_block(system: FlipSystem) -> tuple[LabeledGraph, dict]:
    """Essential graph and symbol involution for the Krieger pipeline."""
    graph = trim_essential(system.graph)
    if system.flip.kind == "one-block":
        require_flip(graph, system.flip)
        return graph, dict(system.flip.tau)
    recoded, flip, _ = one_block_recode(graph, system.flip)
    return recoded, flip.tau


def words(alphabet: Sequence, length: int) -> Iterator[tuple]:
    return itertools.product(alphabet, repeat=length)
