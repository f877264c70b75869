"""Krieger's joint state chain of a sofic shift with a one-block flip.

Futures of left rays are represented by vertex sets of the presentation:
the future of a left ray is the follower language of the set of vertices at
which a path labeled by the ray can end.  Pasts are the mirror notion,
computed on the edge-reversed presentation, whose languages hold pasts as
reversed words.  Classes are identified by minimal-DFA signatures, never by
vertex sets.

Joint states ``(F, a, P)`` are ordered by future id, then by the position
of ``a`` in the alphabet, then by past id.  This order fixes every sign
downstream.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .automata import Dfa, determinize, minimize
from .presentations import EmptyShift, LabeledGraph, factor_dfa, trim_essential

DEFAULT_MONOID_CAP = 10**6


class MonoidBlowup(RuntimeError):
    pass


class StarMismatch(RuntimeError):
    pass


class NotIrreducible(ValueError):
    pass


class NotABlock(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class FutureClass:
    """One element of the finite set of futures of left rays.

    ``witness`` is ``(c, u)``: the left ray ``...ccc u`` has this future.
    """

    canonical_id: int
    rep_vertex_set: frozenset
    language: Dfa = field(repr=False)
    witness: tuple

    @property
    def key(self) -> tuple:
        return self.language.delta


@dataclass(frozen=True)
class PastClass(FutureClass):
    """A past of right rays; ``language`` accepts pasts as reversed words.

    ``witness`` is ``(c, u)`` read right to left: the right ray
    ``reverse(u) reverse(c) reverse(c) ...`` has this past.
    """


@dataclass(frozen=True)
class JointState:
    future: int
    symbol: object
    past: int

    def label(self) -> str:
        return f"F#{self.future}/{symbol_text(self.symbol)}/P#{self.past}"


def symbol_text(a) -> str:
    """Recoded symbols are pairs; print them as ``x,y``."""
    if isinstance(a, tuple):
        return ",".join(symbol_text(x) for x in a)
    return str(a)


@dataclass
class JointStateChain:
    states: list
    A: np.ndarray
    J: np.ndarray
    alphabet: tuple
    futures: list = field(default_factory=list, repr=False)
    pasts: list = field(default_factory=list, repr=False)
    kind: str = "joint"
    factoring: bool | None = None

    def __len__(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> list:
        return [s.symbol for s in self.states]

    def star(self, i: int) -> int:
        (j,) = [j for j in range(len(self)) if self.J[i, j]]
        return j

    @property
    def star_map(self) -> list[int]:
        return [self.star(i) for i in range(len(self))]

    def restrict(self, keep: Sequence[int], kind: str) -> JointStateChain:
        keep = list(keep)
        ix = np.ix_(keep, keep)
        return JointStateChain(
            [self.states[i] for i in keep],
            self.A[ix].copy(),
            self.J[ix].copy(),
            self.alphabet,
            self.futures,
            self.pasts,
            kind,
        )

    def as_graph(self) -> LabeledGraph:
        """Vertices are state indices; edge ``s -> t`` carries the label of ``s``."""
        n = len(self)
        edges = [
            (i, self.states[i].symbol, j) for i in range(n) for j in range(n) if self.A[i, j]
        ]
        return LabeledGraph(range(n), edges, self.alphabet)


def monoid_cap() -> int:
    value = os.environ.get("FLIPCOUNT_MONOID_CAP")
    return int(value) if value else DEFAULT_MONOID_CAP


def _vertex_language(graph: LabeledGraph, vertices) -> Dfa:
    dfa, _ = determinize(graph.successors, vertices, graph.alphabet)
    return minimize(dfa)


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _follower_classes(graph: LabeledGraph, cap: int | None, cls) -> list:
    cap = monoid_cap() if cap is None else cap
    verts = graph.vertices
    pos = {v: i for i, v in enumerate(verts)}
    n = len(verts)

    gens = []
    for a in graph.alphabet:
        rows = [0] * n
        for s, b, d in graph.edges:
            if b == a:
                rows[pos[s]] |= 1 << pos[d]
        gens.append((a, tuple(rows)))

    def compose(r, s):  # first r, then s
        out = []
        for row in r:
            acc = 0
            for j in _bits(row):
                acc |= s[j]
            out.append(acc)
        return tuple(out)

    # semigroup generated by the symbol relations (non-empty words only)
    words: dict = {}
    order = []
    for a, g in gens:
        if g not in words:
            words[g] = (a,)
            order.append(g)
    for rel in order:  # grows while iterating
        for a, g in gens:
            c = compose(rel, g)
            if c not in words:
                words[c] = words[rel] + (a,)
                order.append(c)
                if len(order) > cap:
                    raise MonoidBlowup(
                        f"relation semigroup exceeds {cap} elements; "
                        "set FLIPCOUNT_MONOID_CAP to raise the cap"
                    )

    def image(mask, rel):
        acc = 0
        for i in _bits(mask):
            acc |= rel[i]
        return acc

    full = (1 << n) - 1
    found: dict = {}
    queue = []
    for rel in order:
        if compose(rel, rel) == rel:
            m = image(full, rel)
            if m and m not in found:
                found[m] = (words[rel], ())
                queue.append(m)
    for m in queue:  # forward closure
        c, u = found[m]
        for a, g in gens:
            m2 = image(m, g)
            if m2 and m2 not in found:
                found[m2] = (c, u + (a,))
                queue.append(m2)

    classes = []
    keys = set()
    for m in queue:
        vs = frozenset(verts[i] for i in _bits(m))
        lang = _vertex_language(graph, vs)
        if lang.delta in keys:
            continue
        keys.add(lang.delta)
        classes.append(cls(len(classes), vs, lang, found[m]))
    return classes


def compute_future_classes(graph: LabeledGraph, cap: int | None = None) -> list[FutureClass]:
    """The futures of all left rays, one class per distinct follower language.

    Every left ray's terminal vertex set has the form ``C u`` with ``C`` the
    image of the full vertex set under an idempotent of the relation
    semigroup; conversely every non-empty ``C u`` is realized.
    """
    return _follower_classes(graph, cap, FutureClass)


def compute_past_classes(graph: LabeledGraph, cap: int | None = None) -> list[PastClass]:
    return _follower_classes(graph.reversed(), cap, PastClass)


class _ClassIndex:
    """Lookup of futures and pasts by language signature."""

    def __init__(self, graph: LabeledGraph, tau: Mapping | None, futures, pasts):
        self.graph = graph
        self.rgraph = graph.reversed()
        self.tau = tau
        self.futures = futures
        self.pasts = pasts
        self.future_by_key = {f.key: f.canonical_id for f in futures}
        self.past_by_key = {p.key: p.canonical_id for p in pasts}

    def future_of(self, vertices) -> int:
        return self.future_by_key[_vertex_language(self.graph, vertices).delta]

    def past_of(self, vertices) -> int:
        return self.past_by_key[_vertex_language(self.rgraph, vertices).delta]

    def future_first_letters(self, f: FutureClass) -> set:
        return {a for a in self.graph.alphabet if self.graph.image(f.rep_vertex_set, (a,))}

    def past_last_letters(self, p: PastClass) -> set:
        return {a for a in self.graph.alphabet if self.rgraph.image(p.rep_vertex_set, (a,))}

    def star_of_past(self, p: PastClass) -> int | None:
        """Future id of P*, the tau-reversal of the past P."""
        flipped = self.rgraph.relabeled(self.tau)
        key = _vertex_language(flipped, p.rep_vertex_set).delta
        return self.future_by_key.get(key)

    def star_of_future(self, f: FutureClass) -> int | None:
        flipped = self.graph.relabeled(self.tau)
        key = _vertex_language(flipped, f.rep_vertex_set).delta
        return self.past_by_key.get(key)


def build_joint_chain(
    graph: LabeledGraph, tau: Mapping, cap: int | None = None, check: bool = True
) -> JointStateChain:
    """Krieger's joint state chain with its flip matrix.

    ``graph`` must be essential and ``tau`` must induce a flip on it.
    """
    futures = compute_future_classes(graph, cap)
    pasts = compute_past_classes(graph, cap)
    idx = _ClassIndex(graph, tau, futures, pasts)

    first = [idx.future_first_letters(f) for f in futures]
    last = [idx.past_last_letters(p) for p in pasts]
    fstep = {
        (f.canonical_id, a): idx.future_of(graph.image(f.rep_vertex_set, (a,)))
        for f in futures
        for a in first[f.canonical_id]
    }
    pstep = {
        (p.canonical_id, a): idx.past_of(idx.rgraph.image(p.rep_vertex_set, (a,)))
        for p in pasts
        for a in last[p.canonical_id]
    }

    states = [
        JointState(f.canonical_id, a, p.canonical_id)
        for f in futures
        for a in graph.alphabet
        if a in first[f.canonical_id]
        for p in pasts
        if a in last[p.canonical_id]
    ]
    n = len(states)
    where = {s: i for i, s in enumerate(states)}
    A = np.zeros((n, n), dtype=object)
    for i, s in enumerate(states):
        nxt_future = fstep[(s.future, s.symbol)]
        for j, t in enumerate(states):
            if t.future == nxt_future and pstep[(t.past, t.symbol)] == s.past:
                A[i, j] = 1

    fstar = [idx.star_of_past(p) for p in pasts]
    pstar = [idx.star_of_future(f) for f in futures]
    J = np.zeros((n, n), dtype=object)
    for i, s in enumerate(states):
        image = JointState(fstar[s.past], tau[s.symbol], pstar[s.future])
        if image not in where:
            raise StarMismatch(f"{s.label()} has no image among joint states")
        J[i, where[image]] = 1

    chain = JointStateChain(states, A, J, graph.alphabet, futures, pasts, "joint")
    if check:
        check_chain(chain)
        chain.factoring = labels_factor_onto(chain, graph)
        if not chain.factoring:
            raise InvariantViolation("joint state chain does not factor onto X")
    return chain


def labels_factor_onto(chain: JointStateChain, graph: LabeledGraph) -> bool:
    """Is the label language of bi-infinite chain paths the block language of X?"""
    try:
        cover = trim_essential(chain.as_graph())
    except EmptyShift:
        return False
    return factor_dfa(cover).delta == factor_dfa(graph).delta


def check_chain(chain: JointStateChain) -> None:
    """Raise InvariantViolation unless the flip structure is consistent."""
    A, J = chain.A, chain.J
    n = len(chain)
    if any(x not in (0, 1) for x in J.flat) or (J != J.T).any():
        raise InvariantViolation("J is not a symmetric zero-one matrix")
    if any(sum(int(x) for x in J[i]) != 1 for i in range(n)):
        raise InvariantViolation("J is not a permutation matrix")
    if n and ((J.dot(J) != np.identity(n, dtype=int)).any()):
        raise InvariantViolation("J^2 != I")
    if n and (J.dot(A) != A.T.dot(J)).any():
        raise InvariantViolation("JA != A^T J")
    if not diamond_free_check(chain):
        raise InvariantViolation("chain has a graph diamond")


def diamond_free_check(chain: JointStateChain) -> bool:
    """No two distinct equally labeled paths share both endpoints."""
    n = len(chain)
    labels = chain.labels
    succ = [[j for j in range(n) if chain.A[i, j]] for i in range(n)]

    def pair_successors(s, t):
        for s2 in succ[s]:
            for t2 in succ[t]:
                if labels[s2] == labels[t2]:
                    yield s2, t2

    start = set()
    for s in range(n):
        for pair in pair_successors(s, s):
            if pair[0] != pair[1]:
                start.add(pair)
    seen = set(start)
    queue = deque(start)
    while queue:
        s, t = queue.popleft()
        for s2, t2 in pair_successors(s, t):
            if s2 == t2:
                return False
            if (s2, t2) not in seen:
                seen.add((s2, t2))
                queue.append((s2, t2))
    return True


def is_intrinsically_synchronizing(dfa: Dfa, word) -> bool:
    """Is ``word`` finitary: ``uw, wv`` blocks imply ``uwv`` is a block?"""
    word = tuple(word)
    if not dfa.accepts(word):
        raise NotABlock(f"{word!r} is not a block")
    ends = {dfa.run(q, word) for q in dfa.live_states} - {dfa.dead}
    return len(ends) == 1


def synchronized_states(dfa: Dfa) -> dict[int, tuple]:
    """States reached by finitary words, each with a shortest such word."""
    start = frozenset(dfa.live_states)
    words = {start: ()}
    queue = deque([start])
    out: dict[int, tuple] = {}
    while queue:
        current = queue.popleft()
        for i, a in enumerate(dfa.alphabet):
            image = frozenset(dfa.delta[q][i] for q in current) - {dfa.dead}
            if not image:
                continue
            word = words[current] + (a,)
            if len(image) == 1:
                (q,) = image
                out.setdefault(q, word)
            if image not in words:
                words[image] = word
                queue.append(image)
    return out


class _FinitaryData:
    def __init__(self, graph: LabeledGraph, chain: JointStateChain):
        self.fdfa = factor_dfa(graph)
        self.rdfa = factor_dfa(graph.reversed())
        fkeys = {f.key: f.canonical_id for f in chain.futures}
        pkeys = {p.key: p.canonical_id for p in chain.pasts}
        self.future_state = {}
        for q in synchronized_states(self.fdfa):
            fid = fkeys.get(self.fdfa.signature(q))
            if fid is None:
                raise InvariantViolation("finitary follower set is not a future")
            self.future_state[fid] = q
        self.past_state = {}
        self.past_of_rstate = {}
        for r in synchronized_states(self.rdfa):
            pid = pkeys.get(self.rdfa.signature(r))
            if pid is None:
                raise InvariantViolation("finitary predecessor set is not a past")
            self.past_state[pid] = r
            self.past_of_rstate[r] = pid


def build_finitary_chain(
    chain: JointStateChain, graph: LabeledGraph, tau: Mapping | None = None
) -> JointStateChain:
    """Restrict the joint chain to futures and pasts of finitary blocks.

    ``factoring`` on the result records whether the labels still cover X
    (guaranteed for irreducible X, merely reported otherwise).
    """
    data = _FinitaryData(graph, chain)
    keep = [
        i
        for i, s in enumerate(chain.states)
        if s.future in data.future_state and s.past in data.past_state
    ]
    sub = chain.restrict(keep, "finitary")
    if len(sub) and any(sum(int(x) for x in row) != 1 for row in sub.J):
        raise InvariantViolation("star map leaves the finitary states")
    if len(sub):
        check_chain(sub)
    sub.factoring = labels_factor_onto(sub, graph) if len(sub) else False
    if graph.is_irreducible() and not sub.factoring:
        raise InvariantViolation("finitary chain of an irreducible shift must factor onto it")
    return sub


def _reachable_pasts(data: _FinitaryData, start: int) -> set[int]:
    """Past ids ``P(w)`` over nonempty finitary ``w`` readable from forward state ``start``."""
    fd, rd = data.fdfa, data.rdfa
    rlive = rd.live_states
    ident = tuple(range(len(rd)))
    seen = {(start, ident)}
    queue = deque([(start, ident)])
    found = set()
    while queue:
        s, t = queue.popleft()
        for i in range(len(fd.alphabet)):
            s2 = fd.delta[s][i]
            if s2 == fd.dead:
                continue
            # t[q] = state reached from q on reverse(w); append symbol on the right
            t2 = tuple(t[rd.delta[q][i]] for q in range(len(rd)))
            ends = {t2[q] for q in rlive} - {rd.dead}
            if len(ends) == 1:
                (r,) = ends
                found.add(data.past_of_rstate[r])
            if (s2, t2) not in seen:
                seen.add((s2, t2))
                queue.append((s2, t2))
    return found


def build_irreducible_component(
    finitary: JointStateChain, graph: LabeledGraph
) -> JointStateChain:
    """States ``(F(w1), a, P(w2))`` of the finitary chain with ``w1 a w2`` a block.

    Membership is existential in the finitary witnesses; since ``w1`` is
    finitary, ``w1 a w2`` is a block iff ``a w2`` lies in the language of
    ``F(w1)``, so only ``w2`` needs searching.
    """
    if not graph.is_irreducible():
        raise NotIrreducible("presentation is not irreducible")
    data = _FinitaryData(graph, finitary)
    cache: dict = {}
    keep = []
    for i, s in enumerate(finitary.states):
        key = (s.future, s.symbol)
        if key not in cache:
            q = data.fdfa.step(data.future_state[s.future], s.symbol)
            cache[key] = _reachable_pasts(data, q) if q != data.fdfa.dead else set()
        if s.past in cache[key]:
            keep.append(i)
    sub = finitary.restrict(keep, "component")
    if any(sum(int(x) for x in row) != 1 for row in sub.J):
        raise InvariantViolation("star map leaves the component")
    check_chain(sub)
    sub.factoring = labels_factor_onto(sub, graph)
    return sub


def to_dot(chain: JointStateChain, name: str = "chain") -> str:
    """Graphviz rendering; J-pairs are dashed undirected edges."""
    lines = [f'digraph "{name}" {{']
    for i, s in enumerate(chain.states):
        text = s.label().replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  s{i} [label="{text}"];')
    n = len(chain)
    for i in range(n):
        for j in range(n):
            if chain.A[i, j]:
                lines.append(f"  s{i} -> s{j};")
    for i in range(n):
        for j in range(i, n):
            if chain.J[i, j]:
                lines.append(f"  s{i} -> s{j} [dir=none, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
