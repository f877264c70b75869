"""Level-k subset alphabets and their signed transition matrices.

At level k the symbols are the k-element sets of chain states sharing one
label.  ``A_k`` sums the signs of the injections compatible with the chain's
transitions, ``B_k`` records whether one exists, and ``J_k`` carries the
flip with the sign of its restriction.  Signs are inversion parities with
respect to the chain's state order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .krieger import InvariantViolation, JointStateChain
from .linalg import identity


@dataclass(frozen=True)
class SubsetAlphabet:
    level: int
    members: tuple  # sorted tuples of state indices

    def __len__(self) -> int:
        return len(self.members)

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.members)}


@dataclass(frozen=True)
class LevelMatrices:
    k: int
    alphabet: SubsetAlphabet
    A: np.ndarray
    B: np.ndarray
    J: np.ndarray

    @property
    def size(self) -> int:
        return len(self.alphabet)


def inversion_sign(values) -> int:
    """``(-1)**(number of inversions)`` of a sequence of distinct values."""
    values = list(values)
    inv = sum(
        1 for i in range(len(values)) for j in range(i + 1, len(values)) if values[j] < values[i]
    )
    return -1 if inv % 2 else 1


def max_level(chain: JointStateChain) -> int:
    sizes: dict = {}
    for s in chain.states:
        sizes[s.symbol] = sizes.get(s.symbol, 0) + 1
    return max(sizes.values(), default=0)


def subset_alphabet(chain: JointStateChain, k: int) -> SubsetAlphabet:
    if k < 1:
        raise ValueError("level must be positive")
    fibers: dict = {}
    for i, s in enumerate(chain.states):
        fibers.setdefault(s.symbol, []).append(i)
    members = sorted(c for fiber in fibers.values() for c in combinations(fiber, k))
    return SubsetAlphabet(k, tuple(members))


def _injections(succ, source, allowed):
    """Yield the image sequences of injections ``source -> allowed`` along ``succ``."""
    k = len(source)
    image: list = []
    used: set = set()

    def extend(i):
        if i == k:
            yield tuple(image)
            return
        for t in succ[source[i]]:
            if t in allowed and t not in used:
                used.add(t)
                image.append(t)
                yield from extend(i + 1)
                image.pop()
                used.discard(t)

    yield from extend(0)


def injection_sign_sum(A: np.ndarray, s1, s2) -> tuple[int, int]:
    """Signed count of transition-compatible bijections ``s1 -> s2``, and whether any exist."""
    s1, s2 = sorted(s1), set(s2)
    succ = {i: [j for j in range(A.shape[0]) if A[i, j]] for i in s1}
    total = 0
    exists = 0
    for image in _injections(succ, s1, s2):
        exists = 1
        total += inversion_sign(image)
    return total, exists


def build_level_matrices(chain: JointStateChain, k: int, check: bool = True) -> LevelMatrices:
    alphabet = subset_alphabet(chain, k)
    where = alphabet.index()
    n = len(alphabet)
    size = len(chain)
    succ = [[j for j in range(size) if chain.A[i, j]] for i in range(size)]
    star = chain.star_map
    labels = chain.labels

    A = np.zeros((n, n), dtype=object)
    B = np.zeros((n, n), dtype=object)
    J = np.zeros((n, n), dtype=object)
    for row, src in enumerate(alphabet.members):
        for image in _injections(succ, src, range(size)):
            target = tuple(sorted(image))
            if len({labels[t] for t in target}) != 1:
                continue
            col = where[target]
            A[row, col] += inversion_sign(image)
            B[row, col] = 1
        flipped = tuple(star[i] for i in src)
        J[row, where[tuple(sorted(flipped))]] = inversion_sign(flipped)

    levels = LevelMatrices(k, alphabet, A, B, J)
    if check:
        check_level(levels)
    return levels


def check_level(lv: LevelMatrices) -> None:
    A, B, J = lv.A, lv.B, lv.J
    n = lv.size
    fact = 1
    for i in range(2, lv.k + 1):
        fact *= i
    if any(abs(int(a)) > fact for a in A.flat):
        raise InvariantViolation(f"level {lv.k}: |A_k| exceeds k!")
    if any(b == 0 and a != 0 for a, b in zip(A.flat, B.flat)):
        raise InvariantViolation(f"level {lv.k}: A_k nonzero where B_k vanishes")
    if n == 0:
        return
    if (J.dot(J) != identity(n)).any():
        raise InvariantViolation(f"level {lv.k}: J_k^2 != I")
    if (J.dot(A) != A.T.dot(J)).any():
        raise InvariantViolation(f"level {lv.k}: J_k A_k != A_k^T J_k")
    # B_k carries no signs: only B_k(S1, S2) = B_k(tau S2, tau S1) holds
    P = np.abs(J)
    if (P.dot(B) != B.T.dot(P)).any():
        raise InvariantViolation(f"level {lv.k}: B_k not symmetric under the flip")


def build_all_levels(chain: JointStateChain, check: bool = True) -> list[LevelMatrices]:
    """Levels ``1..r`` where ``r`` is the largest label-fiber size."""
    return [build_level_matrices(chain, k, check) for k in range(1, max_level(chain) + 1)]


def dump_levels(levels: list[LevelMatrices], chain: JointStateChain | None = None) -> str:
    """Plain-text dump: per level a ``level k / size n`` header and the A, B, J blocks."""
    out = []
    if chain is not None:
        out.append("# state order")
        for i, s in enumerate(chain.states):
            out.append(f"# {i} {s.label()}")
    for lv in levels:
        out.append(f"level {lv.k} / size {lv.size}")
        out.append("# members " + " ".join("{" + ",".join(map(str, m)) + "}" for m in lv.alphabet.members))
        for name, mat in (("A", lv.A), ("B", lv.B), ("J", lv.J)):
            out.append(name)
            for row in mat:
                out.append(" ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"


def parse_level_dump(text: str) -> dict[int, dict[str, np.ndarray]]:
    levels: dict[int, dict[str, np.ndarray]] = {}
    current = None
    name = None
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        if line.startswith("level "):
            k = int(line.split()[1])
            current = levels.setdefault(k, {})
            continue
        if line in ("A", "B", "J"):
            name = line
            current[name] = []
            continue
        current[name].append([int(x) for x in line.split()])
    return {
        k: {nm: np.array(rows, dtype=object).reshape(len(rows), len(rows)) for nm, rows in mats.items()}
        for k, mats in levels.items()
    }
