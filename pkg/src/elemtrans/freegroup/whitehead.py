"""Whitehead transformations of a fixed basis and length minimization.

Kind 1 moves are the signed permutations of the basis; kind 2 moves pick a
multiplier letter ``a = x_j^e`` and send every other generator to one of
``x_i a``, ``a^-1 x_i``, ``a^-1 x_i a`` or ``x_i`` while fixing ``x_j``.
Only kind 2 moves can shorten a cyclic word, so steepest descent over the
full enumeration reaches the minimal length in the automorphism orbit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations, product

from elemtrans.freegroup.nielsen import MoveTrace
from elemtrans.freegroup.words import (
    CyclicWord,
    FreeWord,
    cyclic_reduce,
    free_reduce,
)

FIX, RIGHT, LEFT_INV, CONJ = "fix", "right", "left_inv", "conj"
_ASSIGN_CODES = (FIX, RIGHT, LEFT_INV, CONJ)


@dataclass(frozen=True, slots=True)
class WhiteheadMove:
    """Either a signed basis permutation or a multiplier substitution.

    Kind 1: ``perm`` maps position i to generator perm[i], ``signs[i]`` is
    +1 or -1.  Kind 2: ``multiplier`` is a signed generator index and
    ``assign`` lists one code per generator other than its base.
    """

    kind: int
    perm: tuple[int, ...] = ()
    signs: tuple[int, ...] = ()
    multiplier: int = 0
    assign: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if self.kind == 1:
            if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
                raise ValueError("kind 1 move requires a permutation of 1..n")
            if len(self.signs) != len(self.perm) or any(
                s not in (1, -1) for s in self.signs
            ):
                raise ValueError("signs must be +-1, one per generator")
        elif self.kind == 2:
            if self.multiplier == 0:
                raise ValueError("kind 2 move requires a nonzero multiplier")
            covered = sorted(i for i, _ in self.assign)
            j = abs(self.multiplier)
            n = len(self.assign) + 1
            if covered != [i for i in range(1, n + 1) if i != j]:
                raise ValueError("assignment must cover exactly the other generators")
            if any(code not in _ASSIGN_CODES for _, code in self.assign):
                raise ValueError("unknown assignment code")
        else:
            raise ValueError("kind must be 1 or 2")

    def images(self, rank: int) -> dict[int, tuple[int, ...]]:
        """Letter images of the positive generators."""
        out: dict[int, tuple[int, ...]] = {}
        if self.kind == 1:
            for i in range(1, rank + 1):
                out[i] = (self.signs[i - 1] * self.perm[i - 1],)
            return out
        a = self.multiplier
        out[abs(a)] = (abs(a),)
        table = dict(self.assign)
        for i in range(1, rank + 1):
            if i == abs(a):
                continue
            code = table[i]
            if code == FIX:
                out[i] = (i,)
            elif code == RIGHT:
                out[i] = (i, a)
            elif code == LEFT_INV:
                out[i] = (-a, i)
            else:
                out[i] = (-a, i, a)
        return out

    def inverse(self) -> "WhiteheadMove":
        if self.kind == 1:
            inv_perm = [0] * len(self.perm)
            inv_signs = [1] * len(self.perm)
            for i, target in enumerate(self.perm):
                inv_perm[target - 1] = i + 1
                inv_signs[target - 1] = self.signs[i]
            return WhiteheadMove(1, perm=tuple(inv_perm), signs=tuple(inv_signs))
        return WhiteheadMove(2, multiplier=-self.multiplier, assign=self.assign)

    def to_json_dict(self) -> dict:
        if self.kind == 1:
            return {"kind": 1, "perm": list(self.perm), "signs": list(self.signs)}
        return {
            "kind": 2,
            "multiplier": self.multiplier,
            "assign": {str(i): code for i, code in self.assign},
        }


def enumerate_whitehead_moves(n: int) -> list[WhiteheadMove]:
    """All n!*2^n kind 1 moves followed by all 2n*4^(n-1) kind 2 moves."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    moves: list[WhiteheadMove] = []
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            moves.append(WhiteheadMove(1, perm=perm, signs=signs))
    for j in range(1, n + 1):
        for eps in (1, -1):
            others = [i for i in range(1, n + 1) if i != j]
            for codes in product(_ASSIGN_CODES, repeat=n - 1):
                assign = tuple(zip(others, codes))
                moves.append(WhiteheadMove(2, multiplier=eps * j, assign=assign))
    return moves


def apply_whitehead(w: FreeWord, move: WhiteheadMove) -> FreeWord:
    images = move.images(w.rank)
    letters: list[int] = []
    for a in w.letters:
        img = images[abs(a)]
        letters.extend(img if a > 0 else tuple(-x for x in reversed(img)))
    return free_reduce(letters, w.rank)


def apply_whitehead_cyclic(w: CyclicWord, move: WhiteheadMove) -> CyclicWord:
    return cyclic_reduce(apply_whitehead(w.to_free_word(), move))


def whitehead_minimize(
    w: CyclicWord, moves: list[WhiteheadMove] | None = None
) -> tuple[CyclicWord, MoveTrace]:
    """Steepest descent on cyclic length; every trace step strictly shortens.

    Among equally improving moves the first in enumeration order is taken,
    so traces are reproducible.
    """
    if moves is None:
        moves = enumerate_whitehead_moves(w.rank)
    cur = w
    steps: list[tuple[WhiteheadMove, int]] = []
    while True:
        best = None
        for mv in moves:
            if mv.kind == 1:
                continue  # signed permutations never change the length
            nxt = apply_whitehead_cyclic(cur, mv)
            if len(nxt) < len(cur) and (best is None or len(nxt) < len(best[1])):
                best = (mv, nxt)
        if best is None:
            return cur, MoveTrace(tuple(steps))
        cur = best[1]
        steps.append((best[0], len(cur)))


def replay_whitehead_trace(w: CyclicWord, trace: MoveTrace) -> CyclicWord:
    cur = w
    for mv, expected in trace.steps:
        cur = apply_whitehead_cyclic(cur, mv)
        if len(cur) != expected:
            raise ValueError("trace complexity record does not match replay")
    return cur


@dataclass(frozen=True)
class PrimitivityVerdict:
    primitive: bool
    minimized: CyclicWord
    trace: MoveTrace

    def to_json_dict(self) -> dict:
        return {
            "verdict": "primitive" if self.primitive else "not_primitive",
            "minimized": str(self.minimized),
            "trace": self.trace.to_json_dict(),
        }


def is_primitive(w: FreeWord) -> PrimitivityVerdict:
    """A word is primitive exactly when its orbit minimum has length 1."""
    if not w.letters:
        raise ValueError("the empty word is not eligible for primitivity")
    minimized, trace = whitehead_minimize(cyclic_reduce(w))
    return PrimitivityVerdict(len(minimized) == 1, minimized, trace)


@dataclass(frozen=True)
class ConjugacyVerdict:
    verdict: str  # "equivalent" | "not_equivalent" | "budget_exceeded"
    trace: MoveTrace | None
    minimized_u: CyclicWord
    minimized_v: CyclicWord
    states_explored: int

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "minimized_u": str(self.minimized_u),
            "minimized_v": str(self.minimized_v),
            "states_explored": self.states_explored,
            "trace": self.trace.to_json_dict() if self.trace is not None else None,
        }


def automorphic_conjugacy(u: FreeWord, v: FreeWord, budget: int = 20000) -> ConjugacyVerdict:
    """Does some automorphism carry ``u`` to a conjugate of ``v``?

    Both words are minimized first; unequal minimal lengths settle the
    question.  Equal lengths trigger a breadth-first search over
    length-preserving moves between the two minima, so exhausting the budget
    is reported distinctly and never as a negative answer.
    """
    if u.rank != v.rank:
        raise ValueError("rank mismatch")
    moves = enumerate_whitehead_moves(u.rank)
    mu, trace_u = whitehead_minimize(cyclic_reduce(u), moves)
    mv_, trace_v = whitehead_minimize(cyclic_reduce(v), moves)
    if len(mu) != len(mv_):
        return ConjugacyVerdict("not_equivalent", None, mu, mv_, 0)
    length = len(mu)

    def full_trace(path: list[WhiteheadMove]) -> MoveTrace:
        steps = list(trace_u.steps)
        steps.extend((mv, length) for mv in path)
        for mv, _ in reversed(trace_v.steps):
            steps.append((mv.inverse(), length))
        # replay to recompute honest complexities for the inverse segment
        cur = cyclic_reduce(u)
        checked = []
        for mv, _ in steps:
            cur = apply_whitehead_cyclic(cur, mv)
            checked.append((mv, len(cur)))
        return MoveTrace(tuple(checked))

    if mu == mv_:
        return ConjugacyVerdict("equivalent", full_trace([]), mu, mv_, 1)
    seen = {mu.letters: None}
    queue = deque([mu])
    explored = 1
    while queue:
        cur = queue.popleft()
        for mv in moves:
            nxt = apply_whitehead_cyclic(cur, mv)
            if len(nxt) != length or nxt.letters in seen:
                continue
            seen[nxt.letters] = (cur.letters, mv)
            if nxt == mv_:
                path = []
                key = nxt.letters
                while seen[key] is not None:
                    prev, step = seen[key]
                    path.append(step)
                    key = prev
                path.reverse()
                return ConjugacyVerdict(
                    "equivalent", full_trace(path), mu, mv_, explored
                )
            explored += 1
            if explored > budget:
                return ConjugacyVerdict("budget_exceeded", None, mu, mv_, explored)
            queue.append(nxt)
    return ConjugacyVerdict("not_equivalent", None, mu, mv_, explored)
