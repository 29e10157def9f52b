"""Nielsen transformations on generator tuples and subgroup decisions.

``nielsen_reduce`` performs steepest descent on total word length over the
moves N1-N3 together with their two-step composites (such as
``y_i -> y_i y_j^-1``), escaping plateaus through a bounded breadth-first
search over length-preserving moves.  Subgroup membership is decided on the
folded core graph of the subgroup, which avoids any case analysis on
reduced generating sets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
import random

from elemtrans.freegroup.words import (
    FreeWord,
    GeneratorTuple,
    basis_tuple,
    identity_word,
)

_PLATEAU_BUDGET = 512


@dataclass(frozen=True, slots=True)
class NielsenMove:
    """One raw transformation: N1 multiplies, N2 inverts, N3 swaps.

    For N1 the ``side`` tells where ``y_j`` lands: ``right`` gives
    ``y_i -> y_i y_j`` and ``left`` gives ``y_i -> y_j y_i``.
    """

    kind: str  # "N1" | "N2" | "N3"
    i: int
    j: int = 0
    side: str = ""

    def __post_init__(self):
        if self.kind not in ("N1", "N2", "N3"):
            raise ValueError(f"unknown Nielsen move kind {self.kind!r}")
        if self.kind == "N1" and self.side not in ("left", "right"):
            raise ValueError("N1 requires side 'left' or 'right'")
        if self.kind in ("N1", "N3") and self.i == self.j:
            raise ValueError(f"{self.kind} requires distinct indices")

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind, "i": self.i}
        if self.kind != "N2":
            d["j"] = self.j
        if self.kind == "N1":
            d["side"] = self.side
        return d


def apply_nielsen(Y: GeneratorTuple, move: NielsenMove) -> GeneratorTuple:
    """Apply one raw move; every other slot is left untouched."""
    m = len(Y)
    if not (0 <= move.i < m) or (move.kind != "N2" and not (0 <= move.j < m)):
        raise ValueError("move indices outside the tuple")
    words = list(Y.words)
    if move.kind == "N1":
        yi, yj = words[move.i], words[move.j]
        words[move.i] = yi * yj if move.side == "right" else yj * yi
    elif move.kind == "N2":
        words[move.i] = words[move.i].inverse()
    else:
        words[move.i], words[move.j] = words[move.j], words[move.i]
    return GeneratorTuple(tuple(words), Y.rank)


@dataclass(frozen=True)
class MoveTrace:
    """Replayable list of elementary moves with the complexity after each."""

    steps: tuple[tuple[object, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def moves(self) -> list:
        return [mv for mv, _ in self.steps]

    def complexities(self) -> list[int]:
        return [c for _, c in self.steps]

    def to_json_dict(self) -> list[dict]:
        return [
            {"move": mv.to_json_dict(), "complexity_after": c} for mv, c in self.steps
        ]


def replay_nielsen_trace(Y: GeneratorTuple, trace: MoveTrace) -> GeneratorTuple:
    """Apply the recorded moves, then drop trivial words, as the reducer does."""
    cur = Y
    for mv, expected in trace.steps:
        cur = apply_nielsen(cur, mv)
        if cur.total_length() != expected:
            raise ValueError("trace complexity record does not match replay")
    kept = tuple(w for w in cur.words if w)
    return GeneratorTuple(kept, Y.rank) if kept else cur


# each composite candidate: (variant, new word, atoms realizing it)
def _candidates(words, i, j):
    yi, yj = words[i], words[j]
    yield 0, yi * yj, (NielsenMove("N1", i, j, "right"),)
    yield 1, yi * yj.inverse(), (
        NielsenMove("N2", j),
        NielsenMove("N1", i, j, "right"),
        NielsenMove("N2", j),
    )
    yield 2, yj * yi, (NielsenMove("N1", i, j, "left"),)
    yield 3, yj.inverse() * yi, (
        NielsenMove("N2", j),
        NielsenMove("N1", i, j, "left"),
        NielsenMove("N2", j),
    )


def _best_descent(words):
    """Steepest strict drop; ties broken by the smallest (i, j, variant)."""
    m = len(words)
    best = None
    for i in range(m):
        li = len(words[i])
        for j in range(m):
            if i == j:
                continue
            for variant, new, atoms in _candidates(words, i, j):
                gain = li - len(new)
                if gain <= 0:
                    continue
                key = (-gain, i, j, variant)
                if best is None or key < best[0]:
                    best = (key, i, new, atoms)
    return best


def _plateau_escape(words, rank, budget):
    """Breadth-first search through length-preserving moves for a strict drop.

    Returns a list of (atoms, new_words) stages ending in a strictly shorter
    tuple, or None.  States are full ordered tuples; N3 swaps are omitted
    because the multiplication candidates already range over all index pairs.
    """
    start = tuple(w.letters for w in words)
    seen = {start}
    queue = deque([(tuple(words), [])])
    while queue and len(seen) <= budget:
        cur_words, path = queue.popleft()
        drop = _best_descent(list(cur_words))
        if drop is not None:
            _, i, new, atoms = drop
            stage = list(cur_words)
            stage[i] = new
            return path + [(atoms, tuple(stage))]
        m = len(cur_words)
        for i in range(m):
            inv = list(cur_words)
            inv[i] = cur_words[i].inverse()
            key = tuple(w.letters for w in inv)
            if key not in seen:
                seen.add(key)
                queue.append((tuple(inv), path + [((NielsenMove("N2", i),), tuple(inv))]))
        for i in range(m):
            li = len(cur_words[i])
            for j in range(m):
                if i == j:
                    continue
                for variant, new, atoms in _candidates(list(cur_words), i, j):
                    if len(new) != li:
                        continue
                    nxt = list(cur_words)
                    nxt[i] = new
                    key = tuple(w.letters for w in nxt)
                    if key not in seen:
                        seen.add(key)
                        queue.append((tuple(nxt), path + [(atoms, tuple(nxt))]))
    return None


def nielsen_reduce(
    Y: GeneratorTuple, plateau_budget: int = _PLATEAU_BUDGET
) -> tuple[GeneratorTuple, MoveTrace]:
    """Reduce until no move in the N1-N3 closure strictly shortens the tuple.

    Total length never increases along the trace; trivial words are deleted
    from the returned tuple.  The output generates the same subgroup.
    """
    words = list(Y.words)
    steps: list[tuple[NielsenMove, int]] = []

    def record(atoms):
        cur = GeneratorTuple(tuple(words), Y.rank)
        for mv in atoms:
            cur = apply_nielsen(cur, mv)
            steps.append((mv, cur.total_length()))
        words[:] = list(cur.words)

    while True:
        drop = _best_descent(words)
        if drop is not None:
            record(drop[3])
            continue
        escape = _plateau_escape(words, Y.rank, plateau_budget)
        if escape is None:
            break
        for atoms, _ in escape:
            record(atoms)
    kept = tuple(w for w in words if w)
    reduced = GeneratorTuple(kept if kept else tuple(words), Y.rank)
    return reduced, MoveTrace(tuple(steps))


# ---------------------------------------------------------------------------
# folded core graph (Stallings) and membership

class _CoreGraph:
    def __init__(self, Y: GeneratorTuple):
        self.rank = Y.rank
        edges = []
        next_vertex = 1
        for w in Y.words:
            if not w.letters:
                continue
            prev = 0
            for a in w.letters[:-1]:
                edges.append((prev, a, next_vertex))
                prev = next_vertex
                next_vertex += 1
            edges.append((prev, w.letters[-1], 0))
        self._fold(next_vertex, edges)

    def _fold(self, n, edges):
        parent = list(range(n))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        adj: list[dict[int, int]] = [dict() for _ in range(n)]
        pending = []
        for u, a, v in edges:
            pending.append((u, a, v))
            pending.append((v, -a, u))
        while pending:
            u, a, v = pending.pop()
            u, v = find(u), find(v)
            if u == v and a in adj[u] and find(adj[u][a]) == v:
                continue
            if a in adj[u]:
                w = find(adj[u][a])
                if w == v:
                    continue
                if len(adj[v]) < len(adj[w]):
                    v, w = w, v
                parent[w] = v
                moved = adj[w]
                adj[w] = {}
                for b, t in moved.items():
                    pending.append((v, b, t))
            else:
                adj[u][a] = v
        base = find(0)
        relabel = {base: 0}
        for v in range(n):
            r = find(v)
            if r not in relabel:
                relabel[r] = len(relabel)
        self.adj: list[dict[int, int]] = [dict() for _ in range(len(relabel))]
        for v in range(n):
            if find(v) != v:
                continue
            for a, t in adj[v].items():
                self.adj[relabel[v]][a] = relabel[find(t)]

    def trace(self, letters) -> int | None:
        v = 0
        for a in letters:
            nxt = self.adj[v].get(a)
            if nxt is None:
                return None
            v = nxt
        return v

    def contains(self, w: FreeWord) -> bool:
        return self.trace(w.letters) == 0

    def spanning_tree(self):
        """BFS tree from the base; non-tree edges index the graph basis."""
        parent: dict[int, tuple[int, int]] = {0: (-1, 0)}
        order = [0]
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for a in sorted(self.adj[v], key=lambda x: (abs(x), x < 0)):
                t = self.adj[v][a]
                if t not in parent:
                    parent[t] = (v, a)
                    order.append(t)
        tree_edges = set()
        for v, (u, a) in parent.items():
            if u >= 0:
                tree_edges.add((u, a, v))
                tree_edges.add((v, -a, u))
        non_tree = []
        for v in range(len(self.adj)):
            for a, t in self.adj[v].items():
                if a > 0 and (v, a, t) not in tree_edges:
                    non_tree.append((v, a, t))
        non_tree.sort()
        return parent, non_tree

    def crossings(self, letters, edge_index) -> tuple[int, ...]:
        """Image of a subgroup element in the free group on the graph basis."""
        out = []
        v = 0
        for a in letters:
            t = self.adj[v][a]
            if a > 0 and (v, a, t) in edge_index:
                out.append(edge_index[(v, a, t)])
            elif a < 0 and (t, -a, v) in edge_index:
                out.append(-edge_index[(t, -a, v)])
            v = t
        reduced = []
        for g in out:
            if reduced and reduced[-1] == -g:
                reduced.pop()
            else:
                reduced.append(g)
        return tuple(reduced)


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    expression: tuple[int, ...] | None  # word over Y-symbols (1-based, signed)

    def to_json_dict(self) -> dict:
        return {
            "verdict": "member" if self.member else "non_member",
            "expression": list(self.expression) if self.expression is not None else None,
        }


def _express_graph_basis(graph, Y):
    """Write each graph-basis element as a word in the original generators.

    The images of the ``y_k`` generate the free group on the graph basis, so
    Nielsen reduction with expression tracking recovers preimages.
    """
    _, non_tree = graph.spanning_tree()
    edge_index = {e: i + 1 for i, e in enumerate(non_tree)}
    r = len(non_tree)
    if r == 0:
        return edge_index, {}
    m = len(Y.words)
    omegas = GeneratorTuple(
        tuple(
            FreeWord(graph.crossings(w.letters, edge_index), r) for w in Y.words
        ),
        r,
    )
    reduced_raw, trace = _reduce_with_expressions(omegas)
    reduced_words, exprs = reduced_raw
    table: dict[int, tuple[int, ...]] = {}
    for slot, w in enumerate(reduced_words):
        if len(w) == 1:
            g = w.letters[0]
            if abs(g) not in table:
                e = exprs[slot]
                table[abs(g)] = e.letters if g > 0 else e.inverse().letters
    if len(table) != r:
        raise RuntimeError("expression recovery failed: reduction did not reach a basis")
    return edge_index, {t: FreeWord(table[t], m) for t in table}


def _reduce_with_expressions(omegas: GeneratorTuple):
    m = len(omegas.words)
    _, trace = nielsen_reduce(omegas, plateau_budget=4096)
    words = list(omegas.words)
    exprs = [FreeWord((k + 1,), m) for k in range(m)]
    for mv, _ in trace.steps:
        tup = apply_nielsen(GeneratorTuple(tuple(words), omegas.rank), mv)
        words = list(tup.words)
        etup = apply_nielsen(GeneratorTuple(tuple(exprs), m), mv)
        exprs = list(etup.words)
    return (words, exprs), trace


def subgroup_membership(Y: GeneratorTuple, w: FreeWord) -> MembershipVerdict:
    """Decide membership in <Y>; members come with a verified expression."""
    if Y.rank != w.rank:
        raise ValueError("rank mismatch between tuple and word")
    graph = _CoreGraph(Y)
    if not graph.contains(w):
        return MembershipVerdict(False, None)
    if not w.letters:
        return MembershipVerdict(True, ())
    edge_index, basis_exprs = _express_graph_basis(graph, Y)
    image = graph.crossings(w.letters, edge_index)
    m = len(Y.words)
    product = identity_word(m)
    for g in image:
        e = basis_exprs[abs(g)]
        product = product * (e if g > 0 else e.inverse())
    check = identity_word(Y.rank)
    for s in product.letters:
        yk = Y.words[abs(s) - 1]
        check = check * (yk if s > 0 else yk.inverse())
    if check.letters != w.letters:
        raise RuntimeError("expression certificate failed to reproduce the word")
    return MembershipVerdict(True, product.letters)


def same_subgroup(Y: GeneratorTuple, Z: GeneratorTuple) -> bool:
    """Mutual membership of each tuple's words in the other's subgroup."""
    if Y.rank != Z.rank:
        raise ValueError("rank mismatch")
    gy = _CoreGraph(Y)
    gz = _CoreGraph(Z)
    return all(gy.contains(w) for w in Z.words) and all(
        gz.contains(w) for w in Y.words
    )


@dataclass(frozen=True)
class AutomorphismVerdict:
    is_automorphism: bool
    reduced: GeneratorTuple
    trace: MoveTrace

    def to_json_dict(self) -> dict:
        return {
            "verdict": "automorphism" if self.is_automorphism else "not_automorphism",
            "reduced": [str(w) for w in self.reduced.words],
            "trace": self.trace.to_json_dict(),
        }


def is_free_automorphism(images: GeneratorTuple) -> AutomorphismVerdict:
    """Endomorphism given by generator images: automorphism or not.

    The images are Nielsen reduced; the endomorphism is an automorphism
    exactly when the reduction lands on a permutation of the generators or
    their inverses, with nothing deleted.
    """
    n = images.rank
    if len(images.words) != n:
        raise ValueError(
            f"expected {n} images for rank {n}, got {len(images.words)}"
        )
    reduced, trace = nielsen_reduce(images)
    ok = (
        len(reduced.words) == n
        and all(len(w) == 1 for w in reduced.words)
        and sorted(abs(w.letters[0]) for w in reduced.words) == list(range(1, n + 1))
    )
    return AutomorphismVerdict(ok, reduced, trace)


def random_nielsen_tuple(seed: int, rank: int, moves: int) -> GeneratorTuple:
    """Basis image under a random product of raw Nielsen moves (test harness)."""
    rng = random.Random(seed)
    Y = basis_tuple(rank)
    for _ in range(moves):
        kind = rng.choice(["N1", "N1", "N1", "N2", "N3"])
        i = rng.randrange(rank)
        if kind == "N2":
            mv = NielsenMove("N2", i)
        else:
            j = rng.choice([k for k in range(rank) if k != i])
            if kind == "N3":
                mv = NielsenMove("N3", i, j)
            else:
                mv = NielsenMove("N1", i, j, rng.choice(["left", "right"]))
        Y = apply_nielsen(Y, mv)
    return Y
