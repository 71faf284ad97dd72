"""Exact cover by dancing links, with pairwise pruning and staged solving.

The search is Knuth's Algorithm X over a sparse doubly-linked incidence
structure.  Ground elements are primary items.  A pruning relation between
candidates ("these two may not both be chosen") becomes secondary items, one
per clique of mutually conflicting candidates, so choosing a candidate removes its conflicting
partners with the same reversible cover/uncover moves.

The kernel is an explicit state machine so that a search can pause on every
solution or on an exhausted node budget and later resume where it stopped.
It is compiled with numba when available.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Protocol, Sequence

import numpy as np

log = logging.getLogger(__name__)

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


class MalformedInstance(ValueError):
    pass


class PairwisePrune(Protocol):
    """A symmetric exclusion relation between candidates.

    Rejecting a candidate because it clashes with some member of the partial
    solution is monotone: a rejected candidate stays rejected as the partial
    solution grows.
    """

    def excludes(self, a: Hashable, b: Hashable) -> bool: ...

    def conflict_pairs(self, candidates: Sequence[Hashable]) -> Iterable[tuple[int, int]]: ...


class FunctionPrune:
    """Wrap a plain predicate; conflict pairs are found by checking all pairs."""

    def __init__(self, fn: Callable[[Hashable, Hashable], bool]):
        self.fn = fn

    def excludes(self, a, b) -> bool:
        return bool(self.fn(a, b))

    def conflict_pairs(self, candidates):
        for i, j in itertools.combinations(range(len(candidates)), 2):
            if self.fn(candidates[i], candidates[j]):
                yield i, j


def rejects(prune: PairwisePrune | None, partial: Iterable[Hashable], candidate: Hashable) -> bool:
    if prune is None:
        return False
    return any(prune.excludes(p, candidate) for p in partial)


@dataclass(frozen=True)
class ExactCoverInstance:
    """Ground set S, candidates U and, per candidate, the ground indices it covers."""

    ground: tuple
    candidates: tuple
    covers: tuple[tuple[int, ...], ...]
    prune: PairwisePrune | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "covers", tuple(tuple(c) for c in self.covers))
        if len(self.covers) != len(self.candidates):
            raise MalformedInstance("one cover per candidate required")
        if len(set(self.ground)) != len(self.ground):
            raise MalformedInstance("duplicate ground elements")
        if len(set(self.candidates)) != len(self.candidates):
            raise MalformedInstance("duplicate candidates")
        k = len(self.ground)
        for u, cov in zip(self.candidates, self.covers):
            if not cov:
                raise MalformedInstance(f"candidate {u!r} covers nothing")
            if len(set(cov)) != len(cov) or min(cov) < 0 or max(cov) >= k:
                raise MalformedInstance(f"candidate {u!r} has a bad cover {cov}")

    @classmethod
    def from_sets(cls, ground: Iterable, sets: dict, prune: PairwisePrune | None = None) -> ExactCoverInstance:
        """Build from ``{candidate: iterable of ground elements}``."""
        ground = tuple(ground)
        index = {x: i for i, x in enumerate(ground)}
        try:
            covers = [tuple(sorted(index[x] for x in members)) for members in sets.values()]
        except KeyError as exc:
            raise MalformedInstance(f"unknown ground element {exc.args[0]!r}") from None
        return cls(ground, tuple(sets), tuple(covers), prune)

    @classmethod
    def from_relation(
        cls, ground: Iterable, candidates: Iterable, related: Callable[[Hashable], Iterable],
        prune: PairwisePrune | None = None,
    ) -> ExactCoverInstance:
        """Build from a function listing the (possibly out-of-ground) elements a
        candidate is related to; candidates relating to nothing are dropped."""
        ground = tuple(ground)
        index = {x: i for i, x in enumerate(ground)}
        kept, covers = [], []
        for u in candidates:
            cov = sorted(index[x] for x in related(u) if x in index)
            if cov:
                kept.append(u)
                covers.append(tuple(cov))
        return cls(ground, tuple(kept), tuple(covers), prune)

    def cover_of(self, candidate) -> set:
        return {self.ground[i] for i in self.covers[self.candidates.index(candidate)]}

    def is_solution(self, chosen: Iterable) -> bool:
        chosen = list(chosen)
        pos = {u: r for r, u in enumerate(self.candidates)}
        hits = [0] * len(self.ground)
        for u in chosen:
            if u not in pos:
                return False
            for i in self.covers[pos[u]]:
                hits[i] += 1
        if any(h != 1 for h in hits):
            return False
        if self.prune is not None:
            return not any(self.prune.excludes(a, b) for a, b in itertools.combinations(chosen, 2))
        return True

    def dump(self) -> str:
        """Text form: ``ground <k>`` then ``candidate <id>: <ground indices>``."""
        lines = [f"ground {len(self.ground)}"]
        for r, cov in enumerate(self.covers):
            lines.append(f"candidate {r}: " + " ".join(map(str, cov)))
        return "\n".join(lines) + "\n"


def restrict(inst: ExactCoverInstance, subset: Iterable) -> ExactCoverInstance:
    """The sub-instance induced by ``subset`` of the ground set: candidates
    touching the subset, covers cut down to it."""
    subset = set(subset)
    unknown = subset - set(inst.ground)
    if unknown:
        raise ValueError(f"{len(unknown)} elements are not in the ground set")
    ground = tuple(x for x in inst.ground if x in subset)
    new_index = {x: i for i, x in enumerate(ground)}
    kept, covers = [], []
    for u, cov in zip(inst.candidates, inst.covers):
        c = tuple(sorted(new_index[inst.ground[i]] for i in cov if inst.ground[i] in new_index))
        if c:
            kept.append(u)
            covers.append(c)
    return ExactCoverInstance(ground, tuple(kept), tuple(covers), inst.prune)


def residual(inst: ExactCoverInstance, partial: Iterable) -> ExactCoverInstance | None:
    """What is left to solve once ``partial`` is fixed.

    Drops the ground elements ``partial`` covers and every candidate that
    overlaps it or is excluded by the pruning relation.  Returns ``None`` when
    ``partial`` itself overlaps or violates the pruning relation, in which
    case it has no completion.
    """
    partial = list(partial)
    pos = {u: r for r, u in enumerate(inst.candidates)}
    missing = [u for u in partial if u not in pos]
    if missing:
        raise ValueError(f"partial solution uses unknown candidates: {missing[:3]!r}")
    covered: set[int] = set()
    for u in partial:
        cov = inst.covers[pos[u]]
        if covered.intersection(cov):
            return None
        covered.update(cov)
    if inst.prune is not None:
        for a, b in itertools.combinations(partial, 2):
            if inst.prune.excludes(a, b):
                return None
    chosen = set(partial)
    ground = tuple(x for i, x in enumerate(inst.ground) if i not in covered)
    new_index = {x: i for i, x in enumerate(ground)}
    kept, covers = [], []
    for u, cov in zip(inst.candidates, inst.covers):
        if u in chosen or covered.intersection(cov):
            continue
        if rejects(inst.prune, partial, u):
            continue
        kept.append(u)
        covers.append(tuple(new_index[inst.ground[i]] for i in cov))
    return ExactCoverInstance(ground, tuple(kept), tuple(covers), inst.prune)


def clique_cover(pairs: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Cover the edges of a conflict graph by cliques, greedily.

    Each clique becomes one secondary item, which enforces "at most one of
    these" with a single node per member instead of one per edge.
    """
    adj: dict[int, set[int]] = {}
    for a, b in pairs:
        if a != b:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    open_edges = {v: set(nb) for v, nb in adj.items()}
    cliques = []
    for v in sorted(adj):
        while open_edges[v]:
            u = min(open_edges[v])
            clique = [v, u]
            common = adj[v] & adj[u]
            while common:
                # prefer the member closing the most still-uncovered edges
                w = max(common, key=lambda c: (sum(c in open_edges[m] for m in clique), -c))
                clique.append(w)
                common &= adj[w]
            for i, a in enumerate(clique):
                for b in clique[i + 1:]:
                    open_edges[a].discard(b)
                    open_edges[b].discard(a)
            cliques.append(sorted(clique))
    return cliques


# -- the dancing links kernel ---------------------------------------------

_PAUSE_DONE, _PAUSE_SOLUTION, _PAUSE_BUDGET = 0, 1, 2


@njit(cache=True)
def _hide(p, UL, DL, TOP, LEN, ROW, OSTART, OEND):
    r = ROW[p]
    for q in range(OSTART[r], OEND[r]):
        if q != p:
            u = UL[q]
            d = DL[q]
            DL[u] = d
            UL[d] = u
            LEN[TOP[q]] -= 1


@njit(cache=True)
def _unhide(p, UL, DL, TOP, LEN, ROW, OSTART, OEND):
    r = ROW[p]
    for q in range(OEND[r] - 1, OSTART[r] - 1, -1):
        if q != p:
            u = UL[q]
            d = DL[q]
            DL[u] = q
            UL[d] = q
            LEN[TOP[q]] += 1


@njit(cache=True)
def _cover(i, LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND):
    p = DL[i]
    while p != i:
        _hide(p, UL, DL, TOP, LEN, ROW, OSTART, OEND)
        p = DL[p]
    left = LL[i]
    right = RL[i]
    RL[left] = right
    LL[right] = left


@njit(cache=True)
def _uncover(i, LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND):
    left = LL[i]
    right = RL[i]
    RL[left] = i
    LL[right] = i
    p = UL[i]
    while p != i:
        _unhide(p, UL, DL, TOP, LEN, ROW, OSTART, OEND)
        p = UL[p]


@njit(cache=True)
def _run(LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND, n_headers, x, state, budget, count_only):
    """Advance the search.  ``state`` holds [step, level, nodes, solutions].

    Steps follow Algorithm X: 2 = enter a level, 5 = try x[level],
    6 = undo x[level] and advance it, 8 = leave a level.
    """
    step = state[0]
    level = state[1]
    nodes = state[2]
    sols = state[3]
    while True:
        if step == 2:
            if budget > 0 and nodes >= budget:
                state[0] = 2
                state[1] = level
                state[2] = nodes
                state[3] = sols
                return 2
            nodes += 1
            if RL[0] == 0:
                sols += 1
                if count_only:
                    step = 8
                    continue
                state[0] = 8
                state[1] = level
                state[2] = nodes
                state[3] = sols
                return 1
            # minimum remaining candidates, lowest index on ties
            best = RL[0]
            best_len = LEN[best]
            p = RL[best]
            while p != 0 and best_len > 0:
                if LEN[p] < best_len:
                    best = p
                    best_len = LEN[p]
                p = RL[p]
            _cover(best, LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
            x[level] = DL[best]
            step = 5
        elif step == 5:
            p = x[level]
            if p < n_headers:
                _uncover(p, LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
                step = 8
            else:
                r = ROW[p]
                for q in range(p + 1, OEND[r]):
                    _cover(TOP[q], LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
                for q in range(OSTART[r], p):
                    _cover(TOP[q], LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
                level += 1
                step = 2
        elif step == 6:
            p = x[level]
            r = ROW[p]
            for q in range(p - 1, OSTART[r] - 1, -1):
                _uncover(TOP[q], LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
            for q in range(OEND[r] - 1, p, -1):
                _uncover(TOP[q], LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
            x[level] = DL[p]
            step = 5
        else:
            if level == 0:
                state[0] = 0
                state[1] = 0
                state[2] = nodes
                state[3] = sols
                return 0
            level -= 1
            step = 6


class Search:
    """A resumable dancing-links search over one instance.

    ``nodes`` counts search-tree nodes (levels entered).  A budget is a cap
    on the cumulative node count; exceeding it pauses the search, and
    :meth:`resume` continues with a larger cap.
    """

    def __init__(self, inst: ExactCoverInstance):
        self.inst = inst
        self._build()
        self.finished = False

    def _build(self) -> None:
        inst = self.inst
        n1 = len(inst.ground)
        groups: list[list[int]] = []
        if inst.prune is not None and len(inst.candidates) > 1:
            groups = clique_cover(inst.prune.conflict_pairs(inst.candidates))
        n2 = len(groups)
        extra: list[list[int]] = [[] for _ in inst.candidates]
        for k, members in enumerate(groups):
            for r in members:
                extra[r].append(n1 + 1 + k)
        n_headers = n1 + n2 + 2
        sec_root = n1 + n2 + 1
        options = [[1 + g for g in cov] + extra[r] for r, cov in enumerate(inst.covers)]
        total = n_headers + sum(len(o) for o in options)

        LL = np.zeros(n_headers, dtype=np.int64)
        RL = np.zeros(n_headers, dtype=np.int64)
        ring = [0] + list(range(1, n1 + 1))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            RL[a] = b
            LL[b] = a
        ring = [sec_root] + list(range(n1 + 1, n1 + n2 + 1))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            RL[a] = b
            LL[b] = a

        UL = np.zeros(total, dtype=np.int64)
        DL = np.zeros(total, dtype=np.int64)
        TOP = np.zeros(total, dtype=np.int64)
        LEN = np.zeros(n_headers, dtype=np.int64)
        ROW = np.full(total, -1, dtype=np.int64)
        OSTART = np.zeros(len(options), dtype=np.int64)
        OEND = np.zeros(len(options), dtype=np.int64)
        last = list(range(n_headers))
        TOP[:n_headers] = np.arange(n_headers)
        node = n_headers
        for r, items in enumerate(options):
            OSTART[r] = node
            for item in items:
                TOP[node] = item
                ROW[node] = r
                UL[node] = last[item]
                DL[last[item]] = node
                last[item] = node
                LEN[item] += 1
                node += 1
            OEND[r] = node
        for item in range(n_headers):
            DL[last[item]] = item
            UL[item] = last[item]

        self._arrays = (LL, RL, UL, DL, TOP, LEN, ROW, OSTART, OEND)
        self._n_headers = n_headers
        self._x = np.zeros(n1 + 1, dtype=np.int64)
        self._state = np.array([2, 0, 0, 0], dtype=np.int64)
        self.n_conflicts = n2

    @property
    def nodes(self) -> int:
        return int(self._state[2])

    @property
    def solutions_seen(self) -> int:
        return int(self._state[3])

    def _advance(self, budget: int | None, count_only: bool) -> int:
        if self.finished:
            return _PAUSE_DONE
        cap = 0 if budget is None else max(int(budget), 1)
        status = _run(*self._arrays, self._n_headers, self._x, self._state, cap, count_only)
        if status == _PAUSE_DONE:
            self.finished = True
        return status

    def _current(self) -> frozenset:
        level = int(self._state[1])
        rows = self._arrays[6][self._x[:level]]
        return frozenset(self.inst.candidates[r] for r in rows)

    def solutions(self, budget: int | None = None) -> Iterator[frozenset]:
        """Yield solutions until the search ends or the budget runs out."""
        while True:
            status = self._advance(budget, False)
            if status == _PAUSE_SOLUTION:
                yield self._current()
            else:
                return

    def count(self, budget: int | None = None) -> int:
        self._advance(budget, True)
        return self.solutions_seen


@dataclass
class SolveResult:
    solutions: list[frozenset]
    count: int
    nodes: int
    exhausted: bool

    def __bool__(self) -> bool:
        return self.count > 0


def solve(inst: ExactCoverInstance, mode: str = "all", budget: int | None = None) -> SolveResult:
    """Run the search.

    ``mode`` is ``"first"`` (stop at one solution), ``"all"`` (collect every
    solution) or ``"count"`` (count without materialising).  ``exhausted``
    reports whether the search space was fully explored; running out of
    budget is a normal outcome with ``exhausted=False``.
    """
    if mode not in ("first", "all", "count"):
        raise ValueError(f"unknown mode {mode!r}")
    search = Search(inst)
    if mode == "count":
        n = search.count(budget)
        return SolveResult([], n, search.nodes, search.finished)
    found = []
    for sol in search.solutions(budget):
        found.append(sol)
        if mode == "first":
            break
    return SolveResult(found, len(found), search.nodes, search.finished)


def extend(
    inst: ExactCoverInstance, partial: Iterable, mode: str = "all", budget: int | None = None
) -> SolveResult:
    """All solutions of ``inst`` that contain ``partial``."""
    partial = frozenset(partial)
    rest = residual(inst, partial)
    if rest is None:
        return SolveResult([], 0, 0, True)
    result = solve(rest, mode, budget)
    result.solutions = [partial | s for s in result.solutions]
    return result
