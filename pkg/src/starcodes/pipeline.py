"""The staged search for the odd half C1 given a fixed even half C0.

Every even word of F^n must lie at distance 1 from exactly one word of C1,
which is an exact cover of W0 (even words) by radius-1 balls around W1 (odd
words).  The distance-5 requirement becomes the pairwise pruning relation
of :class:`ConditionTwo`.

The search goes through nested ground sets, S1 = {0}, then (for the chosen
e^i) S2 = {x in W0 : d(x, e^i) = 3, x_1 != e^i_1}, S3 = {x : d(x, e^i) = 3},
then all of W0.  Orbit reduction under the symmetries of C0 is applied to
the choice of e^i only.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .binary_codes import BinaryCode, extended_hamming, is_extended_perfect, normalize
from .designs import stage_restriction
from .exact_cover import ExactCoverInstance, SolveResult, extend, residual, restrict, solve
from .symmetry import orbits, symmetries
from .ternary_codes import TernaryCode, check_condition2, combine, verify_params

log = logging.getLogger(__name__)


class ConditionTwo:
    """Pruning relation (the partner-star clash rule) for odd candidates given C0.

    Each odd word y has a unique partner x(y) in C0 at distance 1, and a star
    coordinate where they differ.  Two candidates clash when their stars
    coincide and their partners are at distance 4; the resulting starred
    words would then be at distance 4.
    """

    def __init__(self, c0: BinaryCode):
        self.c0 = c0
        self.n = c0.n
        self._partners: dict[int, tuple[int, int] | None] = {}

    def partner(self, y: int) -> tuple[int, int] | None:
        """(partner in C0, star index) of an odd word, or None."""
        try:
            return self._partners[y]
        except KeyError:
            pass
        found = None
        for i in range(self.n):
            if y ^ (1 << i) in self.c0.words:
                found = (y ^ (1 << i), i)
                break
        self._partners[y] = found
        return found

    def excludes(self, a: int, b: int) -> bool:
        pa, pb = self.partner(a), self.partner(b)
        if pa is None or pb is None:
            return False
        return pa[1] == pb[1] and (pa[0] ^ pb[0]).bit_count() == 4

    def conflict_pairs(self, candidates) -> Iterator[tuple[int, int]]:
        groups: dict[int, list[int]] = {}
        for r, y in enumerate(candidates):
            p = self.partner(y)
            if p is not None:
                groups.setdefault(p[1], []).append(r)
        for star in sorted(groups):
            rows = np.array(groups[star], dtype=np.int64)
            xs = np.array([self.partner(candidates[r])[0] for r in rows], dtype=np.uint64)
            hit = np.triu(np.bitwise_count(xs[:, None] ^ xs[None, :]) == 4)
            for i, j in zip(*np.nonzero(hit)):
                yield int(rows[i]), int(rows[j])


def even_words(n: int) -> list[int]:
    return [x for x in range(1 << n) if not x.bit_count() & 1]


def odd_words(n: int) -> list[int]:
    return [x for x in range(1 << n) if x.bit_count() & 1]


def neighbours(y: int, n: int) -> list[int]:
    return [y ^ (1 << i) for i in range(n)]


def full_instance(c0: BinaryCode) -> ExactCoverInstance:
    """Cover W0 by radius-1 balls around W1, pruned by the partner-star clash rule."""
    n = c0.n
    return ExactCoverInstance.from_relation(
        even_words(n), odd_words(n), lambda y: neighbours(y, n), ConditionTwo(c0)
    )


def s1_ground(n: int) -> list[int]:
    return [0]


def s2_ground(n: int, star: int) -> list[int]:
    e = 1 << star
    return [x for x in even_words(n) if (x ^ e).bit_count() == 3 and (x & 1) != (e & 1)]


def s3_ground(n: int, star: int) -> list[int]:
    e = 1 << star
    return [x for x in even_words(n) if (x ^ e).bit_count() == 3]


def stage_instance(
    c0: BinaryCode, partial: Iterable[int], ground: Iterable[int], prune: ConditionTwo | None = None
) -> ExactCoverInstance:
    """restrict(residual(full_instance(c0), partial), ground) without building
    the full instance.

    Two balls overlap exactly when their centres are at distance 2, so a
    candidate survives the residual if it is at distance >= 3 from every
    word of ``partial`` and not pruned against any of them.
    """
    n = c0.n
    prune = prune or ConditionTwo(c0)
    partial = list(partial)
    covered = {z for p in partial for z in neighbours(p, n)}
    ground = [x for x in ground if x not in covered]
    cands = sorted({y for x in ground for y in neighbours(x, n)})
    kept = [
        y for y in cands
        if all((y ^ p).bit_count() > 2 for p in partial)
        and not any(prune.excludes(p, y) for p in partial)
    ]
    return ExactCoverInstance.from_relation(ground, kept, lambda y: neighbours(y, n), prune)


def orbit_representatives(c0: BinaryCode, reduce: bool = True) -> tuple[int, list[int]]:
    """(group order, star indices to try) for the S1 stage."""
    n = c0.n
    group = symmetries(c0)
    if not reduce:
        return group.order, list(range(n))
    reps = [o.representative.bit_length() - 1 for o in orbits(group, [1 << i for i in range(n)])]
    return group.order, reps


@dataclass
class StageOutcome:
    star: int
    s2_solutions: list[frozenset] = field(default_factory=list)
    s3_solutions: list[frozenset] = field(default_factory=list)
    full_solutions: list[frozenset] = field(default_factory=list)
    s2_count: int = 0
    s3_count: int = 0
    nodes: int = 0
    exhausted: bool = True


def _tally(outcome: StageOutcome, result: SolveResult) -> None:
    outcome.nodes += result.nodes
    outcome.exhausted &= result.exhausted


def search_representative(
    c0: BinaryCode, star: int, stage: str = "s3", budget: int | None = None,
    to_full: bool = True, keep: bool = True,
) -> StageOutcome:
    """Solve S2 for e^star, then (stage s3) extend every S2 solution to S3
    and, if ``to_full``, every S3 solution to all of W0.

    The budget applies to each individual exact-cover search.  Stored
    solutions include e^star.
    """
    if stage not in ("s2", "s3"):
        raise ValueError(f"stage must be s2 or s3, got {stage!r}")
    n = c0.n
    prune = ConditionTwo(c0)
    e = 1 << star
    out = StageOutcome(star)
    inst2 = stage_instance(c0, [e], s2_ground(n, star), prune)
    res2 = solve(inst2, "all", budget)
    _tally(out, res2)
    out.s2_count = res2.count
    s2 = [sol | {e} for sol in res2.solutions]
    if keep:
        out.s2_solutions = s2
    if stage == "s2" or not s2:
        return out
    inst3 = stage_instance(c0, [e], s3_ground(n, star), prune)
    s3 = []
    for sol in s2:
        res3 = extend(inst3, sol - {e}, "all", budget)
        _tally(out, res3)
        s3.extend(q | {e} for q in res3.solutions)
    out.s3_count = len(s3)
    _check_containment(s2, s3, star)
    if keep:
        out.s3_solutions = s3
    if to_full and s3:
        inst = full_instance(c0)
        for sol in s3:
            res = extend(inst, sol, "all", budget)
            _tally(out, res)
            out.full_solutions.extend(res.solutions)
    return out


def _check_containment(s2: list[frozenset], s3: list[frozenset], star: int) -> None:
    """Every S‴ solution must restrict to one of the S″ solutions."""
    known = set(s2)
    for sol in s3:
        if frozenset(stage_restriction(list(sol), star, "s2")) not in known:
            raise RuntimeError(f"S‴ solution for e{star + 1} does not restrict to an S″ solution")


@dataclass
class CodeReport:
    code_index: int
    sym_order: int
    orbit_reps: int
    s2_solutions: int
    s3_solutions: int | None
    nodes: int
    exhausted: bool
    seconds: float
    full_solutions: int = 0
    incomplete: list[int] = field(default_factory=list)

    def to_line(self, timing: bool = True) -> str:
        fields = {
            "code_index": self.code_index,
            "sym_order": self.sym_order,
            "orbit_reps": self.orbit_reps,
            "s2_solutions": self.s2_solutions,
            "s3_solutions": "-" if self.s3_solutions is None else self.s3_solutions,
            "full_solutions": self.full_solutions,
            "nodes": self.nodes,
            "exhausted": str(self.exhausted).lower(),
            "incomplete": ",".join(f"e{i + 1}" for i in self.incomplete) or "-",
            "seconds": f"{self.seconds:.2f}" if timing else "-",
        }
        return " ".join(f"{k}={v}" for k, v in fields.items())

    @classmethod
    def from_line(cls, line: str) -> CodeReport:
        kv = dict(tok.split("=", 1) for tok in line.split())
        s3 = kv["s3_solutions"]
        inc = kv.get("incomplete", "-")
        return cls(
            code_index=int(kv["code_index"]),
            sym_order=int(kv["sym_order"]),
            orbit_reps=int(kv["orbit_reps"]),
            s2_solutions=int(kv["s2_solutions"]),
            s3_solutions=None if s3 == "-" else int(s3),
            nodes=int(kv["nodes"]),
            exhausted=kv["exhausted"] == "true",
            seconds=0.0 if kv["seconds"] == "-" else float(kv["seconds"]),
            full_solutions=int(kv.get("full_solutions", 0)),
            incomplete=[] if inc == "-" else [int(t[1:]) - 1 for t in inc.split(",")],
        )


def prepare_code(c0: BinaryCode, reduce: bool = True) -> tuple[BinaryCode, int, list[int]]:
    """Normalise C0 to an even code containing 0 and pick the e^i to try."""
    c0 = normalize(c0)
    verdict = is_extended_perfect(c0)
    if not verdict or verdict.reason != "even":
        raise ValueError(f"C0 is not an even extended perfect code: {verdict.reason}")
    order, reps = orbit_representatives(c0, reduce)
    return c0, order, reps


def merge_outcomes(index: int, order: int, reps: list[int], outcomes: list[StageOutcome],
                   stage: str, seconds: float) -> CodeReport:
    return CodeReport(
        code_index=index,
        sym_order=order,
        orbit_reps=len(reps),
        s2_solutions=sum(o.s2_count for o in outcomes),
        s3_solutions=sum(o.s3_count for o in outcomes) if stage == "s3" else None,
        nodes=sum(o.nodes for o in outcomes),
        exhausted=all(o.exhausted for o in outcomes),
        seconds=seconds,
        full_solutions=sum(len(o.full_solutions) for o in outcomes),
        incomplete=[o.star for o in outcomes if not o.exhausted],
    )


def run_code(c0: BinaryCode, index: int = 0, stage: str = "s3", budget: int | None = None,
             reduce: bool = True) -> tuple[CodeReport, list[StageOutcome]]:
    start = time.perf_counter()
    c0, order, reps = prepare_code(c0, reduce)
    outcomes = [search_representative(c0, i, stage, budget) for i in reps]
    report = merge_outcomes(index, order, reps, outcomes, stage, time.perf_counter() - start)
    return report, outcomes


def code_from_solution(c0: BinaryCode, chosen: Iterable[int]) -> TernaryCode:
    c1 = BinaryCode(c0.n, frozenset(chosen))
    return combine(c0, c1)


@dataclass
class Search8Result:
    code: TernaryCode
    c0: BinaryCode
    c1: BinaryCode
    outcome: StageOutcome
    seconds: float


def search8(budget: int | None = None) -> Search8Result:
    """Find an (8,5,7;16)_3 code with C0 the extended Hamming code of length 8."""
    start = time.perf_counter()
    c0, _, reps = prepare_code(extended_hamming(3))
    for star in reps:
        outcome = search_representative(c0, star, "s3", budget)
        for sol in outcome.full_solutions:
            c1 = BinaryCode(8, frozenset(sol))
            code = combine(c0, c1)
            if verify_params(code, 8, 5, 7, 16):
                return Search8Result(TernaryCode(8, code.words, 5), c0, c1, outcome,
                                     time.perf_counter() - start)
    raise RuntimeError("no (8,5,7;16)_3 code found")
