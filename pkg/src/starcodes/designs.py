"""Steiner triple and quadruple systems read off staged exact-cover solutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

from .binary_codes import CodeFormatError, Verdict
from .words import bits_to_str, str_to_bits, support


@dataclass
class SteinerReport:
    kind: str  # "STS" or "SQS"
    order: int
    blocks: list[tuple[int, ...]]
    ok: bool
    problems: list[str] = field(default_factory=list)

    @property
    def expected_blocks(self) -> int:
        t = 2 if self.kind == "STS" else 3
        k = t + 1
        return comb(self.order, t) // comb(k, t)

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        verdict = "pass" if self.ok else "fail"
        head = f"{self.kind}({self.order}) blocks={len(self.blocks)} expected={self.expected_blocks} {verdict}"
        return "\n".join([head, *self.problems])


def steiner_check(blocks: list[tuple[int, ...]], points: list[int], t: int) -> Verdict:
    """Every t-subset of ``points`` lies in exactly one block of size t+1."""
    problems = []
    counts = {s: 0 for s in itertools.combinations(sorted(points), t)}
    for b in blocks:
        if len(b) != t + 1 or len(set(b)) != t + 1:
            problems.append(f"block {b} does not have {t + 1} points")
            continue
        for s in itertools.combinations(sorted(b), t):
            if s not in counts:
                problems.append(f"block {b} uses points outside the system")
                break
            counts[s] += 1
    for s, c in counts.items():
        if c != 1:
            label = "uncovered" if c == 0 else f"covered {c} times"
            problems.append(f"{label}: {tuple(p + 1 for p in s)}")
            if len(problems) > 20:
                break
    return Verdict(not problems, "\n".join(problems))


def solution_blocks(words: list[int], star: int) -> list[int]:
    """Translate solution words by e^star, dropping e^star itself (it covers
    the zero word).  For a solution of a distance-3 stage the translates are
    weight-4 words."""
    e = 1 << star
    return [w ^ e for w in words if w != e]


def steiner_from_solution(words: list[int], star: int, n: int, kind: str | None = None) -> SteinerReport:
    """Read an STS(n-1) or SQS(n) off a solution containing or extending e^star.

    With ``kind=None`` the kind is inferred: if every translated block
    contains coordinate 1 the solution is read as an STS on the other n-1
    coordinates, otherwise as an SQS on all n.
    """
    translated = solution_blocks(words, star)
    problems = [f"word of weight {b.bit_count()} after translation: {b:#x}" for b in translated if b.bit_count() != 4]
    supports = [tuple(support(b)) for b in translated]
    if kind is None:
        kind = "STS" if supports and all(s[0] == 0 for s in supports) else "SQS"
    if kind == "STS":
        blocks = [tuple(p for p in s if p != 0) for s in supports]
        if any(0 not in s for s in supports):
            problems.append("a block misses coordinate 1")
        points, t, order = list(range(1, n)), 2, n - 1
    elif kind == "SQS":
        blocks, points, t, order = supports, list(range(n)), 3, n
    else:
        raise ValueError(f"kind must be STS or SQS, got {kind!r}")
    if not problems:
        verdict = steiner_check(blocks, points, t)
        if not verdict:
            problems.extend(verdict.reason.splitlines())
    return SteinerReport(kind, order, blocks, not problems, problems)


def stage_restriction(words: list[int], star: int, stage: str) -> list[int]:
    """Words of a solution that cover the S″ (``s2``) or S‴ (``s3``) ground
    set for e^star, including e^star itself."""
    e = 1 << star
    keep = [e] if e in words else []
    for w in words:
        if w == e or (w ^ e).bit_count() != 4:
            continue
        if stage == "s2" and not (w ^ e) & 1:
            continue
        keep.append(w)
    return keep


def write_solution(path: str | Path, words: list[int], n: int, star: int) -> None:
    """Header ``n=<n> e=<i>`` (1-based) then one binary word per line."""
    lines = [f"n={n} e={star + 1}"] + [bits_to_str(w, n) for w in sorted(words)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_solution(path: str | Path) -> tuple[int, int | None, list[int]]:
    lines = [line.strip() for line in Path(path).read_text().splitlines() if line.strip()]
    if not lines:
        raise CodeFormatError("empty solution file")
    fields = {}
    for tok in lines[0].split():
        key, sep, value = tok.partition("=")
        if not sep or not value.isdigit():
            raise CodeFormatError(f"bad header token {tok!r}")
        fields[key] = int(value)
    if "n" not in fields:
        raise CodeFormatError("header needs n=")
    n = fields["n"]
    star = fields["e"] - 1 if "e" in fields else None
    words = []
    for lineno, line in enumerate(lines[1:], start=2):
        if len(line) != n or set(line) - {"0", "1"}:
            raise CodeFormatError(f"line {lineno}: expected {n} binary characters")
        words.append(str_to_bits(line))
    return n, star, words
