"""Ternary constant-weight codes in X^n and their binary even/odd halves."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .binary_codes import BinaryCode, CodeFormatError, Verdict, is_extended_perfect, syndrome
from .words import StarredWord


@dataclass(frozen=True)
class TernaryCode:
    """A set of starred words.  ``d`` is an optional declared minimum distance."""

    n: int
    words: frozenset[StarredWord]
    d: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))
        for w in self.words:
            if w.n != self.n:
                raise ValueError(f"word {w} has length {w.n}, code has {self.n}")

    @classmethod
    def from_strings(cls, strings: Iterable[str], d: int | None = None) -> TernaryCode:
        words = [StarredWord.parse(s) for s in strings]
        if not words:
            raise ValueError("cannot infer length from no words")
        return cls(words[0].n, frozenset(words), d)

    @property
    def w(self) -> int:
        return self.n - 1

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[StarredWord]:
        return iter(sorted(self.words, key=lambda x: (x.star, x.even)))

    def __contains__(self, w) -> bool:
        return w in self.words

    def masks(self) -> tuple[np.ndarray, np.ndarray]:
        ws = list(self)
        ones = np.fromiter((w.ones for w in ws), dtype=np.uint64, count=len(ws))
        stars = np.fromiter((1 << w.star for w in ws), dtype=np.uint64, count=len(ws))
        return ones, stars


class DecompositionError(ValueError):
    pass


def decompose(c: TernaryCode) -> tuple[BinaryCode, BinaryCode]:
    """Split into the even-member code e(C) and odd-member code o(C)."""
    evens = [w.even for w in c.words]
    odds = [w.odd for w in c.words]
    if len(set(evens)) != len(evens) or len(set(odds)) != len(odds):
        raise DecompositionError("two codewords share a binary member (distance < 3)")
    return BinaryCode(c.n, frozenset(evens)), BinaryCode(c.n, frozenset(odds))


def partner_map(c0: BinaryCode, c1: BinaryCode) -> dict[int, int]:
    """Map each word of ``c0`` to the unique word of ``c1`` at distance 1.

    Raises ``ValueError`` if some word has no neighbour or several.
    """
    partners: dict[int, int] = {}
    for x in c0.words:
        found = [x ^ (1 << i) for i in range(c0.n) if x ^ (1 << i) in c1.words]
        if len(found) != 1:
            raise ValueError(f"word {x:#x} has {len(found)} neighbours at distance 1, expected 1")
        partners[x] = found[0]
    return partners


def _check_pair(c0: BinaryCode, c1: BinaryCode) -> None:
    if c0.n != c1.n:
        raise ValueError(f"length mismatch: {c0.n} != {c1.n}")
    v0, v1 = is_extended_perfect(c0), is_extended_perfect(c1)
    if not v0 or v0.reason != "even":
        raise ValueError(f"c0 is not an even extended perfect code: {v0.reason}")
    if not v1 or v1.reason != "odd":
        raise ValueError(f"c1 is not an odd extended perfect code: {v1.reason}")


def combine(c0: BinaryCode, c1: BinaryCode) -> TernaryCode:
    """Pair each even word with its unique odd neighbour into a starred word."""
    _check_pair(c0, c1)
    words = []
    for x, y in partner_map(c0, c1).items():
        star = (x ^ y).bit_length() - 1
        words.append(StarredWord(star, x, c0.n))
    return TernaryCode(c0.n, frozenset(words), d=3)


def check_condition2(
    c0: BinaryCode, c1: BinaryCode, limit: int | None = None
) -> tuple[bool, list[tuple[int, int, int, int]]]:
    """Search for quadruples (x1, x2, y1, y2) with y_k the partner of x_k,
    d(x1, x2) = 4 and x1 - x2 = y1 - y2.

    Over GF(2) the last equation says the two stars coincide, so the scan
    groups partners by star and looks for distance-4 pairs inside a group.
    Returns (no violation found, violations up to ``limit``).
    """
    _check_pair(c0, c1)
    partners = partner_map(c0, c1)
    by_star: dict[int, list[int]] = {}
    for x, y in partners.items():
        by_star.setdefault((x ^ y).bit_length() - 1, []).append(x)
    violations = []
    for star in sorted(by_star):
        xs = np.array(sorted(by_star[star]), dtype=np.uint64)
        hit = np.bitwise_count(xs[:, None] ^ xs[None, :]) == 4
        for i, j in zip(*np.nonzero(np.triu(hit))):
            x1, x2 = int(xs[i]), int(xs[j])
            y1, y2 = partners[x1], partners[x2]
            assert x1 ^ x2 == y1 ^ y2
            violations.append((x1, x2, y1, y2))
            if limit is not None and len(violations) >= limit:
                return False, violations
    return not violations, violations


def min_distance(c: TernaryCode, chunk: int = 2048) -> int:
    """Minimum pairwise distance by a full pairwise scan."""
    if len(c) < 2:
        raise ValueError("minimum distance needs at least two words")
    return closest_pair(c, chunk)[0]


def closest_pair(c: TernaryCode, chunk: int = 2048) -> tuple[int, StarredWord, StarredWord]:
    ws = list(c)
    ones, stars = c.masks()
    best = (c.n + 1, -1, -1)
    for start in range(0, len(ws), chunk):
        o, s = ones[start:start + chunk], stars[start:start + chunk]
        d = np.bitwise_count((o[:, None] ^ ones[None, :]) | (s[:, None] ^ stars[None, :]))
        rows = np.arange(start, start + len(o))
        d = np.where(np.arange(len(ws))[None, :] > rows[:, None], d, c.n + 1)
        k = int(d.argmin())
        i, j = divmod(k, len(ws))
        if d[i, j] < best[0]:
            best = (int(d[i, j]), start + i, j)
    return best[0], ws[best[1]], ws[best[2]]


def verify_params(c: TernaryCode, n: int, d: int, w: int, M: int) -> Verdict:
    """Check that ``c`` is an (n, d, w; M)_3 code; the reason names the first failure."""
    if c.n != n:
        return Verdict(False, f"length {c.n} != {n}")
    if w != n - 1:
        return Verdict(False, f"starred words have weight {n - 1}, not {w}")
    if len(c) != M:
        return Verdict(False, f"size {len(c)} != {M}")
    if len(c) >= 2:
        dist, a, b = closest_pair(c)
        if dist < d:
            return Verdict(False, f"distance {dist} between {a} and {b} is below {d}")
    return Verdict(True, f"({n},{d},{w};{M})_3 verified")


# -- the full distance-3 code ---------------------------------------------

# primitive polynomials for GF(2^m), without the leading term
_PRIMITIVE = {2: 0b11, 3: 0b011, 4: 0b0011}


def gf_mul_by_x(a: int, m: int) -> int:
    a <<= 1
    if a >> m & 1:
        a ^= (1 << m) | _PRIMITIVE[m]
    return a


def star_rule(m: int) -> list[int]:
    """Star coordinate for each syndrome class: multiplication by the field
    generator x.  Both s -> x*s and s -> (x+1)*s are bijections, which is
    what keeps distinct-star words at distance >= 3."""
    return [gf_mul_by_x(s, m) for s in range(1 << m)]


def distance3_star(even: int, m: int, rule: list[int] | None = None) -> int:
    rule = rule or star_rule(m)
    return rule[syndrome(even)]


def in_full_distance3_code(w: StarredWord, m: int, rule: list[int] | None = None) -> bool:
    return w.star == distance3_star(w.even, m, rule)


def full_distance3_code(m: int, verify: bool = True) -> TernaryCode:
    """An (n=2^m, 3, n-1; 2^(n-1))_3 code.

    Every even word appears once as an even member; its star is fixed by
    its syndrome class.  Verification is exhaustive: a full pairwise scan
    for m=3 and a radius-2 neighbourhood membership sweep for m=4.
    """
    if not 3 <= m <= 4:
        raise ValueError(f"m must be 3 or 4, got {m}")
    n = 1 << m
    rule = star_rule(m)
    synd = _syndromes(n)
    evens = np.flatnonzero(np.bitwise_count(np.arange(1 << n, dtype=np.uint64)) % 2 == 0)
    words = frozenset(StarredWord(rule[synd[e]], int(e), n) for e in evens)
    code = TernaryCode(n, words, d=3)
    if verify:
        if m == 3:
            dist = min_distance(code)
        else:
            dist = _local_min_distance(code, m)
        if dist != 3:
            raise AssertionError(f"distance-3 construction produced distance {dist}")
    return code


def _syndromes(n: int) -> np.ndarray:
    synd = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        synd[1 << i:1 << (i + 1)] = synd[:1 << i] ^ i
    return synd


def _local_min_distance(code: TernaryCode, m: int) -> int:
    """Exact minimum distance of a code produced by the star rule.

    Every starred word within distance 2 of a codeword is tested for
    membership (an O(1) syndrome lookup); if none is a codeword the minimum
    distance is at least 3, and a distance-3 pair is then exhibited.
    """
    n = 1 << m
    rule = np.array(star_rule(m), dtype=np.int64)
    synd = _syndromes(n)
    ones, stars = code.masks()
    ones = ones.astype(np.int64)
    star = np.log2(stars.astype(np.float64)).astype(np.int64)

    def members(new_ones, new_star, valid):
        even = new_ones | ((np.bitwise_count(new_ones.astype(np.uint64)) & 1).astype(np.int64) << new_star)
        return valid & (rule[synd[even]] == new_star)

    # same star, one or two other coordinates flipped
    for i in range(n):
        for j in range(i, n):
            mask = (1 << i) | (1 << j)
            valid = (mask >> star) & 1 == 0
            if members(ones ^ mask, star, valid).any():
                return 1 if i == j else 2
    # star moved to t; the old star coordinate takes value b
    for t in range(n):
        for b in (0, 1):
            new_ones = (ones & ~(1 << t)) | (b << star)
            if members(new_ones, np.full_like(star, t), star != t).any():
                return 2
    return 3 if _has_distance3(code) else 4


def _has_distance3(code: TernaryCode) -> bool:
    ws = list(code)
    head = TernaryCode(code.n, frozenset(ws[:256]))
    ones, stars = code.masks()
    h_ones, h_stars = head.masks()
    d = np.bitwise_count((h_ones[:, None] ^ ones[None, :]) | (h_stars[:, None] ^ stars[None, :]))
    return bool(np.any(d == 3))


# -- file format ----------------------------------------------------------

def read_ternary(path: str | Path) -> TernaryCode:
    lines = [line.strip() for line in Path(path).read_text().splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise CodeFormatError("empty ternary code file")
    fields = {}
    for tok in lines[0].split():
        key, sep, value = tok.partition("=")
        if not sep or not value.isdigit():
            raise CodeFormatError(f"bad header token {tok!r}")
        fields[key] = int(value)
    if "n" not in fields or "M" not in fields:
        raise CodeFormatError("header needs n= and M=")
    n, size = fields["n"], fields["M"]
    words = []
    for lineno, line in enumerate(lines[1:], start=2):
        if len(line) != n or set(line) - {"0", "1", "*"} or line.count("*") != 1:
            raise CodeFormatError(f"line {lineno}: expected {n} characters over 0,1,* with one *")
        words.append(StarredWord.parse(line))
    if len(words) != size:
        raise CodeFormatError(f"header says M={size}, found {len(words)} words")
    if len(set(words)) != len(words):
        raise CodeFormatError("duplicate words")
    return TernaryCode(n, frozenset(words))


def write_ternary(c: TernaryCode, path: str | Path) -> None:
    lines = [f"n={c.n} M={len(c)}"] + [str(w) for w in c]
    Path(path).write_text("\n".join(lines) + "\n")
