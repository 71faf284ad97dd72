"""Anticodes in X^n, the double-counting bound and diameter-perfect codes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .binary_codes import BinaryCode, Verdict, deza_check
from .ternary_codes import TernaryCode, distance3_star, min_distance, star_rule
from .words import Isometry, Permutation, StarredWord, to_masks


def x_size(n: int) -> int:
    """|X^n| = n * 2^(n-1)."""
    return n << (n - 1)


def _dist_to(ones: np.ndarray, stars: np.ndarray, w: StarredWord) -> np.ndarray:
    return np.bitwise_count((ones ^ np.uint64(w.ones)) | (stars ^ np.uint64(1 << w.star)))


def diameter_of(words: Iterable[StarredWord]) -> int:
    """Largest pairwise distance; 0 for a single word."""
    words = list(words)
    if not words:
        raise ValueError("diameter of an empty set is undefined")
    ones, stars = to_masks(words)
    best = 0
    for start in range(0, len(words), 1024):
        o, s = ones[start:start + 1024], stars[start:start + 1024]
        d = np.bitwise_count((o[:, None] ^ ones[None, :]) | (s[:, None] ^ stars[None, :]))
        best = max(best, int(d.max()))
    return best


@dataclass(frozen=True)
class Anticode:
    n: int
    words: frozenset[StarredWord]
    diameter: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))
        if any(w.n != self.n for w in self.words):
            raise ValueError("word length does not match the anticode")
        object.__setattr__(self, "diameter", diameter_of(self.words))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(sorted(self.words, key=lambda w: (w.star, w.even)))


def anticode_ball2(n: int) -> Anticode:
    """Starred words within distance 2 of the all-zero binary word: a star
    plus at most one 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    words = []
    for star in range(n):
        words.append(StarredWord.from_values(star, 0, n))
        for j in range(n):
            if j != star:
                words.append(StarredWord.from_values(star, 1 << j, n))
    return Anticode(n, frozenset(words))


def pigeonhole_bound(size_s: int, M: int, k: int) -> tuple[Fraction, int]:
    """For a set C meeting each block of a regular system of M-sets in at
    most k points: |C|/|S| <= k/M.  Returns (k/M, floor(|S| k / M))."""
    if M < 1:
        raise ValueError("block size M must be positive")
    if k < 0:
        raise ValueError("k must be non-negative")
    return Fraction(k, M), size_s * k // M


def is_diameter_perfect(c: TernaryCode, a: Anticode, d: int | None = None) -> Verdict:
    """|C| * |A| = |X^n| for a distance-d code C and a diameter-(d-1) anticode A."""
    if c.n != a.n:
        return Verdict(False, f"length mismatch {c.n} != {a.n}")
    d = d if d is not None else c.d
    if d is None:
        return Verdict(False, "code has no declared minimum distance")
    if len(c) >= 2:
        actual = min_distance(c)
        if actual < d:
            return Verdict(False, f"code minimum distance {actual} < {d}")
    if a.diameter > d - 1:
        return Verdict(False, f"anticode diameter {a.diameter} > {d - 1}")
    product, total = len(c) * len(a), x_size(c.n)
    if product > total:
        return Verdict(False, f"|C||A| = {product} exceeds |X^n| = {total}; inputs inconsistent")
    return Verdict(product == total, f"|C||A| = {len(c)}*{len(a)} = {product}, |X^n| = {total}")


# -- neighbourhoods and random sets ---------------------------------------

def starred_ball(w: StarredWord, radius: int) -> list[StarredWord]:
    """All starred words within ``radius`` of ``w``."""
    n, s = w.n, w.star
    ones = w.ones
    out = []
    others = [j for j in range(n) if j != s]
    for r in range(min(radius, n - 1) + 1):
        for flips in itertools.combinations(others, r):
            x = ones
            for j in flips:
                x ^= 1 << j
            out.append(StarredWord.from_values(s, x, n))
    if radius >= 2:
        for t in others:
            rest = [j for j in others if j != t]
            base = ones & ~(1 << t)
            for b in (0, 1):
                moved = base | (b << s)
                for r in range(min(radius - 2, n - 2) + 1):
                    for flips in itertools.combinations(rest, r):
                        x = moved
                        for j in flips:
                            x ^= 1 << j
                        out.append(StarredWord.from_values(t, x, n))
    return out


def random_maximal_set(rng: np.random.Generator, start: StarredWord, lo: int, hi: int,
                       pool: list[StarredWord] | None = None) -> list[StarredWord]:
    """Greedy random maximal set containing ``start`` whose pairwise
    distances all lie in [lo, hi]."""
    pool = pool if pool is not None else starred_ball(start, hi)
    ones, stars = to_masks(pool)
    d = _dist_to(ones, stars, start)
    alive = (d >= lo) & (d <= hi)
    chosen = [start]
    while alive.any():
        k = int(rng.choice(np.flatnonzero(alive)))
        w = pool[k]
        chosen.append(w)
        d = _dist_to(ones, stars, w)
        alive &= (d >= lo) & (d <= hi)
    return chosen


def random_starred_word(rng: np.random.Generator, n: int) -> StarredWord:
    return StarredWord.from_values(int(rng.integers(n)), int(rng.integers(1 << n)), n)


def random_isometry(rng: np.random.Generator, n: int) -> Isometry:
    perm = Permutation(tuple(int(k) for k in rng.permutation(n)))
    return Isometry(perm, int(rng.integers(1 << n)))


# -- the |D| <= n lemma ---------------------------------------------------

@dataclass
class Lemma5Report:
    ok: bool
    size: int
    n: int
    case: str  # "trivial", "three-at-4", "two-at-4" or "none-at-4"
    per_class: dict[int, str]
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _class_label(words: list[StarredWord]) -> str:
    if len(words) <= 1:
        return "singleton" if words else "empty"
    d4 = {(a, b) for a, b in itertools.combinations(range(len(words)), 2)
          if _pair_distance(words[a], words[b]) == 4}
    if not d4:
        return "none-at-4"
    for a, b, c in itertools.combinations(range(len(words)), 3):
        if (a, b) in d4 and (a, c) in d4 and (b, c) in d4:
            return "three-at-4"
    return "two-at-4"


def _pair_distance(a: StarredWord, b: StarredWord) -> int:
    return ((a.ones ^ b.ones) | ((1 << a.star) ^ (1 << b.star))).bit_count()


def parity_extended_class(words: list[StarredWord]) -> BinaryCode:
    """Delete the common star coordinate and append a parity bit."""
    n = words[0].n
    s = words[0].star
    out = set()
    for w in words:
        low = w.ones & ((1 << s) - 1)
        high = w.ones >> (s + 1)
        x = low | (high << s)
        x |= (x.bit_count() & 1) << (n - 1)
        out.add(x)
    return BinaryCode(n, frozenset(out))


def check_lemma5_instance(words: Iterable[StarredWord]) -> Lemma5Report:
    """Check |D| <= n for a set with all pairwise distances in {3, 4}, and
    report which case of the star-class analysis applies."""
    words = list(words)
    if not words:
        raise ValueError("empty set")
    n = words[0].n
    if n < 16:
        raise ValueError("the bound is only claimed for n >= 16")
    for a, b in itertools.combinations(words, 2):
        if not 3 <= _pair_distance(a, b) <= 4:
            raise ValueError(f"{a} and {b} are at distance {_pair_distance(a, b)}, not 3 or 4")
    classes: dict[int, list[StarredWord]] = {}
    for w in words:
        classes.setdefault(w.star, []).append(w)
    per_class = {s: _class_label(ws) for s, ws in sorted(classes.items())}
    labels = set(per_class.values())
    if "three-at-4" in labels:
        case = "three-at-4"
    elif "two-at-4" in labels:
        case = "two-at-4"
    elif "none-at-4" in labels:
        case = "none-at-4"
    else:
        case = "trivial"
    problems = []
    if len(words) > n:
        problems.append(f"|D| = {len(words)} > n = {n}")
    for s, ws in classes.items():
        if len(ws) > n // 2:
            problems.append(f"|D_{s + 1}| = {len(ws)} > n/2")
        if len(ws) >= 2:
            verdict = deza_check(parity_extended_class(ws))
            if not verdict:
                problems.append(f"class {s + 1}: {verdict.reason}")
    return Lemma5Report(not problems, len(words), n, case, per_class, problems)


def lemma5_configurations(n: int = 16) -> dict[str, list[StarredWord]]:
    """The starting configurations of the three star-class cases."""
    def word(ones: str) -> StarredWord:
        return StarredWord.parse("*" + ones.ljust(n - 1, "0"))

    return {
        "three-at-4": [word("11"), word("0011"), word("000011")],
        "two-at-4": [word(""), word("1111")],
        "none-at-4": [word(""), word("111")],
    }


def greedy_lemma5_completion(rng: np.random.Generator, seed_words: list[StarredWord]) -> list[StarredWord]:
    """Randomly extend a valid configuration to a maximal one."""
    pool = {w for s in seed_words for w in starred_ball(s, 4)}
    pool = sorted(pool - set(seed_words), key=lambda w: (w.star, w.even))
    ones, stars = to_masks(pool)
    alive = np.ones(len(pool), dtype=bool)
    for s in seed_words:
        d = _dist_to(ones, stars, s)
        alive &= (d >= 3) & (d <= 4)
    chosen = list(seed_words)
    while alive.any():
        k = int(rng.choice(np.flatnonzero(alive)))
        chosen.append(pool[k])
        d = _dist_to(ones, stars, pool[k])
        alive &= (d >= 3) & (d <= 4)
    return chosen


# -- the n^2 bound via the distance-3 code --------------------------------

def intersection_with_image(anticode: Iterable[StarredWord], g: Isometry, m: int,
                            rule: list[int] | None = None) -> int:
    """|B ∩ g(F)| for the full distance-3 code F, using its O(1) membership test."""
    rule = rule or star_rule(m)
    inv = g.inverse()
    hits = 0
    for w in anticode:
        star, even = inv.apply_starred(w.star, w.even)
        if distance3_star(even, m, rule) == star:
            hits += 1
    return hits
