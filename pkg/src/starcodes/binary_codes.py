"""Binary codes, with a focus on extended 1-perfect (2^m, 2^(n-1)/n, 4) codes."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .words import BinaryWord, bits_to_str, str_to_bits, unit

log = logging.getLogger(__name__)

# the perfect-ball tiling check materialises the opposite-parity half space
_TILING_MAX_N = 24


class CodeFormatError(ValueError):
    pass


class CodeVerificationError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"code #{index} failed verification: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class Verdict:
    """A boolean outcome plus the reason it came out that way."""

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BinaryCode:
    """A set of n-bit words, held as packed ints (coordinate 1 = bit 0)."""

    n: int
    words: frozenset[int]
    declared_min_distance: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= 64:
            raise ValueError(f"code length must be in 1..64, got {self.n}")
        object.__setattr__(self, "words", frozenset(self.words))
        if any(w < 0 or w >> self.n for w in self.words):
            raise ValueError(f"word does not fit in {self.n} bits")
        if self.declared_min_distance is not None:
            actual = min_distance(self)
            if actual != self.declared_min_distance:
                raise ValueError(
                    f"declared min distance {self.declared_min_distance}, computed {actual}"
                )

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> BinaryCode:
        strings = list(strings)
        if not strings:
            raise ValueError("cannot infer length from no words")
        n = len(strings[0])
        if any(len(s) != n for s in strings):
            raise ValueError("words of unequal length")
        words = [str_to_bits(s) for s in strings]
        if len(set(words)) != len(words):
            raise ValueError("duplicate words")
        return cls(n, frozenset(words))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.words))

    def __contains__(self, w) -> bool:
        if isinstance(w, BinaryWord):
            return w.n == self.n and w.value in self.words
        return w in self.words

    def binary_words(self) -> list[BinaryWord]:
        return [BinaryWord(w, self.n) for w in sorted(self.words)]

    def parities(self) -> set[int]:
        return {w.bit_count() & 1 for w in self.words}

    def to_strings(self) -> list[str]:
        return [bits_to_str(w, self.n) for w in sorted(self.words)]


def pairwise_distances(words: np.ndarray, chunk: int = 1024) -> Iterator[np.ndarray]:
    """Yield rows of the pairwise distance matrix for the upper triangle, chunked."""
    for start in range(0, len(words), chunk):
        block = words[start:start + chunk]
        d = np.bitwise_count(block[:, None] ^ words[None, :])
        yield start, d


def min_distance(c: BinaryCode) -> int:
    """Minimum pairwise Hamming distance."""
    if len(c) < 2:
        raise ValueError("minimum distance needs at least two words")
    arr = np.fromiter(sorted(c.words), dtype=np.uint64, count=len(c))
    best = c.n
    for start, d in pairwise_distances(arr):
        rows = np.arange(start, start + d.shape[0])
        # mask the diagonal and the lower triangle
        d = np.where(np.arange(len(arr))[None, :] > rows[:, None], d, c.n + 1)
        best = min(best, int(d.min()))
        if best == 1:
            break
    return best


def syndrome(x: int) -> int:
    """XOR of the (0-based) labels of the ones of ``x``."""
    s = 0
    while x:
        low = x & -x
        s ^= low.bit_length() - 1
        x ^= low
    return s


def extended_hamming(m: int) -> BinaryCode:
    """The linear extended Hamming code of length 2^m.

    Codewords are the even-weight words whose one-positions have labels XOR
    to zero.
    """
    if not 2 <= m <= 4:
        raise ValueError(f"m must be in 2..4, got {m}")
    n = 1 << m
    basis = []
    for label in range(1, n):
        if label & (label - 1) == 0:
            continue
        v = unit(label)
        for k in range(m):
            if label >> k & 1:
                v |= unit(1 << k)
        if v.bit_count() & 1:
            v |= unit(0)
        basis.append(v)
    words = [0]
    for b in basis:
        words += [w ^ b for w in words]
    return BinaryCode(n, frozenset(words))


def translate(c: BinaryCode, x: BinaryWord | int) -> BinaryCode:
    if isinstance(x, BinaryWord):
        if x.n != c.n:
            raise ValueError(f"length mismatch: {x.n} != {c.n}")
        x = x.value
    return BinaryCode(c.n, frozenset(w ^ x for w in c.words))


def is_extended_perfect(c: BinaryCode) -> Verdict:
    """Check the (2^m, 2^(n-1)/n, 4) parameters and the ball tiling."""
    n = c.n
    if n < 2 or n & (n - 1):
        return Verdict(False, f"length {n} is not a power of two")
    size = (1 << (n - 1)) // n
    if len(c) != size:
        return Verdict(False, f"size {len(c)} != 2^(n-1)/n = {size}")
    parities = c.parities()
    if len(parities) != 1:
        return Verdict(False, "codewords of both parities")
    if size > 1:
        d = min_distance(c)
        if d < 4:
            return Verdict(False, f"minimum distance {d} < 4")
    if n <= _TILING_MAX_N:
        hits = np.zeros(1 << n, dtype=np.int32)
        arr = np.fromiter(c.words, dtype=np.int64, count=len(c))
        for i in range(n):
            np.add.at(hits, arr ^ (1 << i), 1)
        (parity,) = parities
        other = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)) & 1 != parity
        if not np.all(hits[other] == 1):
            bad = int(np.flatnonzero(other & (hits != 1))[0])
            return Verdict(False, f"word {bits_to_str(bad, n)} covered {hits[bad]} times by radius-1 balls")
    return Verdict(True, "even" if parities == {0} else "odd")


def normalize(c: BinaryCode) -> BinaryCode:
    """Translate by the least minimum-weight member so that 0 is a codeword."""
    if 0 in c.words:
        return c
    shift = min(c.words, key=lambda w: (w.bit_count(), w))
    return translate(c, shift)


def is_equidistant(c: BinaryCode, d: int) -> bool:
    ws = sorted(c.words)
    return all((a ^ b).bit_count() == d for i, a in enumerate(ws) for b in ws[i + 1:])


def is_trivial_equidistant(c: BinaryCode) -> bool:
    """Every coordinate is constant on all words, or on all but one."""
    for i in range(c.n):
        ones = sum(w >> i & 1 for w in c.words)
        if min(ones, len(c) - ones) > 1:
            return False
    return True


def deza_bound(k: int) -> int:
    """Largest possible nontrivial equidistant code with distance 2k."""
    return k * k + k + 2


def deza_check(c: BinaryCode) -> Verdict:
    """Validate an equidistant code against Deza's size bound.

    Trivial codes are bounded by n/k instead.
    """
    if len(c) < 2:
        return Verdict(True, "fewer than two words")
    ws = sorted(c.words)
    d = (ws[0] ^ ws[1]).bit_count()
    if d % 2 or not is_equidistant(c, d):
        return Verdict(False, "not an equidistant code with even distance")
    k = d // 2
    if is_trivial_equidistant(c):
        cap = c.n // k
        return Verdict(len(c) <= cap, f"trivial, size {len(c)}, cap n/k = {cap}")
    cap = deza_bound(k)
    return Verdict(len(c) <= cap, f"nontrivial, size {len(c)}, cap k^2+k+2 = {cap}")


# -- file formats ---------------------------------------------------------

def _parse_header(line: str, keys: tuple[str, ...]) -> dict[str, int]:
    fields = {}
    for tok in line.split():
        key, sep, value = tok.partition("=")
        if not sep:
            raise CodeFormatError(f"bad header token {tok!r}")
        try:
            fields[key] = int(value)
        except ValueError:
            raise CodeFormatError(f"bad header value {tok!r}") from None
    missing = [k for k in keys if k not in fields]
    if missing:
        raise CodeFormatError(f"header missing {', '.join(missing)}")
    return fields


def read_native(text: str) -> list[BinaryCode]:
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        return []
    header = _parse_header(lines[0], ("n", "M", "count"))
    n, size, count = header["n"], header["M"], header["count"]
    blocks: list[list[str]] = []
    current: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            if current:
                blocks.append(current)
                current = []
            continue
        if len(line) != n or set(line) - {"0", "1"}:
            raise CodeFormatError(f"line {lineno}: expected {n} binary characters")
        current.append(line)
    if current:
        blocks.append(current)
    if len(blocks) != count:
        raise CodeFormatError(f"header says {count} codes, found {len(blocks)}")
    codes = []
    for i, block in enumerate(blocks):
        if len(block) != size:
            raise CodeFormatError(f"code #{i} has {len(block)} words, header says M={size}")
        words = frozenset(str_to_bits(s) for s in block)
        if len(words) != size:
            raise CodeFormatError(f"code #{i} has duplicate words")
        codes.append(BinaryCode(n, words))
    return codes


def write_native(codes: list[BinaryCode]) -> str:
    if not codes:
        return ""
    n, size = codes[0].n, len(codes[0])
    if any(c.n != n or len(c) != size for c in codes):
        raise ValueError("native format needs codes of equal length and size")
    out = [f"n={n} M={size} count={len(codes)}"]
    for i, c in enumerate(codes):
        if i:
            out.append("")
        out.extend(c.to_strings())
    return "\n".join(out) + "\n"


# Readers for other encodings of published code lists plug in here.
READERS: dict[str, Callable[[str], list[BinaryCode]]] = {"native": read_native}


def import_codes(path: str | Path, format: str = "native", verify: bool = True) -> list[BinaryCode]:
    """Read, verify and normalise a list of extended perfect codes.

    Even codes are translated to contain the zero word.  A code that fails
    :func:`is_extended_perfect` raises :class:`CodeVerificationError`.
    """
    try:
        reader = READERS[format]
    except KeyError:
        raise ValueError(f"unknown code format {format!r}") from None
    codes = reader(Path(path).read_text())
    out = []
    for i, c in enumerate(codes):
        if verify:
            verdict = is_extended_perfect(c)
            if not verdict:
                raise CodeVerificationError(i, verdict.reason)
        if c.parities() == {0}:
            c = normalize(c)
        out.append(c)
    log.info("imported %d codes from %s", len(out), path)
    return out


def export_codes(codes: list[BinaryCode], path: str | Path) -> None:
    Path(path).write_text(write_native(codes))
