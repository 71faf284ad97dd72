"""Binary words of F^n and starred words of X^n.

Words are packed into Python ints: coordinate ``i`` (0-based) is bit ``i``,
so coordinate 1 of the usual 1-based notation is the least significant bit.
String forms put coordinate 1 leftmost, e.g. ``"01*0"``.

A starred word is stored as its star index together with its even-weight
member; the odd member is derived by flipping the star bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

MAX_LENGTH = 64


def _check_length(n: int) -> None:
    if not 1 <= n <= MAX_LENGTH:
        raise ValueError(f"word length must be in 1..{MAX_LENGTH}, got {n}")


def popcount(x: int) -> int:
    return x.bit_count()


def parity(x: int) -> int:
    return x.bit_count() & 1


def unit(i: int) -> int:
    """The weight-1 word with a one in (0-based) coordinate ``i``."""
    return 1 << i


def support(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def bits_to_str(x: int, n: int) -> str:
    return "".join("1" if x >> i & 1 else "0" for i in range(n))


def str_to_bits(s: str) -> int:
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"not a binary word: {s!r}")
    return x


@dataclass(frozen=True, slots=True)
class BinaryWord:
    """An element of F^n."""

    value: int
    n: int

    def __post_init__(self):
        _check_length(self.n)
        if self.value < 0 or self.value >> self.n:
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def parse(cls, s: str) -> BinaryWord:
        return cls(str_to_bits(s), len(s))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def __str__(self) -> str:
        return bits_to_str(self.value, self.n)

    def __xor__(self, other: BinaryWord) -> BinaryWord:
        _same_length(self, other)
        return BinaryWord(self.value ^ other.value, self.n)


@dataclass(frozen=True, slots=True)
class StarredWord:
    """An element of X^n: one ``*`` plus n-1 binary coordinates.

    ``even`` is the even-weight binary word of the pair {e(w), o(w)}; its bit
    at ``star`` is whatever makes the total weight even.
    """

    star: int
    even: int
    n: int

    def __post_init__(self):
        _check_length(self.n)
        if not 0 <= self.star < self.n:
            raise ValueError(f"star {self.star} out of range for n={self.n}")
        if self.even < 0 or self.even >> self.n or self.even.bit_count() & 1:
            raise ValueError("even member must be an even-weight n-bit word")

    @classmethod
    def from_values(cls, star: int, rest: int, n: int) -> StarredWord:
        """Build from the star index and the values of all other coordinates
        (``rest`` given as an n-bit word whose star bit is ignored)."""
        rest &= ~(1 << star)
        if rest.bit_count() & 1:
            rest |= 1 << star
        return cls(star, rest, n)

    @classmethod
    def parse(cls, s: str) -> StarredWord:
        if s.count("*") != 1:
            raise ValueError(f"starred word needs exactly one '*': {s!r}")
        star = s.index("*")
        return cls.from_values(star, str_to_bits(s.replace("*", "0")), len(s))

    @property
    def odd(self) -> int:
        return self.even ^ (1 << self.star)

    @property
    def ones(self) -> int:
        """Coordinates holding a 1 (the star coordinate excluded)."""
        return self.even & ~(1 << self.star)

    def __str__(self) -> str:
        chars = list(bits_to_str(self.ones, self.n))
        chars[self.star] = "*"
        return "".join(chars)


Word = Union[BinaryWord, StarredWord]


def _same_length(a: Word, b: Word) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")


def _masks(w: Word) -> tuple[int, int]:
    if isinstance(w, StarredWord):
        return w.ones, 1 << w.star
    return w.value, 0


def weight(w: BinaryWord | int) -> int:
    """Number of ones."""
    if isinstance(w, BinaryWord):
        return w.weight
    return w.bit_count()


def starred_distance(ones_a: int, star_a: int, ones_b: int, star_b: int) -> int:
    """Distance on the packed (ones mask, star mask) representation; a star
    differs from 0 and 1 alike, so differing coordinates are the union of
    the ones-difference and the star-difference."""
    return ((ones_a ^ ones_b) | (star_a ^ star_b)).bit_count()


def distance(a: Word, b: Word) -> int:
    """Hamming distance over the alphabet {*, 0, 1}."""
    _same_length(a, b)
    oa, sa = _masks(a)
    ob, sb = _masks(b)
    return starred_distance(oa, sa, ob, sb)


def even_part(w: StarredWord) -> BinaryWord:
    return BinaryWord(w.even, w.n)


def odd_part(w: StarredWord) -> BinaryWord:
    return BinaryWord(w.odd, w.n)


def star_from_pair(a: BinaryWord, b: BinaryWord) -> StarredWord:
    """The starred word whose member pair is {a, b}."""
    _same_length(a, b)
    diff = a.value ^ b.value
    if diff.bit_count() != 1:
        raise ValueError(f"{a} and {b} are not at distance 1")
    even = a.value if a.weight % 2 == 0 else b.value
    return StarredWord(diff.bit_length() - 1, even, a.n)


@dataclass(frozen=True)
class Permutation:
    """A coordinate permutation; ``images[j]`` is where coordinate j goes.

    Acting on a word moves the value at coordinate j to coordinate
    ``images[j]``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        images = list(range(n))
        images[i], images[j] = j, i
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j]

    def __mul__(self, other: Permutation) -> Permutation:
        """Composition: ``(p * q)(j) == p(q(j))``."""
        return Permutation(tuple(self.images[k] for k in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for j, k in enumerate(self.images):
            inv[k] = j
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == k for j, k in enumerate(self.images))

    def apply_bits(self, x: int) -> int:
        out = 0
        images = self.images
        while x:
            low = x & -x
            out |= 1 << images[low.bit_length() - 1]
            x ^= low
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cycle.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        """Cycle notation with 1-based coordinates."""
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(j + 1) for j in c) + ")" for c in cycles)


class BitPermuter:
    """Applies one permutation to many packed words via byte lookup tables."""

    def __init__(self, perm: Permutation):
        self.n = perm.n
        self._tables = []
        for chunk in range(0, perm.n, 8):
            table = [0] * 256
            for byte in range(256):
                out = 0
                for b in range(8):
                    if byte >> b & 1 and chunk + b < perm.n:
                        out |= 1 << perm.images[chunk + b]
                table[byte] = out
            self._tables.append(table)

    def __call__(self, x: int) -> int:
        out = 0
        for table in self._tables:
            out |= table[x & 0xFF]
            x >>= 8
        return out


@dataclass(frozen=True)
class Isometry:
    """The map c -> perm(c + shift) on F^n, extended to X^n member-wise."""

    perm: Permutation
    shift: int = 0

    @classmethod
    def identity(cls, n: int) -> Isometry:
        return cls(Permutation.identity(n), 0)

    @property
    def n(self) -> int:
        return self.perm.n

    def __mul__(self, other: Isometry) -> Isometry:
        """``(g * h)(w) == g(h(w))``."""
        # g(h(c)) = pg(ph(c + sh) + sg) = pg*ph(c + sh + ph^-1(sg))
        shift = other.shift ^ other.perm.inverse().apply_bits(self.shift)
        return Isometry(self.perm * other.perm, shift)

    def inverse(self) -> Isometry:
        # h(c) = p^-1(c) + s undoes p(c + s)
        return Isometry(self.perm.inverse(), self.perm.apply_bits(self.shift))

    def apply_bits(self, x: int) -> int:
        return self.perm.apply_bits(x ^ self.shift)

    def apply_starred(self, star: int, even: int) -> tuple[int, int]:
        """Packed-form action on a starred word: returns (star, even)."""
        image = self.perm.apply_bits(even ^ self.shift)
        new_star = self.perm.images[star]
        if image.bit_count() & 1:
            image ^= 1 << new_star
        return new_star, image


def apply_isometry(g: Isometry, w: Word) -> Word:
    """Image of a binary or starred word under ``g``."""
    if g.n != w.n:
        raise ValueError(f"length mismatch: {g.n} != {w.n}")
    if isinstance(w, StarredWord):
        star, even = g.apply_starred(w.star, w.even)
        return StarredWord(star, even, w.n)
    return BinaryWord(g.apply_bits(w.value), w.n)


def ball_bits(center: int, radius: int, n: int) -> Iterator[int]:
    for r in range(radius + 1):
        for coords in itertools.combinations(range(n), r):
            x = center
            for c in coords:
                x ^= 1 << c
            yield x


def ball(center: BinaryWord, radius: int) -> set[BinaryWord]:
    """All binary words within ``radius`` of ``center``."""
    if not 0 <= radius <= center.n:
        raise ValueError(f"radius must be in 0..{center.n}")
    return {BinaryWord(x, center.n) for x in ball_bits(center.value, radius, center.n)}


def all_binary_words(n: int) -> Iterator[BinaryWord]:
    _check_length(n)
    return (BinaryWord(x, n) for x in range(1 << n))


def all_starred_words(n: int) -> Iterator[StarredWord]:
    """Every element of X^n, ordered by star then even member."""
    _check_length(n)
    for star in range(n):
        for rest in range(1 << (n - 1)):
            # spread n-1 free bits around the star coordinate
            low = rest & ((1 << star) - 1)
            high = (rest >> star) << (star + 1)
            yield StarredWord.from_values(star, low | high, n)


def even_words(n: int) -> list[int]:
    return [x for x in range(1 << n) if not x.bit_count() & 1]


def odd_words(n: int) -> list[int]:
    return [x for x in range(1 << n) if x.bit_count() & 1]


def to_masks(words: Iterable[StarredWord]):
    """Numpy (ones, star) mask arrays for vectorised distance work."""
    import numpy as np

    words = list(words)
    ones = np.fromiter((w.ones for w in words), dtype=np.uint64, count=len(words))
    stars = np.fromiter((1 << w.star for w in words), dtype=np.uint64, count=len(words))
    return ones, stars
