"""Coordinate-permutation symmetries of binary codes and orbits under them.

Symmetries are found by backtracking over coordinate images.  Two kinds of
pruning keep this cheap: per-coordinate fingerprints (how many codewords of
each weight have a one there) restrict which coordinates may be swapped, and
the minimum-weight codewords are treated as blocks that a symmetry must map
to blocks.  Once all but one point of a block has an image, the last point
can only go where it completes the image to a block.

The group order comes from a stabilizer chain: for each base point, every
possible image is tested for an extension that fixes the earlier base
points, and the generators found on the way form a strong generating set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .binary_codes import BinaryCode
from .words import BitPermuter, Permutation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetryGroup:
    n: int
    generators: tuple[Permutation, ...]
    order: int
    base: tuple[int, ...]
    orbit_sizes: tuple[int, ...]

    def point_orbit(self, point: int) -> set[int]:
        return _closure({point}, self.generators, lambda g, p: g(p))

    def stabilizer_order(self) -> int:
        """Order of the pointwise stabilizer of the first base point."""
        return self.order // self.orbit_sizes[0]

    def __str__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"order {self.order}: <{gens}>"


def _closure(seeds: Iterable, gens: Sequence[Permutation], act) -> set:
    seen = set(seeds)
    frontier = list(seen)
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = act(g, p)
            if q not in seen:
                seen.add(q)
                frontier.append(q)
    return seen


class _Backtracker:
    def __init__(self, code: BinaryCode):
        self.n = n = code.n
        self.words = code.words
        weights = {}
        for w in code.words:
            weights.setdefault(w.bit_count(), []).append(w)
        self.fingerprint = [
            tuple(sum(w >> j & 1 for w in weights[k]) for k in sorted(weights)) for j in range(n)
        ]
        nonzero = [k for k in sorted(weights) if k > 0]
        self.blocks: list[int] = weights[nonzero[0]] if nonzero else []
        self.block_set = set(self.blocks)
        self.completions: dict[int, int] = {}
        self.blocks_at: list[list[int]] = [[] for _ in range(n)]
        for b in self.blocks:
            for j in range(n):
                if b >> j & 1:
                    self.completions[b ^ (1 << j)] = self.completions.get(b ^ (1 << j), 0) | (1 << j)
                    self.blocks_at[j].append(b)
        self.full = (1 << n) - 1
        self.leaves = 0

    def compatible(self, j: int) -> int:
        fp = self.fingerprint[j]
        return sum(1 << k for k in range(self.n) if self.fingerprint[k] == fp)

    def _assign(self, f: list[int], dom: list[int], j: int, k: int) -> bool:
        """Set f[j] = k and propagate; False on contradiction."""
        queue = [(j, k)]
        while queue:
            j, k = queue.pop()
            if f[j] == k:
                continue
            if f[j] != -1 or not dom[j] >> k & 1:
                return False
            f[j] = k
            dom[j] = 1 << k
            bit = 1 << k
            for u in range(self.n):
                if f[u] == -1 and dom[u] & bit:
                    dom[u] &= ~bit
                    if not dom[u]:
                        return False
            for b in self.blocks_at[j]:
                image = 0
                missing = -1
                for p in _bits(b):
                    if f[p] == -1:
                        if missing != -1:
                            missing = -2
                            break
                        missing = p
                    else:
                        image |= 1 << f[p]
                if missing == -2:
                    continue
                if missing == -1:
                    if image not in self.block_set:
                        return False
                    continue
                allowed = dom[missing] & self.completions.get(image, 0)
                if not allowed:
                    return False
                if allowed != dom[missing]:
                    dom[missing] = allowed
                    if allowed & (allowed - 1) == 0:
                        queue.append((missing, allowed.bit_length() - 1))
        return True

    def find(self, fixed: dict[int, int]) -> Permutation | None:
        """Some symmetry extending the partial map ``fixed``, or None."""
        f = [-1] * self.n
        dom = [self.compatible(j) for j in range(self.n)]
        for j, k in fixed.items():
            if not self._assign(f, dom, j, k):
                return None
        return self._dfs(f, dom)

    def _dfs(self, f: list[int], dom: list[int]) -> Permutation | None:
        free = [j for j in range(self.n) if f[j] == -1]
        if not free:
            self.leaves += 1
            perm = Permutation(tuple(f))
            apply = BitPermuter(perm)
            if all(apply(w) in self.words for w in self.words):
                return perm
            return None
        j = min(free, key=lambda u: (dom[u].bit_count(), u))
        for k in _bits(dom[j]):
            f2, dom2 = f[:], dom[:]
            if self._assign(f2, dom2, j, k):
                found = self._dfs(f2, dom2)
                if found is not None:
                    return found
        return None


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def symmetries(c: BinaryCode, base: Sequence[int] | None = None) -> SymmetryGroup:
    """Generators and order of the group of coordinate permutations fixing ``c``."""
    if 0 not in c.words:
        raise ValueError("symmetries expects a normalised code containing the zero word")
    n = c.n
    base = tuple(base) if base is not None else tuple(range(n))
    if sorted(base) != list(range(n)):
        raise ValueError("base must list every coordinate once")
    bt = _Backtracker(c)
    gens: list[Permutation] = []
    sizes = [1] * n
    for k in reversed(range(n)):
        b = base[k]
        prefix = {p: p for p in base[:k]}
        orbit = _closure({b}, gens, lambda g, p: g(p))
        for p in _bits(bt.compatible(b)):
            if p in orbit or p in prefix:
                continue
            g = bt.find({**prefix, b: p})
            if g is not None:
                gens.append(g)
                orbit = _closure({b}, gens, lambda g, p: g(p))
        sizes[k] = len(orbit)
    order = math.prod(sizes)
    log.debug("symmetry group order %d from %d generators (%d leaves)", order, len(gens), bt.leaves)
    return SymmetryGroup(n, tuple(gens), order, base, tuple(sizes))


def fixes(perm: Permutation, c: BinaryCode) -> bool:
    apply = BitPermuter(perm)
    return all(apply(w) in c.words for w in c.words)


@dataclass(frozen=True)
class Orbit:
    representative: int
    members: tuple[int, ...]


def orbits(group: SymmetryGroup, points: Iterable[int]) -> list[Orbit]:
    """Partition packed words into orbits; each representative is the
    numerically least member (coordinate 1 is the lowest bit)."""
    remaining = set(points)
    appliers = [BitPermuter(g) for g in group.generators]
    out = []
    while remaining:
        start = min(remaining)
        orbit = _closure({start}, appliers, lambda g, w: g(w))
        if not orbit <= remaining:
            raise ValueError("point set is not closed under the group")
        remaining -= orbit
        out.append(Orbit(min(orbit), tuple(sorted(orbit))))
    return sorted(out, key=lambda o: o.representative)
