"""Witt designs: the Golay-code 5-(24,8,1) chain, the M12 orbit design and the 3-(10,4,1) design."""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Sequence

from .bits import lex_key, mask_of, points_of
from .designs import Design, DesignError, derived_design
from .geometry import affine_lines

GROUP_ORDER_CAP = 200_000


class BinaryCode:
    """A binary linear code given by independent generator rows (bitmasks of length n)."""

    def __init__(self, n: int, rows: Sequence[int]):
        self.n = n
        self.rows = tuple(rows)
        if _gf2_rank(self.rows) != len(self.rows):
            raise ValueError("generator rows are not linearly independent over GF(2)")

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return 1 << len(self.rows)

    def codewords(self) -> Iterable[int]:
        # Gray-code walk: one row XOR per codeword
        word = 0
        yield word
        for i in range(1, 1 << len(self.rows)):
            word ^= self.rows[(i & -i).bit_length() - 1]
            yield word

    def weight_enumerator(self) -> dict[int, int]:
        dist: dict[int, int] = {}
        for w in self.codewords():
            c = w.bit_count()
            dist[c] = dist.get(c, 0) + 1
        return dict(sorted(dist.items()))

    def minimum_weight(self) -> int:
        return min(w for w in self.weight_enumerator() if w > 0)

    def is_self_orthogonal(self) -> bool:
        return all((a & b).bit_count() % 2 == 0 for a in self.rows for b in self.rows)

    def contains(self, word: int) -> bool:
        return _gf2_rank(self.rows + (word,)) == len(self.rows)


def _gf2_rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


# first row of the 11x11 circulant inside the bordered [0 1; 1 A] block
_CIRCULANT_ROW = "11011100010"


def _golay_rows() -> list[int]:
    first = [int(c) for c in _CIRCULANT_ROW]
    right = [[0] + [1] * 11]
    for r in range(11):
        right.append([1] + [first[(c - r) % 11] for c in range(11)])
    rows = []
    for i in range(12):
        bits = [1 if j == i else 0 for j in range(12)] + right[i]
        rows.append(mask_of(j for j, b in enumerate(bits) if b))
    return rows


@lru_cache(maxsize=None)
def golay_code() -> BinaryCode:
    """The extended binary Golay code [24,12,8] from a fixed [I | B] generator matrix."""
    code = BinaryCode(24, _golay_rows())
    if not code.is_self_orthogonal():
        raise AssertionError("built-in Golay generator matrix is not self-orthogonal")
    return code


@lru_cache(maxsize=None)
def witt24() -> Design:
    blocks = [w for w in golay_code().codewords() if w.bit_count() == 8]
    if len(blocks) != 759:
        raise DesignError(f"expected 759 weight-8 codewords, found {len(blocks)}")
    return Design(24, 8, tuple(sorted(blocks, key=lex_key)), "witt24")


@lru_cache(maxsize=None)
def witt23() -> Design:
    return derived_design(witt24(), 0)[0].with_name("witt23")


@lru_cache(maxsize=None)
def witt22() -> Design:
    return derived_design(witt23(), 0)[0].with_name("witt22")


# -- permutation groups -----------------------------------------------------------

def perm_from_cycles(n: int, cycles: Sequence[Sequence[int]], base: int = 0) -> tuple[int, ...]:
    p = list(range(n))
    for cyc in cycles:
        pts = [c - base for c in cyc]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a] = b
    if sorted(p) != list(range(n)):
        raise ValueError("cycles do not define a permutation")
    return tuple(p)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Apply p first, then q."""
    return tuple(q[x] for x in p)


def apply_to_mask(p: Sequence[int], mask: int) -> int:
    return mask_of(p[x] for x in points_of(mask))


class PermGroup:
    """Permutation group on 0..degree-1 given by generators; elements enumerated on demand."""

    def __init__(self, degree: int, generators: Sequence[Sequence[int]], cap: int = GROUP_ORDER_CAP):
        self.degree = degree
        self.generators = tuple(tuple(g) for g in generators)
        for g in self.generators:
            if sorted(g) != list(range(degree)):
                raise ValueError("generator is not a permutation of 0..degree-1")
        self.cap = cap
        self._elements: list[tuple[int, ...]] | None = None

    def elements(self) -> list[tuple[int, ...]]:
        if self._elements is None:
            ident = tuple(range(self.degree))
            seen = {ident}
            order = [ident]
            queue = deque([ident])
            while queue:
                e = queue.popleft()
                for g in self.generators:
                    h = compose(e, g)
                    if h not in seen:
                        seen.add(h)
                        order.append(h)
                        if len(order) > self.cap:
                            raise RuntimeError(f"group order exceeds the cap of {self.cap}")
                        queue.append(h)
            self._elements = order
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def __contains__(self, p) -> bool:
        return tuple(p) in set(self.elements())

    def orbit(self, item, action):
        """Orbit of ``item`` under ``action(perm, item)``, in BFS order."""
        seen = {item}
        out = [item]
        queue = deque([item])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = action(g, x)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    queue.append(y)
        return out

    def set_orbit(self, mask: int) -> list[int]:
        return self.orbit(mask, apply_to_mask)

    def tuple_orbit_size(self, pts: Sequence[int]) -> int:
        return len(self.orbit(tuple(pts), lambda g, t: tuple(g[x] for x in t)))


M12_GENERATORS_1 = (
    ((1, 4), (3, 10), (5, 11), (6, 12)),
    ((1, 8, 9), (2, 3, 4), (5, 12, 11), (6, 10, 7)),
)


@lru_cache(maxsize=None)
def m12_group() -> PermGroup:
    gens = [perm_from_cycles(12, cyc, base=1) for cyc in M12_GENERATORS_1]
    return PermGroup(12, gens)


@lru_cache(maxsize=None)
def witt12() -> Design:
    start = mask_of(p - 1 for p in (1, 2, 3, 4, 5, 9))
    orbit = m12_group().set_orbit(start)
    if len(orbit) != 132:
        raise DesignError(f"M12 orbit has {len(orbit)} sets, expected 132")
    return Design(12, 6, tuple(sorted(orbit, key=lex_key)), "witt12")


@lru_cache(maxsize=None)
def witt11() -> Design:
    return derived_design(witt12(), 0)[0].with_name("witt11")


WITT10_EXTRA = (
    "1245 1278 1269 1346 1379 1358 2356 2389 2347 "
    "4578 4679 5689 1567 2468 3459 1489 2579 3678"
).split()


def witt10_label(x: int, y: int) -> int:
    """Point number of (x, y) in F_3^2; 0 is the point at infinity."""
    return 1 + x + 3 * y


@lru_cache(maxsize=None)
def witt10() -> Design:
    pts, lines = affine_lines(2, 3)
    relabel = {i: witt10_label(a, b) for i, (a, b) in enumerate(pts)}
    blocks = [1 | mask_of(relabel[p] for p in points_of(ln)) for ln in lines]
    blocks += [mask_of(int(c) for c in word) for word in WITT10_EXTRA]
    return Design(10, 4, tuple(sorted(blocks, key=lex_key)), "witt10")
