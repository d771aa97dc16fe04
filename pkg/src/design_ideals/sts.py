"""Triple systems: Steiner triple systems, partial systems, trades and Pasch configurations.

Also the construction of 2-(v,3,2) designs that contain a trade with one
block dropped, whose gamma_2 is therefore 3.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .bits import lex_key, mask_of, points_of
from .designs import Design, DesignError

DEFAULT_MAX_STEPS = 200_000
DEFAULT_RESTARTS = 20
BACKTRACK_MAX_V = 15


class CompletionError(RuntimeError):
    """Randomised completion gave up; retry with another seed."""

    def __init__(self, message: str, seed: int):
        super().__init__(f"{message} (seed {seed}; retry with a different --seed)")
        self.seed = seed


def _pairs(t: int) -> list[int]:
    return [mask_of(p) for p in combinations(points_of(t), 2)]


def _as_triple(t) -> int:
    m = t if isinstance(t, int) else mask_of(t)
    if m.bit_count() != 3:
        raise DesignError(f"{points_of(m) if isinstance(t, int) else tuple(t)} is not a triple")
    return m


@dataclass(frozen=True)
class PartialTripleSystem:
    v: int
    triples: tuple[int, ...]

    def __post_init__(self):
        triples = tuple(sorted({_as_triple(t) for t in self.triples}, key=lex_key))
        if len(triples) != len(self.triples):
            raise DesignError("repeated triple")
        object.__setattr__(self, "triples", triples)
        seen: set[int] = set()
        for t in triples:
            if t >> self.v:
                raise DesignError(f"triple {points_of(t)} uses a point >= v={self.v}")
            for p in _pairs(t):
                if p in seen:
                    raise DesignError(f"pair {points_of(p)} lies in two triples")
                seen.add(p)

    @classmethod
    def of(cls, triples: Iterable, v: int | None = None) -> "PartialTripleSystem":
        ts = [_as_triple(t) for t in triples]
        if v is None:
            v = max((t.bit_length() for t in ts), default=0)
        return cls(v, tuple(ts))

    def pair_set(self) -> set[int]:
        return {p for t in self.triples for p in _pairs(t)}

    def foundation(self) -> int:
        out = 0
        for t in self.triples:
            out |= t
        return out

    def __len__(self) -> int:
        return len(self.triples)


@dataclass(frozen=True)
class Trade:
    T1: PartialTripleSystem
    T2: PartialTripleSystem
    # index base of the file the trade was read from; labels are always 0-indexed
    index_base: int = field(default=0, compare=False)

    def __post_init__(self):
        if not is_trade(self.T1, self.T2):
            raise DesignError("not a trade: blocks must be disjoint and cover the same pairs")

    @property
    def v(self) -> int:
        return max(self.T1.v, self.T2.v)


def _triples_of(x) -> list[int]:
    if isinstance(x, PartialTripleSystem):
        return list(x.triples)
    return [_as_triple(t) for t in x]


def is_trade(T1, T2) -> bool:
    a, b = _triples_of(T1), _triples_of(T2)
    try:
        P1, P2 = PartialTripleSystem.of(a), PartialTripleSystem.of(b)
    except DesignError:
        return False
    if not a or set(a) & set(b):
        return False
    return P1.pair_set() == P2.pair_set()


def trade_volume(trade: Trade) -> int:
    return len(trade.T1)


def trade_foundation(trade: Trade) -> tuple[int, ...]:
    return points_of(trade.T1.foundation())


# -- classical Steiner triple systems ----------------------------------------------------

def sts(v: int) -> Design:
    """STS(v): Bose construction for v = 3 (mod 6), Skolem for v = 1 (mod 6)."""
    if v < 7 or v % 6 not in (1, 3):
        raise DesignError(f"a Steiner triple system on v points needs v = 1 or 3 (mod 6), v >= 7; got {v}")
    blocks = _bose(v) if v % 6 == 3 else _skolem(v)
    out = Design(v, 3, tuple(sorted(set(blocks), key=lex_key)), f"sts{v}")
    if out.b != v * (v - 1) // 6:
        raise AssertionError("Steiner triple system construction produced the wrong block count")
    return out


def _bose(v: int) -> list[int]:
    m = v // 3  # 2n+1
    n = (m - 1) // 2

    def op(x: int, y: int) -> int:
        return ((n + 1) * (x + y)) % m

    def lab(x: int, i: int) -> int:
        return x + (i % 3) * m

    blocks = [mask_of((lab(x, 0), lab(x, 1), lab(x, 2))) for x in range(m)]
    for i in range(3):
        for x, y in combinations(range(m), 2):
            blocks.append(mask_of((lab(x, i), lab(y, i), lab(op(x, y), i + 1))))
    return blocks


def _skolem(v: int) -> list[int]:
    m = (v - 1) // 3  # 2n
    n = m // 2
    inf = v - 1

    def op(x: int, y: int) -> int:
        s = (x + y) % m
        return s // 2 if s % 2 == 0 else n + s // 2

    def lab(x: int, i: int) -> int:
        return x + (i % 3) * m

    blocks = [mask_of((lab(x, 0), lab(x, 1), lab(x, 2))) for x in range(n)]
    for i in range(3):
        for x in range(n):
            blocks.append(mask_of((inf, lab(x + n, i), lab(x, i + 1))))
        for x, y in combinations(range(m), 2):
            blocks.append(mask_of((lab(x, i), lab(y, i), lab(op(x, y), i + 1))))
    return blocks


# -- Pasch configurations -------------------------------------------------------------------

def pasch_configurations(design: Design) -> list[tuple[int, int, int, int]]:
    """All 4-sets of blocks of shape {abc, ade, bdf, cef}, each as sorted masks."""
    if design.k != 3:
        raise DesignError("Pasch configurations live in triple systems (k = 3)")
    third: dict[int, list[int]] = defaultdict(list)
    for B in design.blocks:
        for p in _pairs(B):
            third[p].append(B & ~p)
    found = set()
    for B1 in design.blocks:
        for a in points_of(B1):
            abit = 1 << a
            b, c = points_of(B1 & ~abit)
            for B2 in design.blocks:
                if B2 == B1 or not B2 & abit or (B2 & B1) != abit:
                    continue
                d, e = points_of(B2 & ~abit)
                for (p, q), (r, s) in (((b, d), (c, e)), ((b, e), (c, d))):
                    for f1 in third.get((1 << p) | (1 << q), []):
                        if f1 & (B1 | B2):
                            continue
                        if f1 in third.get((1 << r) | (1 << s), []):
                            B3 = (1 << p) | (1 << q) | f1
                            B4 = (1 << r) | (1 << s) | f1
                            found.add(tuple(sorted((B1, B2, B3, B4))))
    return sorted(found, key=lambda cfg: [lex_key(x) for x in cfg])


def pasch_count(design: Design) -> int:
    return len(pasch_configurations(design))


def pasch_trade(config: Sequence[int]) -> Trade:
    """The trade switching a Pasch configuration to the other four triangles on its points."""
    T1 = [_as_triple(t) for t in config]
    pairs = PartialTripleSystem.of(T1).pair_set()
    pts = points_of(mask_of(p for t in T1 for p in points_of(t)))
    T2 = [mask_of(c) for c in combinations(pts, 3)
          if all(mask_of(p) in pairs for p in combinations(c, 2)) and mask_of(c) not in T1]
    v = max(pts) + 1
    return Trade(PartialTripleSystem.of(T1, v), PartialTripleSystem.of(T2, v))


# -- completion of partial systems -------------------------------------------------------------

class _State:
    def __init__(self, v: int):
        self.v = v
        self.block_of: dict[int, int] = {}  # pair -> block
        self.blocks: set[int] = set()
        self.free = [set(range(v)) - {x} for x in range(v)]  # uncovered partners

    def add(self, t: int) -> None:
        self.blocks.add(t)
        for p in _pairs(t):
            self.block_of[p] = t
            x, y = points_of(p)
            self.free[x].discard(y)
            self.free[y].discard(x)

    def remove(self, t: int) -> None:
        self.blocks.discard(t)
        for p in _pairs(t):
            del self.block_of[p]
            x, y = points_of(p)
            self.free[x].add(y)
            self.free[y].add(x)


def _hill_climb(v: int, fixed: list[int], forbidden: set[int], rng: random.Random,
                max_steps: int) -> set[int] | None:
    st = _State(v)
    for t in fixed:
        st.add(t)
    fixed_set = set(fixed)
    target = v * (v - 1) // 6
    live = [x for x in range(v) if st.free[x]]
    for _ in range(max_steps):
        if len(st.blocks) == target:
            return st.blocks
        live = [x for x in live if st.free[x]]
        if not live:
            return None
        x = rng.choice(live)
        partners = sorted(st.free[x])
        if len(partners) < 2:
            return None
        y, z = rng.sample(partners, 2)
        t = (1 << x) | (1 << y) | (1 << z)
        if t in forbidden:
            continue
        yz = (1 << y) | (1 << z)
        old = st.block_of.get(yz)
        if old is None:
            st.add(t)
        elif old not in fixed_set:
            st.remove(old)
            st.add(t)
            w = points_of(old & ~yz)[0]
            if w not in live:
                live.append(w)
        for p in (y, z):
            if st.free[p] and p not in live:
                live.append(p)
    return st.blocks if len(st.blocks) == target else None


def _backtrack(v: int, fixed: list[int], forbidden: set[int], node_cap: int) -> set[int] | None:
    st = _State(v)
    for t in fixed:
        st.add(t)
    target = v * (v - 1) // 6
    nodes = 0

    def solve() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            return False
        if len(st.blocks) == target:
            return True
        x = next(i for i in range(v) if st.free[i])
        y = min(st.free[x])
        for z in sorted(st.free[x] & st.free[y]):
            t = (1 << x) | (1 << y) | (1 << z)
            if t in forbidden:
                continue
            st.add(t)
            if solve():
                return True
            st.remove(t)
        return False

    return set(st.blocks) if solve() else None


def complete_partial_sts(P, v: int, seed: int = 0, forbidden: Iterable = (),
                         max_steps: int = DEFAULT_MAX_STEPS,
                         restarts: int = DEFAULT_RESTARTS, name: str = "") -> Design:
    """A 2-(v,3,1) design containing every triple of P and none of ``forbidden``.

    Randomised hill-climbing; attempt ``a`` uses the generator seeded by
    (seed, a), so the result depends only on ``seed``.  Small v falls back to
    exhaustive backtracking.
    """
    fixed = _triples_of(P)
    PartialTripleSystem.of(fixed, v)  # validates pair-disjointness and range
    if v < 7 or v % 6 not in (1, 3):
        raise DesignError(f"v must be 1 or 3 (mod 6) and at least 7; got {v}")
    found = mask_of(p for t in fixed for p in points_of(t)).bit_count()
    if fixed and v < 2 * found + 1:
        raise DesignError(f"embedding needs v >= 2*{found}+1 = {2 * found + 1}; got {v}")
    forb = {_as_triple(t) for t in forbidden}
    if forb & set(fixed):
        raise DesignError("a prescribed triple is also forbidden")
    for attempt in range(restarts):
        rng = random.Random(f"{seed}:{attempt}")
        blocks = _hill_climb(v, fixed, forb, rng, max_steps)
        if blocks is not None:
            break
    else:
        blocks = _backtrack(v, fixed, forb, 2_000_000) if v <= BACKTRACK_MAX_V else None
        if blocks is None:
            raise CompletionError(f"no completion to STS({v}) after {restarts} restarts", seed)
    out = Design(v, 3, tuple(sorted(blocks, key=lex_key)), name or f"sts{v}-completion",
                 {"seed": seed})
    missing = set(fixed) - out.block_set
    if missing or out.block_set & forb:
        raise AssertionError("completion violated its constraints")
    return out


# -- 2-(v,3,2) designs with gamma_2 = 3 ------------------------------------------------------

def build_2v32(trade: Trade, B, v: int, seed: int = 0) -> Design:
    """2-(v,3,2) design containing T1 and T2 - {B} but not B (B a triple of T2).

    T1 is completed to one STS(v); T2 with B = {h,i,j} replaced by {i,j,l}, l a
    new point, is completed to another, avoiding the first one's triples so the
    union has no repeated block.  h is the least point of B and l the least
    point outside the foundation.
    """
    Bm = _as_triple(B)
    if Bm not in trade.T2.triples:
        raise DesignError(f"{points_of(Bm)} is not a triple of T2")
    found = trade.T1.foundation()
    n = found.bit_count()
    if v % 6 not in (1, 3) or v < 2 * n + 3:
        raise DesignError(f"need v = 1 or 3 (mod 6) and v >= 2n+3 = {2 * n + 3} (n = {n}); got {v}")
    if found >> v:
        raise DesignError("trade uses points outside range(v)")
    h = points_of(Bm)[0]
    ell = next(p for p in range(v) if not found >> p & 1)
    B_star = (Bm & ~(1 << h)) | (1 << ell)
    T2_star = [t for t in trade.T2.triples if t != Bm] + [B_star]
    D1 = complete_partial_sts(trade.T1.triples, v, seed=seed)
    D2 = complete_partial_sts(T2_star, v, seed=seed + 1, forbidden=D1.blocks)
    blocks = sorted(D1.block_set | D2.block_set, key=lex_key)
    if len(blocks) != D1.b + D2.b:
        raise AssertionError("the two Steiner systems share a triple")
    if Bm in D1.block_set or Bm in D2.block_set:
        raise AssertionError("dropped block appears in the union")
    return Design(v, 3, tuple(blocks), f"2v32-v{v}-s{seed}",
                  {"dropped_block": points_of(Bm), "seed": seed, "ell": ell, "h": h})


# -- trade file format -----------------------------------------------------------------------

DEFAULT_TRADE = (
    ((1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 5, 6)),
    ((1, 2, 4), (1, 3, 5), (2, 3, 6), (4, 5, 6)),
)


def default_trade() -> Trade:
    """The volume-4 trade on {1..6}, shifted to 0-indexing."""
    T1 = [[p - 1 for p in t] for t in DEFAULT_TRADE[0]]
    T2 = [[p - 1 for p in t] for t in DEFAULT_TRADE[1]]
    return Trade(PartialTripleSystem.of(T1, 6), PartialTripleSystem.of(T2, 6))


def parse_trade(text: str) -> Trade:
    base = 0
    sections: dict[str, list[list[int]]] = {"T1": [], "T2": []}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("index-base"):
            base = int(line.split(":", 1)[1] if ":" in line else line.split()[1])
            continue
        if line.rstrip(":") in sections and line.endswith(":"):
            current = line.rstrip(":")
            continue
        if current is None:
            raise DesignError("trade file: triple before a 'T1:' or 'T2:' header")
        sections[current].append([int(x) - base for x in line.split()])
    if base not in (0, 1):
        raise DesignError("index base must be 0 or 1")
    for name, ts in sections.items():
        if any(len(t) != 3 or min(t) < 0 for t in ts):
            raise DesignError(f"trade file: bad triple in {name}")
    v = 1 + max(p for ts in sections.values() for t in ts for p in t)
    return Trade(PartialTripleSystem.of(sections["T1"], v), PartialTripleSystem.of(sections["T2"], v), base)


def read_trade(path: str | Path) -> Trade:
    return parse_trade(Path(path).read_text(encoding="utf-8"))


def write_trade(trade: Trade, path: str | Path) -> None:
    lines = ["T1:"] + [" ".join(map(str, points_of(t))) for t in trade.T1.triples]
    lines += ["T2:"] + [" ".join(map(str, points_of(t))) for t in trade.T2.triples]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_triple(text: str, base: int = 0) -> int:
    pts = [int(x) - base for x in text.replace(",", " ").split()]
    return _as_triple(pts)
