"""Designs: k-uniform hypergraphs on points 0..v-1, with blocks stored as bitmasks."""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .bits import lex_key, mask_of, points_of, submasks_of_size, subsets_of_size
from .config import check_binomial
from .geometry import affine_lines, projective_subspaces

MAX_POINTS = 1024


class DesignError(ValueError):
    pass


def _as_mask(block) -> int:
    if isinstance(block, int):
        return block
    return mask_of(block)


@dataclass(frozen=True)
class Design:
    v: int
    k: int
    blocks: tuple[int, ...]
    name: str = ""
    # provenance such as ("derived", parent_name, point); not part of identity
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        v, k = self.v, self.k
        if not 0 < k < v:
            raise DesignError(f"need 0 < k < v, got v={v}, k={k}")
        if v > MAX_POINTS:
            raise DesignError(f"at most {MAX_POINTS} points supported")
        blocks = tuple(_as_mask(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        limit = 1 << v
        for b in blocks:
            if b.bit_count() != k or b >= limit:
                raise DesignError(f"block {points_of(b)} is not a {k}-subset of range({v})")
        if len(set(blocks)) != len(blocks):
            raise DesignError("blocks must be pairwise distinct")

    @classmethod
    def from_blocks(cls, v: int, blocks: Iterable, name: str = "", **meta) -> "Design":
        masks = [_as_mask(b) for b in blocks]
        if not masks:
            raise DesignError("a design needs at least one block")
        k = masks[0].bit_count()
        return cls(v, k, tuple(masks), name, dict(meta))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_set(self) -> frozenset[int]:
        return frozenset(self.blocks)

    def is_block(self, mask: int) -> bool:
        return mask in self.block_set

    def with_name(self, name: str) -> "Design":
        return Design(self.v, self.k, self.blocks, name, self.meta)

    def point_lists(self) -> list[tuple[int, ...]]:
        return [points_of(b) for b in self.blocks]

    def sorted(self) -> "Design":
        return Design(self.v, self.k, tuple(sorted(self.blocks, key=lex_key)), self.name, self.meta)

    def canonical_text(self, with_name: bool = True) -> str:
        lines = []
        if with_name and self.name:
            lines.append(f"# name: {self.name}")
        if with_name and self.meta.get("dropped_block") is not None:
            lines.append("# dropped_block: " + " ".join(map(str, self.meta["dropped_block"])))
        lines.append(f"{self.v} {self.k} 0")
        for pts in sorted(self.point_lists()):
            lines.append(" ".join(map(str, pts)))
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text(with_name=False).encode()).hexdigest()


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    lam: int
    lambdas: tuple[int, ...]

    @property
    def is_design(self) -> bool:
        return self.t >= 1

    def __str__(self) -> str:
        if not self.is_design:
            return f"hypergraph (v={self.v}, k={self.k}, b={self.lambdas[0]})"
        return f"{self.t}-({self.v},{self.k},{self.lam})"


def strength(design: Design, t_max: int | None = None) -> DesignParams:
    """Largest t <= t_max with every t-subset in a constant number of blocks.

    A hypergraph whose point degrees are not constant comes back with t = 0
    (``is_design`` False) and lambdas = [b].
    """
    v, k = design.v, design.k
    if t_max is None:
        t_max = k
    lambdas = [design.b]
    for s in range(1, min(t_max, k) + 1):
        total = check_binomial(v, s, "strength")
        counts: Counter[int] = Counter()
        for blk in design.blocks:
            counts.update(submasks_of_size(blk, s))
        if len(counts) != total:
            break
        values = set(counts.values())
        if len(values) != 1:
            break
        lambdas.append(values.pop())
    t = len(lambdas) - 1
    return DesignParams(t, v, k, lambdas[-1], tuple(lambdas))


def lambda_ladder(t: int, v: int, k: int, lam: int) -> list[int]:
    """lambda_s for s = 0..t from lambda_s * C(k-s, t-s) = lam * C(v-s, t-s)."""
    out = []
    for s in range(t + 1):
        num = lam * comb(v - s, t - s)
        den = comb(k - s, t - s)
        if num % den:
            raise DesignError(f"parameters {t}-({v},{k},{lam}) are not admissible at s={s}")
        out.append(num // den)
    return out


def complete_design(v: int, k: int) -> Design:
    if not 0 < k < v:
        raise DesignError("need 0 < k < v")
    check_binomial(v, k, "complete_design")
    return Design(v, k, tuple(subsets_of_size(v, k)), f"K{v}_{k}")


FANO_BLOCKS = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2)]


def fano() -> Design:
    """The Fano plane on Z_7 with blocks {i, i+1, i+3}."""
    return Design.from_blocks(7, FANO_BLOCKS, "fano")


def projective_design(d: int, e: int, q: int) -> Design:
    """Points and e-dimensional subspaces of PG(d,q)."""
    if not 1 <= e < d:
        raise DesignError("need 1 <= e < d")
    blocks = projective_subspaces(d, e, q)
    v = (q ** (d + 1) - 1) // (q - 1)
    k = (q ** (e + 1) - 1) // (q - 1)
    return Design(v, k, tuple(blocks), f"PG({d},{q})_{e}")


def lines_of_PG(d: int, q: int) -> list[int]:
    return projective_subspaces(d, 1, q)


def affine_design(n: int, q: int) -> Design:
    """Points and lines of AG(n,q)."""
    pts, lines = affine_lines(n, q)
    return Design(len(pts), q, tuple(lines), f"AG({n},{q})")


def _relabel_without(v: int, i: int) -> dict[int, int]:
    return {p: (p if p < i else p - 1) for p in range(v) if p != i}


def _apply_map(mask: int, relabel: dict[int, int]) -> int:
    return mask_of(relabel[p] for p in points_of(mask))


def derived_design(design: Design, i: int) -> tuple[Design, dict[int, int]]:
    """Blocks through ``i`` with ``i`` removed; returns the design and old->new labels."""
    if not 0 <= i < design.v:
        raise DesignError(f"point {i} out of range")
    relabel = _relabel_without(design.v, i)
    bit = 1 << i
    blocks = [_apply_map(b & ~bit, relabel) for b in design.blocks if b & bit]
    if not blocks:
        raise DesignError(f"no block contains point {i}")
    name = f"der({design.name},{i})"
    out = Design(design.v - 1, design.k - 1, tuple(sorted(blocks, key=lex_key)), name,
                 {"parent": design.name, "op": "derived", "point": i})
    return out, relabel


def residual_design(design: Design, i: int) -> tuple[Design, dict[int, int]]:
    """Blocks avoiding ``i``, on the remaining v-1 points."""
    if not 0 <= i < design.v:
        raise DesignError(f"point {i} out of range")
    relabel = _relabel_without(design.v, i)
    bit = 1 << i
    blocks = [_apply_map(b, relabel) for b in design.blocks if not b & bit]
    if not blocks:
        raise DesignError(f"every block contains point {i}")
    name = f"res({design.name},{i})"
    out = Design(design.v - 1, design.k, tuple(sorted(blocks, key=lex_key)), name,
                 {"parent": design.name, "op": "residual", "point": i})
    return out, relabel


def intersection_distribution(design: Design, B) -> dict[int, int]:
    """Number of blocks B' (B included) with |B & B'| = i, for i = 0..k."""
    B = _as_mask(B)
    if not design.is_block(B):
        raise DesignError(f"{points_of(B)} is not a block")
    dist = {i: 0 for i in range(design.k + 1)}
    for other in design.blocks:
        dist[(B & other).bit_count()] += 1
    return dist


def pairwise_distribution(design: Design, B1, B2) -> dict[tuple[int, int], int]:
    B1, B2 = _as_mask(B1), _as_mask(B2)
    for B in (B1, B2):
        if not design.is_block(B):
            raise DesignError(f"{points_of(B)} is not a block")
    k = design.k
    dist = {(i, j): 0 for i in range(k + 1) for j in range(k + 1)}
    for other in design.blocks:
        dist[((B1 & other).bit_count(), (B2 & other).bit_count())] += 1
    return dist


def max_intersection(design: Design) -> int:
    """Largest |B & B'| over distinct blocks (0 for a single block)."""
    best = 0
    blocks = design.blocks
    for a in range(len(blocks)):
        ba = blocks[a]
        for c in range(a + 1, len(blocks)):
            n = (ba & blocks[c]).bit_count()
            if n > best:
                best = n
    return best


def is_symmetric(design: Design) -> bool:
    return design.b == design.v


# -- file format ------------------------------------------------------------

def parse_design(text: str, name: str = "") -> Design:
    rows: list[list[int]] = []
    header: list[int] | None = None
    meta: dict = {}
    for raw in text.splitlines():
        line, _, comment = raw.partition("#")
        comment = comment.strip()
        if comment.startswith("name:") and not name:
            name = comment[5:].strip()
        elif comment.startswith("dropped_block:"):
            meta["dropped_block"] = tuple(int(x) for x in comment[14:].split())
        line = line.strip()
        if not line:
            continue
        nums = [int(tok) for tok in line.split()]
        if header is None:
            if len(nums) not in (2, 3):
                raise DesignError("header must be 'v k [index-base]'")
            header = nums
        else:
            rows.append(nums)
    if header is None:
        raise DesignError("empty design file")
    v, k = header[0], header[1]
    base = header[2] if len(header) == 3 else 0
    if base not in (0, 1):
        raise DesignError("index base must be 0 or 1")
    blocks = []
    for r in rows:
        pts = [p - base for p in r]
        if any(p < 0 or p >= v for p in pts):
            raise DesignError(f"block {r} has a point outside the index range")
        if len(set(pts)) != len(pts):
            raise DesignError(f"block {r} repeats a point")
        blocks.append(mask_of(pts))
    if "dropped_block" in meta:
        meta["dropped_block"] = tuple(p - base for p in meta["dropped_block"])
    return Design(v, k, tuple(sorted(blocks, key=lex_key)), name, meta)


def read_design(path: str | Path) -> Design:
    p = Path(path)
    design = parse_design(p.read_text(encoding="utf-8"))
    return design if design.name else design.with_name(p.stem)


def write_design(design: Design, path: str | Path) -> None:
    Path(path).write_text(design.canonical_text(), encoding="utf-8")


def blocks_from_points(blocks: Sequence[Sequence[int]]) -> list[int]:
    return [mask_of(b) for b in blocks]
