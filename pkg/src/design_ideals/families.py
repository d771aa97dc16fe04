"""Generator families for the vanishing ideal of a design's blocks.

Every builder returns a ``GeneratorSet`` that includes the trivial generators
G0, so that a zero-set check on it decides whether it generates the ideal.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .bits import lex_key, mask_of, points_of, subsets_of_size
from .config import check_binomial
from .designs import Design, DesignError, projective_design, strength
from .geometry import projective_subspaces
from .poly import (
    GeneratorSet,
    LinearForm,
    MultilinearPoly,
    elementary_symmetric,
    g_BJ,
    trivial_polys,
)
from .witt import m12_group, witt12, witt22, witt23, witt24


def _with_g0(design: Design, extra: list, family: str, **notes) -> GeneratorSet:
    return GeneratorSet(design.v, design.k, trivial_polys(design.v, design.k) + extra,
                        family, design.name, notes)


# -- general hypergraphs -----------------------------------------------------------

def gY_generators(design: Design) -> GeneratorSet:
    """g_Y = x^Y (x^{J,1} - 1) for every (k-1)-set Y, J the completions of Y to blocks."""
    v, k = design.v, design.k
    check_binomial(v, k - 1, "gY_generators")
    completions: dict[int, int] = defaultdict(int)
    for B in design.blocks:
        for p in points_of(B):
            completions[B & ~(1 << p)] |= 1 << p
    polys = []
    for Y in subsets_of_size(v, k - 1):
        J = completions.get(Y, 0)
        terms = [(Y | (1 << j), 1) for j in points_of(J)]
        terms.append((Y, -1))
        polys.append(MultilinearPoly(v, terms))
    return _with_g0(design, polys, "gY")


def _t_cover(design: Design, t: int) -> dict[int, int]:
    """t-subset -> number of blocks containing it (only covered ones)."""
    counts: dict[int, int] = defaultdict(int)
    for B in design.blocks:
        for T in combinations(points_of(B), t):
            counts[mask_of(T)] += 1
    return counts


def _steiner_polys(design: Design, t: int) -> list[MultilinearPoly]:
    return [g_BJ(design.v, B, mask_of(T), design.k)
            for B in design.blocks for T in combinations(points_of(B), t)]


def steiner_generators(design: Design, t: int) -> GeneratorSet:
    """G0 and g_{B,T} = x^{B,t} - C(k,t) x^T for a t-(v,k,1) design."""
    if not 1 <= t <= design.k:
        raise DesignError("need 1 <= t <= k")
    params = strength(design, t)
    if params.t < t or params.lam != 1:
        raise DesignError(f"{design.name or 'design'} is not a {t}-(v,k,1) design ({params})")
    return _with_g0(design, _steiner_polys(design, t), "steiner", t=t)


def partial_design_generators(design: Design, t: int) -> GeneratorSet:
    """Steiner generators plus x^T for each t-set T lying in no block."""
    if not 1 <= t <= design.k:
        raise DesignError("need 1 <= t <= k")
    counts = _t_cover(design, t)
    if any(c > 1 for c in counts.values()):
        raise DesignError(f"some {t}-set lies in more than one block")
    check_binomial(design.v, t, "partial_design_generators")
    polys = _steiner_polys(design, t)
    polys += [MultilinearPoly.monomial(design.v, T)
              for T in subsets_of_size(design.v, t) if T not in counts]
    return _with_g0(design, polys, "partial", t=t)


# -- symmetric designs and geometries ------------------------------------------------

def symbibd_generators(design: Design) -> GeneratorSet:
    """f_ij = (k - lam) x_i x_j - sum_{B > i,j} x^{B,1} + lam^2 for a symmetric 2-design."""
    v, k = design.v, design.k
    if design.b != v:
        raise DesignError(f"not symmetric: {design.b} blocks on {v} points (Fisher: b >= v)")
    params = strength(design, 2)
    if params.t < 2:
        raise DesignError("symmetric generators need a 2-design")
    lam = params.lam
    if k - lam <= 0 or k >= v - 1:
        raise DesignError("symmetric design is trivial")
    through: dict[int, list[int]] = defaultdict(list)
    for B in design.blocks:
        for pair in combinations(points_of(B), 2):
            through[mask_of(pair)].append(B)
    polys = []
    for i, j in combinations(range(v), 2):
        pair = (1 << i) | (1 << j)
        terms: list[tuple[int, int]] = [(pair, k - lam), (0, lam * lam)]
        for B in through[pair]:
            terms += [(1 << p, -1) for p in points_of(B)]
        polys.append(MultilinearPoly(v, terms))
    return _with_g0(design, polys, "symbibd", lam=lam)


def projective_generators(d: int, e: int, q: int) -> GeneratorSet:
    """G0 and g_{L,J} = x^{L,2} - C(q+1,2) x^J over all lines L and pairs J of L."""
    design = projective_design(d, e, q)
    c = comb(q + 1, 2)
    polys = []
    for L in projective_subspaces(d, 1, q):
        sym = elementary_symmetric(design.v, L, 2)
        for J in combinations(points_of(L), 2):
            polys.append(sym - MultilinearPoly.monomial(design.v, J, c))
    return _with_g0(design, polys, "projective", d=d, e=e, q=q)


# -- Witt designs -------------------------------------------------------------------

def witt24_generators(design: Design | None = None) -> GeneratorSet:
    """(x_i - x_j)(c_B.x - 2)(c_B.x - 4) for blocks B and i < j in B, kept factored."""
    if design is None:
        design = witt24()
    v = design.v
    polys = []
    for B in design.blocks:
        two = LinearForm.indicator_minus(B, 2)
        four = LinearForm.indicator_minus(B, 4)
        for i, j in combinations(points_of(B), 2):
            polys.append(MultilinearPoly.from_factors(v, [LinearForm.difference(i, j), two, four]))
    return _with_g0(design, polys, "witt24")


def witt23_generators(design: Design | None = None) -> GeneratorSet:
    """h_ijk = 3 + 12 x_i x_j x_k - 3 (pairs of ijk) - sum_C x^{C,2} over all 3-sets."""
    if design is None:
        design = witt23()
    v = design.v
    rest: dict[int, list[int]] = defaultdict(list)
    for B in design.blocks:
        for T in combinations(points_of(B), 3):
            Tm = mask_of(T)
            rest[Tm].append(B & ~Tm)
    polys = []
    for T in combinations(range(v), 3):
        Tm = mask_of(T)
        terms: list[tuple[int, int]] = [(0, 3), (Tm, 12)]
        terms += [(mask_of(p), -3) for p in combinations(T, 2)]
        for C in rest[Tm]:
            terms += [(mask_of(p), -1) for p in combinations(points_of(C), 2)]
        polys.append(MultilinearPoly(v, terms))
    return _with_g0(design, polys, "witt23")


def witt22_generators(design: Design | None = None) -> GeneratorSet:
    """(x_i - x_j)(sum of the other four points of B - 1) for blocks B and i < j in B."""
    if design is None:
        design = witt22()
    v = design.v
    polys = []
    for B in design.blocks:
        for i, j in combinations(points_of(B), 2):
            others = B & ~((1 << i) | (1 << j))
            polys.append(MultilinearPoly.from_factors(
                v, [LinearForm.difference(i, j), LinearForm.indicator_minus(others, 1)]))
    return _with_g0(design, polys, "witt22")


# the printed cubic, 1-indexed: triples [1,2,3], [4,5,9], [10,11,8]
M12_TRIPLES_1 = ((1, 2, 3), (4, 5, 9), (10, 11, 8))


def m12_cubic(v: int = 12, triples: Sequence[Sequence[int]] = M12_TRIPLES_1, base: int = 1) -> MultilinearPoly:
    """sum_{r,c} x_{a_r} x_{b_(c-r)} (x_{c_c} - x_{c_(c+1)}), indices mod 3."""
    a, b, c = ([p - base for p in tr] for tr in triples)
    terms = []
    for r in range(3):
        for s in range(3):
            head = (1 << a[r]) | (1 << b[(s - r) % 3])
            terms.append((head | (1 << c[s]), 1))
            terms.append((head | (1 << c[(s + 1) % 3]), -1))
    return MultilinearPoly(v, terms)


def m12_orbit_generators(design: Design | None = None) -> GeneratorSet:
    """G0 and the M12-orbit of the printed cubic, deduplicated up to sign."""
    if design is None:
        design = witt12()
    group = m12_group()
    seed = m12_cubic().normalized_sign()
    orbit = group.orbit(seed, lambda g, f: f.relabel(g).normalized_sign())
    return _with_g0(design, orbit, "m12orbit", orbit_size=len(orbit))


# -- octagons on the 3-(10,4,1) design ------------------------------------------------

def _octagon_options(design: Design, B1: int, B2: int) -> dict[int, tuple[int, int]]:
    """For i in B1: the two pairs of B2 cut out by the blocks meeting B1 only in i."""
    out = {}
    for i in points_of(B1):
        cuts = [B & B2 for B in design.blocks if B & B1 == 1 << i]
        if len(cuts) != 2 or any(c.bit_count() != 2 for c in cuts) or cuts[0] | cuts[1] != B2:
            raise DesignError("block pair does not have the octagon structure")
        out[i] = tuple(sorted(cuts, key=lex_key))
    return out


def octagon_polynomial(v: int, B1: int, neighbours: dict[int, int]) -> MultilinearPoly | None:
    """Alternating-sign 8-cycle polynomial, or None if the neighbour choice is not one cycle.

    The walk starts at the least point of B1 towards its larger neighbour with sign +.
    """
    adj: dict[int, list[int]] = defaultdict(list)
    for i, pair in neighbours.items():
        for b in points_of(pair):
            adj[i].append(b)
            adj[b].append(i)
    if any(len(n) != 2 for n in adj.values()) or len(adj) != 8:
        return None
    start = min(points_of(B1))
    prev, cur = start, max(adj[start])
    terms = [((1 << start) | (1 << cur), 1)]
    sign = 1
    while cur != start:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        sign = -sign
        terms.append(((1 << cur) | (1 << nxt), sign))
        prev, cur = cur, nxt
    if len(terms) != 8:
        return None
    return MultilinearPoly(v, terms)


def octagon_orientations(design: Design, B1, B2) -> list[tuple[dict[int, int], MultilinearPoly]]:
    """All neighbour selections (of 16) whose octagon polynomial vanishes on every block."""
    B1 = B1 if isinstance(B1, int) else mask_of(B1)
    B2 = B2 if isinstance(B2, int) else mask_of(B2)
    if B1 & B2:
        raise DesignError("octagon blocks must be disjoint")
    for B in (B1, B2):
        if not design.is_block(B):
            raise DesignError(f"{points_of(B)} is not a block")
    options = _octagon_options(design, B1, B2)
    pts = sorted(options)
    found = []
    for choice in product((0, 1), repeat=len(pts)):
        nb = {i: options[i][c] for i, c in zip(pts, choice)}
        g = octagon_polynomial(design.v, B1, nb)
        if g is not None and all(g(B) == 0 for B in design.blocks):
            found.append((nb, g))
    return found


def disjoint_block_pairs(design: Design) -> list[tuple[int, int]]:
    blocks = sorted(design.blocks, key=lex_key)
    return [(a, b) for a, b in combinations(blocks, 2) if not a & b]


def octagon_generators(design: Design, pairs: Iterable | None = None) -> GeneratorSet:
    """G0 plus octagon polynomials.

    ``pairs`` entries are (B1, B2) -- every vanishing orientation is used -- or
    (B1, B2, neighbours) with neighbours mapping each i in B1 to a 2-subset of B2.
    The default is every ordered disjoint pair with every vanishing orientation.
    """
    if pairs is None:
        pairs = [p for a, b in disjoint_block_pairs(design) for p in ((a, b), (b, a))]
    polys: list[MultilinearPoly] = []
    seen = set()
    for entry in pairs:
        B1, B2 = (x if isinstance(x, int) else mask_of(x) for x in entry[:2])
        if B1 & B2:
            raise DesignError("octagon blocks must be disjoint")
        if len(entry) == 3:
            nb = {i: (p if isinstance(p, int) else mask_of(p)) for i, p in entry[2].items()}
            g = octagon_polynomial(design.v, B1, nb)
            if g is None:
                raise DesignError("neighbour selection does not form an octagon")
            found = [g]
        else:
            found = [g for _, g in octagon_orientations(design, B1, B2)]
        for g in found:
            key = g.normalized_sign()
            if key not in seen:
                seen.add(key)
                polys.append(g)
    return _with_g0(design, polys, "octagon")


# -- derived designs ----------------------------------------------------------------

def derived_generators(G: GeneratorSet, i: int, design: Design | None = None) -> GeneratorSet:
    """Set x_i = 1 in every generator: a generating set for the derived design at i."""
    v, k = G.v - 1, G.k - 1
    polys = []
    for g in G.extra():
        h = g.substitute_one(i)
        if not h.is_zero():
            polys.append(h)
    name = design.name if design is not None else f"der({G.design_name},{i})"
    out = GeneratorSet(v, k, trivial_polys(v, k) + polys, "derived", name,
                       {"parent_family": G.family, "point": i})
    return out


__all__ = [
    "gY_generators", "steiner_generators", "partial_design_generators", "symbibd_generators",
    "projective_generators", "witt24_generators", "witt23_generators", "witt22_generators",
    "m12_cubic", "m12_orbit_generators", "octagon_polynomial", "octagon_orientations",
    "octagon_generators", "disjoint_block_pairs", "derived_generators"
]
