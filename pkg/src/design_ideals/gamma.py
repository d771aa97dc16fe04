"""The ideal parameters gamma_1 and gamma_2.

gamma_1 is read off rank deficiencies of block-versus-s-subset incidence
matrices.  gamma_2 is bracketed: a generating set containing G0 whose common
zeros among k-sets are exactly the blocks gives an upper bound (such an ideal
is radical, so it is the whole vanishing ideal), and a non-block whose
s-incidence vector is a combination of block vectors gives a lower bound.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Iterable, Sequence

import numpy as np

from .bits import combination_masks, delta_columns, lex_key, mask_of, points_of, subsets_of_size
from .config import check_binomial
from .designs import Design, DesignParams, max_intersection, strength
from .exactla import (
    ExactMatrix,
    RowSpace,
    delta_matrix,
    delta_vector,
    evaluation_matrix,
    incidence_matrix,
    rank,
)
from .poly import GeneratorSet, Idempotent, MultilinearPoly, trivial_polys

# values are built in float64; everything below this bound is exact
_FLOAT_EXACT = 1 << 52
# cap on the number of matrix entries materialised per evaluation step
_CHUNK_ENTRIES = 1 << 22
# families with at least this many guarded polynomials use the guard index
GUARD_INDEX_MIN = 4096


class MissingTrivialGenerators(ValueError):
    """Zero-set checks are only conclusive for generating sets that contain G0."""


class ZeroSetFailure(RuntimeError):
    def __init__(self, report: "ZeroSetReport"):
        super().__init__(report.describe())
        self.report = report


@dataclass
class ZeroSetReport:
    verdict: str  # "exact" | "missing-zero" | "extra-zero"
    counterexample: tuple[int, ...] | None
    scanned: int
    wall_time: float
    generator: str | None = None

    @property
    def exact(self) -> bool:
        return self.verdict == "exact"

    def describe(self) -> str:
        if self.exact:
            return f"exact ({self.scanned} subsets scanned)"
        if self.verdict == "missing-zero":
            return (f"generator nonvanishing on block {list(self.counterexample)}: "
                    f"{self.generator}")
        return f"extra zero: non-block {list(self.counterexample)} is a common zero"

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "scanned": self.scanned}
        if self.counterexample is not None:
            out["counterexample"] = list(self.counterexample)
        return out


# -- batch evaluation -----------------------------------------------------------------

def _bits(masks: np.ndarray, v: int) -> np.ndarray:
    """(v, m) float 0/1 matrix of the points present in each mask."""
    shifts = np.arange(v, dtype=np.uint64)[:, None]
    return ((masks[None, :] >> shifts) & np.uint64(1)).astype(np.float64)


class _FactoredGroup:
    """Polynomials that are products of the same number of linear forms."""

    def __init__(self, v: int, polys: list[MultilinearPoly]):
        self.polys = polys
        nf = len(polys[0].factors)
        self.coef = np.zeros((nf, len(polys), v), dtype=np.float64)
        self.const = np.zeros((nf, len(polys)), dtype=np.float64)
        bound = 1
        for pi, p in enumerate(polys):
            pb = 1
            for fi, f in enumerate(p.factors):
                c0, groups = f.scaled_integer()
                self.const[fi, pi] = c0
                fb = abs(c0)
                for c, m in groups:
                    for q in points_of(m):
                        self.coef[fi, pi, q] = c
                    fb += abs(c) * m.bit_count()
                pb *= fb
            bound = max(bound, pb)
        self.exact = bound < _FLOAT_EXACT

    def nonzero(self, idx: slice, X: np.ndarray) -> np.ndarray:
        vals = None
        for fi in range(self.coef.shape[0]):
            part = self.coef[fi, idx] @ X + self.const[fi, idx][:, None]
            vals = part if vals is None else vals * part
        return vals != 0


class _TermGroup:
    """Polynomials in expanded form, evaluated as (coefficients) x (monomial indicators)."""

    def __init__(self, polys: list[MultilinearPoly]):
        self.polys = polys
        self.scaled = []
        bound = 0
        for p in polys:
            d = lcm(*[c.denominator for _, c in p.terms if isinstance(c, Fraction)] or [1])
            ints = [(m, int(c * d)) for m, c in p.terms]
            self.scaled.append(ints)
            bound = max(bound, sum(abs(c) for _, c in ints))
        self.exact = bound < _FLOAT_EXACT

    def monomials(self, idx: slice) -> list[int]:
        return sorted({m for ints in self.scaled[idx] for m, _ in ints})

    def nonzero(self, idx: slice, masks: np.ndarray) -> np.ndarray:
        chunk = self.scaled[idx]
        monos = sorted({m for ints in chunk for m, _ in ints})
        pos = {m: i for i, m in enumerate(monos)}
        P = np.zeros((len(chunk), len(monos)), dtype=np.float64)
        for r, ints in enumerate(chunk):
            for m, c in ints:
                P[r, pos[m]] = c
        M = np.array(monos, dtype=np.uint64)[:, None]
        E = ((masks[None, :] & M) == M).astype(np.float64)
        return (P @ E) != 0


class _GuardIndex:
    """Polynomials x^Y * h indexed by their guard monomial Y.

    A polynomial with guard Y vanishes on every set not containing Y, so each
    set only needs the polynomials whose guards are among its own subsets.
    """

    def __init__(self, polys: list[MultilinearPoly]):
        self.polys = polys
        guards = np.array([p.guard() for p in polys], dtype=np.uint64)
        order = np.argsort(guards, kind="stable")
        self.sorted_guards = guards[order]
        self.order = order
        self.sizes = sorted({int(g).bit_count() for g in guards})
        tm, tc, starts, counts = [], [], [], []
        bound = 0
        for p in polys:
            d = lcm(*[c.denominator for _, c in p.terms if isinstance(c, Fraction)] or [1])
            ints = [(m, int(c * d)) for m, c in p.terms]
            starts.append(len(tm))
            counts.append(len(ints))
            tm.extend(m for m, _ in ints)
            tc.extend(c for _, c in ints)
            bound = max(bound, sum(abs(c) for c in tc[-len(ints):]))
        self.tmask = np.array(tm, dtype=np.uint64)
        self.tcoef = np.array(tc, dtype=np.float64)
        self.tstart = np.array(starts, dtype=np.int64)
        self.tcount = np.array(counts, dtype=np.int64)
        self.exact = bound < _FLOAT_EXACT

    def _eval_assigned(self, pidx: np.ndarray, masks: np.ndarray) -> np.ndarray:
        counts = self.tcount[pidx]
        total = int(counts.sum())
        rep = np.repeat(np.arange(len(pidx)), counts)
        first = np.cumsum(counts) - counts
        offs = np.arange(total) - np.repeat(first, counts)
        t = np.repeat(self.tstart[pidx], counts) + offs
        tm = self.tmask[t]
        hit = (masks[rep] & tm) == tm
        return np.bincount(rep, weights=self.tcoef[t] * hit, minlength=len(pidx))

    def nonzero_any(self, masks: np.ndarray, k: int) -> np.ndarray:
        m = len(masks)
        hit = np.zeros(m, dtype=bool)
        if m == 0:
            return hit
        pos = np.zeros((m, k), dtype=np.uint64)
        rest = masks.copy()
        one = np.uint64(1)
        for c in range(k):
            low = rest & (~rest + one)
            pos[:, c] = low
            rest ^= low
        for g in self.sizes:
            for combo in combinations(range(k), g):
                Y = np.zeros(m, dtype=np.uint64)
                for c in combo:
                    Y |= pos[:, c]
                lo = np.searchsorted(self.sorted_guards, Y, "left")
                hi = np.searchsorted(self.sorted_guards, Y, "right")
                cnt = hi - lo
                for r in range(int(cnt.max(initial=0))):
                    sel = np.nonzero((cnt > r) & ~hit)[0]
                    if sel.size == 0:
                        break
                    pidx = self.order[lo[sel] + r]
                    vals = self._eval_assigned(pidx, masks[sel])
                    hit[sel[vals != 0]] = True
                if hit.all():
                    return hit
        return hit


class BatchEvaluator:
    """Decides, for many subsets at once, whether some generator is nonzero there."""

    def __init__(self, v: int, k: int, polys: Sequence):
        self.v, self.k = v, k
        polys = [p for p in polys if not isinstance(p, Idempotent)]
        guarded = [p for p in polys if p.factors is None and p.guard()]
        self.guard = None
        if len(guarded) >= GUARD_INDEX_MIN:
            gid = {id(p) for p in guarded}
            self.guard = _GuardIndex(guarded)
            polys = [p for p in polys if id(p) not in gid]
        by_nf: dict[int, list] = {}
        terms: list = []
        for p in polys:
            if p.factors is not None:
                by_nf.setdefault(len(p.factors), []).append(p)
            else:
                terms.append(p)
        self.groups: list = [_FactoredGroup(v, ps) for _, ps in sorted(by_nf.items())]
        if terms:
            self.groups.append(_TermGroup(terms))
        self.exact_arith = all(g.exact for g in self.groups) and (
            self.guard is None or self.guard.exact)

    @property
    def polys(self) -> list:
        out = [] if self.guard is None else list(self.guard.polys)
        for g in self.groups:
            out.extend(g.polys)
        return out

    def _slow_nonzero(self, masks: np.ndarray) -> np.ndarray:
        out = np.zeros(len(masks), dtype=bool)
        for i, x in enumerate(masks):
            c = int(x)
            out[i] = any(p(c) != 0 for p in self.polys)
        return out

    def eliminate(self, masks: np.ndarray) -> np.ndarray:
        """The subsets (order kept) on which every generator vanishes."""
        if not self.exact_arith:
            return masks[~self._slow_nonzero(masks)]
        U = masks
        if self.guard is not None and U.size:
            U = U[~self.guard.nonzero_any(U, self.k)]
        for g in self.groups:
            n = len(g.polys)
            i = 0
            while i < n and U.size:
                if isinstance(g, _FactoredGroup):
                    step = max(1, min(n - i, _CHUNK_ENTRIES // max(U.size, 1)))
                    dead = g.nonzero(slice(i, i + step), _bits(U, self.v)).any(axis=0)
                else:
                    step = max(1, min(n - i, _CHUNK_ENTRIES // max(U.size, 1)))
                    while step > 1 and len(g.monomials(slice(i, i + step))) * U.size > _CHUNK_ENTRIES:
                        step //= 2
                    dead = g.nonzero(slice(i, i + step), U).any(axis=0)
                U = U[~dead]
                i += step
        return U


# -- zero-set check --------------------------------------------------------------------

def _default_threads() -> int:
    import os
    return os.cpu_count() or 1


def zero_set_check(design: Design, G: GeneratorSet, threads: int | None = None) -> ZeroSetReport:
    """Compare the common k-set zeros of G with the blocks.

    Blocks must be zeros of every generator; every other k-set must be a
    nonzero of some generator.  Counterexamples are lexicographically least.
    """
    start = time.perf_counter()
    if (G.v, G.k) != (design.v, design.k):
        raise ValueError(f"generators are for (v,k)=({G.v},{G.k}), design has ({design.v},{design.k})")
    if not G.contains_trivial():
        raise MissingTrivialGenerators(
            "the generating set must contain G0 (x_1+...+x_v-k and every x_i^2-x_i): "
            "only then is the ideal radical, so that matching zero sets imply equal ideals")
    v, k = design.v, design.k
    total = check_binomial(v, k, "zero_set_check")
    extra = G.extra()
    if v > 64:
        return _zero_set_scalar(design, extra, total, start)
    ev = BatchEvaluator(v, k, extra)
    blocks = np.array(sorted(design.blocks), dtype=np.uint64)
    # phase A: blocks
    survivors = ev.eliminate(blocks)
    if survivors.size != blocks.size:
        bad_set = set(blocks.tolist()) - set(survivors.tolist())
        bad = min(bad_set, key=lex_key)
        gen = next(p for p in extra if p(bad) != 0)
        return ZeroSetReport("missing-zero", points_of(bad), total,
                             time.perf_counter() - start, _describe_poly(gen))
    # phase B: non-blocks
    masks = combination_masks(v, k)
    masks = masks[~np.isin(masks, blocks)]
    threads = threads or _default_threads()
    if threads > 1 and masks.size > 100_000:
        parts = np.array_split(masks, threads)
        with ThreadPoolExecutor(threads) as pool:
            rest = list(pool.map(ev.eliminate, parts))
        left = np.concatenate(rest)
    else:
        left = ev.eliminate(masks)
    elapsed = time.perf_counter() - start
    if left.size:
        return ZeroSetReport("extra-zero", points_of(int(left[0])), total, elapsed)
    return ZeroSetReport("exact", None, total, elapsed)


def _zero_set_scalar(design: Design, extra: list, total: int, start: float) -> ZeroSetReport:
    for B in sorted(design.blocks, key=lex_key):
        for p in extra:
            if p(B) != 0:
                return ZeroSetReport("missing-zero", points_of(B), total,
                                     time.perf_counter() - start, _describe_poly(p))
    for C in subsets_of_size(design.v, design.k):
        if design.is_block(C):
            continue
        if not any(p(C) != 0 for p in extra):
            return ZeroSetReport("extra-zero", points_of(C), total, time.perf_counter() - start)
    return ZeroSetReport("exact", None, total, time.perf_counter() - start)


def _describe_poly(p) -> str:
    if isinstance(p, MultilinearPoly):
        text = p.to_string()
        return text if len(text) <= 200 else text[:197] + "..."
    return repr(p)


def gamma2_upper(design: Design, G: GeneratorSet, threads: int | None = None) -> tuple[int, ZeroSetReport]:
    report = zero_set_check(design, G, threads)
    if not report.exact:
        raise ZeroSetFailure(report)
    return G.max_degree, report


def greedy_generator_subset(design: Design, G: GeneratorSet) -> GeneratorSet:
    """G0 plus a small subset of G's other generators with the same zero set.

    Greedy cover of the non-block k-sets: repeatedly take the generator that
    is nonzero on the most k-sets not yet excluded.  Raises ZeroSetFailure if
    G itself does not cut out the blocks.
    """
    report = zero_set_check(design, G, threads=1)
    if not report.exact:
        raise ZeroSetFailure(report)
    masks = combination_masks(design.v, design.k)
    block = np.isin(masks, np.array(sorted(design.blocks), dtype=np.uint64))
    open_sets = masks[~block]
    extra = G.extra()
    hits = np.array([p.evaluate_many(open_sets) != 0 for p in extra], dtype=bool)
    alive = np.ones(open_sets.shape[0], dtype=bool)
    chosen: list[int] = []
    while alive.any():
        gains = (hits & alive).sum(axis=1)
        best = int(np.argmax(gains))
        chosen.append(best)
        alive &= ~hits[best]
    polys = trivial_polys(G.v, G.k) + [extra[i] for i in chosen]
    return GeneratorSet(G.v, G.k, polys, G.family, G.design_name,
                        {**G.notes, "subset_of": len(extra)})


# -- gamma_1 ---------------------------------------------------------------------------

@dataclass
class RankEvidence:
    s: int
    rank: int | None
    binom: int
    # set when rank is not computed: rank <= b < binom
    bound: int | None = None

    @property
    def deficient(self) -> bool:
        if self.rank is None:
            return self.bound is not None and self.bound < self.binom
        return self.rank < self.binom

    def to_dict(self) -> dict:
        out = {"s": self.s, "rank": self.rank, "binom": self.binom}
        if self.bound is not None:
            out["rank_at_most"] = self.bound
        return out


@dataclass
class Gamma1Result:
    value: int | None
    lower: int
    upper: int
    evidence: list[RankEvidence] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.value is not None


def count_threshold(v: int, b: int) -> int:
    """Least s with C(v,s) > b, or v+1 when there is none (b >= max binomial)."""
    s = 0
    while s <= v and comb(v, s) <= b:
        s += 1
    return s


def gamma1(design: Design, params: DesignParams | None = None,
           compute_all_ranks: bool = False) -> Gamma1Result:
    """Least s <= min(k, v-k) with rank(incidence_matrix(design, s)) < C(v,s).

    When C(v,s) already exceeds the number of blocks the deficiency is
    recorded without elimination, unless ``compute_all_ranks`` is set.
    """
    v, k, b = design.v, design.k, design.b
    if params is None:
        params = strength(design)
    limit = min(k, v - k)
    lower = params.t // 2 + 1 if params.t >= 1 else 1
    upper = min(count_threshold(v, b), k)
    evidence = []
    for s in range(1, limit + 1):
        binom = comb(v, s)
        if binom > b and not compute_all_ranks:
            ev = RankEvidence(s, None, binom, b)
        else:
            ev = RankEvidence(s, rank(incidence_matrix(design, s)), binom)
        evidence.append(ev)
        if ev.deficient:
            return Gamma1Result(s, s, s, evidence)
    # full rank through the sound range
    return Gamma1Result(None, max(lower, limit + 1), max(upper, limit + 1), evidence)


def gamma1_bruteforce(design: Design, max_s: int | None = None) -> int | None:
    """Least s such that some multilinear polynomial of degree <= s vanishes on
    the blocks but not on every k-set; kernel vectors of the block evaluation
    matrix are tested on all k-sets.  Only meant for tiny designs."""
    v, k = design.v, design.k
    check_binomial(v, k, "gamma1_bruteforce")
    all_k = list(subsets_of_size(v, k))
    if max_s is None:
        max_s = k
    for s in range(1, max_s + 1):
        monos = delta_columns(v, s)
        E_blocks = evaluation_matrix(list(design.blocks), monos)
        space = RowSpace(E_blocks.rows, len(monos))
        E_all = np.array(evaluation_matrix(all_k, monos).rows, dtype=object)
        for y in space.kernel_basis():
            if any(x != 0 for x in E_all.dot(np.array(y, dtype=object))):
                return s
    return None


# -- gamma_2 lower bound -------------------------------------------------------------

@dataclass
class LinearizationCertificate:
    s: int
    C: tuple[int, ...]
    # (block points, coefficient) for the nonzero coefficients
    combination: list[tuple[tuple[int, ...], Fraction | int]]

    def verify(self, design: Design) -> bool:
        v = design.v
        Cm = mask_of(self.C)
        if design.is_block(Cm) or len(self.C) != design.k:
            return False
        acc = [Fraction(0)] * len(delta_columns(v, self.s))
        for pts, c in self.combination:
            if not design.is_block(mask_of(pts)):
                return False
            for j, x in enumerate(delta_vector(pts, self.s, v)):
                if x:
                    acc[j] += c
        return acc == [Fraction(x) for x in delta_vector(self.C, self.s, v)]

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "C": list(self.C),
            "combination": [{"block": list(p), "coeff": str(c)} for p, c in self.combination],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearizationCertificate":
        return cls(int(d["s"]), tuple(d["C"]),
                   [(tuple(e["block"]), Fraction(e["coeff"])) for e in d["combination"]])


def gamma2_lower_linearization(design: Design, s: int,
                               candidates: Iterable | None = None) -> LinearizationCertificate | None:
    """A non-block C whose s-incidence vector is a combination of the blocks' ones.

    Such a C is a zero of every ideal member of degree <= s, so gamma_2 > s.
    Candidates default to the design's recorded dropped block (if any) followed
    by every non-block k-set in lexicographic order.
    """
    v, k = design.v, design.k
    if not 0 <= s <= k:
        raise ValueError("need 0 <= s <= k")
    blocks = sorted(design.blocks, key=lex_key)
    D = delta_matrix(blocks, s, v)
    space = RowSpace(D.rows, D.ncols)
    if candidates is None:
        candidates = _default_candidates(design)
    for C in candidates:
        Cm = C if isinstance(C, int) else mask_of(C)
        if Cm.bit_count() != k or design.is_block(Cm):
            continue
        coeffs = space.express(delta_vector(Cm, s, v))
        if coeffs is not None:
            combo = [(points_of(B), c) for B, c in zip(blocks, coeffs) if c != 0]
            return LinearizationCertificate(s, points_of(Cm), combo)
    return None


def _default_candidates(design: Design):
    dropped = design.meta.get("dropped_block")
    if dropped is not None:
        yield mask_of(dropped)
    check_binomial(design.v, design.k, "linearization candidates")
    yield from subsets_of_size(design.v, design.k)


# -- a-priori bounds -----------------------------------------------------------------------

@dataclass
class Bound:
    name: str
    parameter: str  # "gamma1" | "gamma2"
    kind: str  # "lower" | "upper"
    value: int
    ref: str

    def to_dict(self) -> dict:
        return {"name": self.name, "parameter": self.parameter, "kind": self.kind,
                "value": self.value, "ref": self.ref}


def a_priori_bounds(design: Design, params: DesignParams | None = None,
                   parent: dict | None = None) -> list[Bound]:
    """Bounds that follow from the parameters alone.

    ``parent`` may carry {"gamma1": .., "gamma2": ..} for the design this one
    is derived from; derived designs never have larger values.
    """
    if params is None:
        params = strength(design)
    v, k, b = design.v, design.k, design.b
    out = []
    t = params.t
    if t >= 1:
        out.append(Bound("t_over_2", "gamma1", "lower", t // 2 + 1,
                         "a nontrivial ideal member of a t-design has degree > t/2"))
    out.append(Bound("count", "gamma1", "upper", count_threshold(v, b),
                     "least s with C(v,s) > |B|"))
    out.append(Bound("k_uniform", "gamma2", "upper", k,
                     "the g_Y generators of any k-uniform hypergraph"))
    m = max_intersection(design)
    if m + 1 <= k:
        out.append(Bound("max_intersection", "gamma2", "upper", m + 1,
                         "blocks meet in fewer than m+1 points: partial (m+1)-(v,k,1) system"))
    if t >= 1 and params.lam == 1:
        out.append(Bound("steiner", "gamma2", "upper", t, "Steiner system generators g_{B,T}"))
    if parent:
        for key in ("gamma1", "gamma2"):
            if parent.get(key) is not None:
                out.append(Bound("derived", key, "upper", int(parent[key]),
                                 "derived designs do not increase gamma_1 or gamma_2"))
    return out


def best_bounds(bounds: Sequence[Bound], parameter: str) -> tuple[int | None, int | None]:
    lows = [b.value for b in bounds if b.parameter == parameter and b.kind == "lower"]
    ups = [b.value for b in bounds if b.parameter == parameter and b.kind == "upper"]
    return (max(lows) if lows else None, min(ups) if ups else None)


# -- coordinate ring ----------------------------------------------------------------------

def coset_basis_rank(design: Design, functions: Sequence) -> int:
    """Rank of the |B| x |functions| matrix of values on the blocks.

    Entries of ``functions`` are monomials (subsets or masks) or polynomials.
    Rank |B| = len(functions) means their cosets form a basis of the
    coordinate ring, whose dimension is |B|.
    """
    check_binomial(design.v, design.k, "coset_basis_rank")
    blocks = sorted(design.blocks, key=lex_key)
    if all(isinstance(f, (int, tuple, list, frozenset, set)) for f in functions):
        monos = [f if isinstance(f, int) else mask_of(f) for f in functions]
        return rank(evaluation_matrix(blocks, monos))
    cols = [[f(B) for f in functions] for B in blocks]
    return rank(ExactMatrix(cols, len(functions)))


def block_pair_matrix(design: Design, j: int = 2) -> ExactMatrix:
    """(B, B') entry: value of x^{B',j} at B, i.e. C(|B & B'|, j)."""
    blocks = sorted(design.blocks, key=lex_key)
    return ExactMatrix([[comb((a & c).bit_count(), j) for c in blocks] for a in blocks])


__all__ = [
    "BatchEvaluator", "Bound", "Gamma1Result", "LinearizationCertificate",
    "MissingTrivialGenerators", "RankEvidence", "ZeroSetFailure", "ZeroSetReport",
    "best_bounds", "block_pair_matrix", "coset_basis_rank", "count_threshold", "gamma1",
    "gamma1_bruteforce", "gamma2_lower_linearization", "greedy_generator_subset", "gamma2_upper", "a_priori_bounds",
    "zero_set_check",
]
