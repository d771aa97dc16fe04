"""Multilinear polynomials over Q on the 01-cube, plus generator-set containers.

A ``MultilinearPoly`` maps square-free monomials (bitmasks, 0 = constant) to
nonzero rational coefficients.  Products reduce x_i^2 to x_i, which is only
valid on 01-points; every evaluation in this package happens there.

Polynomials that are products of affine-linear forms (zonal products, the
Witt families) may be kept in factored form.  Their expansion is computed on
demand, and batch evaluation uses popcounts of the factors directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm, prod
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bits import lex_key, mask_of, points_of
from .exactla import ExactMatrix, rank

Number = int | Fraction

_INT64_SAFE = 1 << 62


def _norm(x) -> Number:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    return _norm(Fraction(x))


def _term_key(item: tuple[int, Number]) -> tuple:
    m = item[0]
    return (m.bit_count(), lex_key(m))


class LinearForm:
    """const + sum of coeff * (number of points of a mask present)."""

    __slots__ = ("const", "groups")

    def __init__(self, groups: Iterable[tuple[Number, int]], const: Number = 0):
        merged: dict[int, Number] = {}
        for c, m in groups:
            for p in points_of(m):
                merged[p] = merged.get(p, 0) + c
        by_coeff: dict[Number, int] = {}
        for p, c in merged.items():
            c = _norm(c)
            if c:
                by_coeff[c] = by_coeff.get(c, 0) | (1 << p)
        self.groups = tuple(sorted(((c, m) for c, m in by_coeff.items()), key=lambda g: (g[1], g[0])))
        self.const = _norm(const)

    @classmethod
    def indicator_minus(cls, mask: int, value: Number) -> "LinearForm":
        """chi_mask . x - value"""
        return cls([(1, mask)], -value)

    @classmethod
    def difference(cls, i: int, j: int) -> "LinearForm":
        return cls([(1, 1 << i), (-1, 1 << j)])

    def __call__(self, mask: int) -> Number:
        return self.const + sum(c * (mask & m).bit_count() for c, m in self.groups)

    def support(self) -> int:
        out = 0
        for _, m in self.groups:
            out |= m
        return out

    def terms(self) -> dict[int, Number]:
        out: dict[int, Number] = {}
        if self.const:
            out[0] = self.const
        for c, m in self.groups:
            for p in points_of(m):
                out[1 << p] = c
        return out

    def scaled_integer(self) -> tuple[int, list[tuple[int, int]]]:
        d = lcm(*[x.denominator for x in [self.const, *(c for c, _ in self.groups)]
                  if isinstance(x, Fraction)] or [1])
        return int(self.const * d), [(int(c * d), m) for c, m in self.groups]

    def __repr__(self) -> str:
        parts = [f"{c}*|x&{points_of(m)}|" for c, m in self.groups]
        return " + ".join(parts + [str(self.const)])


class MultilinearPoly:
    __slots__ = ("v", "_terms", "_factors", "_dict", "_hash")

    def __init__(self, v: int, terms=None, factors: Sequence[LinearForm] | None = None):
        self.v = v
        self._factors = tuple(factors) if factors is not None else None
        self._dict = None
        self._hash = None
        if terms is None:
            if factors is None:
                terms = {}
            else:
                self._terms = None
                return
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[int, Number] = {}
        for m, c in items:
            acc[m] = acc.get(m, 0) + c
        limit = 1 << v
        clean = []
        for m, c in acc.items():
            c = _norm(c)
            if c:
                if m >= limit or m < 0:
                    raise ValueError(f"monomial {points_of(m)} uses a variable >= v={v}")
                clean.append((m, c))
        clean.sort(key=_term_key)
        self._terms = tuple(clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, v: int, c: Number) -> "MultilinearPoly":
        return cls(v, {0: c})

    @classmethod
    def variable(cls, v: int, i: int) -> "MultilinearPoly":
        return cls(v, {1 << i: 1})

    @classmethod
    def monomial(cls, v: int, points, c: Number = 1) -> "MultilinearPoly":
        m = points if isinstance(points, int) else mask_of(points)
        return cls(v, {m: c})

    @classmethod
    def from_factors(cls, v: int, factors: Sequence[LinearForm]) -> "MultilinearPoly":
        return cls(v, None, factors)

    # -- basic access ------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, Number], ...]:
        if self._terms is None:
            acc = MultilinearPoly.constant(self.v, 1)
            for f in self._factors:
                acc = multiply(acc, MultilinearPoly(self.v, f.terms()))
            self._terms = acc._terms
        return self._terms

    @property
    def factors(self) -> tuple[LinearForm, ...] | None:
        return self._factors

    def as_dict(self) -> dict[int, Number]:
        if self._dict is None:
            self._dict = dict(self.terms)
        return self._dict

    def coefficient(self, mask: int) -> Number:
        return self.as_dict().get(mask, 0)

    @property
    def degree(self) -> int:
        """Degree of the multilinear normal form (-1 for the zero polynomial)."""
        t = self.terms
        return max((m.bit_count() for m, _ in t), default=-1)

    @property
    def nominal_degree(self) -> int:
        """Degree as written: number of factors for a factored poly, else ``degree``."""
        if self._factors is not None:
            return len(self._factors)
        return self.degree

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> int:
        if self._factors is not None and self._terms is None:
            out = 0
            for f in self._factors:
                out |= f.support()
            return out
        out = 0
        for m, _ in self.terms:
            out |= m
        return out

    def guard(self) -> int:
        """Common factor monomial: the AND of all monomials (0 when none)."""
        t = self.terms
        if not t:
            return 0
        g = t[0][0]
        for m, _ in t[1:]:
            g &= m
            if not g:
                break
        return g

    def __call__(self, C) -> Number:
        mask = C if isinstance(C, int) else mask_of(C)
        if self._factors is not None:
            return _norm(prod((f(mask) for f in self._factors), start=1))
        return _norm(sum(c for m, c in self.terms if (m & mask) == m))

    evaluate = __call__

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self.v == other.v and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.v, self.terms))
        return self._hash

    def __add__(self, other) -> "MultilinearPoly":
        if isinstance(other, (int, Fraction)):
            other = MultilinearPoly.constant(self.v, other)
        return MultilinearPoly(self.v, list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self) -> "MultilinearPoly":
        if self._factors is not None and self._terms is None:
            first = self._factors[0]
            neg = LinearForm([(-c, m) for c, m in first.groups], -first.const)
            return MultilinearPoly.from_factors(self.v, (neg,) + self._factors[1:])
        return MultilinearPoly(self.v, [(m, -c) for m, c in self.terms])

    def __sub__(self, other) -> "MultilinearPoly":
        if isinstance(other, (int, Fraction)):
            other = MultilinearPoly.constant(self.v, other)
        return self + (-other)

    def __rsub__(self, other) -> "MultilinearPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultilinearPoly":
        if isinstance(other, (int, Fraction)):
            return MultilinearPoly(self.v, [(m, c * other) for m, c in self.terms])
        return multiply(self, other)

    __rmul__ = __mul__

    def partial_derivative(self, i: int) -> "MultilinearPoly":
        bit = 1 << i
        return MultilinearPoly(self.v, [(m & ~bit, c) for m, c in self.terms if m & bit])

    def gradient_at(self, point: int) -> list[Number]:
        return [self.partial_derivative(i)(point) for i in range(self.v)]

    def substitute_one(self, i: int) -> "MultilinearPoly":
        """Set x_i = 1 and drop the variable, renumbering later ones down by one."""
        low = (1 << i) - 1
        out = []
        for m, c in self.terms:
            m &= ~(1 << i)
            out.append(((m & low) | ((m >> (i + 1)) << i), c))
        return MultilinearPoly(self.v - 1, out)

    def relabel(self, perm: Sequence[int]) -> "MultilinearPoly":
        """Rename variable j to perm[j]."""
        def move(m: int) -> int:
            return mask_of(perm[p] for p in points_of(m))

        if self._factors is not None and self._terms is None:
            forms = [LinearForm([(c, move(m)) for c, m in f.groups], f.const) for f in self._factors]
            return MultilinearPoly.from_factors(self.v, forms)
        return MultilinearPoly(self.v, [(move(m), c) for m, c in self.terms])

    def normalized_sign(self) -> "MultilinearPoly":
        """The representative of {f, -f} whose first term has a positive coefficient."""
        t = self.terms
        if t and t[0][1] < 0:
            return -MultilinearPoly(self.v, t)
        return MultilinearPoly(self.v, t) if self._terms is not t else self

    def integer_scaled(self) -> "MultilinearPoly":
        d = lcm(*[c.denominator for _, c in self.terms if isinstance(c, Fraction)] or [1])
        if d == 1:
            return self
        return self * d

    def __repr__(self) -> str:
        return f"MultilinearPoly({self.to_string()})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "*".join(f"x{p}" for p in points_of(m))
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- batch evaluation ----------------------------------------------------

    def evaluate_many(self, masks: np.ndarray) -> np.ndarray:
        """Values (scaled to integers; zero pattern preserved) at uint64 subset masks."""
        if self._factors is not None:
            return _eval_factored(self._factors, masks)
        return _eval_terms(self.terms, masks)


def _eval_terms(terms, masks: np.ndarray) -> np.ndarray:
    d = lcm(*[c.denominator for _, c in terms if isinstance(c, Fraction)] or [1])
    ints = [(m, int(c * d)) for m, c in terms]
    bound = sum(abs(c) for _, c in ints)
    dtype = np.int64 if bound < _INT64_SAFE else object
    out = np.zeros(masks.shape[0], dtype=dtype)
    for m, c in ints:
        if m == 0:
            out += c
            continue
        mm = np.uint64(m)
        hit = (masks & mm) == mm
        if dtype is object:
            out[hit] = out[hit] + c
        else:
            out += c * hit
    return out


def _eval_factored(factors: Sequence[LinearForm], masks: np.ndarray) -> np.ndarray:
    scaled = [f.scaled_integer() for f in factors]
    bound = 1
    for const, groups in scaled:
        bound *= abs(const) + sum(abs(c) * m.bit_count() for c, m in groups)
    if bound >= _INT64_SAFE:
        return np.array([prod(f(int(x)) for f in factors) for x in masks], dtype=object)
    out = None
    for const, groups in scaled:
        val = np.full(masks.shape[0], const, dtype=np.int64)
        for c, m in groups:
            val += c * np.bitwise_count(masks & np.uint64(m)).astype(np.int64)
        out = val if out is None else out * val
    return out


class Idempotent:
    """The raw quadratic x_i^2 - x_i of the trivial generators."""

    __slots__ = ("v", "var")

    degree = 2
    nominal_degree = 2

    def __init__(self, v: int, var: int):
        self.v = v
        self.var = var

    def __call__(self, C) -> int:
        return 0

    evaluate = __call__

    def gradient_at(self, point: int) -> list[int]:
        g = [0] * self.v
        g[self.var] = 2 * ((point >> self.var) & 1) - 1
        return g

    def guard(self) -> int:
        return 1 << self.var

    def __eq__(self, other) -> bool:
        return isinstance(other, Idempotent) and (self.v, self.var) == (other.v, other.var)

    def __hash__(self) -> int:
        return hash(("idem", self.v, self.var))

    def __repr__(self) -> str:
        return f"x{self.var}^2 - x{self.var}"


# -- operations ---------------------------------------------------------------

def eval_poly(f, C) -> Number:
    return f(C)


def multiply(f: MultilinearPoly, g: MultilinearPoly) -> MultilinearPoly:
    """Product with x_i^2 reduced to x_i (the product of the functions on 01-points)."""
    if f.v != g.v:
        raise ValueError("polynomials live in different rings")
    acc: dict[int, Number] = {}
    for m1, c1 in f.terms:
        for m2, c2 in g.terms:
            m = m1 | m2
            acc[m] = acc.get(m, 0) + c1 * c2
    return MultilinearPoly(f.v, acc)


def elementary_symmetric(v: int, C, j: int) -> MultilinearPoly:
    """x^{C,j}: the sum of all degree-j monomials in the variables of C."""
    pts = points_of(C) if isinstance(C, int) else tuple(sorted(C))
    return MultilinearPoly(v, [(mask_of(J), 1) for J in combinations(pts, j)])


def partial_derivative(f: MultilinearPoly, i: int) -> MultilinearPoly:
    return f.partial_derivative(i)


def zonal(v: int, c, sizes: Sequence[int]) -> MultilinearPoly:
    """prod_j (chi_c . x - i_j), kept in factored form."""
    mask = c if isinstance(c, int) else mask_of(c)
    if len(set(sizes)) != len(sizes):
        raise ValueError("zonal sizes must be distinct")
    if any(s > mask.bit_count() or s < 0 for s in sizes):
        raise ValueError("each size must lie between 0 and |c|")
    return MultilinearPoly.from_factors(v, [LinearForm.indicator_minus(mask, s) for s in sizes])


def g_BJ(v: int, B, J, k: int | None = None) -> MultilinearPoly:
    """x^{B,j} - C(k,j) x^J for J inside the k-set B."""
    Bm = B if isinstance(B, int) else mask_of(B)
    Jm = J if isinstance(J, int) else mask_of(J)
    if k is None:
        k = Bm.bit_count()
    if Bm.bit_count() != k:
        raise ValueError("|B| must equal k")
    if Jm & ~Bm:
        raise ValueError("J must be a subset of B")
    j = Jm.bit_count()
    return elementary_symmetric(v, Bm, j) - MultilinearPoly.monomial(v, Jm, comb(k, j))


# -- generator sets -------------------------------------------------------------

FAMILIES = (
    "g0", "gBJ", "gY", "steiner", "partial", "symbibd", "projective", "witt24",
    "witt23", "witt22", "m12orbit", "octagon", "zonal", "derived", "custom",
)


@dataclass
class GeneratorSet:
    v: int
    k: int
    polys: list
    family: str = "custom"
    design_name: str = ""
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family tag {self.family!r}")

    @property
    def max_degree(self) -> int:
        return max((p.nominal_degree for p in self.polys), default=0)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def extra(self) -> list[MultilinearPoly]:
        """Generators other than the trivial ones."""
        lin = trivial_linear(self.v, self.k)
        return [p for p in self.polys if not isinstance(p, Idempotent) and p != lin]

    def contains_trivial(self) -> bool:
        lin = trivial_linear(self.v, self.k)
        idem = {p.var for p in self.polys if isinstance(p, Idempotent)}
        has_lin = any(isinstance(p, MultilinearPoly) and p == lin for p in self.polys)
        return has_lin and idem == set(range(self.v))

    def with_trivial(self) -> "GeneratorSet":
        if self.contains_trivial():
            return self
        return GeneratorSet(self.v, self.k, trivial_polys(self.v, self.k) + self.extra(),
                            self.family, self.design_name, dict(self.notes))


def trivial_linear(v: int, k: int) -> MultilinearPoly:
    return MultilinearPoly(v, [(1 << i, 1) for i in range(v)] + [(0, -k)])


def trivial_polys(v: int, k: int) -> list:
    return [trivial_linear(v, k)] + [Idempotent(v, i) for i in range(v)]


def trivial_generators(v: int, k: int) -> GeneratorSet:
    if not 0 < k < v:
        raise ValueError("need 0 < k < v")
    return GeneratorSet(v, k, trivial_polys(v, k), "g0")


def jacobian_matrix(G: Iterable, C) -> ExactMatrix:
    """v x |G| matrix of partial derivatives at the 01-point of C."""
    point = C if isinstance(C, int) else mask_of(C)
    cols = [g.gradient_at(point) for g in G]
    if not cols:
        raise ValueError("empty generator set")
    v = len(cols[0])
    return ExactMatrix([[col[i] for col in cols] for i in range(v)], len(cols))


def jacobian_rank(G: Iterable, C) -> int:
    return rank(jacobian_matrix(G, C))


# -- text formats ------------------------------------------------------------------

def poly_to_text(f: MultilinearPoly) -> str:
    lines = []
    for m, c in f.terms:
        pts = " ".join(map(str, points_of(m)))
        lines.append(f"{c}: {pts}".rstrip())
    return "\n".join(lines)


def poly_from_text(text: str, v: int) -> MultilinearPoly:
    terms = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        coeff, _, rest = line.partition(":")
        terms.append((mask_of(int(t) for t in rest.split()), Fraction(coeff.strip())))
    return MultilinearPoly(v, terms)


def write_generator_set(G: GeneratorSet, path: str | Path) -> None:
    out = [f"family {G.family}", f"v {G.v}", f"k {G.k}"]
    if G.design_name:
        out.append(f"design {G.design_name}")
    if G.contains_trivial():
        out.append("g0")
    for p in G.extra():
        out.append("poly")
        body = poly_to_text(p)
        if body:
            out.append(body)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_generator_set(path: str | Path) -> GeneratorSet:
    return parse_generator_set(Path(path).read_text(encoding="utf-8"))


def parse_generator_set(text: str) -> GeneratorSet:
    header: dict[str, str] = {}
    chunks: list[list[str]] = []
    with_g0 = False
    current: list[str] | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "poly":
            current = []
            chunks.append(current)
        elif line == "g0":
            with_g0 = True
        elif current is None:
            key, _, val = line.partition(" ")
            header[key] = val.strip()
        else:
            current.append(line)
    v, k = int(header["v"]), int(header["k"])
    polys = [poly_from_text("\n".join(ch), v) for ch in chunks]
    if with_g0:
        polys = trivial_polys(v, k) + polys
    return GeneratorSet(v, k, polys, header.get("family", "custom"), header.get("design", ""))


def iter_monomials(v: int, max_degree: int) -> Iterator[int]:
    for d in range(max_degree + 1):
        for c in combinations(range(v), d):
            yield mask_of(c)
