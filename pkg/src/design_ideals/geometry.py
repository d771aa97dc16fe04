"""Small finite fields and the point/subspace structure of PG(d,q) and AG(n,q).

Prime fields use modular arithmetic.  GF(4), GF(8) and GF(9) are built from
fixed irreducible polynomials (x^2+x+1, x^3+x+1 over GF(2), x^2+1 over
GF(3)); an element is the integer whose base-p digits are its polynomial
coefficients.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from .bits import lex_key

SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)

# q -> (p, degree, low coefficients of the monic modulus, highest first removed)
_EXTENSIONS = {
    4: (2, 2, (1, 1)),  # x^2 = x + 1  ->  x^2 + x + 1
    8: (2, 3, (1, 1, 0)),  # x^3 = x + 1 -> coefficients of 1, x, x^2
    9: (3, 2, (2, 0)),  # x^2 = -1 = 2
}


class UnsupportedField(ValueError):
    pass


class GF:
    """Addition/multiplication tables for one of the supported fields."""

    def __init__(self, q: int):
        if q not in SUPPORTED_Q:
            raise UnsupportedField(
                f"GF({q}) is not supported; choose q in {list(SUPPORTED_Q)}"
            )
        self.q = q
        if q in _EXTENSIONS:
            p, n, red = _EXTENSIONS[q]
        else:
            p, n, red = q, 1, ()
        self.p = p
        self.add = [[0] * q for _ in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                self.add[a][b] = _from_digits(
                    [(x + y) % p for x, y in zip(_digits(a, p, n), _digits(b, p, n))], p
                )
                self.mul[a][b] = _poly_mul(a, b, p, n, red)
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [
            next(b for b in range(q) if self.mul[a][b] == 1) for a in range(1, q)
        ]

    def elements(self) -> range:
        return range(self.q)


def _digits(a: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(a % p)
        a //= p
    return out


def _from_digits(ds: list[int], p: int) -> int:
    out = 0
    for d in reversed(ds):
        out = out * p + d
    return out


def _poly_mul(a: int, b: int, p: int, n: int, red: tuple[int, ...]) -> int:
    if n == 1:
        return (a * b) % p
    da, db = _digits(a, p, n), _digits(b, p, n)
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    # reduce: x^n = sum red[i] x^i
    for deg in range(2 * n - 2, n - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for i, r in enumerate(red):
                prod[deg - n + i] = (prod[deg - n + i] + c * r) % p
    return _from_digits(prod[:n], p)


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


def _normalize(vec: tuple[int, ...], F: GF) -> tuple[int, ...] | None:
    for x in vec:
        if x:
            s = F.inv[x]
            return tuple(F.mul[s][y] for y in vec)
    return None


@lru_cache(maxsize=None)
def projective_points(d: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Normalised homogeneous coordinates of PG(d,q), sorted lexicographically."""
    F = field(q)
    pts = set()
    for vec in product(range(q), repeat=d + 1):
        n = _normalize(vec, F)
        if n is not None:
            pts.add(n)
    return tuple(sorted(pts))


def _span_points(rows: list[tuple[int, ...]], F: GF, index: dict) -> int:
    mask = 0
    dim = len(rows[0])
    for coeffs in product(range(F.q), repeat=len(rows)):
        if not any(coeffs):
            continue
        vec = [0] * dim
        for c, row in zip(coeffs, rows):
            if c:
                for i, x in enumerate(row):
                    vec[i] = F.add[vec[i]][F.mul[c][x]]
        mask |= 1 << index[_normalize(tuple(vec), F)]
    return mask


def projective_subspaces(d: int, e: int, q: int) -> list[int]:
    """All e-dimensional subspaces of PG(d,q) as point masks, sorted by point tuple.

    Subspaces are enumerated once each through their reduced row echelon
    generator matrices ((e+1) x (d+1) over GF(q)).
    """
    if not 0 <= e < d:
        raise ValueError("need 0 <= e < d")
    F = field(q)
    pts = projective_points(d, q)
    index = {p: i for i, p in enumerate(pts)}
    n = d + 1
    r = e + 1
    out = []
    for pivots in combinations(range(n), r):
        free = [
            (row, col)
            for row, pc in enumerate(pivots)
            for col in range(pc + 1, n)
            if col not in pivots
        ]
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for row, pc in enumerate(pivots):
                rows[row][pc] = 1
            for (row, col), x in zip(free, vals):
                rows[row][col] = x
            out.append(_span_points([tuple(rw) for rw in rows], F, index))
    out.sort(key=lex_key)
    return out


def affine_lines(n: int, q: int) -> tuple[list[tuple[int, ...]], list[int]]:
    """Points (lexicographic coordinate tuples) and lines of AG(n,q)."""
    F = field(q)
    pts = sorted(product(range(q), repeat=n))
    index = {p: i for i, p in enumerate(pts)}
    lines = set()
    dirs = [p for p in projective_points(n - 1, q)] if n > 1 else [(1,)]
    for base in pts:
        for dvec in dirs:
            mask = 0
            for c in range(q):
                pt = tuple(F.add[b][F.mul[c][x]] for b, x in zip(base, dvec))
                mask |= 1 << index[pt]
            lines.add(mask)
    return pts, sorted(lines, key=lex_key)
