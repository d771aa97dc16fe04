"""Exact linear algebra over the integers and rationals.

Matrices are small-to-medium and usually 0/1 valued.  ``rank`` first runs a
cheap elimination modulo a word-sized prime; that value is a lower bound on
the true rank and is accepted as exact only when it already equals
``min(rows, cols)``.  Otherwise a fraction-free (Bareiss) pass over Python
integers decides.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .bits import delta_columns, mask_of, points_of, subsets_of_size
from .config import check_binomial

Number = int | Fraction

# 2^31 - 1: products of two residues fit in int64
MODULAR_PRIME = 2_147_483_647


def _norm(x) -> Number:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return Fraction(x)


class ExactMatrix:
    """Dense matrix of Python ints / Fractions.

    Design-derived matrices are built straight from numpy 0/1 arrays; the
    integer array is kept so that modular passes skip the conversion.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_int")

    def __init__(self, rows: Iterable[Sequence[Number]], ncols: int | None = None):
        rows = [[_norm(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.nrows = len(rows)
        self.ncols = ncols
        self._rows = rows
        self._int = None

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "ExactMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("need a 2-d array")
        m = cls.__new__(cls)
        m.nrows, m.ncols = arr.shape
        m._rows = None
        if arr.dtype == object:
            m._rows = [[_norm(x) for x in row] for row in arr]
            m._int = None
        else:
            m._int = arr.astype(np.int64)
        return m

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_array(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, r: int, c: int) -> "ExactMatrix":
        return cls.from_array(np.zeros((r, c), dtype=np.int64))

    @property
    def rows(self) -> list[list[Number]]:
        if self._rows is None:
            self._rows = [[int(x) for x in row] for row in self._int]
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_integer(self) -> bool:
        if self._int is not None:
            return True
        return all(isinstance(x, int) for r in self._rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        if self._int is not None:
            return int(self._int[i, j])
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols})"

    def transpose(self) -> "ExactMatrix":
        if self._int is not None:
            return ExactMatrix.from_array(self._int.T.copy())
        return ExactMatrix(list(zip(*self._rows)) if self._rows else [], self.nrows)

    def _object_array(self) -> np.ndarray:
        if self._int is not None:
            return self._int.astype(object)
        arr = np.empty((self.nrows, self.ncols), dtype=object)
        for i, r in enumerate(self._rows):
            arr[i, :] = r
        return arr

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        return ExactMatrix.from_array(self._object_array().dot(other._object_array()))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return ExactMatrix.from_array(self._object_array() - other._object_array())

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return ExactMatrix.from_array(self._object_array() + other._object_array())

    def scale(self, c: Number) -> "ExactMatrix":
        return ExactMatrix.from_array(self._object_array() * _norm(c))

    def is_zero(self) -> bool:
        if self._int is not None:
            return not self._int.any()
        return all(x == 0 for r in self._rows for x in r)

    def integer_rows(self) -> list[list[int]]:
        """Rows scaled by their denominators' lcm (row span unchanged up to scaling)."""
        if self._int is not None:
            return [[int(x) for x in row] for row in self._int]
        out = []
        for r in self._rows:
            d = lcm(*[x.denominator for x in r if isinstance(x, Fraction)] or [1])
            out.append([int(x * d) for x in r])
        return out

    def to_matrix_market(self) -> str:
        entries = [
            (i + 1, j + 1, x)
            for i, r in enumerate(self.rows)
            for j, x in enumerate(r)
            if x != 0
        ]
        lines = [f"{self.nrows} {self.ncols} {len(entries)}"]
        lines += [f"{i} {j} {x}" for i, j, x in entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_matrix_market(cls, text: str) -> "ExactMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("%")]
        r, c, _ = (int(x) for x in lines[0].split())
        rows: list[list[Number]] = [[0] * c for _ in range(r)]
        for ln in lines[1:]:
            i, j, x = ln.split()
            rows[int(i) - 1][int(j) - 1] = _norm(Fraction(x))
        return cls(rows, c)


# -- rank ------------------------------------------------------------------

def modular_rank(M: ExactMatrix, p: int = MODULAR_PRIME) -> int:
    """Rank over GF(p); never exceeds the rational rank of an integer matrix."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if M._int is not None:
        A = M._int % p
    else:
        A = np.array(M.integer_rows(), dtype=object) % p
        A = A.astype(np.int64)
    A = A.copy()
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    nr, nc = A.shape
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        nz = np.nonzero(A[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, col]), p - 2, p)
        A[rank] = (A[rank] * inv) % p
        below = A[rank + 1:, col].copy()
        rows = np.nonzero(below)[0]
        if rows.size:
            idx = rows + rank + 1
            A[idx] = (A[idx] - np.outer(below[rows], A[rank]) % p) % p
        rank += 1
    return rank


def bareiss_rank(M: ExactMatrix) -> int:
    """Exact rank by fraction-free elimination over Python integers."""
    rows = [r[:] for r in M.integer_rows()]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = M.ncols
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == len(rows):
            break
        cands = [i for i in range(rank, len(rows)) if rows[i][col] != 0]
        if not cands:
            continue
        # fewest nonzeros keeps intermediate entries small
        piv = min(cands, key=lambda i: sum(1 for x in rows[i] if x))
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        a = prow[col]
        for i in range(rank + 1, len(rows)):
            r = rows[i]
            b = r[col]
            if b == 0:
                if a != prev:
                    rows[i] = [(a * x) // prev for x in r]
                continue
            rows[i] = [(a * x - b * y) // prev for x, y in zip(r, prow)]
        prev = a
        rank += 1
    return rank


def rank(M: ExactMatrix) -> int:
    r = modular_rank(M)
    if r == min(M.nrows, M.ncols):
        return r
    return bareiss_rank(M)


# -- row spans -------------------------------------------------------------

class RowSpace:
    """Echelon form of a set of rational rows with the transform back to them.

    ``express(w)`` returns coefficients c (one per original row) with
    sum c_i row_i = w, or None; ``witness(w)`` returns y with M y = 0 and
    w . y != 0 when w is outside the span.
    """

    def __init__(self, rows: Sequence[Sequence[Number]], ncols: int | None = None):
        self.nrows = len(rows)
        self.ncols = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        self.pivots: list[int] = []
        self.basis: list[list[Fraction]] = []
        self.transform: list[dict[int, Fraction]] = []
        for idx, row in enumerate(rows):
            vec = [Fraction(x) for x in row]
            comb = {idx: Fraction(1)}
            vec, comb = self._reduce(vec, comb)
            lead = next((j for j, x in enumerate(vec) if x != 0), None)
            if lead is None:
                continue
            inv = 1 / vec[lead]
            vec = [x * inv for x in vec]
            comb = {i: c * inv for i, c in comb.items()}
            # keep the basis fully reduced at existing pivots
            for b, tr in zip(self.basis, self.transform):
                f = b[lead]
                if f != 0:
                    for j in range(lead, self.ncols):
                        if vec[j]:
                            b[j] -= f * vec[j]
                    for i, c in comb.items():
                        tr[i] = tr.get(i, Fraction(0)) - f * c
            self.pivots.append(lead)
            self.basis.append(vec)
            self.transform.append(comb)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _reduce(self, vec, comb):
        for p, b, tr in zip(self.pivots, self.basis, self.transform):
            f = vec[p]
            if f != 0:
                for j in range(p, self.ncols):
                    if b[j]:
                        vec[j] -= f * b[j]
                for i, c in tr.items():
                    comb[i] = comb.get(i, Fraction(0)) - f * c
        return vec, comb

    def express(self, w: Sequence[Number]) -> list[Number] | None:
        vec = [Fraction(x) for x in w]
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match the column count")
        vec, comb = self._reduce(vec, {})
        if any(vec):
            return None
        out = [0] * self.nrows
        for i, c in comb.items():
            out[i] = _norm(-c)
        return out

    def kernel_basis(self) -> list[list[Fraction]]:
        """Basis of {y : row . y = 0 for every row}."""
        pivset = set(self.pivots)
        out = []
        for free in range(self.ncols):
            if free in pivset:
                continue
            y = [Fraction(0)] * self.ncols
            y[free] = Fraction(1)
            for p, b in zip(self.pivots, self.basis):
                y[p] = -b[free]
            out.append(y)
        return out

    def witness(self, w: Sequence[Number]) -> list[Number] | None:
        for y in self.kernel_basis():
            if sum(Fraction(a) * b for a, b in zip(w, y) if a) != 0:
                return [_norm(x) for x in y]
        return None


def in_row_span(M: ExactMatrix, w: Sequence[Number]) -> list[Number] | None:
    """Coefficients expressing ``w`` as a combination of the rows of ``M``."""
    return RowSpace(M.rows, M.ncols).express(w)


def separating_vector(M: ExactMatrix, w: Sequence[Number]) -> list[Number] | None:
    """y with M y = 0 and w . y != 0, or None when w lies in the row span."""
    return RowSpace(M.rows, M.ncols).witness(w)


# -- design matrices -------------------------------------------------------

def _containment(rows: list[int], cols: list[int]) -> np.ndarray:
    if rows and max(rows).bit_length() <= 64 and (not cols or max(cols).bit_length() <= 64):
        R = np.array(rows, dtype=np.uint64)[:, None]
        C = np.array(cols, dtype=np.uint64)[None, :]
        return ((R & C) == C).astype(np.int64)
    return np.array([[1 if (r & c) == c else 0 for c in cols] for r in rows], dtype=np.int64)


def incidence_matrix(design, s: int) -> ExactMatrix:
    """Blocks x s-subsets (exact size s, lexicographic), entry 1 iff subset in block.

    This is the transpose of the usual s-subset-versus-block matrix.
    """
    if s > design.k:
        raise ValueError("s must not exceed the block size")
    check_binomial(design.v, s, "incidence_matrix")
    cols = list(subsets_of_size(design.v, s))
    return ExactMatrix.from_array(_containment(list(design.blocks), cols))


def delta_vector(C, s: int, v: int) -> list[int]:
    """s-incidence vector over subsets of size <= s (sizes ascending, lex within)."""
    mask = C if isinstance(C, int) else mask_of(C)
    return [1 if (mask & J) == J else 0 for J in delta_columns(v, s)]


def delta_matrix(sets: Sequence[int], s: int, v: int) -> ExactMatrix:
    return ExactMatrix.from_array(_containment(list(sets), delta_columns(v, s)))


def evaluation_matrix(points: Sequence[int], monomials: Sequence[int]) -> ExactMatrix:
    """Entry (P, M) = value of x^M at the 01-point of P."""
    return ExactMatrix.from_array(_containment(list(points), list(monomials)))


def annihilates_polynomial(M: ExactMatrix, roots: Sequence[int]) -> bool:
    """True iff prod_r (M - r I) is the zero matrix."""
    if M.nrows != M.ncols:
        raise ValueError("annihilating polynomials need a square matrix")
    n = M.nrows
    I = np.eye(n, dtype=np.int64).astype(object)
    A = M._object_array()
    P = I
    for r in roots:
        P = P.dot(A - I * _norm(r))
    return not any(x != 0 for x in P.flat)


__all__ = [
    "ExactMatrix",
    "RowSpace",
    "annihilates_polynomial",
    "bareiss_rank",
    "delta_matrix",
    "delta_vector",
    "evaluation_matrix",
    "in_row_span",
    "incidence_matrix",
    "modular_rank",
    "points_of",
    "rank",
    "separating_vector",
]
