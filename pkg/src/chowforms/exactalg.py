"""Exact scalars and dense exact linear algebra.

Two fields are supported: a prime field ``F_p`` (elements are Python ints in
``[0, p)``) and the rationals (elements are :class:`fractions.Fraction`).
Arithmetic throughout the package is done with the native ``+``/``*``
operators followed by :meth:`reduce`, so both fields share one code path.

Elimination is deterministic: the pivot is always the first nonzero entry of
the current column.  Over ``F_p`` with ``p < 2**31`` rows are reduced with
vectorised int64 numpy arithmetic; rationals use fraction-free (Bareiss)
forward elimination.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
from sympy import isprime

from .errors import FieldTooSmall

DEFAULT_PRIME = 2147483647
PRIME_ENV_VAR = "CHOWFORMS_FIELD_PRIME"

# (p - 1)**2 must fit in a signed 64-bit product
_NUMPY_MODULUS_LIMIT = 2**31


@dataclass(frozen=True)
class PrimeField:
    modulus: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.modulus < 2 or not isprime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    kind = "prime"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def uses_numpy(self) -> bool:
        return self.modulus < _NUMPY_MODULUS_LIMIT

    def reduce(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def inv(self, a: int) -> int:
        if a % self.modulus == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        return pow(a, -1, self.modulus)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.modulus

    def random(self, rng: random.Random, bound: int | None = None) -> int:
        return rng.randrange(self.modulus)

    def require_characteristic_above(self, degree: int) -> None:
        """Differentiation constants up to ``degree!`` must stay invertible."""
        if self.modulus <= degree:
            raise FieldTooSmall(
                f"modulus {self.modulus} must exceed degree {degree}")

    def format(self, a: int) -> str:
        return str(a)

    def parse(self, text: str) -> int:
        return self.reduce(Fraction(text))

    def to_json(self) -> dict:
        return {"kind": "prime", "modulus": str(self.modulus)}

    def __str__(self):
        return f"GF({self.modulus})"


@dataclass(frozen=True)
class Rationals:
    kind = "rationals"
    random_bound: int = 100

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    uses_numpy = False

    def reduce(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, a) -> Fraction:
        return 1 / Fraction(a)

    def div(self, a, b) -> Fraction:
        return Fraction(a) / Fraction(b)

    def random(self, rng: random.Random, bound: int | None = None) -> Fraction:
        b = self.random_bound if bound is None else bound
        return Fraction(rng.randint(-b, b))

    def require_characteristic_above(self, degree: int) -> None:
        return None

    def format(self, a) -> str:
        return str(Fraction(a))

    def parse(self, text: str) -> Fraction:
        return Fraction(text)

    def to_json(self) -> dict:
        return {"kind": "rationals"}

    def __str__(self):
        return "QQ"


Field = PrimeField | Rationals


def default_field() -> PrimeField:
    """The default prime field; ``CHOWFORMS_FIELD_PRIME`` overrides the modulus."""
    override = os.environ.get(PRIME_ENV_VAR)
    return PrimeField(int(override) if override else DEFAULT_PRIME)


def field_from_json(data: dict) -> Field:
    if data["kind"] == "prime":
        return PrimeField(int(data["modulus"]))
    if data["kind"] == "rationals":
        return Rationals()
    raise ValueError(f"unknown field kind {data['kind']!r}")


# --------------------------------------------------------------------------
# elimination kernels


def _rref_numpy(p: int, rows: list[list[int]], ncols: int):
    A = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    m = A.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r]) % p) % p
        pivots.append(c)
        r += 1
    return [[int(x) for x in row] for row in A[:r]], pivots


def _rref_python(field: Field, rows: list[list], ncols: int):
    A = [list(row) for row in rows]
    m = len(A)
    pivots: list[int] = []
    r = 0
    red = field.reduce
    for c in range(ncols):
        if r == m:
            break
        i = next((i for i in range(r, m) if A[i][c] != 0), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        inv = field.inv(A[r][c])
        A[r] = [red(x * inv) for x in A[r]]
        for k in range(m):
            if k != r and A[k][c] != 0:
                factor = A[k][c]
                A[k] = [red(a - factor * b) for a, b in zip(A[k], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _bareiss_echelon(rows: list[list[Fraction]], ncols: int):
    """Fraction-free forward elimination on integer-scaled rows.

    Returns the nonzero echelon rows (integers) and their pivot columns.
    """
    A = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        A.append([int(x * den) for x in row])
    m = len(A)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == m:
            break
        i = next((i for i in range(r, m) if A[i][c] != 0), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        piv = A[r][c]
        prow = A[r]
        for k in range(r + 1, m):
            row = A[k]
            a = row[c]
            for j in range(c + 1, ncols):
                row[j] = (piv * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _rref_rational(rows: list[list[Fraction]], ncols: int):
    echelon, pivots = _bareiss_echelon(rows, ncols)
    R = [[Fraction(x, row[pc]) for x in row] for row, pc in zip(echelon, pivots)]
    for r in range(len(R) - 1, -1, -1):
        pc = pivots[r]
        for k in range(r):
            factor = R[k][pc]
            if factor:
                R[k] = [a - factor * b for a, b in zip(R[k], R[r])]
    return R, pivots


def rref(field: Field, rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form: ``(nonzero rows, pivot columns)``."""
    rows = [list(r) for r in rows]
    if not rows or ncols == 0:
        return [], []
    if isinstance(field, PrimeField):
        if field.uses_numpy:
            return _rref_numpy(field.modulus, rows, ncols)
        return _rref_python(field, rows, ncols)
    return _rref_rational([[Fraction(x) for x in r] for r in rows], ncols)


def row_space_basis(field: Field, vectors: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    R, _ = rref(field, vectors, ncols)
    return [tuple(field.reduce(x) for x in row) for row in R]


# --------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class ExactMatrix:
    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None):
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            entries.extend(field.reduce(x) for x in row)
        return cls(field, len(rows), cols, tuple(entries))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int):
        columns = list(columns)
        return cls.from_rows(field, [[col[i] for col in columns] for i in range(rows)],
                             len(columns))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int):
        return cls(field, rows, cols, (field.zero,) * (rows * cols))

    @classmethod
    def identity(cls, field: Field, size: int):
        return cls.from_rows(field, [[int(i == j) for j in range(size)] for i in range(size)])

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self) -> list[tuple]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(
            self.field, [[self.entries[i * self.cols + j] for i in range(self.rows)]
                         for j in range(self.cols)], self.rows)

    def matvec(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length must equal column count")
        red = self.field.reduce
        return tuple(red(sum(a * b for a, b in zip(self.row(i), v))) for i in range(self.rows))

    @cached_property
    def _rref(self):
        return rref(self.field, self.row_list(), self.cols)

    def rank(self) -> int:
        if isinstance(self.field, Rationals):
            return len(_bareiss_echelon([[Fraction(x) for x in r] for r in self.row_list()],
                                        self.cols)[1])
        return len(self._rref[1])

    def kernel_basis(self) -> list[tuple]:
        R, pivots = self._rref
        free = [c for c in range(self.cols) if c not in set(pivots)]
        zero, one = self.field.zero, self.field.one
        vectors = []
        for f in free:
            v = [zero] * self.cols
            v[f] = one
            for row, pc in zip(R, pivots):
                v[pc] = self.field.reduce(-row[f])
            vectors.append(v)
        return row_space_basis(self.field, vectors, self.cols)

    def solve(self, b: Sequence):
        """One solution of ``M x = b`` with free variables zero, or ``None``."""
        if len(b) != self.rows:
            raise ValueError("right-hand side length must equal row count")
        aug = [list(self.row(i)) + [self.field.reduce(b[i])] for i in range(self.rows)]
        R, pivots = rref(self.field, aug, self.cols + 1)
        if pivots and pivots[-1] == self.cols:
            return None
        x = [self.field.zero] * self.cols
        for row, pc in zip(R, pivots):
            x[pc] = self.field.reduce(row[-1])
        return tuple(x)


def rank(M: ExactMatrix) -> int:
    return M.rank()


def kernel_basis(M: ExactMatrix) -> list[tuple]:
    """Basis of the right null space, in reduced echelon form."""
    return M.kernel_basis()


def solve(M: ExactMatrix, b: Sequence):
    return M.solve(b)


def span_rank(field: Field, vectors: Sequence[Sequence], ncols: int) -> int:
    if not vectors:
        return 0
    return ExactMatrix.from_rows(field, vectors, ncols).rank()
