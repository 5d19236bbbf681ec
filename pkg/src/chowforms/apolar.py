"""Catalecticants, graded pieces of f-perp and of inverse systems, ideals of points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DegreeMismatch, ProportionalPoints
from .exactalg import ExactMatrix, span_rank
from .polyring import (Form, LinearForm, Ring, _falling, as_form, basis_size, monomial_basis,
                       monomial_index, require_distinct)


@dataclass(frozen=True)
class PerpPiece:
    """Echelon basis of the degree-``s`` piece of the annihilator of a degree-``d`` form."""

    n: int
    d: int
    s: int
    basis: tuple[Form, ...]

    def __len__(self):
        return len(self.basis)

    def contains(self, D: Form) -> bool:
        field = D.field
        vecs = [b.coeffs for b in self.basis]
        return span_rank(field, vecs + [D.coeffs], len(D.coeffs)) == span_rank(
            field, vecs, len(D.coeffs))


def _contraction_matrix(f: Form, s: int, operator_side: bool) -> ExactMatrix:
    """Matrix of a contraction in grlex bases.

    ``operator_side=True``: ``D -> D o f`` from T_s to S_{d-s} (f fixed).
    ``operator_side=False``: ``g -> f o g`` from S_s to S_{s-deg f} (operator f fixed).
    """
    field = f.field
    if operator_side:
        d = f.degree
        field.require_characteristic_above(d)
        rows_idx = monomial_basis(f.n, d - s)
        cols_idx = monomial_basis(f.n, s)
        index = monomial_index(f.n, d)
        coeffs = f.coeffs
        rows = []
        for beta in rows_idx:
            row = []
            for alpha in cols_idx:
                gamma = tuple(a + b for a, b in zip(alpha, beta))
                row.append(coeffs[index[gamma]] * _falling(gamma, alpha))
            rows.append(row)
        return ExactMatrix.from_rows(field, rows, len(cols_idx))
    e = s
    field.require_characteristic_above(e)
    rows_idx = monomial_basis(f.n, e - f.degree)
    cols_idx = monomial_basis(f.n, e)
    index = monomial_index(f.n, f.degree)
    rows = []
    for beta in rows_idx:
        row = []
        for gamma in cols_idx:
            alpha = tuple(g - b for g, b in zip(gamma, beta))
            row.append(0 if min(alpha) < 0 else f.coeffs[index[alpha]] * _falling(gamma, alpha))
        rows.append(row)
    return ExactMatrix.from_rows(field, rows, len(cols_idx))


def catalecticant(f: Form, s: int) -> ExactMatrix:
    """Matrix of ``T_s -> S_{d-s}, D -> D o f``; rows index S_{d-s}, columns T_s."""
    f = as_form(f)
    if f.ring is not Ring.S:
        raise DegreeMismatch("catalecticant expects a form in S")
    if not 0 <= s <= f.degree:
        raise DegreeMismatch(f"need 0 <= s <= {f.degree}, got {s}")
    return _contraction_matrix(f, s, operator_side=True)


def perp_space(f: Form, s: int) -> PerpPiece:
    f = as_form(f)
    kernel = catalecticant(f, s).kernel_basis()
    basis = tuple(Form(f.n, s, Ring.T, f.field, v) for v in kernel)
    return PerpPiece(f.n, f.degree, s, basis)


def inverse_system(D: Form, e: int) -> list[Form]:
    """Basis of ``{g in S_e : D o g = 0}``."""
    D = as_form(D)
    if D.ring is not Ring.T:
        raise DegreeMismatch("inverse_system expects an operator in T")
    field = D.field
    if e < D.degree:
        return [Form.monomial(alpha, Ring.S, field) for alpha in monomial_basis(D.n, e)]
    kernel = _contraction_matrix(D, e, operator_side=False).kernel_basis()
    return [Form(D.n, e, Ring.S, field, v) for v in kernel]


def point_ideal_piece(points: Sequence[LinearForm], s: int) -> list[Form]:
    """Basis of (I_X)_s for the points ``X`` of the dual projective space."""
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    require_distinct(points, ProportionalPoints)
    n, field = points[0].n, points[0].field
    monos = monomial_basis(n, s)
    rows = []
    for l in points:
        row = []
        for alpha in monos:
            v = 1
            for a, k in zip(l.coeffs, alpha):
                if k:
                    v *= a ** k
            row.append(v)
        rows.append(row)
    kernel = ExactMatrix.from_rows(field, rows, len(monos)).kernel_basis()
    return [Form(n, s, Ring.T, field, v) for v in kernel]


def powers_matrix(points: Sequence[LinearForm], d: int) -> ExactMatrix:
    """Columns are the coefficient vectors of ``l_i**d``."""
    points = list(points)
    n, field = points[0].n, points[0].field
    return ExactMatrix.from_columns(field, [l.power(d).coeffs for l in points],
                                    basis_size(n, d))


def waring_fit(f: Form, points: Sequence[LinearForm]):
    """Coefficients ``c`` with ``f = sum c_i l_i**d``, or ``None`` if ``f`` is not in the span."""
    points = list(points)
    require_distinct(points, ProportionalPoints)
    return powers_matrix(points, f.degree).solve(f.coeffs)
