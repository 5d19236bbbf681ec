"""Randomized exact-arithmetic oracles for the geometry of products of linear forms.

Genericity is realized by seeded random draws over a large prime field.  Each
oracle separates the *hypothesis* it needs about the random configuration
(general position, nonzero form, ...) from the *claim* it checks: a draw that
violates the hypothesis is redrawn, up to ``retries`` times, and the number
of redraws is recorded in the report.  A draw that satisfies the hypothesis
but not the claim is a genuine failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Sequence

from . import formulas
from .apolar import inverse_system
from .errors import EnumerationTooLarge, GenericityFailure, InvalidPoint, ProportionalFactors
from .exactalg import ExactMatrix, Field, default_field, row_space_basis, span_rank
from .polyring import (Form, LinearForm, Ring, apply, basis_size, monomial_basis, product,
                       random_linear, random_linears, require_distinct, restriction_matrix)

DEFAULT_RETRIES = 5
DEFAULT_GUARD = 10**7


@dataclass
class VerificationReport:
    oracle_name: str
    params: dict
    seed: int
    field: Field
    computed: dict = dc_field(default_factory=dict)
    expected: dict = dc_field(default_factory=dict)
    retries_used: int = 0

    @property
    def passed(self) -> bool:
        return self.computed == self.expected

    def to_json(self) -> dict:
        return {
            "oracle_name": self.oracle_name,
            "params": self.params,
            "seed": self.seed,
            "field": self.field.to_json(),
            "computed": {k: str(v) for k, v in self.computed.items()},
            "expected": {k: str(v) for k, v in self.expected.items()},
            "pass": self.passed,
            "retries_used": self.retries_used,
        }


def _forms_basis(field: Field, n: int, degree: int, ring: Ring, forms: Iterable[Form]) -> list[Form]:
    vecs = [g.coeffs for g in forms]
    size = basis_size(n, degree)
    return [Form(n, degree, ring, field, v) for v in row_space_basis(field, vecs, size)]


def in_general_position(Ls: Sequence[LinearForm]) -> bool:
    """Every ``min(n+1, len(Ls))`` of the linear forms are independent."""
    if not Ls:
        return True
    n, field = Ls[0].n, Ls[0].field
    k = min(n + 1, len(Ls))
    return all(span_rank(field, [l.coeffs for l in sub], n + 1) == k
               for sub in combinations(Ls, k))


def _draw_general(n: int, count: int, rng: random.Random, field: Field, ring: Ring,
                  retries: int) -> tuple[list[LinearForm], int]:
    for attempt in range(retries + 1):
        Ls = random_linears(n, count, rng, field, ring)
        if in_general_position(Ls):
            return Ls, attempt
    raise GenericityFailure(f"no general-position draw of {count} forms in {retries} retries")


# --------------------------------------------------------------------------
# tangent spaces of products of linear forms


def chow_tangent_basis(Ls: Sequence[LinearForm]) -> list[Form]:
    """Span of ``L_1 .. M .. L_s`` with one factor replaced by each coordinate operator."""
    Ls = list(Ls)
    if not Ls:
        raise ValueError("need at least one factor")
    require_distinct(Ls, ProportionalFactors)
    n, field, ring = Ls[0].n, Ls[0].field, Ls[0].ring
    gens = []
    for i in range(len(Ls)):
        rest = [l.to_form() for j, l in enumerate(Ls) if j != i]
        for k in range(n + 1):
            gens.append(product(rest + [Form.variable(n, k, ring, field)]))
    return _forms_basis(field, n, len(Ls), ring, gens)


def _meet_points(Li: LinearForm, Lj: LinearForm) -> list[tuple]:
    M = ExactMatrix.from_rows(Li.field, [Li.coeffs, Lj.coeffs])
    return M.kernel_basis()


def forms_through_pairwise_meets(Ls: Sequence[LinearForm], t: int) -> list[Form]:
    """Degree-``t`` forms vanishing on every codimension-two space ``{L_i = L_j = 0}``."""
    Ls = list(Ls)
    require_distinct(Ls, ProportionalFactors)
    n, field, ring = Ls[0].n, Ls[0].field, Ls[0].ring
    size = basis_size(n, t)
    if n < 2 or len(Ls) < 2:
        return [Form(n, t, ring, field, v)
                for v in ExactMatrix.zeros(field, 1, size).kernel_basis()]
    rows: list[tuple] = []
    for Li, Lj in combinations(Ls, 2):
        rows.extend(restriction_matrix(n, t, _meet_points(Li, Lj), field, ring).row_list())
    kernel = ExactMatrix.from_rows(field, rows, size).kernel_basis()
    return [Form(n, t, ring, field, v) for v in kernel]


def verify_chow_tangent(n: int, s: int, seed: int = 0, field: Field | None = None,
                        retries: int = DEFAULT_RETRIES) -> VerificationReport:
    field = field or default_field()
    report = VerificationReport("chow-tangent", {"n": n, "s": s}, seed, field)
    rng = random.Random(seed)
    Ls, report.retries_used = _draw_general(n, s, rng, field, Ring.T, retries)
    tangent = chow_tangent_basis(Ls)
    report.expected = {"tangent_dim": n * s + 1, "meets_dim": n * s + 1, "tangent_in_meets": 1}
    if n == 1:
        # no pairwise meets: every binary form of degree s is a product of linear forms
        report.computed = {"tangent_dim": len(tangent), "meets_dim": s + 1,
                           "tangent_in_meets": 1}
        return report
    meets = forms_through_pairwise_meets(Ls, s)
    size = basis_size(n, s)
    joint = span_rank(field, [g.coeffs for g in meets + tangent], size)
    report.computed = {
        "tangent_dim": len(tangent),
        "meets_dim": len(meets),
        "tangent_in_meets": int(joint == len(meets)),
    }
    return report


def ideal_claim_hilbert_check(n: int, s: int, t_range: Iterable[int], seed: int = 0,
                              field: Field | None = None,
                              retries: int = DEFAULT_RETRIES) -> VerificationReport:
    """Compare the ideal generated by the ``s`` partial products with the ideal of the meets."""
    if s < 2:
        raise ValueError("need s >= 2")
    ts = list(t_range)
    if any(t < s - 1 or t > s + 3 for t in ts):
        raise ValueError(f"degrees must lie in [{s - 1}, {s + 3}]")
    field = field or default_field()
    report = VerificationReport("ideal-claim", {"n": n, "s": s, "t": ts}, seed, field)
    rng = random.Random(seed)
    Ls, report.retries_used = _draw_general(n, s, rng, field, Ring.T, retries)
    gens = [product([l.to_form() for j, l in enumerate(Ls) if j != i]) for i in range(s)]
    for t in ts:
        spanning = [product([g, Form.monomial(m, Ring.T, field)]) if t > s - 1 else g
                    for g in gens for m in monomial_basis(n, t - s + 1)]
        report.computed[f"dim_t{t}"] = span_rank(field, [g.coeffs for g in spanning],
                                                 basis_size(n, t))
        report.expected[f"dim_t{t}"] = len(forms_through_pairwise_meets(Ls, t))
    return report


# --------------------------------------------------------------------------
# codimension-one forms and Terracini


def vhat_tangent_basis(L: LinearForm, g: Form) -> list[Form]:
    """Affine tangent space at ``g`` to the cone of codimension-one forms.

    The cone is parametrized by a hyperplane and a form on it.  Moving the
    form along the fibre gives the inverse system of ``L`` in degree ``d``;
    moving the hyperplane gives ``x_j * dg/dx_i`` for all ``i, j`` (the first
    partials of ``g`` span the partials along the hyperplane directions).
    """
    if g.is_zero():
        raise InvalidPoint("g must be nonzero")
    L = L if L.ring is Ring.T else L.dual()
    if not apply(L.to_form(), g).is_zero():
        raise InvalidPoint("L does not annihilate g")
    n, d, field = g.n, g.degree, g.field
    fibre = inverse_system(L.to_form(), d)
    moves = []
    for i in range(n + 1):
        partial = apply(Form.variable(n, i, Ring.T, field), g)
        if partial.is_zero():
            continue
        for j in range(n + 1):
            moves.append(product([Form.variable(n, j, Ring.S, field), partial]))
    return _forms_basis(field, n, d, Ring.S, fibre + moves)


def random_codim_one_form(L: LinearForm, d: int, rng: random.Random) -> Form:
    """A random element of the degree-``d`` inverse system of ``L``."""
    field = L.field
    basis = inverse_system(L.to_form(), d)
    out = Form.zero(L.n, d, Ring.S, field)
    for b in basis:
        out = out + b.scale(field.random(rng))
    return out


class _TerraciniSpan:
    """Incrementally grown span of tangent spaces at random codimension-one forms."""

    def __init__(self, n: int, d: int, rng: random.Random, field: Field, retries: int):
        self.n, self.d, self.rng, self.field, self.retries = n, d, rng, field, retries
        self.size = basis_size(n, d)
        self.local_dim = min(formulas.vhat_dim(n, d) + 1, self.size)
        self.Ls: list[LinearForm] = []
        self.basis: list[tuple] = []
        self.retries_used = 0

    def add_point(self) -> None:
        for _ in range(self.retries + 1):
            L = random_linear(self.n, self.rng, self.field, Ring.T, avoid=self.Ls)
            g = random_codim_one_form(L, self.d, self.rng)
            if g.is_zero():
                self.retries_used += 1
                continue
            tangent = vhat_tangent_basis(L, g)
            # a special point (e.g. a power of a linear form) has a smaller tangent space
            if len(tangent) != self.local_dim:
                self.retries_used += 1
                continue
            self.Ls.append(L)
            self.basis = row_space_basis(self.field, self.basis + [t.coeffs for t in tangent],
                                         self.size)
            return
        raise GenericityFailure("degenerate codimension-one form in every retry")

    @property
    def projective_dim(self) -> int:
        return len(self.basis) - 1


def terracini_dim(n: int, d: int, s: int, seed: int = 0, field: Field | None = None,
                  retries: int = DEFAULT_RETRIES) -> int:
    """Projective dimension of the span of tangent spaces at ``s`` random points."""
    if s < 1:
        raise ValueError("need s >= 1")
    span = _TerraciniSpan(n, d, random.Random(seed), field or default_field(), retries)
    for _ in range(s):
        span.add_point()
    return span.projective_dim


def smin_oracle(n: int, d: int, seed: int = 0, field: Field | None = None,
                retries: int = DEFAULT_RETRIES) -> int:
    """Least ``s`` whose Terracini span fills ``P S_d``, scanning upward from 1."""
    return _smin_scan(n, d, seed, field or default_field(), retries)[0]


def _smin_scan(n: int, d: int, seed: int, field: Field, retries: int):
    span = _TerraciniSpan(n, d, random.Random(seed), field, retries)
    full = basis_size(n, d) - 1
    dims = []
    for s in range(1, basis_size(n, d) + 1):
        span.add_point()
        dims.append(span.projective_dim)
        if span.projective_dim == full:
            return s, dims, span.retries_used
    raise GenericityFailure("tangent spaces never filled the ambient space")


def verify_terracini(n: int, d: int, seed: int = 0, field: Field | None = None,
                     retries: int = DEFAULT_RETRIES) -> VerificationReport:
    field = field or default_field()
    report = VerificationReport("terracini", {"n": n, "d": d}, seed, field)
    s, dims, report.retries_used = _smin_scan(n, d, seed, field, retries)
    report.params["secant_dims"] = dims
    report.computed = {"smin": s}
    report.expected = {"smin": formulas.smin(n, d)}
    return report


# --------------------------------------------------------------------------
# degree of the variety of products, by enumeration


def _block_partitions(items: tuple, size: int):
    """Unordered partitions of ``items`` into blocks of equal ``size``."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for others in combinations(rest, size - 1):
        block = (first,) + others
        remaining = tuple(x for x in rest if x not in others)
        for tail in _block_partitions(remaining, size):
            yield (block,) + tail


def partition_count(n: int, s: int) -> int:
    return factorial(n * s) // (factorial(n) ** s * factorial(s))


def chow_degree_oracle(n: int, s: int, seed: int = 0, field: Field | None = None,
                       retries: int = DEFAULT_RETRIES, guard: int = DEFAULT_GUARD) -> int:
    """Count ``s``-tuples of hyperplanes covering ``n*s`` random points of P^n."""
    if partition_count(n, s) > guard:
        raise EnumerationTooLarge(f"{partition_count(n, s)} partitions exceed guard {guard}")
    field = field or default_field()
    rng = random.Random(seed)
    for _ in range(retries + 1):
        points = random_linears(n, n * s, rng, field, Ring.S)
        hyperplane: dict[tuple, tuple] = {}
        degenerate = False
        for block in combinations(range(n * s), n):
            kernel = ExactMatrix.from_rows(field, [points[i].coeffs for i in block]).kernel_basis()
            if len(kernel) != 1:
                degenerate = True
                break
            H = LinearForm(kernel[0], Ring.T, field)
            # a hyperplane through more than n of the points is non-generic
            on = sum(1 for p in points
                     if field.reduce(sum(a * b for a, b in zip(H.coeffs, p.coeffs))) == 0)
            if on != n:
                degenerate = True
                break
            hyperplane[block] = H.coeffs
        if degenerate:
            continue
        tuples = {frozenset(hyperplane[b] for b in part)
                  for part in _block_partitions(tuple(range(n * s)), n)}
        return len(tuples)
    raise GenericityFailure("random points were not in general position")
