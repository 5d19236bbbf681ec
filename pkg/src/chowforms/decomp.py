"""Constructing, checking and counting codimension-one decompositions.

A codimension-one form is annihilated by some linear operator ``L``.  ``f`` is
a sum of ``s`` such forms with distinct hyperplanes exactly when a product
``L_1 ... L_s`` annihilates ``f``; :func:`reconstruct` turns such a product
back into explicit summands by fitting ``f`` with powers of points sampled on
each hyperplane.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product as cartesian
from math import comb
from typing import Sequence

import numpy as np

from . import formulas
from .apolar import inverse_system, perp_space, point_ideal_piece, powers_matrix, waring_fit
from .chowlab import DEFAULT_GUARD, DEFAULT_RETRIES, VerificationReport
from .errors import (DegreeMismatch, EnumerationTooLarge, GenericityFailure, Inconsistent,
                     NotZeroDimensional, ProportionalFactors, SplittingFailure)
from .exactalg import ExactMatrix, Field, PrimeField, default_field
from .polyring import (Form, LinearForm, Ring, apply, basis_size, monomial_basis,
                       monomial_index, product, random_linear, random_linears,
                       require_distinct)


@dataclass(frozen=True)
class CodimOneInstance:
    n: int
    d: int
    s: int
    f: Form
    hyperplanes: tuple[LinearForm, ...]
    summands: tuple[Form, ...] | None = None
    equations: int | None = None
    unknowns: int | None = None

    def check(self) -> bool:
        """Summands add up to ``f`` and each is killed by its hyperplane."""
        if self.summands is None:
            return True
        total = Form.zero(self.n, self.d, Ring.S, self.f.field)
        for g in self.summands:
            total = total + g
        if total != self.f:
            return False
        return all(apply(L.to_form(), g).is_zero()
                   for L, g in zip(self.hyperplanes, self.summands))

    def to_json(self) -> dict:
        out = {
            "n": self.n, "d": self.d, "s": self.s,
            "form": self.f.to_json(),
            "hyperplanes": [L.to_json() for L in self.hyperplanes],
        }
        if self.summands is not None:
            out["summands"] = [g.to_json() for g in self.summands]
        if self.equations is not None:
            out["equations"] = self.equations
            out["unknowns"] = self.unknowns
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CodimOneInstance":
        f = Form.from_json(data["form"])
        Ls = tuple(LinearForm.from_json(x) for x in data["hyperplanes"])
        summands = (tuple(Form.from_json(x) for x in data["summands"])
                    if "summands" in data else None)
        return cls(f.n, f.degree, len(Ls), f, Ls, summands)


@dataclass(frozen=True)
class SamplingPlan:
    points_per_hyperplane: int
    seed: int = 0

    @classmethod
    def for_degree(cls, n: int, d: int, seed: int = 0) -> "SamplingPlan":
        # dimension of degree-d forms on a hyperplane
        return cls(comb(d + n - 1, n - 1), seed)


def synth_instance(n: int, d: int, s: int, seed: int = 0,
                   field: Field | None = None) -> CodimOneInstance:
    """Random ``f`` with a planted decomposition into ``s`` codimension-one forms."""
    if s < 1:
        raise ValueError("need s >= 1")
    field = field or default_field()
    rng = random.Random(seed)
    Ls = random_linears(n, s, rng, field, Ring.T)
    summands = []
    for L in Ls:
        g = Form.zero(n, d, Ring.S, field)
        for b in inverse_system(L.to_form(), d):
            g = g + b.scale(field.random(rng))
        summands.append(g)
    f = summands[0]
    for g in summands[1:]:
        f = f + g
    return CodimOneInstance(n, d, s, f, tuple(Ls), tuple(summands))


def forward_check(f: Form, Ls: Sequence[LinearForm]) -> bool:
    """True iff the product of the ``Ls`` annihilates ``f``."""
    Ls = list(Ls)
    require_distinct(Ls, ProportionalFactors)
    D = product([L.to_form() for L in Ls])
    if D.degree > f.degree:
        return True
    return apply(D, f).is_zero()


def points_on_hyperplane(L: LinearForm, count: int, rng: random.Random,
                         avoid: Sequence[LinearForm] = ()) -> list[LinearForm]:
    """Random distinct points ``l`` of the dual space with ``L(l) = 0``."""
    field = L.field
    basis = ExactMatrix.from_rows(field, [L.coeffs]).kernel_basis()
    out: list[LinearForm] = []
    taken = {l.coeffs for l in avoid}
    while len(out) < count:
        v = [0] * (L.n + 1)
        for b in basis:
            c = field.random(rng)
            v = [x + c * y for x, y in zip(v, b)]
        if all(field.reduce(x) == 0 for x in v):
            continue
        l = LinearForm(tuple(v), Ring.S, field)
        if l.coeffs in taken:
            continue
        taken.add(l.coeffs)
        out.append(l)
    return out


def reconstruct(f: Form, Ls: Sequence[LinearForm], plan: SamplingPlan | None = None,
                retries: int = DEFAULT_RETRIES) -> CodimOneInstance:
    """Explicit codimension-one summands of ``f``, one per hyperplane in ``Ls``.

    Samples ``plan.points_per_hyperplane`` points on every hyperplane and
    solves ``f = sum c_ij l_ij**d`` exactly.  Raises :class:`Inconsistent` if
    the product of ``Ls`` does not annihilate ``f`` or no sample spans ``f``.
    """
    Ls = [L if L.ring is Ring.T else L.dual() for L in Ls]
    if not forward_check(f, Ls):
        raise Inconsistent("the product of the hyperplanes does not annihilate f")
    n, d, s = f.n, f.degree, len(Ls)
    plan = plan or SamplingPlan.for_degree(n, d)
    N = plan.points_per_hyperplane
    rng = random.Random(plan.seed)
    for _ in range(retries + 1):
        groups: list[list[LinearForm]] = []
        used: list[LinearForm] = []
        for L in Ls:
            pts = points_on_hyperplane(L, N, rng, avoid=used)
            groups.append(pts)
            used.extend(pts)
        M = powers_matrix(used, d)
        c = M.solve(f.coeffs)
        if c is None:
            continue
        summands = []
        for i, pts in enumerate(groups):
            g = Form.zero(n, d, Ring.S, f.field)
            for j, l in enumerate(pts):
                g = g + l.power(d).scale(c[i * N + j])
            summands.append(g)
        inst = CodimOneInstance(n, d, s, f, tuple(Ls), tuple(summands),
                                equations=M.rows, unknowns=M.cols)
        if not inst.check():
            raise AssertionError("reconstructed summands fail exact verification")
        return inst
    raise Inconsistent(f"sampled points failed to span f in {retries + 1} attempts")


# --------------------------------------------------------------------------
# binary forms


def _require_small_prime(field: Field, guard: int) -> PrimeField:
    if not isinstance(field, PrimeField):
        raise DegreeMismatch("rational-point enumeration needs a prime field")
    if field.modulus + 1 > guard:
        raise EnumerationTooLarge(f"{field.modulus + 1} points exceed guard {guard}")
    return field


def binary_roots(D: Form, guard: int = DEFAULT_GUARD) -> list[LinearForm]:
    """Rational points of P^1 where the binary operator ``D`` vanishes, by exhaustive scan."""
    if D.n != 1:
        raise DegreeMismatch("binary_roots needs n = 1")
    field = _require_small_prime(D.field, guard)
    p = field.modulus
    # coefficient of d_0^(s-k) d_1^k multiplies t^k at the point [1 : t]
    coeffs = [int(c) for c in D.coeffs]
    roots = []
    chunk = 1 << 20
    for start in range(0, p, chunk):
        t = np.arange(start, min(start + chunk, p), dtype=np.int64)
        acc = np.zeros_like(t)
        for c in reversed(coeffs):
            acc = (acc * t + c) % p
        roots.extend(LinearForm((1, int(x)), Ring.S, field) for x in t[acc == 0])
    if coeffs[-1] == 0:
        roots.append(LinearForm((0, 1), Ring.S, field))
    return roots


def sylvester_binary(f: Form, guard: int = DEFAULT_GUARD) -> list[tuple[int, LinearForm]]:
    """Power-sum decomposition of a binary form with ``ceil((d+1)/2)`` summands.

    Each basis element of the apolar piece of that degree is tried in turn; the
    first one with distinct rational roots gives the points, and the
    coefficients come from :func:`waring_fit`.
    """
    if f.n != 1:
        raise DegreeMismatch("sylvester_binary needs a binary form")
    _require_small_prime(f.field, guard)
    s = formulas.sstar(f.degree)
    for D in perp_space(f, s).basis:
        roots = binary_roots(D, guard)
        if len(roots) != s:
            continue
        c = waring_fit(f, roots)
        if c is not None:
            return list(zip(c, roots))
    raise SplittingFailure(f"no apolar form of degree {s} splits over {f.field}")


# --------------------------------------------------------------------------
# rational points of VSH


def rational_hyperplanes(n: int, field: PrimeField) -> np.ndarray:
    """All normalized points of P^n(F_p), one per row."""
    p = field.modulus
    rows = []
    for lead in range(n + 1):
        for tail in cartesian(range(p), repeat=n - lead):
            rows.append((0,) * lead + (1,) + tail)
    return np.array(rows, dtype=np.int64)


def _times_linear(acc: np.ndarray, n: int, deg: int, lin: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((acc.shape[0], basis_size(n, deg + 1)), dtype=np.int64)
    target = monomial_index(n, deg + 1)
    for idx, alpha in enumerate(monomial_basis(n, deg)):
        for i in range(n + 1):
            beta = list(alpha)
            beta[i] += 1
            t = target[tuple(beta)]
            out[:, t] = (out[:, t] + acc[:, idx] * lin[:, i] % p) % p
    return out


def _products(hyper: np.ndarray, subsets: np.ndarray, n: int, p: int) -> np.ndarray:
    acc = hyper[subsets[:, 0]]
    for k in range(1, subsets.shape[1]):
        acc = _times_linear(acc, n, k, hyper[subsets[:, k]], p)
    return acc


def vsh_point_count(f: Form, s: int, guard: int = DEFAULT_GUARD) -> int:
    """Number of unordered ``s``-sets of distinct rational hyperplanes whose product is apolar to ``f``.

    Membership in the apolar piece is decided by reducing each candidate
    against its reduced echelon basis: the residual vanishes exactly when
    appending the candidate leaves the rank unchanged.
    """
    field = f.field
    if not isinstance(field, PrimeField) or not field.uses_numpy:
        raise DegreeMismatch("point counting needs a small prime field")
    n, p = f.n, field.modulus
    H = (p ** (n + 1) - 1) // (p - 1)
    if comb(H, s) > guard:
        raise EnumerationTooLarge(f"C({H}, {s}) = {comb(H, s)} subsets exceed guard {guard}")
    perp = perp_space(f, s)
    if not perp.basis or comb(H, s) == 0:
        return 0
    B = np.array([b.coeffs for b in perp.basis], dtype=np.int64)
    pivots = [int(np.flatnonzero(row)[0]) for row in B]
    hyper = rational_hyperplanes(n, field)

    def members(cands: np.ndarray) -> int:
        resid = cands.copy()
        for row, pc in zip(B, pivots):
            resid = (resid - cands[:, pc:pc + 1] * row[None, :] % p) % p
        return int(np.count_nonzero(~resid.any(axis=1)))

    if s == 1:
        return members(hyper)
    # lex-ordered (s-1)-subsets; those with first element > i form a suffix
    tails = np.array(list(combinations(range(H), s - 1)), dtype=np.int64)
    first = np.searchsorted(tails[:, 0], np.arange(H + 1), side="left")
    tail_products = _products(hyper, tails, n, p)
    count = 0
    for i in range(H - s + 1):
        lo = first[i + 1]
        block = tail_products[lo:]
        lead = np.broadcast_to(hyper[i], (block.shape[0], n + 1))
        count += members(_times_linear(block, n, s - 1, lead, p))
    return count


# --------------------------------------------------------------------------
# smoothness in the zero-dimensional case


def verify_smoothness_case(n: int, d: int, seed: int = 0, field: Field | None = None,
                           retries: int = DEFAULT_RETRIES) -> VerificationReport:
    """For ``g`` a sum of ``n*s`` random powers, the apolar and point ideals agree in degree ``s``.

    Random points whose ideal has the wrong dimension in degree ``s`` are
    special and get redrawn; the check itself is that the apolar piece of
    ``g`` is no larger than the ideal of the points.
    """
    s = formulas.smin(n, d)
    if n * s != formulas.binom(d - s + n, n):
        raise NotZeroDimensional(f"({n}, {d}): VSH has dimension {formulas.vsh_dim(n, d)}")
    field = field or default_field()
    report = VerificationReport("smoothness", {"n": n, "d": d, "s": s}, seed, field)
    rng = random.Random(seed)
    target = basis_size(n, s) - n * s
    for attempt in range(retries + 1):
        points = random_linears(n, n * s, rng, field, Ring.S)
        ideal = point_ideal_piece(points, s)
        if len(ideal) != target:
            continue
        g = Form.zero(n, d, Ring.S, field)
        for l in points:
            g = g + l.power(d)
        perp = perp_space(g, s)
        report.retries_used = attempt
        report.computed = {
            "perp_dim": len(perp),
            "ideal_dim": len(ideal),
            "ideal_in_perp": int(all(apply(D, g).is_zero() for D in ideal)),
        }
        report.expected = {"perp_dim": target, "ideal_dim": target, "ideal_in_perp": 1}
        return report
    raise GenericityFailure("random points never imposed independent conditions")


def verify_roundtrip(n: int, d: int, s: int | None = None, seed: int = 0,
                     field: Field | None = None,
                     retries: int = DEFAULT_RETRIES) -> VerificationReport:
    s = formulas.smin(n, d) if s is None else s
    field = field or default_field()
    report = VerificationReport("roundtrip", {"n": n, "d": d, "s": s}, seed, field)
    inst = synth_instance(n, d, s, seed, field)
    rebuilt = reconstruct(inst.f, inst.hyperplanes, SamplingPlan.for_degree(n, d, seed),
                          retries)
    report.params.update(equations=rebuilt.equations, unknowns=rebuilt.unknowns)
    report.computed = {"forward_check": int(forward_check(inst.f, inst.hyperplanes)),
                       "summands_valid": int(rebuilt.check()),
                       "summands": len(rebuilt.summands)}
    report.expected = {"forward_check": 1, "summands_valid": 1, "summands": s}
    return report
