"""Dense homogeneous polynomials in S = k[X_0..X_n] and T = k[d_0..d_n].

A :class:`Form` stores one coefficient per monomial of its degree, in the
graded-lexicographic order returned by :func:`monomial_basis`.  That order is
a frozen contract: serialized forms and kernel bases are expressed in it.

``T`` acts on ``S`` by differentiation (:func:`apply`); no divided-power
rescaling is applied, so ``d_0**2`` applied to ``X_0**2`` is ``2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

from .errors import DegreeMismatch, ProportionalPoints
from .exactalg import ExactMatrix, Field, default_field, field_from_json

MultiIndex = tuple[int, ...]


class Ring(str, Enum):
    S = "S"
    T = "T"


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All exponent vectors of degree ``d`` in ``n + 1`` variables, grlex order.

    >>> monomial_basis(1, 2)
    ((2, 0), (1, 1), (0, 2))
    """
    if n < 0 or d < 0:
        raise ValueError("n and d must be non-negative")
    if n == 0:
        return ((d,),)
    return tuple((a,) + rest for a in range(d, -1, -1) for rest in monomial_basis(n - 1, d - a))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[MultiIndex, int]:
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


def basis_size(n: int, d: int) -> int:
    return comb(d + n, n) if d >= 0 else 0


def _falling(top: MultiIndex, sub: MultiIndex) -> int:
    """prod_i top_i! / (top_i - sub_i)!"""
    out = 1
    for t, s in zip(top, sub):
        for k in range(t - s + 1, t + 1):
            out *= k
    return out


def _multinomial(alpha: MultiIndex) -> int:
    out = factorial(sum(alpha))
    for a in alpha:
        out //= factorial(a)
    return out


@dataclass(frozen=True)
class Form:
    n: int
    degree: int
    ring: Ring
    field: Field
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != basis_size(self.n, self.degree):
            raise ValueError(
                f"expected {basis_size(self.n, self.degree)} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, n: int, degree: int, ring: Ring = Ring.S, field: Field | None = None):
        field = field or default_field()
        return cls(n, degree, Ring(ring), field, (field.zero,) * basis_size(n, degree))

    @classmethod
    def from_terms(cls, n: int, degree: int, terms: dict, ring: Ring = Ring.S,
                   field: Field | None = None):
        """Build from ``{exponent tuple: coefficient}``."""
        field = field or default_field()
        coeffs = [field.zero] * basis_size(n, degree)
        index = monomial_index(n, degree)
        for alpha, c in terms.items():
            if len(alpha) != n + 1 or sum(alpha) != degree:
                raise DegreeMismatch(f"monomial {alpha} not of degree {degree} in {n + 1} vars")
            coeffs[index[tuple(alpha)]] = field.reduce(coeffs[index[tuple(alpha)]] + c)
        return cls(n, degree, Ring(ring), field, tuple(coeffs))

    @classmethod
    def monomial(cls, alpha: Sequence[int], ring: Ring = Ring.S, field: Field | None = None):
        return cls.from_terms(len(alpha) - 1, sum(alpha), {tuple(alpha): 1}, ring, field)

    @classmethod
    def variable(cls, n: int, i: int, ring: Ring = Ring.S, field: Field | None = None):
        alpha = [0] * (n + 1)
        alpha[i] = 1
        return cls.monomial(alpha, ring, field)

    def terms(self) -> Iterable[tuple[MultiIndex, object]]:
        for alpha, c in zip(monomial_basis(self.n, self.degree), self.coeffs):
            if c != 0:
                yield alpha, c

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check_compatible(self, other: "Form"):
        if (self.n, self.degree, self.ring, self.field) != (other.n, other.degree, other.ring,
                                                            other.field):
            raise DegreeMismatch("forms live in different homogeneous pieces")

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        red = self.field.reduce
        return Form(self.n, self.degree, self.ring, self.field,
                    tuple(red(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Form") -> "Form":
        return self + other.scale(-1)

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def scale(self, c) -> "Form":
        red = self.field.reduce
        return Form(self.n, self.degree, self.ring, self.field,
                    tuple(red(c * a) for a in self.coeffs))

    def __mul__(self, other: "Form") -> "Form":
        return product([self, other])

    def with_coeffs(self, coeffs: Sequence) -> "Form":
        red = self.field.reduce
        return Form(self.n, self.degree, self.ring, self.field, tuple(red(c) for c in coeffs))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "ring": self.ring.value,
            "field": self.field.to_json(),
            "coeffs": [self.field.format(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Form":
        field = field_from_json(data["field"])
        return cls(int(data["n"]), int(data["degree"]), Ring(data["ring"]), field,
                   tuple(field.parse(c) for c in data["coeffs"]))

    def __str__(self):
        names = "X" if self.ring is Ring.S else "d"
        parts = []
        for alpha, c in self.terms():
            mono = "*".join(f"{names}{i}" + (f"^{a}" if a > 1 else "")
                            for i, a in enumerate(alpha) if a)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class LinearForm:
    """A projectively normalized linear form (first nonzero coefficient 1)."""

    coeffs: tuple
    ring: Ring = Ring.S
    field: Field = dc_field(default_factory=default_field)

    def __post_init__(self):
        coeffs = tuple(self.field.reduce(c) for c in self.coeffs)
        lead = next((c for c in coeffs if c != 0), None)
        if lead is None:
            raise ValueError("a linear form must have a nonzero coefficient")
        inv = self.field.inv(lead)
        object.__setattr__(self, "coeffs", tuple(self.field.reduce(c * inv) for c in coeffs))
        object.__setattr__(self, "ring", Ring(self.ring))

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def to_form(self) -> Form:
        return Form(self.n, 1, self.ring, self.field, self.coeffs)

    def power(self, d: int) -> Form:
        """``l**d`` with coefficients ``d!/alpha! * a**alpha``."""
        red = self.field.reduce
        coeffs = []
        for alpha in monomial_basis(self.n, d):
            c = _multinomial(alpha)
            for a, e in zip(self.coeffs, alpha):
                if e:
                    c *= a ** e
            coeffs.append(red(c))
        return Form(self.n, d, self.ring, self.field, tuple(coeffs))

    def dual(self) -> "LinearForm":
        """Same coefficients, read on the other side of the apolarity pairing."""
        return LinearForm(self.coeffs, Ring.T if self.ring is Ring.S else Ring.S, self.field)

    def to_json(self) -> dict:
        return {"ring": self.ring.value, "field": self.field.to_json(),
                "coeffs": [self.field.format(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "LinearForm":
        field = field_from_json(data["field"])
        return cls(tuple(field.parse(c) for c in data["coeffs"]), Ring(data["ring"]), field)


def pairwise_non_proportional(forms: Sequence[LinearForm]) -> bool:
    return len({l.coeffs for l in forms}) == len(forms)


def require_distinct(forms: Sequence[LinearForm], exc=ProportionalPoints) -> None:
    if not pairwise_non_proportional(forms):
        raise exc("linear forms must be pairwise non-proportional")


def as_form(x) -> Form:
    return x.to_form() if isinstance(x, LinearForm) else x


# --------------------------------------------------------------------------
# arithmetic


def apply(D: Form, f: Form) -> Form:
    """The differentiation action ``D o f`` of ``D`` in T_s on ``f`` in S_d."""
    D, f = as_form(D), as_form(f)
    if D.n != f.n or D.degree > f.degree:
        raise DegreeMismatch(f"cannot apply degree {D.degree} operator to degree {f.degree} form")
    if D.ring is not Ring.T or f.ring is not Ring.S:
        raise DegreeMismatch("apply expects an operator in T and a polynomial in S")
    if D.field != f.field:
        raise DegreeMismatch("operands live over different fields")
    field = f.field
    field.require_characteristic_above(f.degree)
    e = f.degree - D.degree
    index = monomial_index(f.n, e)
    out = [0] * basis_size(f.n, e)
    f_terms = list(f.terms())
    for alpha, a in D.terms():
        for gamma, c in f_terms:
            beta = tuple(g - x for g, x in zip(gamma, alpha))
            if min(beta) < 0:
                continue
            out[index[beta]] += a * c * _falling(gamma, alpha)
    return Form(f.n, e, Ring.S, field, tuple(field.reduce(x) for x in out))


def product(factors: Sequence) -> Form:
    factors = [as_form(x) for x in factors]
    if not factors:
        raise ValueError("product of no factors")
    first = factors[0]
    for g in factors[1:]:
        if (g.n, g.ring, g.field) != (first.n, first.ring, first.field):
            raise DegreeMismatch("factors must share n, ring and field")
    acc = {alpha: c for alpha, c in first.terms()}
    for g in factors[1:]:
        nxt: dict = {}
        g_terms = list(g.terms())
        for alpha, a in acc.items():
            for beta, b in g_terms:
                key = tuple(x + y for x, y in zip(alpha, beta))
                nxt[key] = nxt.get(key, 0) + a * b
        acc = nxt
    degree = sum(g.degree for g in factors)
    return Form.from_terms(first.n, degree, acc, first.ring, first.field)


def evaluate(f, point: Sequence):
    f = as_form(f)
    if len(point) != f.n + 1:
        raise ValueError("point must have n + 1 coordinates")
    total = 0
    for alpha, c in f.terms():
        term = c
        for x, e in zip(point, alpha):
            if e:
                term *= x ** e
        total += term
    return f.field.reduce(total)


def restriction_matrix(n: int, t: int, columns: Sequence[Sequence], field: Field,
                       ring: Ring = Ring.T):
    """Matrix of ``D -> D(sum_j u_j * columns[j])`` from degree-``t`` forms in ``n+1``
    variables to degree-``t`` forms in ``k = len(columns)`` variables ``u``.
    """
    k = len(columns)
    images = [Form(k - 1, 1, ring, field, tuple(field.reduce(col[i]) for col in columns))
              for i in range(n + 1)]
    one = Form.from_terms(k - 1, 0, {(0,) * k: 1}, ring, field)
    powers: dict[tuple[int, int], Form] = {}

    def pw(i: int, e: int) -> Form:
        if e == 0:
            return one
        if (i, e) not in powers:
            powers[(i, e)] = product([pw(i, e - 1), images[i]])
        return powers[(i, e)]

    cols = []
    for alpha in monomial_basis(n, t):
        acc = one
        for i, e in enumerate(alpha):
            if e:
                acc = product([acc, pw(i, e)])
        cols.append(acc.coeffs)
    return ExactMatrix.from_columns(field, cols, basis_size(k - 1, t))


def substitute(f: Form, columns: Sequence[Sequence]) -> Form:
    """Restrict ``f`` to the span of the given points.

    ``columns`` are ``k`` vectors of length ``n + 1``; the result is the form in
    ``k`` variables ``u`` obtained from ``x = sum_j u_j * columns[j]``.
    """
    M = restriction_matrix(f.n, f.degree, columns, f.field, f.ring)
    return Form(len(columns) - 1, f.degree, f.ring, f.field, M.matvec(f.coeffs))


# --------------------------------------------------------------------------
# randomness


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_form(n: int, d: int, seed=0, field: Field | None = None,
                ring: Ring = Ring.S) -> Form:
    """Uniform coefficients over F_p, or bounded random integers over Q."""
    field = field or default_field()
    rng = _rng(seed)
    return Form(n, d, Ring(ring), field,
                tuple(field.random(rng) for _ in range(basis_size(n, d))))


def random_linear(n: int, seed=0, field: Field | None = None, ring: Ring = Ring.S,
                  avoid: Iterable[LinearForm] = ()) -> LinearForm:
    """A random normalized linear form, redrawn until it differs from ``avoid``."""
    field = field or default_field()
    rng = _rng(seed)
    taken = {l.coeffs for l in avoid}
    while True:
        coeffs = [field.random(rng) for _ in range(n + 1)]
        if all(c == 0 for c in coeffs):
            continue
        l = LinearForm(tuple(coeffs), Ring(ring), field)
        if l.coeffs not in taken:
            return l


def random_linears(n: int, count: int, seed=0, field: Field | None = None,
                   ring: Ring = Ring.S) -> list[LinearForm]:
    rng = _rng(seed)
    out: list[LinearForm] = []
    for _ in range(count):
        out.append(random_linear(n, rng, field, ring, avoid=out))
    return out
