"""Closed-form invariants of codimension-one decompositions.

Every function here is exact integer arithmetic; degrees can have dozens of
digits and never pass through floating point.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb
from typing import Iterable

from .errors import DomainError

# Alexander-Hirschowitz exceptions with d != 2
_AH_EXCEPTIONS = {(2, 4): 6, (3, 4): 10, (4, 4): 15, (4, 3): 8}


def binom(m: int, k: int) -> int:
    """Binomial coefficient with ``C(m, k) = 0`` whenever ``m < k`` or ``m < 0``."""
    if k < 0 or m < k or m < 0:
        return 0
    return comb(m, k)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise DomainError(f"need n >= 1 and d >= 1, got n={n}, d={d}")


def excess(n: int, d: int, s: int) -> int:
    """``n*s - C(d-s+n, n)``: dimension of VSH(F, s) when non-negative."""
    return n * s - binom(d - s + n, n)


def smin(n: int, d: int) -> int:
    """Least ``s`` with ``n*s >= C(d-s+n, n)``."""
    _check(n, d)
    s = 1
    while excess(n, d, s) < 0:
        s += 1
    return s


def sexp(n: int, d: int) -> int:
    _check(n, d)
    return _ceil_div(binom(d + n, n), n + binom(d + n - 1, n - 1))


def sstar(d: int) -> int:
    if d < 1:
        raise DomainError("need d >= 1")
    return _ceil_div(d + 1, 2)


def ah_rank(n: int, d: int) -> int:
    """Waring rank of the generic degree-d form in n+1 variables (Alexander-Hirschowitz)."""
    _check(n, d)
    if d == 2:
        return n + 1
    if (n, d) in _AH_EXCEPTIONS:
        return _AH_EXCEPTIONS[(n, d)]
    return _ceil_div(binom(n + d, d), n + 1)


def is_defective(n: int, d: int) -> bool:
    return smin(n, d) != sexp(n, d)


def defective_classification(n: int, d: int) -> bool:
    """Closed-form defectivity for ``n >= 2``."""
    if n < 2:
        raise DomainError("classification holds for n >= 2 only")
    if d < 1:
        raise DomainError("need d >= 1")
    if d in (2, 3):
        return False
    if n == 2 and d in (4, 5, 6, 8):
        return False
    return True


def chow_dim(n: int, s: int) -> int:
    return n * s


def chow_degree(n: int, s: int) -> int:
    """Degree of the variety of products of ``s`` linear forms in ``n+1`` variables."""
    if n < 1 or s < 1:
        raise DomainError("need n >= 1 and s >= 1")
    out = 1
    for k in range(1, s + 1):
        out *= comb(n * k - 1, n - 1)
    return out


def vsh_dim(n: int, d: int) -> int:
    return excess(n, d, smin(n, d))


def vsh_degree(n: int, d: int) -> int:
    return chow_degree(n, smin(n, d))


def vhat_dim(n: int, d: int) -> int:
    """Projective dimension of the variety of codimension-one forms of degree d."""
    _check(n, d)
    return n + binom(d + n - 1, n - 1) - 1


@dataclass(frozen=True)
class WaringProfile:
    n: int
    d: int
    smin: int
    sexp: int
    sstar: int
    ah_rank: int
    defective: bool
    vsh_dim: int
    vsh_degree: int
    chow_dim: int
    vhat_dim: int

    def to_json(self) -> dict:
        out = asdict(self)
        out["vsh_degree"] = str(self.vsh_degree)
        return out


def profile(n: int, d: int) -> WaringProfile:
    s = smin(n, d)
    return WaringProfile(
        n=n, d=d, smin=s, sexp=sexp(n, d), sstar=sstar(d), ah_rank=ah_rank(n, d),
        defective=s != sexp(n, d), vsh_dim=excess(n, d, s), vsh_degree=chow_degree(n, s),
        chow_dim=chow_dim(n, s), vhat_dim=vhat_dim(n, d),
    )


def table(n_range: Iterable[int], d_range: Iterable[int], zero_dim: bool = False,
          defective: bool = False) -> list[WaringProfile]:
    """Profiles for every pair in the ranges, sorted by ``(d, n)``.

    ``zero_dim`` keeps rows with ``vsh_dim == 0``; ``defective`` keeps rows with
    ``smin != sexp``.  Filters are applied before the degree is computed.
    """
    ns, ds = list(n_range), list(d_range)
    if not ns or not ds:
        raise ValueError("ranges must be non-empty")
    rows = []
    for d in sorted(ds):
        for n in sorted(ns):
            if zero_dim and vsh_dim(n, d) != 0:
                continue
            if defective and not is_defective(n, d):
                continue
            rows.append(profile(n, d))
    return rows
