"""Codimension-one decompositions of homogeneous forms and Chow varieties of zero-cycles."""

from .exactalg import DEFAULT_PRIME, ExactMatrix, PrimeField, Rationals, default_field
from .formulas import (WaringProfile, ah_rank, chow_degree, chow_dim, defective_classification,
                       is_defective, profile, sexp, smin, sstar, table, vhat_dim, vsh_degree,
                       vsh_dim)
from .polyring import Form, LinearForm, Ring, apply, evaluate, monomial_basis, product

__version__ = "0.1.0"
