import json
import random

import pytest

from chowforms import formulas as fm
from chowforms.chowlab import (_block_partitions, chow_degree_oracle, chow_tangent_basis,
                               forms_through_pairwise_meets, ideal_claim_hilbert_check,
                               in_general_position, partition_count, random_codim_one_form,
                               smin_oracle, terracini_dim, verify_chow_tangent,
                               verify_terracini, vhat_tangent_basis)
from chowforms.errors import EnumerationTooLarge, InvalidPoint, ProportionalFactors
from chowforms.exactalg import PrimeField, kernel_basis, ExactMatrix
from chowforms.polyring import Form, LinearForm, Ring, evaluate, random_form, random_linears

F = PrimeField()


def lines(n, s, seed):
    return random_linears(n, s, random.Random(seed), F, Ring.T)


def test_chow_tangent_examples():
    assert len(chow_tangent_basis(lines(2, 3, 0))) == 7
    assert len(chow_tangent_basis(lines(3, 2, 0))) == 7
    d0, d1 = LinearForm((1, 0), Ring.T, F), LinearForm((0, 1), Ring.T, F)
    assert len(chow_tangent_basis([d0, d1])) == 3


def test_chow_tangent_rejects_proportional():
    L = LinearForm((1, 2, 3), Ring.T, F)
    with pytest.raises(ProportionalFactors):
        chow_tangent_basis([L, LinearForm((2, 4, 6), Ring.T, F)])


def test_forms_through_meets_examples():
    Ls = lines(2, 3, 1)
    assert len(forms_through_pairwise_meets(Ls, 3)) == 7
    assert len(forms_through_pairwise_meets(Ls, 1)) == 0
    assert len(forms_through_pairwise_meets(lines(3, 3, 1), 3)) == 10


def test_meets_forms_vanish_at_sampled_meet_points():
    Ls = lines(3, 3, 4)
    rng = random.Random(0)
    forms = forms_through_pairwise_meets(Ls, 3)
    for i in range(3):
        for j in range(i + 1, 3):
            basis = kernel_basis(ExactMatrix.from_rows(F, [Ls[i].coeffs, Ls[j].coeffs]))
            for _ in range(3):
                a, b = F.random(rng), F.random(rng)
                pt = tuple(F.reduce(a * x + b * y) for x, y in zip(*basis))
                assert all(evaluate(g, pt) == 0 for g in forms)


@pytest.mark.parametrize("n,s,dims", [(2, 3, 7), (2, 4, 9), (3, 3, 10)])
def test_verify_chow_tangent_examples(n, s, dims):
    for seed in range(3):
        r = verify_chow_tangent(n, s, seed)
        assert r.passed
        assert r.computed["tangent_dim"] == r.computed["meets_dim"] == dims


def test_chow_tangent_n1_short_circuit():
    r = verify_chow_tangent(1, 3, 0)
    assert r.passed and r.computed["tangent_dim"] == 4


def test_report_json_round_trips():
    r = verify_chow_tangent(2, 2, 5)
    data = json.loads(json.dumps(r.to_json()))
    assert data["pass"] is True and data["seed"] == 5
    assert data["field"] == {"kind": "prime", "modulus": str(F.modulus)}


def test_ideal_claim_examples():
    r = ideal_claim_hilbert_check(2, 3, [2, 3], 0)
    assert r.computed == r.expected == {"dim_t2": 3, "dim_t3": 7}
    r = ideal_claim_hilbert_check(3, 3, [2, 3, 4], 0)
    assert r.passed
    with pytest.raises(ValueError):
        ideal_claim_hilbert_check(2, 3, [1], 0)


def test_vhat_tangent_examples():
    rng = random.Random(3)
    L = random_linears(2, 1, rng, F, Ring.T)[0]
    g = random_codim_one_form(L, 3, rng)
    assert len(vhat_tangent_basis(L, g)) == 6 == fm.vhat_dim(2, 3) + 1
    d0 = LinearForm((1, 0), Ring.T, F)
    x1 = Form.from_terms(1, 5, {(0, 5): 1}, Ring.S, F)
    assert len(vhat_tangent_basis(d0, x1)) == 2
    L = random_linears(3, 1, rng, F, Ring.T)[0]
    g = random_codim_one_form(L, 2, rng)
    assert len(vhat_tangent_basis(L, g)) - 1 == min(fm.vhat_dim(3, 2), 9) == 8


def test_vhat_tangent_rejects_invalid_point():
    L = LinearForm((1, 0, 0), Ring.T, F)
    with pytest.raises(InvalidPoint):
        vhat_tangent_basis(L, random_form(2, 3, 0, F))
    with pytest.raises(InvalidPoint):
        vhat_tangent_basis(L, Form.zero(2, 3, Ring.S, F))


@pytest.mark.parametrize("n,d", [(1, 4), (2, 2), (2, 3), (2, 4), (3, 3)])
def test_vhat_tangent_matches_dimension_formula(n, d):
    rng = random.Random(n * 10 + d)
    L = random_linears(n, 1, rng, F, Ring.T)[0]
    g = random_codim_one_form(L, d, rng)
    full = fm.binom(d + n, n) - 1
    assert len(vhat_tangent_basis(L, g)) - 1 == min(fm.vhat_dim(n, d), full)


def test_terracini_monotone_and_stabilizes():
    dims = [terracini_dim(2, 5, s, seed=1) for s in range(1, 5)]
    assert dims == sorted(dims)
    assert dims[-1] == fm.binom(7, 2) - 1


def test_smin_oracle_examples():
    assert smin_oracle(2, 5) == 3
    assert smin_oracle(2, 4) == 3
    assert smin_oracle(3, 3) == fm.smin(3, 3) == 2
    r = verify_terracini(2, 6, seed=2)
    assert r.passed and r.params["secant_dims"][-1] == fm.binom(8, 2) - 1


def test_block_partitions_count():
    for n, s in [(2, 2), (2, 3), (3, 2), (2, 4)]:
        parts = list(_block_partitions(tuple(range(n * s)), n))
        assert len(parts) == partition_count(n, s)
        assert len({frozenset(map(frozenset, p)) for p in parts}) == len(parts)


@pytest.mark.parametrize("n,s,expected", [(2, 2, 3), (2, 3, 15), (3, 2, 10), (2, 4, 105)])
def test_chow_degree_oracle(n, s, expected):
    assert chow_degree_oracle(n, s, seed=7) == expected == fm.chow_degree(n, s)


def test_chow_degree_oracle_guard():
    with pytest.raises(EnumerationTooLarge):
        chow_degree_oracle(3, 6, guard=1000)


def test_general_position():
    e = [LinearForm(v, Ring.T, F) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]]
    assert in_general_position(e)
    assert not in_general_position(e[:2] + [LinearForm((1, 1, 0), Ring.T, F)])
