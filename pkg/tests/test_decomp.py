import random
from itertools import combinations
from math import comb

import pytest

from chowforms import formulas as fm
from chowforms.apolar import perp_space
from chowforms.decomp import (CodimOneInstance, SamplingPlan, binary_roots, forward_check,
                              points_on_hyperplane, rational_hyperplanes, reconstruct,
                              sylvester_binary, synth_instance, verify_roundtrip,
                              verify_smoothness_case, vsh_point_count)
from chowforms.errors import (EnumerationTooLarge, Inconsistent, NotZeroDimensional,
                              SplittingFailure)
from chowforms.exactalg import PrimeField, Rationals
from chowforms.polyring import (Form, LinearForm, Ring, apply, product, random_form,
                                random_linears)

F = PrimeField()
F11 = PrimeField(11)


def test_synth_instance_invariants(field):
    for n, d, s in [(1, 3, 2), (2, 5, 3), (3, 4, 2)]:
        inst = synth_instance(n, d, s, seed=4, field=field)
        assert inst.check()
        assert forward_check(inst.f, inst.hyperplanes)


def test_forward_check_examples():
    x0 = Form.from_terms(2, 4, {(4, 0, 0): 1}, Ring.S, F)
    assert forward_check(x0, [LinearForm((0, 1, 0), Ring.T, F)])
    hits = sum(forward_check(random_form(2, 5, seed, F), random_linears(2, 2, seed, F, Ring.T))
               for seed in range(10))
    assert hits == 0


def test_reconstruct_round_trip(field):
    for n, d, s in [(2, 5, 3), (2, 4, 3), (1, 5, 3)]:
        inst = synth_instance(n, d, s, seed=1, field=field)
        out = reconstruct(inst.f, inst.hyperplanes)
        assert out.check()
        assert out.unknowns == s * comb(d + n - 1, n - 1)
        assert out.equations == comb(d + n, n)


def test_reconstruct_rejects_non_apolar():
    f = random_form(2, 5, 0, F)
    with pytest.raises(Inconsistent):
        reconstruct(f, random_linears(2, 3, 1, F, Ring.T))


def test_points_on_hyperplane_lie_on_it():
    rng = random.Random(0)
    L = LinearForm((3, 1, 4, 1), Ring.T, F)
    pts = points_on_hyperplane(L, 6, rng)
    assert len({p.coeffs for p in pts}) == 6
    for p in pts:
        assert F.reduce(sum(a * b for a, b in zip(L.coeffs, p.coeffs))) == 0
    assert SamplingPlan.for_degree(3, 4).points_per_hyperplane == comb(6, 2)


def test_instance_json_round_trip():
    inst = synth_instance(2, 4, 3, seed=2)
    back = CodimOneInstance.from_json(inst.to_json())
    assert back.f == inst.f and back.hyperplanes == inst.hyperplanes
    assert back.summands == inst.summands and back.check()


def test_roundtrip_reports():
    for n, d in [(1, 5), (2, 6), (3, 4)]:
        r = verify_roundtrip(n, d, seed=3)
        assert r.passed and r.computed["summands"] == fm.smin(n, d)


def test_sylvester_sum_of_cubes():
    f = Form.from_terms(1, 3, {(3, 0): 1, (0, 3): 1}, Ring.S, PrimeField(101))
    out = sylvester_binary(f)
    assert sorted((c, l.coeffs) for c, l in out) == [(1, (0, 1)), (1, (1, 0))]


@pytest.mark.parametrize("d", [3, 5, 7])
def test_sylvester_recovers_planted_points(d):
    field = PrimeField(1009)
    rng = random.Random(d)
    pts = random_linears(1, (d + 2) // 2, rng, field)
    f = Form.zero(1, d, Ring.S, field)
    for l in pts:
        f = f + l.power(d).scale(field.random(rng) or 1)
    out = sylvester_binary(f)
    assert {l.coeffs for _, l in out} == {l.coeffs for l in pts}


def test_sylvester_splitting_failure_by_rejection():
    F7 = PrimeField(7)
    for seed in range(200):
        f = random_form(1, 4, seed, F7)
        basis = perp_space(f, 3).basis
        if basis and all(len(binary_roots(D)) != 3 for D in basis):
            with pytest.raises(SplittingFailure):
                sylvester_binary(f)
            return
    pytest.fail("no non-split example found")


def test_binary_roots_scan():
    F13 = PrimeField(13)
    Ls = [LinearForm(v, Ring.T, F13) for v in [(1, 2), (0, 1), (1, 0)]]
    D = product([L.to_form() for L in Ls])
    roots = {r.coeffs for r in binary_roots(D)}
    # l with L(l) = 0 for each factor
    assert roots == {(1, 6), (1, 0), (0, 1)}


def brute_count(f, s, field):
    hyper = [LinearForm(tuple(int(x) for x in row), Ring.T, field)
             for row in rational_hyperplanes(f.n, field)]
    perp = perp_space(f, s)
    return sum(perp.contains(product([L.to_form() for L in sub]))
               for sub in combinations(hyper, s))


@pytest.mark.parametrize("n,d,s,p,seed", [(2, 4, 3, 5, 0), (1, 3, 2, 5, 1), (2, 3, 2, 5, 2)])
def test_vsh_count_matches_brute_force(n, d, s, p, seed):
    field = PrimeField(p)
    for f in (random_form(n, d, seed, field), synth_instance(n, d, s, seed, field).f):
        assert vsh_point_count(f, s) == brute_count(f, s, field)


def test_vsh_count_examples():
    inst = synth_instance(2, 5, 3, seed=0, field=F11)
    assert vsh_point_count(inst.f, 3) >= 1
    f = random_form(2, 5, 0, F11)
    assert vsh_point_count(f, 3) <= 15
    assert vsh_point_count(f, 2) == 0


def test_vsh_count_guards():
    with pytest.raises(EnumerationTooLarge):
        vsh_point_count(random_form(2, 5, 0, F11), 3, guard=100)


def test_rational_hyperplanes_count():
    for n, p in [(1, 7), (2, 5), (3, 3)]:
        H = rational_hyperplanes(n, PrimeField(p))
        assert len(H) == (p ** (n + 1) - 1) // (p - 1)
        assert len({tuple(r) for r in H}) == len(H)


@pytest.mark.parametrize("d,dim", [(5, 4), (8, 11)])
def test_smoothness_examples(d, dim):
    r = verify_smoothness_case(2, d, seed=0)
    assert r.passed and r.computed["perp_dim"] == r.computed["ideal_dim"] == dim


def test_smoothness_needs_zero_dimensional():
    with pytest.raises(NotZeroDimensional):
        verify_smoothness_case(3, 4)
