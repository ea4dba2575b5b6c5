import itertools
from fractions import Fraction

import pytest

from qipsearch.core import INF, A, E, evaluate_game
from qipsearch.formats import serialize
from qipsearch.generators import (
    RandomParams,
    RunwayParams,
    gen_random,
    gen_runway,
    runway_layout,
    runway_row_count,
)
from qipsearch.oracle import minimax
from qipsearch.solver import Scp, SearchOptions, Status, solve


def test_runway_sizes():
    params = RunwayParams(planes=5, slots=4, capacity=2, window=2, disturbed=2)
    inst = gen_runway(params)
    d = sum(1 for q in inst.Q if q is A)
    assert d == 2
    assert inst.n == 2 * 5 * 4 + 5 + d
    assert inst.m == runway_row_count(params)


def test_runway_single_plane():
    inst = gen_runway(RunwayParams(planes=1, slots=1, capacity=1, window=1, disturbed=0))
    assert A not in inst.Q
    assert minimax(inst) == 0


def test_runway_quantifier_layout():
    params = RunwayParams(planes=3, slots=3, capacity=1, window=2, disturbed=1, seed=4)
    inst = gen_runway(params)
    P, S = 3, 3
    d = sum(1 for q in inst.Q if q is A)
    assert inst.Q == (E,) * (P * S) + (A,) * d + (E,) * (P * S + P)


@pytest.mark.parametrize("seed", range(6))
def test_runway_undisturbed_costs_nothing(seed):
    inst = gen_runway(RunwayParams(planes=3, slots=3, capacity=1, window=2, disturbed=0, seed=seed))
    assert solve(inst).value == 0


@pytest.mark.parametrize("kind", ["shift", "delay"])
@pytest.mark.parametrize("seed", range(8))
def test_runway_always_feasible(kind, seed):
    params = RunwayParams(planes=3, slots=4, capacity=1, window=2, disturbed=2, seed=seed,
                          disturbance=kind, reassign_cost=2, deviation_cost=1)
    inst = gen_runway(params)
    res = solve(inst, SearchOptions(mono=True, scp=Scp.BOTH))
    assert res.status is Status.FEASIBLE
    assert 0 <= res.value <= 2 * 3 + 4 * 3


@pytest.mark.parametrize("seed", range(10))
def test_runway_delay_window_after_target(seed):
    params = RunwayParams(planes=6, slots=6, capacity=2, window=3, disturbed=3, seed=seed, disturbance="delay")
    lay = runway_layout(params)
    for p, (lo, hi) in lay.shifted.items():
        assert lo > lay.reference[p]
        assert lo <= lay.spare[p] < hi


def test_runway_deterministic():
    params = RunwayParams(planes=6, slots=5, capacity=2, window=2, disturbed=2, seed=9)
    assert serialize(gen_runway(params)) == serialize(gen_runway(params))
    other = RunwayParams(planes=6, slots=5, capacity=2, window=2, disturbed=2, seed=10)
    assert serialize(gen_runway(other)) != serialize(gen_runway(params))


def test_runway_deviation_cost_changes_objective():
    base = RunwayParams(planes=4, slots=4, capacity=1, window=2, disturbed=1, seed=2)
    dev = RunwayParams(planes=4, slots=4, capacity=1, window=2, disturbed=1, seed=2, deviation_cost=1)
    a, b = gen_runway(base), gen_runway(dev)
    assert (a.A, a.b, a.Q) == (b.A, b.b, b.Q)
    assert any(b.c) and "_dev1" in b.name


@pytest.mark.parametrize("P", [10, 20, 30])
def test_runway_sizes_scale(P):
    params = RunwayParams(planes=P, slots=P, capacity=2, window=3, disturbed=3, seed=P)
    inst = gen_runway(params)
    assert 2 * P * P + P <= inst.n <= 2 * P * P + P + 3
    assert P * P <= inst.m <= 4 * P * P


@pytest.mark.parametrize("P, S", [(10, 10), (15, 10)])
def test_runway_reference_magnitude(P, S):
    # low hundreds of existentials, universals in the tens
    inst = gen_runway(RunwayParams(planes=P, slots=S, capacity=3, window=3, disturbed=P, seed=1))
    u = sum(1 for q in inst.Q if q is A)
    assert 100 <= inst.n - u < 400
    assert 10 <= u <= P


@pytest.mark.parametrize(
    "kw",
    [
        dict(planes=0, slots=2, capacity=1, window=1, disturbed=0),
        dict(planes=2, slots=2, capacity=1, window=3, disturbed=0),
        dict(planes=2, slots=2, capacity=1, window=1, disturbed=3),
        dict(planes=5, slots=2, capacity=2, window=1, disturbed=0),
        dict(planes=2, slots=2, capacity=1, window=1, disturbed=0, disturbance="swap"),
    ],
)
def test_runway_validation(kw):
    with pytest.raises(ValueError):
        RunwayParams(**kw)


def test_random_deterministic():
    p = RandomParams(n=10, m=6, seed=42, denominator=3)
    assert serialize(gen_random(p)) == serialize(gen_random(p))


def test_random_first_variable_existential():
    for seed in range(20):
        assert gen_random(RandomParams(n=5, m=2, seed=seed, universal_fraction=1)).Q == (E,) + (A,) * 4


def test_random_dense():
    inst = gen_random(RandomParams(n=7, m=5, density=1, seed=1))
    assert all(a != 0 for row in inst.A for a in row)


def test_random_coefficient_range():
    inst = gen_random(RandomParams(n=8, m=6, coeff_range=2, seed=3))
    assert all(abs(a) <= 2 for row in inst.A for a in row)
    assert all(abs(v) <= 2 for v in inst.c)


def test_random_rationals():
    inst = gen_random(RandomParams(n=8, m=6, denominator=4, seed=7))
    dens = {Fraction(a).denominator for row in inst.A for a in row}
    assert dens <= {1, 2, 3, 4} and dens - {1}


@pytest.mark.parametrize("seed", range(10))
def test_random_pure_ip(seed):
    inst = gen_random(RandomParams(n=7, m=4, universal_fraction=0, seed=seed))
    assert A not in inst.Q
    best = min((evaluate_game(inst, x) for x in itertools.product((0, 1), repeat=7)), default=INF)
    assert solve(inst).value == best


@pytest.mark.parametrize(
    "kw",
    [dict(n=0, m=1), dict(n=2, m=-1), dict(n=2, m=1, universal_fraction=2),
     dict(n=2, m=1, density=0), dict(n=2, m=1, coeff_range=0)],
)
def test_random_validation(kw):
    with pytest.raises(ValueError):
        RandomParams(**kw)
