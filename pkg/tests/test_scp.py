import itertools
from fractions import Fraction

import numpy as np
import pytest

from qipsearch.core import INF, A, E, QipInstance, detect_monotone, evaluate_game
from qipsearch.generators import RandomParams, gen_random
from qipsearch.oracle import MinimaxTable
from qipsearch.scp import (
    BoundUpdated,
    MonotoneFinished,
    Stopped,
    SubtreePruned,
    copied_value,
    recycle_strategy,
    scp_constraints_ok,
    scp_objective_ok,
)

from helpers import copied_completions_feasible, example2

PV2 = (0, 1, 0, 0, 1)


def cond2_lhs(inst, x, k, i):
    """Worst-case row activity of the copied strategy, written out plainly."""
    row = inst.A[i]
    lhs = row[k] * (1 - x[k])
    for j in range(inst.n):
        if j == k:
            continue
        if j > k and inst.is_universal(j):
            lhs += max(row[j], 0)
        else:
            lhs += row[j] * x[j]
    return lhs


def test_objective_condition_example2():
    ok, lhs = scp_objective_ok(example2(), PV2, 3)
    assert ok and lhs == -2


def test_constraint_condition_example2():
    inst = example2()
    assert scp_constraints_ok(inst, PV2, 3) == (True, None)
    assert cond2_lhs(inst, PV2, 3, 1) == 1
    assert scp_constraints_ok(inst, PV2, 1) == (True, None)
    assert cond2_lhs(inst, PV2, 1, 0) == 2


def test_objective_condition_zero_universal_costs():
    inst = QipInstance(((1, 1, 1),), (3,), (5, 0, -7), (E, A, E))
    for x in itertools.product((0, 1), repeat=3):
        assert scp_objective_ok(inst, x, 1)[0]


def test_constraint_condition_vacuous_row():
    # row 0 has no universal entry at or after k
    inst = QipInstance(((1, 0, 1), (0, 1, 0)), (2, 1), (0, 0, 0), (E, A, E))
    assert scp_constraints_ok(inst, (1, 0, 1), 1, rows=[0]) == (True, None)


def test_conditions_reject_existential_k():
    with pytest.raises(ValueError):
        scp_objective_ok(example2(), PV2, 0)
    with pytest.raises(ValueError):
        scp_constraints_ok(example2(), PV2, 2)


def test_constraint_condition_rejects_infeasible_leaf():
    with pytest.raises(ValueError):
        scp_constraints_ok(example2(), (1, 1, 1, 1, 1), 1)


def test_recycle_example2():
    inst = example2()
    effects = recycle_strategy(inst, PV2, optimal_existentials={2, 4}, monotone=detect_monotone(inst))
    pruned = [e for e in effects if isinstance(e, SubtreePruned)]
    assert [(e.var, e.value) for e in pruned] == [(3, 4), (1, 4)]
    assert pruned[0].prefix == (0, 1, 0)
    assert pruned[1].prefix == (0,)
    assert isinstance(effects[-1], MonotoneFinished) and effects[-1].var == 0


def test_recycle_switches_to_bound_mode():
    # x3 is an uncertified existential ancestor: exact below it, bounds above
    inst = example2()
    effects = recycle_strategy(inst, PV2, optimal_existentials=set())
    assert [type(e) for e in effects] == [SubtreePruned, BoundUpdated]
    assert [e.var for e in effects] == [3, 1]


def test_recycle_bound_at_v2():
    inst = example2()
    table = MinimaxTable(inst)
    effects = recycle_strategy(inst, PV2, optimal_existentials={2, 4})
    at_v1 = [e for e in effects if getattr(e, "var", None) == 1][0]
    assert at_v1.sibling_bound == 1
    assert table.value((0, 0)) == 0 < at_v1.sibling_bound


def test_recycle_stops_on_objective():
    inst = QipInstance(((1, 1),), (2,), (0, 5), (E, A))
    effects = recycle_strategy(inst, (0, 0))
    assert effects == [Stopped(1, (0,), "objective")]


def test_recycle_stops_on_constraint():
    inst = QipInstance(((0, 1),), (0,), (0, 0), (E, A))
    effects = recycle_strategy(inst, (0, 0))
    assert effects == [Stopped(1, (0,), "constraint", 0)]


def test_recycle_no_universals():
    inst = QipInstance(((1, 1),), (1,), (1, 1), (E, E))
    assert recycle_strategy(inst, (0, 0)) == []


def _random_cases(count, n_max=10):
    rng = np.random.default_rng(5)
    for seed in range(count):
        n = int(rng.integers(2, n_max + 1))
        yield gen_random(RandomParams(n=n, m=int(rng.integers(1, 6)), seed=seed,
                                      universal_fraction=Fraction(2, 5), denominator=3))


@pytest.mark.parametrize("inst", list(_random_cases(40)), ids=lambda i: i.name)
def test_conditions_against_direct_evaluation(inst):
    U = inst.universals
    if not U:
        return
    for x in itertools.product((0, 1), repeat=inst.n):
        z = evaluate_game(inst, x)
        if z == INF:
            continue
        for k in U:
            ok1, lhs = scp_objective_ok(inst, x, k)
            zhat = copied_value(inst, x, k)
            assert zhat - z == lhs
            if ok1:
                assert zhat <= z
            ok2, bad = scp_constraints_ok(inst, x, k)
            direct = all(cond2_lhs(inst, x, k, i) <= inst.b[i] for i in range(inst.m))
            assert ok2 == direct
            if ok2:
                assert copied_completions_feasible(inst, x, k)
            else:
                assert cond2_lhs(inst, x, k, bad) > inst.b[bad]


@pytest.mark.parametrize("inst", list(_random_cases(40, n_max=9)), ids=lambda i: i.name)
def test_recycle_effects_sound_for_optimal_leaf(inst):
    """Walk from the principal leaf with every existential certified optimal."""
    table = MinimaxTable(inst)
    if table.value(()) == INF:
        return
    x = []
    for k in range(inst.n):
        v0, v1 = table.value(x + [0]), table.value(x + [1])
        if inst.is_universal(k):
            x.append(0 if v0 >= v1 else 1)
        else:
            x.append(0 if v0 <= v1 else 1)
    E_idx = {j for j in range(inst.n) if not inst.is_universal(j)}
    z = evaluate_game(inst, x)
    for e in recycle_strategy(inst, x, optimal_existentials=E_idx):
        if isinstance(e, (SubtreePruned, BoundUpdated)):
            sib = e.prefix + (1 - x[e.var],)
            assert table.value(sib) <= e.sibling_bound <= z
            if isinstance(e, SubtreePruned):
                assert table.value(e.prefix) == z
