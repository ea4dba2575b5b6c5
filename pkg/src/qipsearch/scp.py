"""Strategic copy-pruning: the two copy conditions and the ancestor walk.

Given a feasible leaf ``x~`` below the child ``w~`` of a universal node
``v`` (variable ``k``), the existential decisions of ``x~`` are copied into
the unexplored sibling ``w^`` (``x_k = 1 - x~_k``).  The objective
condition bounds the copied strategy's value by ``c.x~``; the constraint
condition proves every leaf of the copied strategy feasible by testing each
row in its worst case over the future universal variables.

Arithmetic runs on the instance's integer image (rows and objective scaled
by positive integers), so results are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Sequence

from .core import E, ExtValue, MonotoneStatus, QipInstance, evaluate_game, forced_value, INF


def _objective_lhs(inst: QipInstance, x: Sequence[int], k: int) -> int:
    ck = inst.scaled.c[k]
    lhs = ck * (1 - 2 * x[k])  # c_k (x^_k - x~_k)
    for j, cj in inst.universal_obj_terms:
        if j <= k:
            continue
        if cj >= 0:
            lhs += cj * (1 - x[j])
        else:
            lhs -= cj * x[j]
    return lhs


def scp_objective_ok(instance: QipInstance, x_tilde: Sequence[int], k: int) -> tuple[bool, Fraction]:
    """Objective copy condition at universal variable ``k`` (0-based).

    Returns ``(lhs <= 0, lhs)`` where ``lhs`` is the increase of the copied
    strategy's worst-case value over ``c.x~``.  ``O(n - k)``.
    """
    if not instance.is_universal(k):
        raise ValueError(f"variable {k} is not universal")
    lhs = _objective_lhs(instance, x_tilde, k)
    return lhs <= 0, Fraction(lhs, instance.scaled.obj_scale)


def copied_value(instance: QipInstance, x_tilde: Sequence[int], k: int) -> Fraction:
    """Worst-case value of the copied strategy below the flipped child."""
    sc = instance.scaled
    z = 0
    for j in range(instance.n):
        if j == k:
            z += sc.c[j] * (1 - x_tilde[j])
        elif j > k and instance.is_universal(j):
            z += max(sc.c[j], 0)
        else:
            z += sc.c[j] * x_tilde[j]
    return Fraction(z, sc.obj_scale)


def row_activity(instance: QipInstance, x: Sequence[int]) -> list[int]:
    return [sum(a for a, v in zip(row, x) if v) for row in instance.scaled.A]


def _row_ok(inst: QipInstance, x: Sequence[int], k: int, i: int, act_i: int) -> bool:
    lhs = act_i
    for j, a in inst.row_universal_terms[i]:
        if j < k:
            continue
        if j == k:
            lhs += a * (1 - 2 * x[k])
        else:
            lhs -= a * x[j]
            if a > 0:
                lhs += a
    return lhs <= inst.scaled.b[i]


def scp_constraints_ok(
    instance: QipInstance,
    x_tilde: Sequence[int],
    k: int,
    rows: Collection[int] | None = None,
    activity: Sequence[int] | None = None,
    check_precondition: bool = True,
) -> tuple[bool, int | None]:
    """Worst-case feasibility of the copied strategy, row by row.

    ``rows`` defaults to all rows.  ``activity`` is the scaled ``A x~`` if
    the caller has it; with it the cost is ``O(|rows| (n - k))``.  Returns
    ``(True, None)`` or ``(False, first failing row)``.
    """
    if not instance.is_universal(k):
        raise ValueError(f"variable {k} is not universal")
    if check_precondition and evaluate_game(instance, x_tilde) == INF:
        raise ValueError("x_tilde violates A x <= b; copy conditions need a feasible leaf")
    if rows is None:
        rows = range(instance.m)
    if activity is None:
        A = instance.scaled.A
        activity = {i: sum(a for a, v in zip(A[i], x_tilde) if v) for i in rows}
    for i in rows:
        if not _row_ok(instance, x_tilde, k, i, activity[i]):
            return False, i
    return True, None


# ---------------------------------------------------------------------------
# ancestor walk
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubtreePruned:
    """Sibling of ``x~`` at universal node ``prefix`` skipped; ``f(node) = value``."""

    var: int
    prefix: tuple[int, ...]
    value: ExtValue
    sibling_bound: ExtValue  # f(sibling) <= this
    x_tilde: tuple[int, ...] = ()
    phase: int = 0


@dataclass(frozen=True)
class BoundUpdated:
    """Sibling skipped but optimality below was not certified: ``f(node) <= value``."""

    var: int
    prefix: tuple[int, ...]
    value: ExtValue
    sibling_bound: ExtValue
    x_tilde: tuple[int, ...] = ()
    phase: int = 0


@dataclass(frozen=True)
class MonotoneFinished:
    var: int
    prefix: tuple[int, ...]


@dataclass(frozen=True)
class Stopped:
    var: int
    prefix: tuple[int, ...]
    reason: str
    row: int | None = None


def recycle_strategy(
    instance: QipInstance,
    x_tilde: Sequence[int],
    z_tilde: ExtValue | None = None,
    *,
    optimal_existentials: Collection[int] = (),
    monotone: Sequence[MonotoneStatus] | None = None,
) -> list:
    """Walk from the deepest universal variable of ``x~`` toward the root.

    ``optimal_existentials`` lists existential variables whose choice in
    ``x~`` is known to be optimal at its node; any other existential
    ancestor switches the walk from pruning to bound updates.  Monotone
    variables fixed at their forced value are passed through unchecked.
    At each universal node only rows containing its variable are checked;
    rows without it were certified at deeper levels of the same walk (or
    hold because ``A x~ <= b``).
    """
    x = tuple(x_tilde)
    if z_tilde is None:
        z_tilde = evaluate_game(instance, x)
    if z_tilde == INF:
        raise ValueError("x_tilde must be a feasible leaf")
    if not instance.universals:
        return []
    act = row_activity(instance, x)
    effects: list = []
    pruning = True
    for k in range(instance.universals[-1], -1, -1):
        prefix = x[:k]
        if monotone is not None and forced_value(monotone[k], instance.Q[k]) == x[k]:
            effects.append(MonotoneFinished(k, prefix))
            continue
        if instance.Q[k] is E:
            if k not in optimal_existentials:
                pruning = False
            continue
        ok, _ = scp_objective_ok(instance, x, k)
        if not ok:
            effects.append(Stopped(k, prefix, "objective"))
            return effects
        ok, bad = scp_constraints_ok(instance, x, k, instance.col_rows[k], act, check_precondition=False)
        if not ok:
            effects.append(Stopped(k, prefix, "constraint", bad))
            return effects
        zhat = copied_value(instance, x, k)
        cls = SubtreePruned if pruning else BoundUpdated
        effects.append(cls(k, prefix, z_tilde, zhat, x))
    return effects
