"""Brute-force reference semantics.

Nothing here prunes.  :func:`minimax` has two independent routes: a plain
recursion over exact fractions, and a table built by enumerating every leaf
and folding level by level (numba/numpy kernels).  ``method="auto"`` uses
the table when the instance is small enough and its integer image fits
int64, and the recursion otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .core import INF, ExtValue, QipInstance, evaluate_game

TABLE_MAX_VARS = 22


@dataclass(frozen=True)
class Leaf:
    x: tuple[int, ...]
    value: ExtValue


@dataclass(frozen=True)
class ExistentialChoice:
    var: int
    value: int
    child: "StrategyTree"


@dataclass(frozen=True)
class UniversalSplit:
    var: int
    child0: "StrategyTree"
    child1: "StrategyTree"


StrategyTree = Union[Leaf, ExistentialChoice, UniversalSplit]


class Infeasible:
    """Marker returned when no winning strategy exists."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "Infeasible"


INFEASIBLE = Infeasible()


class MinimaxTable:
    """Every node value of the full game tree, built by exhaustive enumeration."""

    def __init__(self, instance: QipInstance):
        if instance.n > TABLE_MAX_VARS:
            raise ValueError(f"table oracle limited to {TABLE_MAX_VARS} variables")
        sc = instance.scaled
        if not _kernels.fits_int64(sc.max_abs_activity()):
            raise OverflowError("integer image of instance does not fit int64")
        self.instance = instance
        self.obj_scale = sc.obj_scale
        A = np.array(sc.A, dtype=np.int64).reshape(instance.m, instance.n)
        leaves = _kernels.leaf_values(A, np.array(sc.b, dtype=np.int64), np.array(sc.c, dtype=np.int64))
        universal = np.array([instance.is_universal(j) for j in range(instance.n)])
        self.levels = _kernels.fold_minimax(leaves, universal)

    def raw(self, prefix: Sequence[int]) -> int:
        idx = 0
        for v in prefix:
            idx = (idx << 1) | int(v)
        return int(self.levels[len(prefix)][idx])

    def value(self, prefix: Sequence[int] = ()) -> ExtValue:
        r = self.raw(prefix)
        return INF if r == _kernels.INT_INF else Fraction(r, self.obj_scale)


def _table_usable(instance: QipInstance) -> bool:
    return instance.n <= TABLE_MAX_VARS and _kernels.fits_int64(instance.scaled.max_abs_activity())


def _minimax_recursive(instance: QipInstance, x: list[int]) -> ExtValue:
    k = len(x)
    if k == instance.n:
        return evaluate_game(instance, x)
    vals = []
    for v in (0, 1):
        x.append(v)
        vals.append(_minimax_recursive(instance, x))
        x.pop()
    return max(vals) if instance.is_universal(k) else min(vals)


def minimax(instance: QipInstance, prefix: Sequence[int] = (), method: str = "auto") -> ExtValue:
    """Minimax value ``f(v)`` of the node reached by ``prefix``."""
    if len(prefix) > instance.n:
        raise ValueError("prefix longer than variable count")
    if method == "auto":
        method = "table" if _table_usable(instance) else "recursive"
    if method == "table":
        return MinimaxTable(instance).value(prefix)
    if method == "recursive":
        return _minimax_recursive(instance, list(prefix))
    raise ValueError(f"unknown method {method!r}")


def _value_fn(instance: QipInstance):
    if _table_usable(instance):
        return MinimaxTable(instance).value
    cache: dict[tuple, ExtValue] = {}

    def value(prefix):
        key = tuple(prefix)
        if key not in cache:
            cache[key] = _minimax_recursive(instance, list(key))
        return cache[key]

    return value


def _build(instance: QipInstance, value, x: list[int]) -> StrategyTree:
    k = len(x)
    if k == instance.n:
        return Leaf(tuple(x), evaluate_game(instance, x))
    if instance.is_universal(k):
        kids = []
        for v in (0, 1):
            x.append(v)
            kids.append(_build(instance, value, x))
            x.pop()
        return UniversalSplit(k, kids[0], kids[1])
    v0 = value(x + [0])
    v1 = value(x + [1])
    choice = 0 if v0 <= v1 else 1
    x.append(choice)
    child = _build(instance, value, x)
    x.pop()
    return ExistentialChoice(k, choice, child)


def optimal_strategy(instance: QipInstance) -> StrategyTree | Infeasible:
    """An optimal winning strategy, or :data:`INFEASIBLE`.

    At existential nodes the child of smaller value is taken, 0 on ties.
    """
    value = _value_fn(instance)
    if value(()) == INF:
        return INFEASIBLE
    return _build(instance, value, [])


def strategy_leaves(tree: StrategyTree):
    if isinstance(tree, Leaf):
        yield tree
    elif isinstance(tree, ExistentialChoice):
        yield from strategy_leaves(tree.child)
    else:
        yield from strategy_leaves(tree.child0)
        yield from strategy_leaves(tree.child1)


def strategy_value(tree: StrategyTree) -> ExtValue:
    if isinstance(tree, Leaf):
        return tree.value
    if isinstance(tree, ExistentialChoice):
        return strategy_value(tree.child)
    return max(strategy_value(tree.child0), strategy_value(tree.child1))


def principal_variation(instance: QipInstance) -> tuple[int, ...] | Infeasible:
    """Optimal play for both sides, 0 preferred on ties for either player."""
    value = _value_fn(instance)
    if value(()) == INF:
        return INFEASIBLE
    x: list[int] = []
    for k in range(instance.n):
        v0, v1 = value(x + [0]), value(x + [1])
        if instance.is_universal(k):
            x.append(0 if v0 >= v1 else 1)
        else:
            x.append(0 if v0 <= v1 else 1)
    return tuple(x)
