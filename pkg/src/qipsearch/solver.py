"""Depth-first minimax search with monotone forcing and strategic copy-pruning.

The search is fail-soft alpha-beta with the existential player minimizing.
It runs in two phases: a null-window feasibility search on the zero
objective, then a full-window optimization search.  Copy-pruning can be
enabled per phase.

Copy-pruning is applied while backtracking.  Every returned value below
``beta`` carries the leaf it came from.  When a universal node's first child
returns such a leaf ``x~``, the copy conditions are tested at that node; if
they hold the sibling is skipped.  If the child was solved exactly the node
value is certified (pruning mode); if the child failed low only the bound
``f(v) <= c.x~`` is certified (bound-update mode), which is still a cutoff.
A leaf keeps a ``chain`` flag while every universal level between it and
the current node passed the conditions, so only rows containing the
current variable need rechecking.  Once a level fails, the walk for that
leaf is over.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .core import INF, E, ExtValue, QipInstance, detect_monotone, forced_value, validate
from .scp import BoundUpdated, SubtreePruned, copied_value

NEG_INF = -INF


class Scp(enum.Enum):
    OFF = "off"
    FEAS = "feas"
    OPT = "opt"
    BOTH = "both"

    @property
    def feasibility(self) -> bool:
        return self in (Scp.FEAS, Scp.BOTH)

    @property
    def optimization(self) -> bool:
        return self in (Scp.OPT, Scp.BOTH)


class Status(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    LIMIT = "limit"


@dataclass(frozen=True)
class SearchOptions:
    mono: bool = True
    scp: Scp = Scp.OPT
    move_ordering: str = "default"  # or "naive"
    node_limit: int | None = None
    time_limit: float | None = None  # seconds
    record_effects: bool = False

    def __post_init__(self):
        if not isinstance(self.scp, Scp):
            object.__setattr__(self, "scp", Scp(self.scp))
        if self.move_ordering not in ("default", "naive"):
            raise ValueError(f"unknown move ordering {self.move_ordering!r}")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")

    @property
    def label(self) -> str:
        return f"mono-{'on' if self.mono else 'off'}_scp-{self.scp.value}"


@dataclass
class SearchStats:
    nodes_visited: int = 0
    leaves_evaluated: int = 0
    scp_prunes: int = 0
    scp_bound_updates: int = 0
    mono_prunes: int = 0
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        return {
            "nodes_visited": self.nodes_visited,
            "leaves_evaluated": self.leaves_evaluated,
            "scp_prunes": self.scp_prunes,
            "scp_bound_updates": self.scp_bound_updates,
            "mono_prunes": self.mono_prunes,
            "elapsed": self.elapsed,
        }


@dataclass
class SolveResult:
    status: Status
    value: ExtValue
    pv: tuple[int, ...] | None
    first_stage: tuple[int, ...] | None
    stats: SearchStats
    lower: ExtValue = NEG_INF
    upper: ExtValue = INF
    effects: list = field(default_factory=list)


class LimitReached(Exception):
    pass


def move_order(instance: QipInstance) -> list[tuple[int, int]]:
    """Static child order per variable.

    Universal variables try the more threatening value first, existential
    ones the cheaper value.  The key for ``x_k = 1`` versus ``x_k = 0`` is
    the pair (objective change, row load): ``(c_k, sum_i max(0, A_ik))``
    for the universal player, ``(c_k, sum_i A_ik)`` for the existential
    player.  Ties keep 0 first.  Monotone variables always get their forced
    value first under this key.
    """
    out = []
    for k in range(instance.n):
        col = [row[k] for row in instance.A]
        ck = instance.c[k]
        if instance.is_universal(k):
            one_first = (ck, sum(max(a, 0) for a in col)) > (0, 0)
        else:
            one_first = (ck, sum(col)) < (0, 0)
        out.append((1, 0) if one_first else (0, 1))
    return out


def order_moves(instance: QipInstance, k: int, options: SearchOptions = SearchOptions()) -> tuple[int, ...]:
    """Values searched at variable ``k``; a single value when monotone forcing applies."""
    if options.mono:
        f = forced_value(detect_monotone(instance)[k], instance.Q[k])
        if f is not None:
            return (f,)
    if options.move_ordering == "naive":
        return (0, 1)
    return move_order(instance)[k]


def prune_monotone(instance: QipInstance, k: int) -> int | None:
    return forced_value(detect_monotone(instance)[k], instance.Q[k])


class _Search:
    def __init__(self, instance: QipInstance, c: tuple[int, ...], options: SearchOptions, use_scp: bool,
                 stats: SearchStats, deadline: float | None, phase: int, effects: list | None):
        sc = instance.scaled
        n, m = instance.n, instance.m
        self.inst = instance
        self.n = n
        self.b = sc.b
        self.c = c
        self.obj_scale = sc.obj_scale if any(c) else 1
        self.univ = [instance.is_universal(j) for j in range(n)]
        self.col = [tuple((i, sc.A[i][j]) for i in instance.col_rows[j]) for j in range(n)]
        # rest[i][j]: largest contribution variables j.. can still add to row i
        # when existentials minimize it and universals maximize it.
        self.rest = []
        for i in range(m):
            r = [0] * (n + 1)
            for j in range(n - 1, -1, -1):
                a = sc.A[i][j]
                r[j] = r[j + 1] + (max(a, 0) if self.univ[j] else min(a, 0))
            self.rest.append(r)
        self.obj_rest = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            cj = c[j]
            self.obj_rest[j] = self.obj_rest[j + 1] + (max(cj, 0) if self.univ[j] else min(cj, 0))
        self.row_uterms = instance.row_universal_terms
        self.obj_uterms = [(j, cj) for j, cj in ((j, c[j]) for j in instance.universals) if cj]
        if options.mono:
            status = detect_monotone(instance)
            self.forced = [forced_value(status[j], instance.Q[j]) for j in range(n)]
        else:
            self.forced = [None] * n
        self.order = [(0, 1)] * n if options.move_ordering == "naive" else move_order(instance)
        self.use_scp = use_scp
        self.stats = stats
        self.node_limit = options.node_limit
        self.deadline = deadline
        self.phase = phase
        self.effects = effects
        self.x = [0] * n
        self.act = [0] * m
        self.obj = 0
        self.root_upper = INF

    # -- bookkeeping -------------------------------------------------------

    def _tick(self):
        st = self.stats
        st.nodes_visited += 1
        if self.node_limit is not None and st.nodes_visited > self.node_limit:
            raise LimitReached
        if self.deadline is not None and st.nodes_visited & 255 == 0 and time.perf_counter() > self.deadline:
            raise LimitReached

    def _assign(self, j: int, v: int) -> bool:
        """Set ``x_j = v``; False if some row can no longer be satisfied."""
        self.x[j] = v
        act, b, rest = self.act, self.b, self.rest
        ok = True
        if v:
            self.obj += self.c[j]
            for i, a in self.col[j]:
                act[i] += a
        for i, _ in self.col[j]:
            if act[i] + rest[i][j + 1] > b[i]:
                ok = False
                break
        return ok

    def _unassign(self, j: int, v: int):
        if v:
            self.obj -= self.c[j]
            act = self.act
            for i, a in self.col[j]:
                act[i] -= a
        self.x[j] = 0

    # -- copy conditions ---------------------------------------------------

    def _copy_ok(self, k: int, leaf) -> bool:
        x, act = leaf
        flip = 1 - 2 * x[k]
        lhs = self.c[k] * flip
        for j, cj in self.obj_uterms:
            if j > k:
                lhs += cj * (1 - x[j]) if cj >= 0 else -cj * x[j]
        if lhs > 0:
            return False
        b, row_uterms = self.b, self.row_uterms
        for i, _ in self.col[k]:
            s = act[i]
            for j, a in row_uterms[i]:
                if j < k:
                    continue
                if j == k:
                    s += a * flip
                else:
                    s -= a * x[j]
                    if a > 0:
                        s += a
            if s > b[i]:
                return False
        return True

    def _record(self, k: int, leaf, value: int, exact: bool):
        x = leaf[0]
        z = Fraction(value, self.obj_scale)
        inst = self.inst if self.phase == 2 else self.inst.zero_objective()
        zhat = copied_value(inst, x, k)
        cls = SubtreePruned if exact else BoundUpdated
        self.effects.append(cls(k, x[:k], z, zhat, x, self.phase))

    # -- search ------------------------------------------------------------

    def root(self, alpha, beta):
        self._tick()
        for i in range(len(self.act)):
            if self.rest[i][0] > self.b[i]:
                return INF, None, False
        return self._children(0, alpha, beta)

    def search(self, k: int, alpha, beta):
        self._tick()
        return self._children(k, alpha, beta)

    def _children(self, k: int, alpha, beta):
        if k == self.n:
            self.stats.leaves_evaluated += 1
            return self.obj, (tuple(self.x), tuple(self.act)), True
        lb = self.obj + self.obj_rest[k]
        if lb >= beta:
            return lb, None, False
        f = self.forced[k]
        if f is not None:
            self.stats.mono_prunes += 1
            moves = (f,)
        else:
            moves = self.order[k]
        if self.univ[k]:
            return self._universal(k, moves, alpha, beta)
        return self._existential(k, moves, alpha, beta)

    def _existential(self, k, moves, alpha, beta):
        best, best_leaf, best_chain = INF, None, False
        for v in moves:
            if self._assign(k, v):
                r, leaf, chain = self.search(k + 1, alpha, min(beta, best))
            else:
                r, leaf, chain = INF, None, False
            self._unassign(k, v)
            if r < best:
                best, best_leaf, best_chain = r, leaf, chain
                if k == 0 and alpha < r < beta:
                    self.root_upper = min(self.root_upper, r)
            if best <= alpha:
                break
        return best, best_leaf, best_chain

    def _universal(self, k, moves, alpha, beta):
        v0 = moves[0]
        if self._assign(k, v0):
            r0, leaf0, chain0 = self.search(k + 1, alpha, beta)
        else:
            r0, leaf0, chain0 = INF, None, False
        self._unassign(k, v0)
        if r0 >= beta or len(moves) == 1:
            return r0, leaf0, chain0
        if self.use_scp and chain0 and leaf0 is not None and self._copy_ok(k, leaf0):
            exact = r0 > alpha
            self.stats.scp_prunes += 1
            if not exact:
                self.stats.scp_bound_updates += 1
            if self.effects is not None:
                self._record(k, leaf0, r0, exact)
            return r0, leaf0, True
        v1 = moves[1]
        if self._assign(k, v1):
            r1, leaf1, _ = self.search(k + 1, max(alpha, r0), beta)
        else:
            r1, leaf1 = INF, None
        self._unassign(k, v1)
        if r1 > r0:
            return r1, leaf1, False
        return r0, leaf0, False


def _to_ext(v, scale) -> ExtValue:
    if v == INF or v == NEG_INF:
        return v
    return Fraction(v, scale)


def _feasibility(instance, options, stats, deadline, effects) -> bool:
    s = _Search(instance, (0,) * instance.n, options, options.scp.feasibility, stats, deadline, 1, effects)
    r, _, _ = s.root(0, 1)
    return r != INF


def check_feasibility(instance: QipInstance, options: SearchOptions = SearchOptions()) -> Status:
    """Does a winning strategy exist?  Null-window search on the zero objective.

    Copy-pruning follows the feasibility-phase switch of ``options.scp``.
    """
    validate(instance)
    stats = SearchStats()
    deadline = time.perf_counter() + options.time_limit if options.time_limit else None
    try:
        ok = _feasibility(instance, options, stats, deadline, None)
    except LimitReached:
        return Status.LIMIT
    return Status.FEASIBLE if ok else Status.INFEASIBLE


def solve(instance: QipInstance, options: SearchOptions = SearchOptions()) -> SolveResult:
    """Minimax value, principal variation and first-stage decision."""
    validate(instance)
    stats = SearchStats()
    effects = [] if options.record_effects else None
    t0 = time.perf_counter()
    deadline = t0 + options.time_limit if options.time_limit else None
    sc = instance.scaled
    lower = Fraction(sum(min(v, 0) if not instance.is_universal(j) else max(v, 0) for j, v in enumerate(sc.c)),
                     sc.obj_scale)
    search = None
    try:
        if not _feasibility(instance, options, stats, deadline, effects):
            stats.elapsed = time.perf_counter() - t0
            return SolveResult(Status.INFEASIBLE, INF, None, None, stats, INF, INF, effects or [])
        search = _Search(instance, sc.c, options, options.scp.optimization, stats, deadline, 2, effects)
        r, leaf, _ = search.root(NEG_INF, INF)
    except LimitReached:
        stats.elapsed = time.perf_counter() - t0
        upper = INF if search is None else _to_ext(search.root_upper, sc.obj_scale)
        return SolveResult(Status.LIMIT, upper, None, None, stats, lower, upper, effects or [])
    stats.elapsed = time.perf_counter() - t0
    if r == INF:  # phase 1 said feasible; cannot happen unless the two phases disagree
        raise AssertionError("optimization phase found no strategy after feasibility phase succeeded")
    value = Fraction(r, sc.obj_scale)
    pv = leaf[0]
    first = tuple(pv[j] for j in instance.blocks.blocks[0].indices)
    return SolveResult(Status.FEASIBLE, value, pv, first, stats, value, value, effects or [])
