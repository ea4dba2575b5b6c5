"""Seeded instance families.

Both generators draw from ``numpy.random.default_rng(seed)`` (PCG64), so an
instance is a pure function of its parameters.  Serialized files remain the
portable ground truth for benchmarks.

Runway scheduling model (variable order = quantifier order)::

    exists x[p,s]   initial plan, plane p in slot s
    forall d[q]     disturbance bit of the q-th disturbed plane
    exists ch[p], y[p,s]   plane p was moved, recourse plan (ch[p] precedes y[p,.])

    sum_s x[p,s] = 1, sum_s y[p,s] = 1          (each as two <= rows)
    sum_{s not in W_p} x[p,s] <= 0              initial plan inside nominal window
    sum_p y[p,s] <= cap                         recourse capacity
    window gating for y                         W_p if d=0, shifted W'_p if d=1
    y[p,s] - x[p,s] - ch[p] <= 0                change indicator
    min  reassign_cost * sum_p ch[p] + deviation_cost * sum_{p,s} |s - t_p| x[p,s]

Windows are ``window`` consecutive slots placed around a capacity-respecting
reference assignment; plane p's reference slot is its target t_p (the
deviation term is off by default).  Each disturbed plane also gets a spare
capacity unit that no other plane uses, and its disturbed window contains
that spare.  Reference plus spares is then a recourse for every disturbance,
so the instance is feasible.  A ``shift`` disturbance moves the window by one
slot.  A ``delay`` disturbance moves its opening to a spare slot after the
target, which only ever tightens rows, so the disturbance bit is monotone.
Planes without a usable spare are never disturbed, so fewer than
``disturbed`` planes may be.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import A, E, QipInstance, validate


@dataclass(frozen=True)
class RunwayParams:
    planes: int
    slots: int
    capacity: int
    window: int
    disturbed: int
    reassign_cost: Fraction = Fraction(1)
    seed: int = 0
    disturbance: str = "shift"  # or "delay"
    deviation_cost: Fraction = Fraction(0)

    def __post_init__(self):
        if self.disturbance not in ("shift", "delay"):
            raise ValueError("disturbance must be 'shift' or 'delay'")
        if self.planes < 1 or self.slots < 1 or self.capacity < 1:
            raise ValueError("planes, slots and capacity must be positive")
        if not 1 <= self.window <= self.slots:
            raise ValueError("window must lie in 1..slots")
        if not 0 <= self.disturbed <= self.planes:
            raise ValueError("disturbed must lie in 0..planes")
        if self.capacity * self.slots < self.planes:
            raise ValueError("capacity * slots < planes: no assignment can exist")


@dataclass(frozen=True)
class RunwayLayout:
    """Window placement drawn for one :class:`RunwayParams`."""

    windows: tuple[tuple[int, int], ...]  # (start, stop) per plane
    reference: tuple[int, ...] = ()  # capacity-respecting slot per plane
    shifted: dict = field(default_factory=dict)  # plane -> disturbed (start, stop)
    spare: dict = field(default_factory=dict)  # plane -> reserved slot inside the disturbed window
    disturbed: tuple[int, ...] = ()


def _spare_slots(window: tuple[int, int], target: int, S: int, kind: str) -> list[int]:
    start, stop = window
    if kind == "delay":
        return list(range(target + 1, stop))
    right = range(start + 1, stop + 1) if stop < S else range(0)
    left = range(start - 1, stop - 1) if start > 0 else range(0)
    return sorted(set(right) | set(left))


def _disturb(window: tuple[int, int], spare: int, S: int, kind: str) -> tuple[int, int]:
    start, stop = window
    if kind == "delay":
        return spare, stop
    if stop < S and start < spare <= stop:
        return start + 1, stop + 1
    return start - 1, stop - 1


def runway_layout(params: RunwayParams) -> RunwayLayout:
    rng = np.random.default_rng(params.seed)
    P, S, w = params.planes, params.slots, params.window
    pool = np.repeat(np.arange(S), params.capacity)
    ref = [int(r) for r in rng.choice(pool, size=P, replace=False)]
    windows = []
    for p in range(P):
        lo, hi = max(0, ref[p] - w + 1), min(ref[p], S - w)
        start = int(rng.integers(lo, hi + 1))
        windows.append((start, start + w))
    free = [params.capacity] * S
    for r in ref:
        free[r] -= 1
    shifted, spare = {}, {}
    for p in (int(q) for q in rng.permutation(P)):
        if len(spare) == params.disturbed:
            break
        cands = [s for s in _spare_slots(windows[p], ref[p], S, params.disturbance) if free[s] > 0]
        if not cands:
            continue
        sp = cands[int(rng.integers(len(cands)))]
        free[sp] -= 1
        spare[p] = sp
        shifted[p] = _disturb(windows[p], sp, S, params.disturbance)
    return RunwayLayout(tuple(windows), tuple(ref), shifted, spare, tuple(sorted(spare)))


def gen_runway(params: RunwayParams) -> QipInstance:
    P, S = params.planes, params.slots
    lay = runway_layout(params)
    d = len(lay.disturbed)
    xi = lambda p, s: p * S + s
    di = {p: P * S + q for q, p in enumerate(lay.disturbed)}
    ci = lambda p: P * S + d + p * (S + 1)
    yi = lambda p, s: ci(p) + 1 + s
    n = 2 * P * S + d + P
    rows: list[dict[int, int]] = []
    rhs: list[int] = []

    def row(coeffs: dict[int, int], b: int):
        rows.append(coeffs)
        rhs.append(b)

    for var in (xi, yi):
        for p in range(P):
            row({var(p, s): 1 for s in range(S)}, 1)
            row({var(p, s): -1 for s in range(S)}, -1)
    for p in range(P):
        start, stop = lay.windows[p]
        outside = [s for s in range(S) if not start <= s < stop]
        if outside:
            row({xi(p, s): 1 for s in outside}, 0)
    for s in range(S):
        row({yi(p, s): 1 for p in range(P)}, params.capacity)
    for p in range(P):
        W = set(range(*lay.windows[p]))
        if p not in di:
            outside = [s for s in range(S) if s not in W]
            if outside:
                row({yi(p, s): 1 for s in outside}, 0)
            continue
        W2 = set(range(*lay.shifted[p]))
        for s in sorted(W - W2):
            row({yi(p, s): 1, di[p]: 1}, 1)
        for s in sorted(W2 - W):
            row({yi(p, s): 1, di[p]: -1}, 0)
        outside = [s for s in range(S) if s not in W | W2]
        if outside:
            row({yi(p, s): 1 for s in outside}, 0)
    for p in range(P):
        for s in range(S):
            row({yi(p, s): 1, xi(p, s): -1, ci(p): -1}, 0)

    Amat = [[r.get(j, 0) for j in range(n)] for r in rows]
    c = [0] * n
    for p in range(P):
        c[ci(p)] = Fraction(params.reassign_cost)
        for s in range(S):
            c[xi(p, s)] = Fraction(params.deviation_cost) * abs(s - lay.reference[p])
    Q = [E] * (P * S) + [A] * d + [E] * (P * S + P)
    name = f"runway_P{P}_S{S}_b{params.capacity}_w{params.window}_d{d}_{params.disturbance}_seed{params.seed}"
    if params.deviation_cost:
        name += f"_dev{params.deviation_cost}".replace("/", "-")
    inst = QipInstance(tuple(map(tuple, Amat)), tuple(rhs), tuple(c), tuple(Q), name)
    validate(inst)
    return inst


def runway_row_count(params: RunwayParams) -> int:
    """Row count implied by the encoding above, from the layout alone."""
    P, S, w = params.planes, params.slots, params.window
    lay = runway_layout(params)
    count = 4 * P + S + P * S
    count += P if w < S else 0
    for p in range(P):
        W = set(range(*lay.windows[p]))
        if p in lay.shifted:
            W2 = set(range(*lay.shifted[p]))
            count += len(W - W2) + len(W2 - W) + (1 if len(W | W2) < S else 0)
        else:
            count += 1 if w < S else 0
    return count


@dataclass(frozen=True)
class RandomParams:
    n: int
    m: int
    universal_fraction: Fraction = Fraction(1, 4)
    density: Fraction = Fraction(1, 2)
    coeff_range: int = 5
    seed: int = 0
    denominator: int = 1  # >1 draws rational coefficients p/q with q <= denominator

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise ValueError("need n >= 1 and m >= 0")
        if not 0 <= Fraction(self.universal_fraction) <= 1:
            raise ValueError("universal_fraction must lie in [0, 1]")
        if not 0 < Fraction(self.density) <= 1:
            raise ValueError("density must lie in (0, 1]")
        if self.coeff_range < 1 or self.denominator < 1:
            raise ValueError("coeff_range and denominator must be positive")


def gen_random(params: RandomParams) -> QipInstance:
    """Random binary QIP.

    Variable 0 is existential; every other variable is universal with
    probability ``universal_fraction``.  Matrix entries are nonzero with
    probability ``density`` and then uniform over ``[-R, R] \\ {0}``.  Each
    right-hand side is non-negative with probability 1/2 (so the all-zero
    game satisfies that row), otherwise negative.
    """
    rng = np.random.default_rng(params.seed)
    n, m, R = params.n, params.m, params.coeff_range
    uf, dens = float(Fraction(params.universal_fraction)), float(Fraction(params.density))

    def coeff(v: int) -> Fraction:
        if params.denominator == 1:
            return Fraction(v)
        return Fraction(v, int(rng.integers(1, params.denominator + 1)))

    Q = [E] + [A if rng.random() < uf else E for _ in range(n - 1)]
    nonzero = np.concatenate([np.arange(-R, 0), np.arange(1, R + 1)])
    Amat, b = [], []
    for _ in range(m):
        mask = rng.random(n) < dens
        if dens >= 1:
            mask[:] = True
        row = [coeff(int(rng.choice(nonzero))) if mask[j] else Fraction(0) for j in range(n)]
        k = max(1, int(mask.sum()))
        if rng.random() < 0.5:
            bi = coeff(int(rng.integers(0, R * k // 2 + 1)))
        else:
            bi = coeff(-int(rng.integers(1, R + 1)))
        Amat.append(tuple(row))
        b.append(bi)
    c = [coeff(int(rng.integers(-R, R + 1))) for _ in range(n)]
    inst = QipInstance(tuple(Amat), tuple(b), tuple(c), tuple(Q), f"random_n{n}_m{m}_seed{params.seed}")
    validate(inst)
    return inst
