"""Domain types for binary quantified integer programs.

All coefficients are held as :class:`fractions.Fraction`; nothing in this
module ever touches floating point.  Extended objective values are either a
``Fraction`` or :data:`INF` (``math.inf``), which orders above every finite
rational under Python's mixed comparison rules.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence, Union

INF = math.inf

ExtValue = Union[Fraction, float]


class QipError(ValueError):
    """Base class for invalid-instance errors."""


class DimensionError(QipError):
    pass


class EmptyInstanceError(QipError):
    pass


class ColumnIndexError(QipError):
    pass


class Quant(enum.Enum):
    EXISTS = "E"
    FORALL = "A"

    def __str__(self) -> str:
        return self.value


E = Quant.EXISTS
A = Quant.FORALL


class MonotoneStatus(enum.Enum):
    NON_NEGATIVE = "nonneg"
    NON_POSITIVE = "nonpos"
    BOTH = "both"
    MIXED = "mixed"


def to_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError(f"float coefficient {v!r} is not exact; pass int, Fraction or 'p/q'")
    return Fraction(v)


def is_finite(v: ExtValue) -> bool:
    return v != INF


def format_value(v: ExtValue) -> str:
    if v == INF:
        return "+inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Block:
    quant: Quant
    start: int  # 0-based, inclusive
    stop: int  # exclusive

    @property
    def indices(self) -> range:
        return range(self.start, self.stop)

    def __len__(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class BlockStructure:
    blocks: tuple[Block, ...]

    @property
    def beta(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class ScaledInstance:
    """Integer image of an instance.

    Every row ``i`` of ``(A, b)`` is multiplied by the lcm of its denominators
    and the objective by ``obj_scale``.  Feasibility is unchanged and
    objective values map back through ``Fraction(v, obj_scale)``.
    """

    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    obj_scale: int

    def max_abs_activity(self) -> int:
        rows = max((sum(abs(a) for a in r) + abs(bi) for r, bi in zip(self.A, self.b)), default=0)
        return max(rows, sum(abs(v) for v in self.c))


@dataclass(frozen=True)
class QipInstance:
    """A binary QIP ``min/max c^T x  s.t.  Q x in {0,1}^n : A x <= b``.

    Variables are 0-based internally; user-facing output (CLI, effects
    labels) keeps the 0-based index unless stated otherwise.
    """

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    Q: tuple[Quant, ...]
    name: str | None = None
    col_rows: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "A", tuple(tuple(to_fraction(a) for a in row) for row in self.A))
        set_(self, "b", tuple(to_fraction(v) for v in self.b))
        set_(self, "c", tuple(to_fraction(v) for v in self.c))
        set_(self, "Q", tuple(q if isinstance(q, Quant) else Quant(q) for q in self.Q))
        if self.col_rows is None:
            n = len(self.Q)
            cols = tuple(
                tuple(i for i, row in enumerate(self.A) if j < len(row) and row[j] != 0) for j in range(n)
            )
            set_(self, "col_rows", cols)
        else:
            set_(self, "col_rows", tuple(tuple(r) for r in self.col_rows))

    @classmethod
    def build(
        cls,
        A: Sequence[Sequence],
        b: Sequence,
        c: Sequence,
        Q: Iterable[Quant | str],
        name: str | None = None,
    ) -> "QipInstance":
        """Construct and validate in one step."""
        inst = cls(A=tuple(tuple(r) for r in A), b=tuple(b), c=tuple(c), Q=tuple(Q), name=name)
        validate(inst)
        return inst

    @property
    def n(self) -> int:
        return len(self.Q)

    @property
    def m(self) -> int:
        return len(self.A)

    def is_universal(self, j: int) -> bool:
        return self.Q[j] is A

    @cached_property
    def universals(self) -> tuple[int, ...]:
        return tuple(j for j, q in enumerate(self.Q) if q is A)

    @cached_property
    def blocks(self) -> BlockStructure:
        return block_structure(self)

    @cached_property
    def scaled(self) -> ScaledInstance:
        rows, rhs = [], []
        for row, bi in zip(self.A, self.b):
            s = lcm(*(a.denominator for a in row), bi.denominator)
            rows.append(tuple(int(a * s) for a in row))
            rhs.append(int(bi * s))
        s = lcm(*(v.denominator for v in self.c)) if self.c else 1
        return ScaledInstance(tuple(rows), tuple(rhs), tuple(int(v * s) for v in self.c), s)

    @cached_property
    def row_universal_terms(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per row, the ``(j, scaled A_ij)`` pairs over universal ``j`` with nonzero entry."""
        sc = self.scaled
        U = self.universals
        return tuple(tuple((j, row[j]) for j in U if row[j]) for row in sc.A)

    @cached_property
    def universal_obj_terms(self) -> tuple[tuple[int, int], ...]:
        sc = self.scaled
        return tuple((j, sc.c[j]) for j in self.universals if sc.c[j])

    def with_objective(self, c: Sequence) -> "QipInstance":
        return QipInstance(self.A, self.b, tuple(c), self.Q, self.name, self.col_rows)

    def zero_objective(self) -> "QipInstance":
        return self.with_objective((0,) * self.n)


def validate(instance: QipInstance) -> None:
    """Raise a :class:`QipError` subclass unless every structural invariant holds."""
    n, m = len(instance.Q), len(instance.A)
    if n == 0:
        raise EmptyInstanceError("instance has no variables")
    if len(instance.c) != n:
        raise DimensionError(f"objective has {len(instance.c)} entries, expected {n}")
    if len(instance.b) != m:
        raise DimensionError(f"rhs has {len(instance.b)} entries, expected {m}")
    for i, row in enumerate(instance.A):
        if len(row) != n:
            raise DimensionError(f"row {i} has {len(row)} entries, expected {n}")
    cols = instance.col_rows
    if cols is None or len(cols) != n:
        raise ColumnIndexError("column index must have one entry per variable")
    for j, rows in enumerate(cols):
        expected = tuple(i for i in range(m) if instance.A[i][j] != 0)
        if tuple(rows) != expected:
            raise ColumnIndexError(f"column index for variable {j} is {tuple(rows)}, expected {expected}")


def block_structure(instance: QipInstance) -> BlockStructure:
    blocks = []
    start = 0
    Q = instance.Q
    for j in range(1, len(Q) + 1):
        if j == len(Q) or Q[j] is not Q[start]:
            blocks.append(Block(Q[start], start, j))
            start = j
    return BlockStructure(tuple(blocks))


def evaluate_game(instance: QipInstance, x: Sequence[int]) -> ExtValue:
    """Payoff of the total assignment ``x``: ``c.x`` if ``Ax <= b``, else ``INF``."""
    if len(x) != instance.n:
        raise ValueError(f"assignment fixes {len(x)} of {instance.n} variables; a total assignment is required")
    if any(v not in (0, 1) for v in x):
        raise ValueError("assignment entries must be 0 or 1")
    for row, bi in zip(instance.A, instance.b):
        if sum((a for a, v in zip(row, x) if v), Fraction(0)) > bi:
            return INF
    return sum((cj for cj, v in zip(instance.c, x) if v), Fraction(0))


def detect_monotone(instance: QipInstance) -> tuple[MonotoneStatus, ...]:
    out = []
    for j in range(instance.n):
        entries = [instance.c[j]] + [row[j] for row in instance.A]
        nonneg = all(v >= 0 for v in entries)
        nonpos = all(v <= 0 for v in entries)
        if nonneg and nonpos:
            out.append(MonotoneStatus.BOTH)
        elif nonneg:
            out.append(MonotoneStatus.NON_NEGATIVE)
        elif nonpos:
            out.append(MonotoneStatus.NON_POSITIVE)
        else:
            out.append(MonotoneStatus.MIXED)
    return tuple(out)


def forced_value(status: MonotoneStatus, quant: Quant) -> int | None:
    """Value a monotone variable can be fixed to without changing any minimax value.

    The minimizer takes the dominated-below branch, the maximizer the
    dominated-above one.  ``BOTH`` columns are indifferent and pinned to 0.
    """
    if status is MonotoneStatus.MIXED:
        return None
    if status is MonotoneStatus.BOTH:
        return 0
    nonneg = status is MonotoneStatus.NON_NEGATIVE
    if quant is E:
        return 0 if nonneg else 1
    return 1 if nonneg else 0
