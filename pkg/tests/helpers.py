"""Independent reference code used only by the tests."""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from importlib import resources
from math import lcm

import numpy as np

from qipsearch import _kernels as K
from qipsearch.core import INF, E, QipInstance
from qipsearch.formats import read_qip


def data_path(name: str) -> str:
    return str(resources.files("qipsearch") / "data" / name)


def example1() -> QipInstance:
    return read_qip(data_path("example1.qip"))


def example2() -> QipInstance:
    return read_qip(data_path("example2.qip"))


# -- QBF --------------------------------------------------------------------


def random_qdimacs(rng: np.random.Generator, max_vars: int = 12, max_clauses: int = 20) -> tuple[str, int, list, list]:
    """Random prenex 3-CNF QBF as QDIMACS text, plus its parsed pieces.

    Some variables are left out of the prefix on purpose (free variables).
    """
    nv = int(rng.integers(1, max_vars + 1))
    nc = int(rng.integers(0, max_clauses + 1))
    order = [int(v) + 1 for v in rng.permutation(nv)]
    bound = order[: int(rng.integers(max(1, nv - 2), nv + 1))]
    prefix = []
    for v in bound:
        q = "a" if rng.random() < 0.4 else "e"
        if prefix and prefix[-1][0] == q:
            prefix[-1][1].append(v)
        else:
            prefix.append((q, [v]))
    clauses = []
    for _ in range(nc):
        width = int(rng.integers(1, min(3, nv) + 1))
        vars_ = rng.choice(np.arange(1, nv + 1), size=width, replace=False)
        clauses.append([int(v) if rng.random() < 0.5 else -int(v) for v in vars_])
    lines = [f"c random qbf", f"p cnf {nv} {nc}"]
    lines += [f"{q} {' '.join(map(str, vs))} 0" for q, vs in prefix]
    lines += [" ".join(map(str, cl)) + " 0" for cl in clauses]
    return "\n".join(lines) + "\n", nv, prefix, clauses


def qbf_truth(nv: int, prefix: list, clauses: list) -> bool:
    """Truth of a prenex CNF QBF; free variables are outermost existentials."""
    bound = {v for _, vs in prefix for v in vs}
    order = [("e", v) for v in range(1, nv + 1) if v not in bound]
    order += [(q, v) for q, vs in prefix for v in vs]
    val: dict[int, bool] = {}

    def sat() -> bool:
        return all(any(val[abs(l)] == (l > 0) for l in cl) for cl in clauses)

    def rec(i: int) -> bool:
        if i == len(order):
            return sat()
        q, v = order[i]
        results = []
        for b in (False, True):
            val[v] = b
            results.append(rec(i + 1))
        return any(results) if q == "e" else all(results)

    return rec(0)


# -- LP (deterministic equivalent) -------------------------------------------

_TERM = re.compile(r"([+-])?\s*(\d+(?:/\d+)?)?\s*([A-Za-z_][\w.]*)")


def _linear(expr: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for sign, coef, var in _TERM.findall(expr):
        v = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            v = -v
        out[var] = out.get(var, 0) + v
    return out


def parse_lp(text: str):
    """Tiny reader for the LP subset written by ``export_dep``.

    Returns ``(objective_var, rows, binaries)`` with rows as
    ``(coeffs, rhs)`` meaning ``sum coeffs[v] * v <= rhs``.
    """
    section = None
    objective = None
    rows = []
    binaries: list[str] = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "binary", "end"):
            section = low
            continue
        if section == "minimize":
            objective = _linear(line.split(":", 1)[1])
        elif section == "subject to":
            body = line.split(":", 1)[1]
            lhs, rhs = body.split("<=")
            rows.append((_linear(lhs), Fraction(rhs.strip())))
        elif section == "binary":
            binaries += line.split()
    assert objective is not None and len(objective) == 1, "expected 'minimize t'"
    (t,) = objective
    return t, rows, binaries


def dep_min_t(text: str) -> Fraction | float:
    """Minimal ``t`` over all binary points of the LP, by exhaustive enumeration."""
    t, rows, binaries = parse_lp(text)
    idx = {v: j for j, v in enumerate(binaries)}
    nb = len(binaries)
    assert nb <= 24, f"{nb} binaries is too many to enumerate"
    cons, epi = [], []
    for coeffs, rhs in rows:
        at = coeffs.get(t, 0)
        row = [Fraction(0)] * nb
        for v, a in coeffs.items():
            if v != t and a:
                row[idx[v]] = a
        if at == 0:
            cons.append((row, rhs))
        else:
            assert at < 0
            # t >= (row.x - rhs) / -at
            epi.append(([a / -at for a in row], -rhs / -at))
    scale = lcm(*(f.denominator for r, d in epi for f in [*r, d]))
    C = np.array([[int(a * scale) for a in r] for r, _ in epi], dtype=np.int64).reshape(len(epi), nb)
    d = np.array([int(dd * scale) for _, dd in epi], dtype=np.int64)
    Arows, brows = [], []
    for r, rhs in cons:
        s = lcm(*(f.denominator for f in [*r, rhs]))
        Arows.append([int(a * s) for a in r])
        brows.append(int(rhs * s))
    A = np.array(Arows, dtype=np.int64).reshape(len(Arows), nb)
    b = np.array(brows, dtype=np.int64)
    best = K.min_epigraph(A, b, C, d)
    return INF if best == K.INT_INF else Fraction(best, scale)


def dep_binary_count(instance: QipInstance) -> int:
    """Number of existential copies the deterministic equivalent will create."""
    seen_universals = 0
    total = 0
    for q in instance.Q:
        if q is E:
            total += 1 << seen_universals
        else:
            seen_universals += 1
    return total


# -- copied strategies -------------------------------------------------------


def copied_completions_feasible(instance: QipInstance, x_tilde, k: int) -> bool:
    """Flip universal ``k`` and try every completion of later universals,
    keeping all existential values from ``x_tilde``."""
    later = [j for j in instance.universals if j > k]
    for bits in itertools.product((0, 1), repeat=len(later)):
        x = list(x_tilde)
        x[k] = 1 - x[k]
        for j, v in zip(later, bits):
            x[j] = v
        for row, bi in zip(instance.A, instance.b):
            if sum(a * xj for a, xj in zip(row, x)) > bi:
                return False
    return True
