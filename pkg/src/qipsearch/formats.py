"""Text formats: the native ``.qip`` format, QDIMACS import, LP export.

Native format, one declaration per line, ``#`` starts a comment::

    NAME <string>                       optional
    NVARS <n>
    QUANT <n tokens from {E, A}>
    OBJ <n rationals>                   optional, zeros if absent
    ROW <n rationals> <= <rational>     repeated m times

Rationals are integers or ``p/q``.  An optional ``DOMAIN`` line is accepted
only if every token is ``0..1``; any other domain is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product

from .core import A, E, QipError, QipInstance, format_value, validate

_RATIONAL = re.compile(r"[+-]?\d+(/[+-]?\d+)?\Z")


class QipSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class QipSemanticError(QipError):
    pass


class QdimacsError(ValueError):
    pass


class DepTooLarge(ValueError):
    pass


def _tokens(line: str):
    """Split into (column, token) pairs, 1-based columns."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def _rational(tok: str, lineno: int, col: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise QipSyntaxError(f"expected integer or p/q, got {tok!r}", lineno, col)
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise QipSyntaxError("zero denominator", lineno, col)
    return Fraction(tok)


def parse(text: str) -> QipInstance:
    name = None
    nvars = quant = obj = domain = None
    rows: list[tuple[list[Fraction], Fraction, int]] = []
    seen: set[str] = set()
    saw_any = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        saw_any = True
        col, kw = toks[0]
        args = toks[1:]
        if kw in ("NAME", "NVARS", "QUANT", "OBJ", "DOMAIN"):
            if kw in seen:
                raise QipSemanticError(f"line {lineno}: duplicate {kw} section")
            seen.add(kw)
        if kw == "NAME":
            if not args:
                raise QipSyntaxError("NAME needs a value", lineno, col + len(kw))
            name = line[args[0][0] - 1 :].rstrip()
        elif kw == "NVARS":
            if len(args) != 1 or not args[0][1].isdigit():
                c = args[0][0] if args else col + len(kw)
                raise QipSyntaxError("NVARS needs one non-negative integer", lineno, c)
            nvars = int(args[0][1])
        elif kw == "QUANT":
            for c, t in args:
                if t not in ("E", "A"):
                    raise QipSyntaxError(f"quantifier must be E or A, got {t!r}", lineno, c)
            quant = [E if t == "E" else A for _, t in args]
        elif kw == "OBJ":
            obj = [_rational(t, lineno, c) for c, t in args]
        elif kw == "DOMAIN":
            for c, t in args:
                if t != "0..1":
                    raise QipSemanticError(f"line {lineno}, column {c}: only binary domains (0..1) are supported, got {t!r}")
            domain = len(args)
        elif kw == "ROW":
            ops = [i for i, (_, t) in enumerate(args) if t == "<="]
            if len(ops) != 1 or ops[0] != len(args) - 2:
                c = args[-1][0] if args else col + len(kw)
                raise QipSyntaxError("ROW must be '<coefficients> <= <rhs>'", lineno, c)
            coeffs = [_rational(t, lineno, c) for c, t in args[:-2]]
            rhs = _rational(args[-1][1], lineno, args[-1][0])
            rows.append((coeffs, rhs, lineno))
        else:
            raise QipSyntaxError(f"unknown keyword {kw!r}", lineno, col)
    if not saw_any:
        raise QipSyntaxError("empty document", 1, 1)
    if nvars is None:
        raise QipSemanticError("missing NVARS")
    if quant is None:
        raise QipSemanticError("missing QUANT")
    if len(quant) != nvars:
        raise QipSemanticError(f"QUANT has {len(quant)} entries, NVARS is {nvars}")
    if obj is None:
        obj = [Fraction(0)] * nvars
    if len(obj) != nvars:
        raise QipSemanticError(f"OBJ has {len(obj)} coefficients, NVARS is {nvars}")
    if domain is not None and domain != nvars:
        raise QipSemanticError(f"DOMAIN has {domain} entries, NVARS is {nvars}")
    for coeffs, _, lineno in rows:
        if len(coeffs) != nvars:
            raise QipSemanticError(f"line {lineno}: ROW has {len(coeffs)} coefficients, NVARS is {nvars}")
    inst = QipInstance(tuple(tuple(r[0]) for r in rows), tuple(r[1] for r in rows), tuple(obj), tuple(quant), name)
    try:
        validate(inst)
    except QipError as exc:
        raise QipSemanticError(str(exc)) from exc
    return inst


def serialize(instance: QipInstance) -> str:
    out = []
    if instance.name:
        if "\n" in instance.name or "#" in instance.name or instance.name != instance.name.strip():
            raise ValueError("name must be a single line without '#' or surrounding whitespace")
        out.append(f"NAME {instance.name}")
    out.append(f"NVARS {instance.n}")
    out.append("QUANT " + " ".join(str(q) for q in instance.Q))
    out.append("OBJ " + " ".join(format_value(v) for v in instance.c))
    for row, bi in zip(instance.A, instance.b):
        out.append("ROW " + " ".join(format_value(v) for v in row) + " <= " + format_value(bi))
    return "\n".join(out) + "\n"


def read_qip(path) -> QipInstance:
    with open(path, encoding="ascii") as fh:
        return parse(fh.read())


def write_qip(instance: QipInstance, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(serialize(instance))


# ---------------------------------------------------------------------------
# QDIMACS
# ---------------------------------------------------------------------------


def parse_qdimacs(text: str) -> tuple[int, list[tuple[str, list[int]]], list[list[int]]]:
    """Return ``(nvars, prefix, clauses)`` with prefix entries ``('e'|'a', vars)``."""
    header = None
    prefix: list[tuple[str, list[int]]] = []
    clauses: list[list[int]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if header is None:
            if len(toks) != 4 or toks[0] != "p" or toks[1] != "cnf" or not (toks[2].isdigit() and toks[3].isdigit()):
                raise QdimacsError(f"line {lineno}: malformed header {raw.strip()!r}")
            header = (int(toks[2]), int(toks[3]))
            continue
        if toks[0] in ("e", "a"):
            if clauses or pending:
                raise QdimacsError(f"line {lineno}: quantifier line after clauses")
            try:
                vs = [int(t) for t in toks[1:]]
            except ValueError:
                raise QdimacsError(f"line {lineno}: non-integer in quantifier line") from None
            if not vs or vs[-1] != 0:
                raise QdimacsError(f"line {lineno}: quantifier line missing terminating 0")
            for v in vs[:-1]:
                if not 1 <= v <= header[0]:
                    raise QdimacsError(f"line {lineno}: variable {v} out of range 1..{header[0]}")
            prefix.append((toks[0], vs[:-1]))
            continue
        try:
            lits = [int(t) for t in toks]
        except ValueError:
            raise QdimacsError(f"line {lineno}: non-integer literal") from None
        for lit in lits:
            if lit == 0:
                clauses.append(pending)
                pending = []
            elif abs(lit) > header[0]:
                raise QdimacsError(f"line {lineno}: literal {lit} out of range 1..{header[0]}")
            else:
                pending.append(lit)
    if header is None:
        raise QdimacsError("missing 'p cnf' header")
    if pending:
        raise QdimacsError("last clause is missing its terminating 0")
    if len(clauses) != header[1]:
        raise QdimacsError(f"header announces {header[1]} clauses, found {len(clauses)}")
    bound = [v for _, vs in prefix for v in vs]
    if len(bound) != len(set(bound)):
        raise QdimacsError("variable quantified twice")
    return header[0], prefix, clauses


def import_qdimacs(text: str, name: str | None = None) -> QipInstance:
    """QBF as a zero-objective QIP.

    Free variables come first (existential, ascending), then the prefix in
    file order.  A clause with positive set P and negative set N becomes
    ``sum_N x - sum_P x <= |N| - 1``.
    """
    nvars, prefix, clauses = parse_qdimacs(text)
    bound = {v for _, vs in prefix for v in vs}
    order = [(E, v) for v in range(1, nvars + 1) if v not in bound]
    for q, vs in prefix:
        order.extend((E if q == "e" else A, v) for v in vs)
    pos = {v: j for j, (_, v) in enumerate(order)}
    n = len(order)
    if n == 0:
        raise QdimacsError("QBF has no variables")
    rows, rhs = [], []
    for cl in clauses:
        P = {l for l in cl if l > 0}
        N = {-l for l in cl if l < 0}
        row = [0] * n
        for v in N:
            row[pos[v]] += 1
        for v in P:
            row[pos[v]] -= 1
        rows.append(tuple(row))
        rhs.append(len(N) - 1)
    return QipInstance.build(rows, rhs, [0] * n, [q for q, _ in order], name)


# ---------------------------------------------------------------------------
# deterministic equivalent program
# ---------------------------------------------------------------------------


def _bits(bits: tuple[int, ...]) -> str:
    return "".join(map(str, bits))


def _lin(terms: list[tuple[int, str]]) -> str:
    parts = []
    for k, (coef, var) in enumerate(terms):
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        if k == 0:
            parts.append(f"-{body}" if coef < 0 else body)
        else:
            parts.append(f"{'-' if coef < 0 else '+'} {body}")
    return " ".join(parts)


def dep_layout(instance: QipInstance):
    """Existential copies keyed by ``(j, universal history)`` and leaf scenarios."""
    U = instance.universals
    copies = []
    for j in range(instance.n):
        if instance.is_universal(j):
            continue
        h = sum(1 for u in U if u < j)
        copies.extend((j, bits) for bits in product((0, 1), repeat=h))
    scenarios = list(product((0, 1), repeat=len(U)))
    return copies, scenarios


def export_dep(instance: QipInstance, max_scenarios: int = 1 << 20) -> str:
    """Scenario-expanded integer program in LP text format.

    One copy ``x<j>_s<bits>`` of each existential variable per history
    ``bits`` of the universal variables preceding it (copies are shared
    between scenarios with a common history, which enforces
    nonanticipativity).  Every constraint is replicated per leaf scenario with
    the universal values moved to the right-hand side, and the min-max
    objective is linearized with a free epigraph variable ``t``.  Each row is
    scaled to integer coefficients, so the file is exact.  Variable indices
    in names are 1-based.
    """
    U = instance.universals
    if (1 << len(U)) > max_scenarios:
        raise DepTooLarge(f"{1 << len(U)} scenarios exceed the cap of {max_scenarios}")
    sc = instance.scaled
    copies, scenarios = dep_layout(instance)
    upos = {u: i for i, u in enumerate(U)}

    def name(j: int, scen: tuple[int, ...]) -> str:
        h = sum(1 for u in U if u < j)
        return f"x{j + 1}_s{_bits(scen[:h])}"

    def expand(coeffs, scen):
        terms, const = [], 0
        for j, a in enumerate(coeffs):
            if not a:
                continue
            if instance.is_universal(j):
                const += a * scen[upos[j]]
            else:
                terms.append((a, name(j, scen)))
        return terms, const

    lines = ["\\ deterministic equivalent of " + (instance.name or "unnamed QIP"), "Minimize", " obj: t", "Subject To"]
    for scen in scenarios:
        tag = _bits(scen)
        for i, (row, bi) in enumerate(zip(sc.A, sc.b)):
            terms, const = expand(row, scen)
            lhs = _lin(terms) if terms else "0 t"
            lines.append(f" r{i + 1}_s{tag}: {lhs} <= {bi - const}")
    for scen in scenarios:
        tag = _bits(scen)
        terms, const = expand(sc.c, scen)
        terms.append((-sc.obj_scale, "t"))
        lines.append(f" obj_s{tag}: {_lin(terms)} <= {-const}")
    lines += ["Bounds", " t free", "Binary"]
    names = [f"x{j + 1}_s{_bits(bits)}" for j, bits in copies]
    for k in range(0, len(names), 8):
        lines.append(" " + " ".join(names[k : k + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"
