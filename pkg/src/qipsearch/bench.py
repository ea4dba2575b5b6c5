"""Ablation harness: every instance under the MONO x SCP grid."""

from __future__ import annotations

import csv
import io
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .core import format_value
from .formats import read_qip
from .solver import Scp, SearchOptions, Status, solve

CSV_COLUMNS = ["instance", "setting", "status", "value", "nodes", "scp_prunes", "mono_prunes", "millis"]

GRID = [SearchOptions(mono=mono, scp=scp) for mono in (False, True) for scp in (Scp.OFF, Scp.FEAS, Scp.OPT, Scp.BOTH)]


@dataclass
class BenchRow:
    instance: str
    setting: str
    status: str
    value: str
    nodes: int
    scp_prunes: int
    mono_prunes: int
    millis: int

    def as_list(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def aggregate(self) -> list[dict]:
        out = []
        for opts in GRID:
            solved = [r for r in self.rows if r.setting == opts.label and r.status in ("feasible", "infeasible")]
            mean = statistics.fmean(r.millis for r in solved) if solved else float("nan")
            out.append({"setting": opts.label, "solved": len(solved), "mean_millis": mean})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.as_list())
        return buf.getvalue()

    def table(self) -> str:
        lines = [f"{'instance':<44} {'setting':<18} {'status':<10} {'value':>8} {'nodes':>10} {'scp':>7} {'mono':>7} {'ms':>8}"]
        for r in self.rows:
            lines.append(
                f"{r.instance:<44} {r.setting:<18} {r.status:<10} {r.value:>8} {r.nodes:>10} "
                f"{r.scp_prunes:>7} {r.mono_prunes:>7} {r.millis:>8}"
            )
        lines.append("")
        lines.append(f"{'setting':<18} {'solved':>6} {'mean ms':>10}")
        for a in self.aggregate():
            lines.append(f"{a['setting']:<18} {a['solved']:>6} {a['mean_millis']:>10.1f}")
        return "\n".join(lines)


def _run_one(args) -> BenchRow:
    path, opts = args
    name = Path(path).stem
    try:
        inst = read_qip(path)
        res = solve(inst, opts)
    except Exception as exc:  # recorded, the sweep goes on
        return BenchRow(name, opts.label, f"error:{type(exc).__name__}", "", 0, 0, 0, 0)
    st = res.stats
    value = format_value(res.value) if res.status is not Status.LIMIT else ""
    return BenchRow(name, opts.label, res.status.value, value, st.nodes_visited, st.scp_prunes,
                    st.mono_prunes, round(st.elapsed * 1000))


def run_bench(paths, timeout: float = 60.0, node_limit: int | None = None, jobs: int = 1,
              grid=None) -> BenchReport:
    grid = GRID if grid is None else grid
    tasks = []
    for p in sorted(map(str, paths)):
        for g in grid:
            opts = SearchOptions(mono=g.mono, scp=g.scp, move_ordering=g.move_ordering,
                                 time_limit=timeout, node_limit=node_limit)
            tasks.append((p, opts))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_run_one, tasks))
    else:
        rows = [_run_one(t) for t in tasks]
    return BenchReport(rows)


def instance_files(directory) -> list[str]:
    return sorted(os.path.join(directory, f) for f in os.listdir(directory) if f.endswith(".qip"))
