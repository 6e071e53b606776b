"""Multi-seed benchmark runs and Max (Avg.) / Time(s) reporting."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .controller import ControllerConfig
from .graph import Graph, read_dimacs
from .solver import solve

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("instance", "k", "algo", "runs", "max", "avg", "avg_time_s")


@dataclass
class RunRow:
    seed: int
    size: int
    time_to_best: float | None
    iterations: int
    best_set: list[int] | None = None


@dataclass
class RunReport:
    """Aggregate of ``runs`` independent runs on one (instance, k, algo)."""

    instance: str
    k: int
    algo: str
    runs: int
    max: int | None = None
    avg: float | None = None
    avg_time_to_best: float | None = None
    rows: list[RunRow] = field(default_factory=list)
    failed: bool = False
    error: str | None = None

    @classmethod
    def aggregate(cls, instance: str, k: int, algo: str, rows: Sequence[RunRow]) -> "RunReport":
        sizes = [r.size for r in rows]
        best = max(sizes)
        times = [r.time_to_best for r in rows if r.size == best and r.time_to_best is not None]
        return cls(instance, k, algo, len(rows), best, sum(sizes) / len(sizes),
                   sum(times) / len(times) if times else None, list(rows))

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        d = dict(d)
        d["rows"] = [RunRow(**r) for r in d.get("rows", [])]
        return cls(**d)


@dataclass
class _Task:
    instance: str
    graph: Graph
    k: int
    seed: int
    algo: str
    time_limit: float | None
    max_iter: int | None
    config: ControllerConfig
    target: int | None


def _run_one(task: _Task) -> tuple[_Task, RunRow]:
    res = solve(task.graph, task.k, task.algo, time_limit=task.time_limit, max_iter=task.max_iter,
                seed=task.seed, config=task.config, target=task.target)
    if not task.graph.is_kplex(res.best_set, task.k):
        raise AssertionError(f"{task.instance}: reported set is not a {task.k}-plex")
    row = RunRow(task.seed, res.best_size, res.time_to_best, res.iterations, sorted(res.best_set))
    return task, row


def load_instances(sources: Iterable[str | os.PathLike | Graph]) -> list[tuple[str, Graph | None, str | None]]:
    """(name, graph or None, error or None) per source; load errors are not raised."""
    out = []
    for src in sources:
        if isinstance(src, Graph):
            out.append((src.name or f"graph{len(out)}", src, None))
            continue
        name = Path(src).name
        try:
            g = read_dimacs(src)
            out.append((g.name or name, g, None))
        except (OSError, ValueError) as exc:
            logger.error("cannot load %s: %s", src, exc)
            out.append((name, None, str(exc)))
    return out


def save_solution(directory: str | os.PathLike, report: RunReport, row: RunRow, graph: Graph) -> Path:
    """Write the run's k-plex as 1-based vertex ids, one per line, after re-checking it."""
    if row.best_set is None or not graph.is_kplex(row.best_set, report.k):
        raise ValueError("refusing to save an infeasible or missing solution")
    path = Path(directory) / f"{report.instance}_k{report.k}_{report.algo}_seed{row.seed}.sol"
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"c {report.instance} k={report.k} algo={report.algo} seed={row.seed} size={row.size}"]
    lines += [str(v + 1) for v in row.best_set]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def run_experiment(instances: Iterable[str | os.PathLike | Graph], ks: Sequence[int], runs: int = 20,
                   time_limit: float | None = 180.0, max_iter: int | None = None, algo: str = "rle",
                   seed: int = 0, config: ControllerConfig | None = None, jobs: int = 1,
                   save_solutions: str | os.PathLike | None = None, target: int | None = None,
                   keep_sets: bool = False) -> list[RunReport]:
    """Run every (instance, k) ``runs`` times with seeds ``seed .. seed+runs-1``.

    Instances that fail to load produce a report flagged ``failed`` and the
    experiment carries on. ``jobs > 1`` spreads runs over worker processes.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if algo not in ("rle", "rnd"):
        raise ValueError(f"unknown algo {algo!r}")
    cfg = config or ControllerConfig()
    loaded = load_instances(instances)
    tasks = []
    for name, g, _ in loaded:
        if g is None:
            continue
        for k in ks:
            for r in range(runs):
                tasks.append(_Task(name, g, k, seed + r, algo, time_limit, max_iter, cfg, target))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_run_one, tasks))
    else:
        done = [_run_one(t) for t in tasks]

    by_key: dict[tuple[str, int], list[RunRow]] = {}
    for task, row in done:
        by_key.setdefault((task.instance, task.k), []).append(row)

    reports = []
    for name, g, err in loaded:
        for k in ks:
            if g is None:
                reports.append(RunReport(name, k, algo, runs, failed=True, error=err))
                continue
            rows = sorted(by_key[(name, k)], key=lambda r: r.seed)
            rep = RunReport.aggregate(name, k, algo, rows)
            if save_solutions is not None:
                for row in rows:
                    save_solution(save_solutions, rep, row, g)
            if not keep_sets:
                for row in rep.rows:
                    row.best_set = None
            reports.append(rep)
    return reports


def _fmt_avg(avg: float) -> str:
    return f"{avg:.2f}"


def _fmt_time(t: float | None) -> str:
    return "" if t is None else f"{t:.2f}"


def _strip_timings(rep: RunReport) -> dict:
    d = asdict(rep)
    d["avg_time_to_best"] = None
    for row in d["rows"]:
        row["time_to_best"] = None
    return d


def emit_report(reports: Sequence[RunReport], fmt: str = "table", include_timings: bool = True) -> str:
    """Render reports as ``csv``, ``json`` or a text ``table``.

    With ``include_timings=False`` all wall-clock fields are blanked, which
    makes output from iteration-budgeted runs reproducible byte for byte.
    """
    if fmt == "json":
        data = [asdict(r) if include_timings else _strip_timings(r) for r in reports]
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in reports:
            if r.failed:
                w.writerow([r.instance, r.k, r.algo, r.runs, "", "", ""])
                continue
            t = _fmt_time(r.avg_time_to_best) if include_timings else ""
            w.writerow([r.instance, r.k, r.algo, r.runs, r.max, _fmt_avg(r.avg), t])
        return buf.getvalue()
    if fmt == "table":
        head = ("Instance", "k", "Algo", "Max (Avg.)", "Time(s)")
        body = []
        for r in reports:
            if r.failed:
                body.append((r.instance, str(r.k), r.algo, "FAILED", "-"))
                continue
            cell = str(r.max)
            if round(r.avg, 2) != r.max:
                cell += f" ({_fmt_avg(r.avg)})"
            t = _fmt_time(r.avg_time_to_best) if include_timings else "-"
            body.append((r.instance, str(r.k), r.algo, cell, t or "-"))
        widths = [max(len(row[i]) for row in [head, *body]) for i in range(len(head))]
        lines = ["  ".join(c.ljust(wd) if i < 3 else c.rjust(wd) for i, (c, wd) in enumerate(zip(row, widths)))
                 for row in [head, *body]]
        lines.insert(1, "  ".join("-" * wd for wd in widths))
        return "\n".join(line.rstrip() for line in lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}; expected csv, json or table")


def parse_report_json(text: str) -> list[RunReport]:
    return [RunReport.from_dict(d) for d in json.loads(text)]
