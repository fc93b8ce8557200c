"""Multi-seed experiment grids, per-cell output files, and aggregate medians."""
from __future__ import annotations

import csv
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

from .drivers import DriverParams
from .engine import (
    STOP_REACHED,
    Simulation,
    SimulationConfig,
    read_trace_csv,
    write_event_log,
    write_summary_json,
    write_trace_csv,
)
from .ranking import ALGORITHMS, HITS, INDEGREE, PAGERANK, RANDOM

log = logging.getLogger(__name__)

AGGREGATE_HEADER = [
    "algorithm", "ue_sa", "n_seeds", "cap_exceeded",
    "median_final_entropy", "median_top1_quality", "median_top10_quality", "median_sa_rate",
]


@dataclass
class ExperimentSpec:
    base: SimulationConfig = field(default_factory=SimulationConfig)
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    ue_sa: list[float] = field(default_factory=lambda: [1.0, 2.0])
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    out: Path = Path("results")
    jobs: int = 1
    events: bool = False
    dump_pools: bool = False

    def cells(self):
        for algo in self.algorithms:
            for ue in self.ue_sa:
                for seed in self.seeds:
                    yield algo, ue, seed

    def cell_config(self, algo: str, ue: float, seed: int) -> SimulationConfig:
        return replace(self.base, algorithm=algo, seed=seed,
                       efforts=replace(self.base.efforts, ue_sa=ue))


def cell_stem(algo: str, ue: float, seed: int) -> str:
    return f"{algo}_ue{float(ue)}_seed{seed}"


@dataclass(frozen=True)
class CellResult:
    algorithm: str
    ue_sa: float
    seed: int
    termination: str
    final_entropy: Optional[float]
    top1_quality: Optional[float]
    top10_quality: Optional[float]
    sa_rate: Optional[float]


def _optional(text: str) -> Optional[float]:
    return float(text) if text != "" else None


def cell_result(algo: str, ue: float, seed: int, trace_rows: list[dict], summary: dict) -> CellResult:
    """Per-cell values: quality and entropy at the last recorded annotation,
    SA execution rate over the whole run."""
    last = trace_rows[-1] if trace_rows else None
    return CellResult(
        algo, ue, seed, summary["termination"],
        _optional(last["entropy"]) if last else None,
        _optional(last["top1_quality"]) if last else None,
        _optional(last["top10_quality"]) if last else None,
        summary["execution_rates"]["semantic_annotation"],
    )


def _run_cell(args) -> tuple[str, Optional[str]]:
    spec, algo, ue, seed = args
    stem = cell_stem(algo, ue, seed)
    try:
        sim = Simulation(spec.cell_config(algo, ue, seed))
        outcome = sim.run()
        write_trace_csv(spec.out / f"{stem}.csv", outcome.trace)
        write_summary_json(spec.out / f"{stem}.json", outcome.summary)
        if spec.events:
            write_event_log(spec.out / f"{stem}.events.csv", outcome.events)
        if spec.dump_pools:
            with open(spec.out / f"{stem}.pools.csv", "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(["kind", "id", "attr1", "attr2"])
                writer.writerows(sim.pools.rows())
    except Exception as exc:  # a failed cell must not sink the grid
        log.exception("cell %s failed", stem)
        return stem, repr(exc)
    return stem, None


def _median(values) -> Optional[float]:
    values = [v for v in values if v is not None]
    return statistics.median(values) if values else None


def aggregate(results: Sequence[CellResult]) -> list[dict]:
    groups: dict[tuple[str, float], list[CellResult]] = {}
    for r in results:
        groups.setdefault((r.algorithm, r.ue_sa), []).append(r)
    rows = []
    for (algo, ue), cell in groups.items():
        rows.append({
            "algorithm": algo,
            "ue_sa": ue,
            "n_seeds": len(cell),
            "cap_exceeded": sum(r.termination != STOP_REACHED for r in cell),
            "median_final_entropy": _median(r.final_entropy for r in cell),
            "median_top1_quality": _median(r.top1_quality for r in cell),
            "median_top10_quality": _median(r.top10_quality for r in cell),
            "median_sa_rate": _median(r.sa_rate for r in cell),
        })
    return rows


def write_aggregate(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=AGGREGATE_HEADER, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if v is None else v for k, v in row.items()})


def run_experiment(spec: ExperimentSpec) -> int:
    """Run every cell, then write ``aggregate.csv``. Returns an exit status."""
    spec.out.mkdir(parents=True, exist_ok=True)
    jobs = [(spec, algo, ue, seed) for algo, ue, seed in spec.cells()]
    if spec.jobs > 1:
        with ProcessPoolExecutor(spec.jobs) as pool:
            done = list(pool.map(_run_cell, jobs))
    else:
        done = [_run_cell(j) for j in jobs]
    failed = [stem for stem, err in done if err is not None]
    results = load_results(spec.out, spec, set(failed))
    write_aggregate(spec.out / "aggregate.csv", aggregate(results))
    for stem in failed:
        log.error("no output for cell %s", stem)
    return 1 if failed else 0


def load_results(out: Path, spec: ExperimentSpec, skip=frozenset()) -> list[CellResult]:
    results = []
    for algo, ue, seed in spec.cells():
        stem = cell_stem(algo, ue, seed)
        if stem in skip:
            continue
        rows = read_trace_csv(out / f"{stem}.csv")
        summary = json.loads((out / f"{stem}.json").read_text())
        results.append(cell_result(algo, ue, seed, rows, summary))
    return results


def medians_by_cell(rows: list[dict]) -> dict[tuple[str, float], dict]:
    return {(r["algorithm"], float(r["ue_sa"])): r for r in rows}


# Qualitative checks against the reported behaviour. Each takes the aggregate
# rows (one per algorithm x effort cell) and returns (passed, detail).

def entropy_ordering(rows: list[dict], ue: float = 2.0) -> tuple[bool, str]:
    """Random > HITS > max(Indegree, PageRank), and Random - PageRank > 0."""
    m = medians_by_cell(rows)
    h = {a: m[(a, ue)]["median_final_entropy"] for a in ALGORITHMS}
    ok = (h[RANDOM] > h[HITS] > max(h[INDEGREE], h[PAGERANK])) and h[RANDOM] - h[PAGERANK] > 0
    detail = ", ".join(f"{a}={h[a]:.4f}" for a in ALGORITHMS)
    return ok, detail


def effort_quality(rows: list[dict]) -> tuple[bool, str]:
    """Top-1 quality at UE_SA 2.0 exceeds UE_SA 1.0 for indegree and PageRank."""
    m = medians_by_cell(rows)
    parts, ok = [], True
    for a in (INDEGREE, PAGERANK):
        lo, hi = m[(a, 1.0)]["median_top1_quality"], m[(a, 2.0)]["median_top1_quality"]
        ok &= hi > lo
        parts.append(f"{a}: {lo:.4f} -> {hi:.4f}")
    return ok, "; ".join(parts)


def rate_effect(rows: list[dict]) -> tuple[bool, str]:
    """SA rates within 0.1 of each other at 1.0; every rate lower at 2.0."""
    m = medians_by_cell(rows)
    lo = {a: m[(a, 1.0)]["median_sa_rate"] for a in ALGORITHMS}
    hi = {a: m[(a, 2.0)]["median_sa_rate"] for a in ALGORITHMS}
    spread = max(lo.values()) - min(lo.values())
    ok = spread <= 0.1 and all(hi[a] < lo[a] for a in ALGORITHMS)
    detail = f"spread@1.0={spread:.4f}; " + ", ".join(f"{a}: {lo[a]:.4f} -> {hi[a]:.4f}" for a in ALGORITHMS)
    return ok, detail


QUALITATIVE_CHECKS = {
    "entropy_ordering": entropy_ordering,
    "effort_quality": effort_quality,
    "rate_effect": rate_effect,
}

SCAN_VALUES = (0.5, 1.0, 2.0)


def parameter_scan(spec: ExperimentSpec, alphas=SCAN_VALUES, betas=SCAN_VALUES) -> list[dict]:
    """Re-run the grid for every (alpha, beta) and evaluate the qualitative checks."""
    rows = []
    for alpha in alphas:
        for beta in betas:
            sub = replace(spec, base=replace(spec.base, params=DriverParams(alpha, beta)),
                          out=spec.out / f"alpha{alpha}_beta{beta}")
            status = run_experiment(sub)
            agg = aggregate(load_results(sub.out, sub))
            row = {"alpha": alpha, "beta": beta, "status": status}
            for name, check in QUALITATIVE_CHECKS.items():
                ok, detail = check(agg)
                row[name] = "pass" if ok else "fail"
                row[f"{name}_detail"] = detail
            rows.append(row)
    return rows


def write_scan(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
