"""Command-line driver.

    acisim run  [--config FILE] [--algo ...] [--ue-sa ...] [--seeds ...] --out DIR
    acisim scan [same options] [--alphas ...] [--betas ...]

The config file is flat ``key=value`` text (``#`` starts a comment); flags
override file values.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

from .candidates import ConfigError
from .drivers import DriverParams, EffortLevels
from .engine import SimulationConfig
from .experiment import (
    QUALITATIVE_CHECKS,
    SCAN_VALUES,
    ExperimentSpec,
    parameter_scan,
    run_experiment,
    write_scan,
)
from .ranking import ALGORITHMS, SolverParams

log = logging.getLogger("acisim")


def _int_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _str_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


@dataclass(frozen=True)
class Key:
    parse: Callable
    check: Callable[[object], bool]
    accepted: str


def _positive_int(v):
    return v >= 1


def _positive(v):
    return v > 0


KEYS: dict[str, Key] = {
    "actors": Key(int, _positive_int, "integer >= 1"),
    "concepts": Key(int, _positive_int, "integer >= 1"),
    "instances": Key(int, _positive_int, "integer >= 1"),
    "cap": Key(int, _positive_int, "integer >= 1, and >= stop"),
    "stop": Key(int, _positive_int, "integer >= 1"),
    "cadence": Key(int, _positive_int, "integer >= 1"),
    "ue_pc": Key(float, _positive, "number > 0"),
    "ue_pi": Key(float, _positive, "number > 0"),
    "ue_sa": Key(_float_list, lambda v: bool(v) and all(x > 0 for x in v), "comma list of numbers > 0"),
    "alpha": Key(float, _positive, "number > 0"),
    "beta": Key(float, _positive, "number > 0"),
    "damping": Key(float, lambda v: 0 < v < 1, "number in (0, 1)"),
    "tolerance": Key(float, _positive, "number > 0"),
    "max_iterations": Key(int, _positive_int, "integer >= 1"),
    "algo": Key(_str_list, lambda v: bool(v) and all(a in ALGORITHMS for a in v),
                f"comma list from {{{', '.join(ALGORITHMS)}}}"),
    "seeds": Key(_int_list, lambda v: bool(v) and all(s >= 0 for s in v),
                 "comma list or range (e.g. 0-19) of integers >= 0"),
    "strict_gate": Key(_bool, lambda v: True, "true or false"),
    "jobs": Key(int, _positive_int, "integer >= 1"),
    "out": Key(Path, lambda v: True, "directory path"),
}


class UsageError(Exception):
    pass


def _coerce(key: str, raw: str):
    spec = KEYS.get(key)
    if spec is None:
        raise UsageError(f"unknown key {key!r}; accepted keys: {', '.join(sorted(KEYS))}")
    try:
        value = spec.parse(raw)
    except ValueError:
        raise UsageError(f"{key}={raw!r} is invalid; accepted: {spec.accepted}") from None
    if not spec.check(value):
        raise UsageError(f"{key}={raw!r} is out of range; accepted: {spec.accepted}")
    return value


def read_config_file(path) -> dict:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = _coerce(key.replace("-", "_"), raw)
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acisim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "run an algorithm x effort x seed grid"),
                            ("scan", "repeat the grid over alpha/beta and check the qualitative results")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="flat key=value config file")
        p.add_argument("--algo", help="comma list of ranking algorithms")
        p.add_argument("--ue-sa", dest="ue_sa", help="comma list of annotation effort levels")
        p.add_argument("--seeds", help="comma list or range, e.g. 0-19")
        p.add_argument("--stop", help="successful annotations to stop at")
        p.add_argument("--cap", help="iteration cap")
        p.add_argument("--actors")
        p.add_argument("--concepts")
        p.add_argument("--instances")
        p.add_argument("--alpha")
        p.add_argument("--beta")
        p.add_argument("--damping")
        p.add_argument("--cadence", help="successful events between ranking updates")
        p.add_argument("--strict-gate", dest="strict_gate", help="true: ties do not execute")
        p.add_argument("--jobs", help="worker processes")
        p.add_argument("--out", help="output directory")
        p.add_argument("--events", action="store_true", help="also write per-cell event logs")
        p.add_argument("--dump-pools", action="store_true", help="also write per-cell candidate pools")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "scan":
            p.add_argument("--alphas", default=",".join(map(str, SCAN_VALUES)))
            p.add_argument("--betas", default=",".join(map(str, SCAN_VALUES)))
    return parser


def parse_config(config_file=None, overrides: Optional[dict] = None) -> ExperimentSpec:
    """Merge defaults, file values and flag overrides (raw strings) into a spec."""
    values = read_config_file(config_file) if config_file else {}
    for key, raw in (overrides or {}).items():
        if raw is not None:
            values[key] = _coerce(key, raw)
    base = SimulationConfig()
    try:
        cfg = replace(
            base,
            n_actors=values.get("actors", base.n_actors),
            n_concepts=values.get("concepts", base.n_concepts),
            n_instances=values.get("instances", base.n_instances),
            cap=values.get("cap", base.cap),
            stop=values.get("stop", base.stop),
            cadence=values.get("cadence", base.cadence),
            strict_gate=values.get("strict_gate", base.strict_gate),
            efforts=EffortLevels(values.get("ue_pc", 1.0), values.get("ue_pi", 1.0),
                                 values.get("ue_sa", [1.0])[0]),
            params=DriverParams(values.get("alpha", 1.0), values.get("beta", 1.0)),
            solver=SolverParams(values.get("damping", 0.85), values.get("tolerance", 1e-8),
                                values.get("max_iterations", 100)),
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    spec = ExperimentSpec(base=cfg)
    if "algo" in values:
        spec.algorithms = values["algo"]
    if "ue_sa" in values:
        spec.ue_sa = values["ue_sa"]
    if "seeds" in values:
        spec.seeds = values["seeds"]
    spec.out = values.get("out", spec.out)
    spec.jobs = values.get("jobs", spec.jobs)
    return spec


_FLAG_KEYS = ("algo", "ue_sa", "seeds", "stop", "cap", "actors", "concepts", "instances",
              "alpha", "beta", "damping", "cadence", "strict_gate", "jobs", "out")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = parse_config(args.config, {k: getattr(args, k) for k in _FLAG_KEYS})
    except (UsageError, OSError) as exc:
        print(f"acisim: error: {exc}", file=sys.stderr)
        return 2
    spec.events, spec.dump_pools = args.events, args.dump_pools

    if args.command == "run":
        status = run_experiment(spec)
        print(f"wrote {len(list(spec.cells()))} cells and aggregate.csv to {spec.out}")
        return status

    try:
        alphas = _coerce("ue_sa", args.alphas)
        betas = _coerce("ue_sa", args.betas)
    except UsageError as exc:
        print(f"acisim: error: alphas/betas: {exc}", file=sys.stderr)
        return 2
    rows = parameter_scan(spec, alphas, betas)
    spec.out.mkdir(parents=True, exist_ok=True)
    write_scan(spec.out / "scan.csv", rows)
    for row in rows:
        marks = " ".join(f"{name}={row[name]}" for name in QUALITATIVE_CHECKS)
        print(f"alpha={row['alpha']} beta={row['beta']}: {marks}")
    return max(row["status"] for row in rows)


if __name__ == "__main__":
    sys.exit(main())
