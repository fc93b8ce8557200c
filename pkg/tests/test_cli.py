import csv
import subprocess
import sys
from pathlib import Path

import pytest

from acisim import experiment
from acisim.cli import UsageError, main, parse_config
from acisim.ranking import ALGORITHMS

ROOT = Path(__file__).resolve().parents[1]
SMALL_FLAGS = ["--actors", "15", "--concepts", "40", "--instances", "40", "--stop", "20",
               "--cap", "3000"]


def test_defaults():
    spec = parse_config()
    cfg = spec.base
    assert (cfg.n_actors, cfg.n_concepts, cfg.n_instances) == (100, 1000, 1000)
    assert (cfg.cap, cfg.stop) == (20_000, 1000)
    assert (cfg.efforts.ue_pc, cfg.efforts.ue_pi) == (1.0, 1.0)
    assert (cfg.params.alpha, cfg.params.beta, cfg.solver.damping) == (1.0, 1.0, 0.85)
    assert spec.algorithms == list(ALGORITHMS) and spec.ue_sa == [1.0, 2.0]


def test_stop_zero_rejected(capsys):
    with pytest.raises(UsageError, match="stop"):
        parse_config(overrides={"stop": "0"})
    assert main(["run", "--stop", "0"]) == 2
    assert "stop" in capsys.readouterr().err


def test_range_message_names_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("damping = 1.5\n")
    with pytest.raises(UsageError, match=r"damping.*\(0, 1\)"):
        parse_config(cfg)


def test_unknown_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\nwarp = 9\n")
    with pytest.raises(UsageError, match="warp"):
        parse_config(cfg)


def test_flag_beats_file(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("ue_sa = 1.0\nseeds = 0-3\nalgo = hits\n")
    spec = parse_config(cfg, {"ue_sa": "2.0"})
    assert spec.ue_sa == [2.0]
    assert spec.seeds == [0, 1, 2, 3] and spec.algorithms == ["hits"]


def test_cap_below_stop_rejected():
    with pytest.raises(UsageError):
        parse_config(overrides={"stop": "50", "cap": "10"})


def _run(out, extra=()):
    return main(["run", *SMALL_FLAGS, "--algo", "indegree,pagerank", "--ue-sa", "1.0",
                 "--seeds", "0,1", "--out", str(out), *extra])


def test_run_writes_cells_and_is_repeatable(tmp_path):
    assert _run(tmp_path / "a", ["--events", "--dump-pools"]) == 0
    assert _run(tmp_path / "b", ["--events", "--dump-pools"]) == 0
    a = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert len([n for n in a if n.endswith(".json")]) == 4
    assert "pagerank_ue1.0_seed1.csv" in a and "aggregate.csv" in a
    assert "indegree_ue1.0_seed0.events.csv" in a and "indegree_ue1.0_seed0.pools.csv" in a
    for name in a:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    pools = (tmp_path / "a" / "indegree_ue1.0_seed0.pools.csv").read_text().splitlines()
    assert pools[0] == "kind,id,attr1,attr2" and len(pools) == 1 + 15 + 40 + 40


def test_single_cell(tmp_path):
    out = tmp_path / "one"
    assert main(["run", *SMALL_FLAGS, "--algo", "random", "--ue-sa", "2.0", "--seeds", "3",
                 "--out", str(out)]) == 0
    assert len(list(out.glob("*_seed*.csv"))) == 1
    assert len((out / "aggregate.csv").read_text().splitlines()) == 2


def test_aggregate_matches_independent_recount(tmp_path):
    assert _run(tmp_path) == 0
    res = subprocess.run([sys.executable, str(ROOT / "scripts" / "check_aggregate.py"), str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stdout


def test_failed_cell_gives_nonzero_exit(tmp_path, monkeypatch):
    real = experiment.Simulation

    def flaky(cfg):
        if cfg.seed == 1 and cfg.algorithm == "pagerank":
            raise RuntimeError("boom")
        return real(cfg)

    monkeypatch.setattr(experiment, "Simulation", flaky)
    assert _run(tmp_path) == 1
    with open(tmp_path / "aggregate.csv", newline="") as f:
        rows = {r["algorithm"]: r for r in csv.DictReader(f)}
    assert rows["indegree"]["n_seeds"] == "2"
    assert rows["pagerank"]["n_seeds"] == "1"


@pytest.mark.slow
def test_default_grid_file_count(default_grid):
    spec, status, _ = default_grid
    assert status == 0
    traces = [p for p in spec.out.glob("*_seed*.csv")]
    assert len(traces) == 4 * 2 * 20 == 160
    assert (spec.out / "aggregate.csv").exists()
    res = subprocess.run([sys.executable, str(ROOT / "scripts" / "check_aggregate.py"), str(spec.out)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stdout
