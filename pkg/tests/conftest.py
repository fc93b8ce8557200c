import pytest

from acisim.experiment import ExperimentSpec, aggregate, load_results, run_experiment

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def default_grid(tmp_path_factory):
    """The full 4 algorithms x {1.0, 2.0} x 20 seeds grid at default settings."""
    out = tmp_path_factory.mktemp("default_grid")
    spec = ExperimentSpec(seeds=list(range(20)), out=out)
    status = run_experiment(spec)
    rows = aggregate(load_results(out, spec))
    return spec, status, rows
