import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from popeval.synthetic import make_collection  # noqa: E402


@pytest.fixture(scope="session")
def synthetic():
    return make_collection(n_systems=20, n_topics=50, seed=0)


@pytest.fixture
def tiny_files(tmp_path):
    """Two runs and a qrels file where q1 has relevant {d1, d3}."""
    runs = tmp_path / "runs"
    runs.mkdir()
    (runs / "a.run").write_text("q1 Q0 d1 1 3.0 sysA\nq1 Q0 d2 2 2.0 sysA\nq1 Q0 d3 3 1.0 sysA\n")
    (runs / "b.run").write_text("q1 Q0 d2 1 3.0 sysB\nq1 Q0 d4 2 2.0 sysB\n")
    qrels = tmp_path / "qrels.txt"
    qrels.write_text("q1 0 d1 1\nq1 0 d2 0\nq1 0 d3 1\n")
    return runs, qrels


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
