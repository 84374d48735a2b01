import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from provpolicy import samples
from provpolicy.bench import GenConfig, gen_graphs


@pytest.fixture
def graph_a():
    return samples.sample_graph_a()


@pytest.fixture
def graph_b():
    return samples.sample_graph_b()


@pytest.fixture
def graph_c():
    return samples.sample_graph_c()


@pytest.fixture
def vcd():
    return samples.sample_vcd()


@pytest.fixture
def emt():
    return samples.sample_merge_table()


@pytest.fixture
def policy():
    return samples.sample_policy()


@pytest.fixture(scope="session")
def small_graphs():
    """A pool of small random valid graphs for oracle comparisons."""
    cfg = GenConfig(
        graphs=40, processes=4, artifacts=5, agents=2, attributes=2, seed=11
    )
    return gen_graphs(cfg)


# One verdict line per acceptance criterion at the end of the run, so the
# result survives output capture.

_acceptance: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in _acceptance:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[ACCEPTANCE] {name}: {status}")
