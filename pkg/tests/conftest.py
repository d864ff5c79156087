from importlib.resources import files

import numpy as np
import pytest

from fuzzcorr import FuzzyDataset, parse_fuzzy_csv, parse_usage_csv

DATA = files("fuzzcorr").joinpath("data")


@pytest.fixture(scope="session")
def table1_path():
    return str(DATA.joinpath("table1.csv"))


@pytest.fixture(scope="session")
def table2_path():
    return str(DATA.joinpath("table2.csv"))


@pytest.fixture(scope="session")
def table1():
    return parse_usage_csv(DATA.joinpath("table1.csv").read_bytes())


@pytest.fixture(scope="session")
def table2():
    return parse_fuzzy_csv(DATA.joinpath("table2.csv").read_bytes())


def random_dataset(rng, n, m, grid=0.1):
    """Memberships drawn uniformly from {0, grid, 2*grid, ..., 1}."""
    steps = int(round(1 / grid))
    values = rng.integers(0, steps + 1, size=(n, m)) / steps
    return FuzzyDataset.from_array(values, [f"I{j}" for j in range(m)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"[{'PASS' if ok else 'FAIL'}] AC{number:<2} {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
