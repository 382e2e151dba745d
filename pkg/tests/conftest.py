import sys

import pytest

from fuzzydea.dea_core import Dataset, DmuRecord
from fuzzydea.fuzzy import TriangularFuzzyNumber as TFN

# normalized oil-company data: (capital expenditure, throughput) -> (NCI, revenue)
LARGE = {
    "BPCL": (1.89, 4.20, TFN(4, 5, 6), 3.41),
    "ONGC+MRPL": (9.00, 2.85, TFN(6, 7, 8), 9.00),
    "HPCL": (1.73, 4.26, TFN(7, 8, 9), 3.09),
    "IOCL": (3.21, 8.83, TFN(6, 7, 8), 5.36),
    "RIL": (5.34, 9.00, TFN(8, 9, 9), 5.56),
}
SMALL = {
    "CPCL": (3.57, 5.17, TFN(6, 7, 8), 5.00),
    "NRL": (2.03, 2.08, TFN(7, 8, 9), 2.44),
    "BORL": (9.00, 3.59, TFN(6, 7, 8), 9.00),
    "NEL": (3.56, 9.00, TFN(8, 9, 9), 8.84),
}


def make_dataset(group, rows):
    records = [DmuRecord(name, group, v[:2], v[2:]) for name, v in rows.items()]
    return Dataset(
        tuple(records),
        ("capital_expenditure", "crude_throughput"),
        ("nci", "revenue"),
    )


@pytest.fixture(scope="session")
def large():
    return make_dataset("large", LARGE)


@pytest.fixture(scope="session")
def small():
    return make_dataset("small", SMALL)


@pytest.fixture(scope="session")
def oil(large, small):
    return {"large": large, "small": small}


@pytest.fixture
def toy():
    return Dataset(
        (DmuRecord("A", "g", (2.0,), (1.0,)), DmuRecord("B", "g", (4.0,), (1.0,)))
    )


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda text: int(text.split()[2].rstrip(':'))):
            terminalreporter.write_line(line)
