import random
from collections import defaultdict

import pytest

DEFAULT_SEED = 20240917


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for randomised property checks")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    grouped = defaultdict(list)
    for r in RESULTS:
        grouped[r.criterion].append(r)
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(grouped):
        terminalreporter.write_line(summary_line(criterion, grouped[criterion]))


def summary_line(criterion, records) -> str:
    ok = all(r.ok for r in records)
    failed = [f"{r.name}: {r.detail}" for r in records if not r.ok]
    tail = "" if ok else "  <- " + "; ".join(failed)
    return f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'} ({len(records)} checks){tail}"
