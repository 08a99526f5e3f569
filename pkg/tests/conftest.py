from pathlib import Path

import pytest

from roam.schema import (CriterionSpec, MetricSchema, Role, WeightSet,
                         load_schema)

DATA = Path(__file__).resolve().parents[1] / "src" / "roam" / "data"

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def example_schema():
    return load_schema(DATA / "schema.ini")


def simple_schema(n_root=1, betas=(0.375, 0.125), beta0=0.5):
    """Roots r0.., additional a0.. with the given weights."""
    crit = [CriterionSpec(f"r{i}", Role.ROOT) for i in range(n_root)]
    crit += [CriterionSpec(f"a{i}", Role.ADDITIONAL) for i in range(len(betas))]
    ws = WeightSet(beta0, tuple((f"a{i}", b) for i, b in enumerate(betas)))
    return MetricSchema(tuple(crit), ws)
