import pytest

from chain_discovery import catalog
from chain_discovery.graph import CausalTree


def zb(*labels):
    """1-based object labels -> 0-based node set."""
    return {k - 1 for k in labels}


@pytest.fixture
def minimal_chain() -> CausalTree:
    return catalog.tree("minimal_chain")


@pytest.fixture
def pt_example() -> CausalTree:
    return catalog.tree("parallel_triggers_example")


_ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion; shown in the terminal summary."""

    def _report(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
