from __future__ import annotations

import sys

import pytest

from ordo.netcfg import DomainEvaluator, compile, motivating_instance


@pytest.fixture(scope="session")
def motivating():
    return motivating_instance()


@pytest.fixture(scope="session")
def motivating_problem(motivating):
    return compile(motivating)


@pytest.fixture
def evaluator(motivating_problem):
    return DomainEvaluator(motivating_problem)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
