"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

import re

import pytest

_ACCEPTANCE: dict[int, list[tuple[str, str]]] = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.setdefault(int(match.group(1)), []).append((match.group(2), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        results = _ACCEPTANCE[number]
        status = "PASS" if all(outcome == "passed" for _, outcome in results) else "FAIL"
        detail = ", ".join(f"{name}={outcome}" for name, outcome in results)
        terminalreporter.write_line(f"criterion {number}: {status} ({detail})")


@pytest.fixture
def run_cli(capsys):
    from pascalspiral.cli import main

    def run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return run
