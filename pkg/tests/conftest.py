"""Shared fixtures: the claim-handling worked example used across the suite."""

from __future__ import annotations

import pytest

from rulemine.eventlog import EventLog

SIGMA1 = ("A-created", "Doc-checked", "Hist-checked", "A-rejected")
SIGMA2 = ("A-created", "Hist-checked", "Doc-checked", "A-accepted")
SIGMA3 = ("A-created", "A-canceled")
SIGMA4 = ("A-created", "A-canceled")
SIGMA5 = ("A-canceled",)

L1_TRACES = (SIGMA1, SIGMA2, SIGMA3, SIGMA4, SIGMA5)

# 13 events across 5 cases, in original file order
L1_CSV_ROWS = [
    ("1", "A-created"),
    ("2", "A-created"),
    ("1", "Doc-checked"),
    ("2", "Hist-checked"),
    ("3", "A-created"),
    ("2", "Doc-checked"),
    ("1", "Hist-checked"),
    ("2", "A-accepted"),
    ("3", "A-canceled"),
    ("1", "A-rejected"),
    ("4", "A-created"),
    ("4", "A-canceled"),
    ("5", "A-canceled"),
]


@pytest.fixture
def l1_log() -> EventLog:
    return EventLog(L1_TRACES)


@pytest.fixture
def l1_csv() -> str:
    lines = ["case:concept:name,concept:name"]
    lines += [f"{case},{activity}" for case, activity in L1_CSV_ROWS]
    return "\n".join(lines) + "\n"


@pytest.fixture
def l1_xes() -> str:
    traces = []
    for trace in L1_TRACES:
        events = "".join(
            f'<event><string key="concept:name" value="{a}"/></event>' for a in trace
        )
        traces.append(f"<trace>{events}</trace>")
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<log xes.version="1.0">' + "".join(traces) + "</log>"
    )


def log_of(*traces) -> EventLog:
    """Build a log from tuples/lists of activity labels."""
    return EventLog(tuple(tuple(t) for t in traces))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid and "test_criterion_" in nodeid:
                name = nodeid.split("::")[-1].replace("test_criterion_", "")
                lines.append((name, "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"[{verdict}] {name}")
