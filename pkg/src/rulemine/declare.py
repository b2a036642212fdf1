"""Declare constraint templates, per-trace semantics, and log statistics.

Eight templates are supported: two unary existence constraints and six binary
ordering/co-occurrence constraints. A rule is a template instantiated with
concrete activity labels. Per-trace evaluation yields an (activated, violated)
pair; log-level support and confidence are exact rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .eventlog import EventLog, Trace


class Template(Enum):
    AT_MOST_1 = "AtMost1"
    AT_LEAST_1 = "AtLeast1"
    RESPONSE = "Response"
    PRECEDENCE = "Precedence"
    RESPONDED_EXISTENCE = "RespondedExistence"
    CO_EXISTENCE = "CoExistence"
    NOT_CO_EXISTENCE = "NotCoExistence"
    NOT_SUCCESSION = "NotSuccession"

    @property
    def arity(self) -> int:
        return 1 if self in (Template.AT_MOST_1, Template.AT_LEAST_1) else 2


TEMPLATE_NAMES = {t.value: t for t in Template}


class RuleError(ValueError):
    """Malformed rule: bad template name, arity, or duplicate activities."""


@dataclass(frozen=True)
class Rule:
    """A Declare template bound to concrete activities."""

    template: Template
    activities: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.activities) != self.template.arity:
            raise RuleError(
                f"{self.template.value} takes {self.template.arity} "
                f"activities, got {len(self.activities)}"
            )
        if self.template.arity == 2 and self.activities[0] == self.activities[1]:
            raise RuleError(
                f"{self.template.value} requires two distinct activities"
            )

    def __str__(self) -> str:
        return f"{self.template.value}({', '.join(self.activities)})"


class StatsError(ValueError):
    """Statistics are undefined (empty log)."""


@dataclass(frozen=True)
class RuleStats:
    rule: Rule
    activated: int
    satisfied: int
    traces: int

    @property
    def support(self) -> Fraction:
        return Fraction(self.satisfied, self.traces)

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.satisfied, max(1, self.activated))


def evaluate_trace(rule: Rule, trace: Trace) -> tuple[bool, bool]:
    """Return (activated, violated) for one trace.

    Activation follows the usual Declare conventions: occurrence of the
    source activity for ordering templates, occurrence of either activity for
    the co-existence family, and unconditional activation for AtLeast1.
    """
    t = rule.template
    if t is Template.AT_MOST_1:
        n = trace.count(rule.activities[0])
        return n >= 1, n >= 2
    if t is Template.AT_LEAST_1:
        return True, rule.activities[0] not in trace

    a, b = rule.activities
    if t is Template.RESPONSE:
        # some a with no later b?
        violated = False
        for i, x in enumerate(trace):
            if x == a and b not in trace[i + 1 :]:
                violated = True
                break
        return a in trace, violated
    if t is Template.PRECEDENCE:
        violated = False
        for i, x in enumerate(trace):
            if x == b and a not in trace[:i]:
                violated = True
                break
        return b in trace, violated
    if t is Template.RESPONDED_EXISTENCE:
        has_a = a in trace
        return has_a, has_a and b not in trace
    if t is Template.CO_EXISTENCE:
        has_a, has_b = a in trace, b in trace
        return has_a or has_b, has_a != has_b
    if t is Template.NOT_CO_EXISTENCE:
        has_a, has_b = a in trace, b in trace
        return has_a or has_b, has_a and has_b
    if t is Template.NOT_SUCCESSION:
        has_a = a in trace
        violated = False
        if has_a:
            first_a = trace.index(a)
            violated = b in trace[first_a + 1 :]
        return has_a, violated
    raise AssertionError(f"unhandled template {t}")


def stats(rule: Rule, log: EventLog) -> RuleStats:
    """Count activated and satisfied traces (satisfied = activated and not violated)."""
    if log.trace_count == 0:
        raise StatsError("statistics are undefined on an empty log")
    activated = 0
    satisfied = 0
    for trace in log.traces:
        act, vio = evaluate_trace(rule, trace)
        if act:
            activated += 1
            if not vio:
                satisfied += 1
    return RuleStats(rule, activated, satisfied, log.trace_count)


def batch_stats(rules: Sequence[Rule], log: EventLog) -> list[RuleStats | StatsError]:
    """Element-wise stats, input order preserved; per-rule errors do not abort."""
    out: list[RuleStats | StatsError] = []
    for rule in rules:
        try:
            out.append(stats(rule, log))
        except StatsError as exc:
            out.append(exc)
    return out


def format_ratio(value: Fraction) -> str:
    """Render an exact ratio as a 4-digit decimal for reports."""
    return f"{float(value):.4f}"


# --- rule interchange -------------------------------------------------------
#
# Shared JSON document: {"constraints": [{"template": ..., "activities": [...]}]}


def rule_to_record(rule: Rule) -> dict:
    return {"template": rule.template.value, "activities": list(rule.activities)}


def rules_to_json(rules: Iterable[Rule]) -> str:
    return json.dumps({"constraints": [rule_to_record(r) for r in rules]}, indent=2)


def rule_from_record(record: dict) -> Rule:
    """Strict single-record conversion; raises RuleError on any deviation."""
    if not isinstance(record, dict):
        raise RuleError(f"constraint record must be an object, got {type(record).__name__}")
    name = record.get("template")
    if not isinstance(name, str) or name not in TEMPLATE_NAMES:
        raise RuleError(f"unknown template {name!r}")
    acts = record.get("activities")
    if not isinstance(acts, list) or not all(isinstance(a, str) for a in acts):
        raise RuleError("activities must be a list of strings")
    return Rule(TEMPLATE_NAMES[name], tuple(acts))


def rules_from_json(text: str) -> list[Rule]:
    doc = json.loads(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("constraints"), list):
        raise RuleError('document must be an object with a "constraints" array')
    return [rule_from_record(r) for r in doc["constraints"]]
