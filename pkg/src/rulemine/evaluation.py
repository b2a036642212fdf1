"""Ground-truth scoring of rule extraction runs.

Cases pair a text block with the rules a human annotator expects from it.
Recall and precision are micro-averaged over the case set; rule identity is
exact (template plus ordered activity labels). Error rate counts cases that
needed at least one correction round, failure rate counts cases that never
produced a valid rule set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .declare import Rule, rule_from_record, rule_to_record
from .llm.client import ClientError
from .llm.orchestrator import (
    Clarification,
    Conversation,
    CycleSuccess,
    Message,
    Role,
    run_cycle,
)
from .llm.prompts import PromptVariant


class Granularity(Enum):
    S2S = "s2s"  # one sentence, one expected rule
    PAR = "par"  # a paragraph describing several rules


@dataclass(frozen=True)
class EvalCase:
    input_text: str
    ground_truth: frozenset[Rule]
    granularity: Granularity
    alphabet: frozenset[str]

    def __post_init__(self) -> None:
        for rule in self.ground_truth:
            for activity in rule.activities:
                if activity not in self.alphabet:
                    raise ValueError(
                        f"ground-truth rule {rule} uses activity {activity!r} "
                        "outside the case alphabet"
                    )


@dataclass(frozen=True)
class CaseResult:
    extracted: frozenset[Rule]
    hits: int
    error_cycles: int
    failed: bool


@dataclass(frozen=True)
class EvalReport:
    recall: Fraction
    precision: Fraction
    error_rate: Fraction
    failure_rate: Fraction
    per_case: tuple[CaseResult, ...]

    def to_json_obj(self) -> dict:
        return {
            "recall": float(self.recall),
            "precision": float(self.precision),
            "error_rate": float(self.error_rate),
            "failure_rate": float(self.failure_rate),
            "cases": [
                {
                    "extracted": [rule_to_record(r) for r in sorted(c.extracted, key=str)],
                    "hits": c.hits,
                    "error_cycles": c.error_cycles,
                    "failed": c.failed,
                }
                for c in self.per_case
            ],
        }


def _ratio(numerator: int, denominator: int) -> Fraction:
    if denominator == 0:
        return Fraction(0)
    return Fraction(numerator, denominator)


def score(
    cases: Sequence[EvalCase],
    extracted: Sequence[frozenset[Rule] | set[Rule]],
    error_cycles: Sequence[int],
    failures: Sequence[bool],
) -> EvalReport:
    """Micro-averaged metrics over aligned per-case sequences."""
    if not len(cases) == len(extracted) == len(error_cycles) == len(failures):
        raise ValueError("cases, extracted, error_cycles, failures must align")
    per_case = []
    hit_total = gt_total = llm_total = 0
    errored = failed_count = 0
    for case, rules, cycles, failed in zip(cases, extracted, error_cycles, failures):
        rules = frozenset(rules)
        hits = len(case.ground_truth & rules)
        per_case.append(CaseResult(rules, hits, cycles, failed))
        hit_total += hits
        gt_total += len(case.ground_truth)
        llm_total += len(rules)
        errored += 1 if cycles > 0 else 0
        failed_count += 1 if failed else 0
    n = len(cases)
    return EvalReport(
        recall=_ratio(hit_total, gt_total),
        precision=_ratio(hit_total, llm_total),
        error_rate=_ratio(errored, n),
        failure_rate=_ratio(failed_count, n),
        per_case=tuple(per_case),
    )


def run_suite(
    cases: Sequence[EvalCase],
    client,
    prompt_variant: PromptVariant = PromptVariant.FEW_SHOT,
) -> EvalReport:
    """One fresh conversation per case; client errors become case failures."""
    extracted: list[frozenset[Rule]] = []
    cycles: list[int] = []
    failures: list[bool] = []
    for case in cases:
        conv = Conversation(alphabet=case.alphabet, prompt_variant=prompt_variant)
        try:
            outcome = run_cycle(
                conv, client, Message(Role.DOMAIN_EXPERT, case.input_text)
            )
        except ClientError:
            extracted.append(frozenset())
            cycles.append(0)
            failures.append(True)
            continue
        if isinstance(outcome, CycleSuccess):
            extracted.append(frozenset(outcome.rules))
            cycles.append(outcome.error_cycles)
            failures.append(False)
        elif isinstance(outcome, Clarification):
            extracted.append(frozenset())
            cycles.append(0)
            failures.append(False)
        else:  # CycleFailure
            extracted.append(frozenset())
            cycles.append(outcome.error_cycles)
            failures.append(True)
    return score(cases, extracted, cycles, failures)


# --- case fixtures -----------------------------------------------------------
#
# {"cases": [{"granularity": "s2s", "text": ..., "alphabet": [...],
#             "ground_truth": {"constraints": [...]}}]}


def load_cases(text: str) -> list[EvalCase]:
    doc = json.loads(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("cases"), list):
        raise ValueError('case file must be an object with a "cases" array')
    cases = []
    for i, entry in enumerate(doc["cases"]):
        try:
            truth = frozenset(
                rule_from_record(r) for r in entry["ground_truth"]["constraints"]
            )
            cases.append(
                EvalCase(
                    input_text=entry["text"],
                    ground_truth=truth,
                    granularity=Granularity(entry["granularity"]),
                    alphabet=frozenset(entry["alphabet"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"case {i}: {exc}") from exc
    return cases
