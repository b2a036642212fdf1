"""The expert/LLM/services loop.

Prompts are assembled as: task description, activities report, optional
selected-rules report, full history, then the new message. Responses are
routed three ways: a JSON constraints object goes to validation, any other
non-empty text is treated as dialogue (the model may ask questions back),
and empty output is an error. Validation problems feed a bounded
error-correction cycle that re-prompts with a diagnostic service message.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from ..declare import Rule, RuleStats, Template, TEMPLATE_NAMES, batch_stats
from ..eventlog import EventLog
from .prompts import PromptVariant, activities_report, rules_report, task_description

MAX_ATTEMPTS = 10


class Role(Enum):
    DOMAIN_EXPERT = "domain-expert"
    ASSISTANT = "assistant"
    SERVICE = "service"


@dataclass(frozen=True)
class Message:
    role: Role
    text: str


@dataclass
class Conversation:
    """Mutable per-session state; history only ever grows."""

    alphabet: frozenset[str]
    selected_rules: set[Rule] = field(default_factory=set)
    history: list[Message] = field(default_factory=list)
    max_attempts: int = MAX_ATTEMPTS
    attempts_remaining: int = MAX_ATTEMPTS
    prompt_variant: PromptVariant = PromptVariant.INTERACTIVE


class PromptError(RuntimeError):
    """The prompt cannot be assembled (no log loaded)."""


# --- outcomes ----------------------------------------------------------------


@dataclass(frozen=True)
class Clarification:
    text: str


@dataclass(frozen=True)
class ExtractedRules:
    candidates: tuple[dict, ...]


@dataclass(frozen=True)
class Invalid:
    diagnostics: tuple[str, ...]


@dataclass(frozen=True)
class CycleSuccess:
    rules: tuple[Rule, ...]
    stats: tuple[RuleStats, ...] | None
    error_cycles: int


@dataclass(frozen=True)
class CycleFailure:
    error_cycles: int
    transcript: tuple[str, ...]  # one diagnostic summary per failed attempt


def build_prompt(conv: Conversation, new_msg: Message) -> list[Message]:
    """⟨task description, activities, selected rules?⟩ · history · ⟨new message⟩."""
    if new_msg.role is Role.ASSISTANT:
        raise ValueError("new message must come from the expert or a service")
    if not conv.alphabet:
        raise PromptError("cannot build a prompt before an event log is loaded")
    prompt = [
        Message(Role.SERVICE, task_description(conv.prompt_variant)),
        Message(Role.SERVICE, activities_report(conv.alphabet)),
    ]
    if conv.selected_rules:
        prompt.append(Message(Role.SERVICE, rules_report(conv.selected_rules)))
    prompt.extend(conv.history)
    prompt.append(new_msg)
    return prompt


def invoke(client, prompt: Sequence[Message]) -> str:
    """One LLM call; history bookkeeping is the caller's job."""
    return client.complete(prompt)


_FENCE_RE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL)


def _json_candidates(text: str):
    yield text.strip()
    for fenced in _FENCE_RE.findall(text):
        yield fenced.strip()
    # balanced top-level {...} spans, for JSON embedded in prose
    depth = 0
    start = -1
    in_string = False
    escaped = False
    for i, ch in enumerate(text):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}" and depth:
            depth -= 1
            if depth == 0:
                yield text[start : i + 1]


def parse_outcome(response: str) -> Clarification | ExtractedRules | Invalid:
    """Classify a raw LLM response.

    A parsable JSON object carrying a "constraints" array (bare, fenced, or
    embedded in prose) is an extraction; other non-empty text is dialogue;
    only an empty response is an error.
    """
    if not response.strip():
        return Invalid(("empty response",))
    for candidate in _json_candidates(response):
        try:
            doc = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(doc, dict) and isinstance(doc.get("constraints"), list):
            return ExtractedRules(tuple(doc["constraints"]))
    return Clarification(response)


def validate(
    candidates: Sequence[dict], alphabet: frozenset[str]
) -> tuple[list[Rule], list[str]]:
    """Check every record; collect all diagnostics instead of stopping early."""
    rules: list[Rule] = []
    diagnostics: list[str] = []
    for index, record in enumerate(candidates):
        where = f"constraint {index}"
        if not isinstance(record, dict):
            diagnostics.append(f"{where}: expected an object, got {type(record).__name__}")
            continue
        name = record.get("template")
        template = TEMPLATE_NAMES.get(name) if isinstance(name, str) else None
        if template is None:
            diagnostics.append(f"{where}: unknown template {name!r}")
            continue
        activities = record.get("activities")
        if not isinstance(activities, list) or not all(
            isinstance(a, str) for a in activities
        ):
            diagnostics.append(f"{where}: activities must be a list of strings")
            continue
        if len(activities) != template.arity:
            diagnostics.append(
                f"{where}: {template.value} takes {template.arity} "
                f"activities, got {len(activities)}"
            )
            continue
        bad = False
        for label in activities:
            if label not in alphabet:
                diagnostics.append(
                    f"{where}: activity {label!r} is not in the event log"
                )
                bad = True
        if template.arity == 2 and activities[0] == activities[1]:
            diagnostics.append(f"{where}: the two activities must differ")
            bad = True
        if not bad:
            rules.append(Rule(template, tuple(activities)))
    if diagnostics:
        return [], diagnostics
    return rules, []


def _error_message(diagnostics: Sequence[str]) -> str:
    listing = "\n".join(f"- {d}" for d in diagnostics)
    return (
        "Your previous response could not be accepted. "
        "The following problems were found:\n"
        f"{listing}\n"
        "Please answer again with a single JSON object of the form "
        '{"constraints": [{"template": ..., "activities": [...]}]}, using '
        "only the supported templates and only activities from the provided list."
    )


def run_cycle(
    conv: Conversation,
    client,
    new_msg: Message,
    log: EventLog | None = None,
) -> Clarification | CycleSuccess | CycleFailure:
    """Drive prompt/invoke/parse/validate until rules, dialogue, or exhaustion.

    A fresh expert message resets the attempt budget. Every completed
    exchange lands in the history, error rounds included, so the next prompt
    carries the full context.
    """
    if new_msg.role is Role.DOMAIN_EXPERT:
        conv.attempts_remaining = conv.max_attempts
    error_cycles = 0
    transcript: list[str] = []
    current = new_msg
    while conv.attempts_remaining > 0:
        prompt = build_prompt(conv, current)
        response = invoke(client, prompt)
        conv.attempts_remaining -= 1
        conv.history.append(current)
        conv.history.append(Message(Role.ASSISTANT, response))

        outcome = parse_outcome(response)
        if isinstance(outcome, Clarification):
            return outcome
        if isinstance(outcome, ExtractedRules):
            rules, diagnostics = validate(outcome.candidates, conv.alphabet)
            if not diagnostics:
                stats = tuple(batch_stats(rules, log)) if log is not None else None
                return CycleSuccess(tuple(rules), stats, error_cycles)
        else:
            diagnostics = list(outcome.diagnostics)

        error_cycles += 1
        transcript.append("; ".join(diagnostics))
        if conv.attempts_remaining == 0:
            break
        current = Message(Role.SERVICE, _error_message(diagnostics))
    return CycleFailure(error_cycles, tuple(transcript))
