"""Prompt assets: the fixed task description and the generated service reports."""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterable

from ..declare import Rule


class PromptVariant(Enum):
    INTERACTIVE = "interactive"  # full protocol: clarification questions + examples
    FEW_SHOT = "few_shot"  # no clarification instruction, examples kept
    ZERO_SHOT = "zero_shot"  # no clarification instruction, no examples


@lru_cache(maxsize=None)
def task_description(variant: PromptVariant = PromptVariant.INTERACTIVE) -> str:
    name = f"task_description_{variant.value}.md"
    return (
        resources.files("rulemine.assets").joinpath(name).read_text(encoding="utf-8")
    )


def activities_report(alphabet: Iterable[str]) -> str:
    lines = [
        "The list of activities used in this process are the following. "
        "Please only use these activities to generate constraints:",
        "",
    ]
    lines += [f"- {a}" for a in sorted(alphabet)]
    return "\n".join(lines)


def rules_report(selected: Iterable[Rule]) -> str:
    lines = ["So far, the user has selected the following rules:", ""]
    lines += [f"- {r}" for r in sorted(selected, key=str)]
    return "\n".join(lines)
