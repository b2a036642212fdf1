from .client import (
    ClientError,
    HttpChatClient,
    LlmClient,
    ProviderConfig,
    ScriptedClient,
    build_client,
    load_transcript,
)
from .orchestrator import (
    Clarification,
    Conversation,
    CycleFailure,
    CycleSuccess,
    ExtractedRules,
    Invalid,
    Message,
    PromptError,
    Role,
    build_prompt,
    invoke,
    parse_outcome,
    run_cycle,
    validate,
)
from .prompts import PromptVariant, activities_report, rules_report, task_description

__all__ = [
    "Clarification",
    "ClientError",
    "Conversation",
    "CycleFailure",
    "CycleSuccess",
    "ExtractedRules",
    "HttpChatClient",
    "Invalid",
    "LlmClient",
    "Message",
    "PromptError",
    "PromptVariant",
    "ProviderConfig",
    "Role",
    "ScriptedClient",
    "activities_report",
    "build_client",
    "build_prompt",
    "invoke",
    "load_transcript",
    "parse_outcome",
    "rules_report",
    "run_cycle",
    "task_description",
    "validate",
]
