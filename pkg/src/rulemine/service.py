"""HTTP service exposing the pipeline: log upload, chat sessions, rule
selection, and discovery runs.

State lives in memory keyed by opaque ids; an optional state directory gets
one JSON snapshot per session (log content embedded) so a restarted server
can resume. Per-session operations are serialized: a second request while
one is in flight is rejected with 409 rather than queued.
"""

from __future__ import annotations

import json
import threading
import uuid
import warnings as warnings_module
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from . import process_tree
from .declare import (
    Rule,
    RuleStats,
    batch_stats,
    format_ratio,
    rule_from_record,
    rule_to_record,
)
from .eventlog import CsvColumns, EventLog, LogError, parse_csv, parse_xes
from .imr import DiscoveryConfig, NoAdmissibleCutError, RuleFallback, discover
from .llm.client import ClientError, HttpChatClient, ProviderConfig, ScriptedClient
from .llm.orchestrator import (
    Clarification,
    Conversation,
    CycleSuccess,
    Message,
    PromptError,
    Role,
    run_cycle,
    validate,
)

PROVIDER_MODELS = {
    "openai": ["gpt-4.1", "gpt-4.1-nano", "o3"],
    "google": ["gemini-2.5-pro", "gemini-2.5-flash"],
    "deepseek": ["deepseek-chat", "deepseek-reasoner"],
    "scripted": [],
}


class ClientSpec(BaseModel):
    provider: str
    model: str | None = None
    api_key: str | None = None
    endpoint: str | None = None
    timeout: float = 60.0
    responses: list[str] | None = None  # scripted provider only
    repeat_last: bool = False


class UploadLogBody(BaseModel):
    format: Literal["csv", "xes"]
    content: str
    case_column: str | None = None
    activity_column: str | None = None
    timestamp_column: str | None = None


class CreateSessionBody(BaseModel):
    log_id: str
    client: ClientSpec


class MessageBody(BaseModel):
    text: str


class SelectionBody(BaseModel):
    indices: list[int] | None = None
    constraints: list[dict] | None = None


class DiscoverBody(BaseModel):
    sup: float = Field(default=0.2)
    rule_fallback: Literal["warn", "abort"] = "warn"


@dataclass
class SessionState:
    id: str
    log_id: str
    log: EventLog
    conversation: Conversation
    client: object
    client_spec: ClientSpec
    last_rules: list[Rule] = field(default_factory=list)
    last_stats: list[RuleStats] = field(default_factory=list)
    selected: list[Rule] = field(default_factory=list)
    last_model: process_tree.ProcessTree | None = None
    model_id: str | None = None
    warnings: list[str] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def drain_warnings(self) -> list[str]:
        drained, self.warnings = self.warnings, []
        return drained


def _build_session_client(spec: ClientSpec):
    if spec.provider == "scripted":
        return ScriptedClient(list(spec.responses or []), repeat_last=spec.repeat_last)
    if spec.model is None:
        raise ClientError(f"provider {spec.provider!r} needs a model name")
    config = ProviderConfig(
        provider=spec.provider,
        model=spec.model,
        api_key=spec.api_key,
        endpoint=spec.endpoint,
        timeout=spec.timeout,
    )
    if spec.api_key is None:
        config.resolve_key()  # fail at session creation, not first message
    return HttpChatClient(config)


def _stats_row(stats: RuleStats, selected: bool) -> dict:
    return {
        "template": stats.rule.template.value,
        "activities": list(stats.rule.activities),
        "activated": stats.activated,
        "satisfied": stats.satisfied,
        "support": format_ratio(stats.support),
        "confidence": format_ratio(stats.confidence),
        "selected": selected,
    }


def create_app(
    state_dir: str | Path | None = None, ui_dir: str | Path | None = None
) -> FastAPI:
    app = FastAPI(title="rulemine")
    logs: dict[str, tuple[EventLog, dict]] = {}
    sessions: dict[str, SessionState] = {}
    app.state.logs = logs
    app.state.sessions = sessions
    state_path = Path(state_dir) if state_dir else None
    if state_path:
        state_path.mkdir(parents=True, exist_ok=True)

    # --- persistence ---------------------------------------------------------

    def persist(session: SessionState) -> None:
        if not state_path:
            return
        spec = session.client_spec
        snapshot = {
            "session_id": session.id,
            "log_id": session.log_id,
            "log_traces": [list(t) for t in session.log.traces],
            "history": [
                {"role": m.role.value, "text": m.text}
                for m in session.conversation.history
            ],
            "selected": [rule_to_record(r) for r in session.selected],
            "last_rules": [rule_to_record(r) for r in session.last_rules],
            "model_text": (
                process_tree.to_text(session.last_model)
                if session.last_model is not None
                else None
            ),
            "model_id": session.model_id,
            "warnings": session.warnings,
            "client": {
                "provider": spec.provider,
                "model": spec.model,
                "endpoint": spec.endpoint,
                "timeout": spec.timeout,
                "repeat_last": spec.repeat_last,
                "responses": (
                    session.client.responses[len(session.client.calls):]
                    if isinstance(session.client, ScriptedClient)
                    else None
                ),
            },
        }
        (state_path / f"{session.id}.json").write_text(
            json.dumps(snapshot, indent=2), encoding="utf-8"
        )

    def restore() -> None:
        if not state_path:
            return
        for snapshot_file in sorted(state_path.glob("*.json")):
            data = json.loads(snapshot_file.read_text(encoding="utf-8"))
            log = EventLog(tuple(tuple(t) for t in data["log_traces"]))
            logs.setdefault(data["log_id"], (log, {"restored": True}))
            spec = ClientSpec(**data["client"])
            conversation = Conversation(alphabet=log.alphabet)
            conversation.history = [
                Message(Role(m["role"]), m["text"]) for m in data["history"]
            ]
            selected = [rule_from_record(r) for r in data["selected"]]
            conversation.selected_rules = set(selected)
            last_rules = [rule_from_record(r) for r in data["last_rules"]]
            session = SessionState(
                id=data["session_id"],
                log_id=data["log_id"],
                log=log,
                conversation=conversation,
                client=_build_session_client(spec),
                client_spec=spec,
                last_rules=last_rules,
                last_stats=[s for s in batch_stats(last_rules, log) if isinstance(s, RuleStats)],
                selected=selected,
                last_model=(
                    process_tree.from_text(data["model_text"])
                    if data.get("model_text")
                    else None
                ),
                model_id=data.get("model_id"),
                warnings=list(data.get("warnings", [])),
            )
            sessions[session.id] = session

    restore()

    # --- helpers -------------------------------------------------------------

    def get_log(log_id: str) -> EventLog:
        entry = logs.get(log_id)
        if entry is None:
            raise HTTPException(404, f"unknown log id {log_id!r}")
        return entry[0]

    def get_session(session_id: str) -> SessionState:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session id {session_id!r}")
        return session

    def log_summary(log_id: str, log: EventLog, parse_warnings: int = 0) -> dict:
        summary = {
            "log_id": log_id,
            "alphabet": sorted(log.alphabet),
            "traces": log.trace_count,
            "events": log.event_count,
        }
        if parse_warnings:
            summary["parse_warnings"] = parse_warnings
        return summary

    # --- endpoints -----------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/providers")
    def providers():
        return {"providers": PROVIDER_MODELS}

    @app.post("/logs")
    def upload_log(body: UploadLogBody):
        try:
            with warnings_module.catch_warnings(record=True) as caught:
                warnings_module.simplefilter("always")
                if body.format == "csv":
                    columns = CsvColumns(
                        case=body.case_column or CsvColumns.case,
                        activity=body.activity_column or CsvColumns.activity,
                        timestamp=body.timestamp_column or CsvColumns.timestamp,
                    )
                    log = parse_csv(body.content, columns)
                else:
                    log = parse_xes(body.content)
        except LogError as exc:
            raise HTTPException(422, str(exc)) from exc
        log_id = uuid.uuid4().hex
        logs[log_id] = (log, {})
        return log_summary(log_id, log, len(caught))

    @app.get("/logs/{log_id}")
    def read_log(log_id: str):
        return log_summary(log_id, get_log(log_id))

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        log = get_log(body.log_id)
        try:
            client = _build_session_client(body.client)
        except ClientError as exc:
            raise HTTPException(422, str(exc)) from exc
        session = SessionState(
            id=uuid.uuid4().hex,
            log_id=body.log_id,
            log=log,
            conversation=Conversation(alphabet=log.alphabet),
            client=client,
            client_spec=body.client,
        )
        sessions[session.id] = session
        persist(session)
        return {"session_id": session.id}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageBody):
        session = get_session(session_id)
        if not session.lock.acquire(blocking=False):
            raise HTTPException(
                409, "session busy: a message is already being processed; retry later"
            )
        try:
            try:
                outcome = run_cycle(
                    session.conversation,
                    session.client,
                    Message(Role.DOMAIN_EXPERT, body.text),
                    log=session.log,
                )
            except PromptError as exc:
                raise HTTPException(422, str(exc)) from exc
            except ClientError as exc:
                raise HTTPException(502, f"LLM client failure: {exc}") from exc
            if isinstance(outcome, Clarification):
                return {
                    "outcome": "clarification",
                    "text": outcome.text,
                    "warnings": session.drain_warnings(),
                }
            if isinstance(outcome, CycleSuccess):
                session.last_rules = list(outcome.rules)
                session.last_stats = [
                    s for s in (outcome.stats or ()) if isinstance(s, RuleStats)
                ]
                persist(session)
                selected = set(session.selected)
                return {
                    "outcome": "rules",
                    "error_cycles": outcome.error_cycles,
                    "rules": [
                        _stats_row(s, s.rule in selected) for s in session.last_stats
                    ],
                    "warnings": session.drain_warnings(),
                }
            persist(session)
            return {
                "outcome": "failure",
                "error_cycles": outcome.error_cycles,
                "transcript": list(outcome.transcript),
                "warnings": session.drain_warnings(),
            }
        finally:
            session.lock.release()

    @app.get("/sessions/{session_id}/rules")
    def read_rules(session_id: str):
        session = get_session(session_id)
        selected = set(session.selected)
        return {
            "rules": [_stats_row(s, s.rule in selected) for s in session.last_stats],
            "warnings": session.drain_warnings(),
        }

    @app.put("/sessions/{session_id}/selection")
    def put_selection(session_id: str, body: SelectionBody):
        session = get_session(session_id)
        if not session.lock.acquire(blocking=False):
            raise HTTPException(409, "session busy; retry later")
        try:
            chosen: list[Rule] = []
            if body.indices is not None:
                for index in body.indices:
                    if not 0 <= index < len(session.last_rules):
                        raise HTTPException(
                            422, f"rule index {index} out of range"
                        )
                    chosen.append(session.last_rules[index])
            if body.constraints is not None:
                rules, diagnostics = validate(body.constraints, session.log.alphabet)
                if diagnostics:
                    raise HTTPException(422, "; ".join(diagnostics))
                chosen.extend(rules)
            # replace, preserving order and dropping duplicates
            seen: set[Rule] = set()
            session.selected = [
                r for r in chosen if not (r in seen or seen.add(r))
            ]
            session.conversation.selected_rules = set(session.selected)
            persist(session)
            return {
                "selected": [rule_to_record(r) for r in session.selected],
                "warnings": session.drain_warnings(),
            }
        finally:
            session.lock.release()

    @app.post("/sessions/{session_id}/discover")
    def run_discovery(session_id: str, body: DiscoverBody):
        session = get_session(session_id)
        if not session.lock.acquire(blocking=False):
            raise HTTPException(409, "session busy; retry later")
        try:
            try:
                config = DiscoveryConfig(
                    sup=body.sup, rule_fallback=RuleFallback(body.rule_fallback)
                )
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from exc
            run_warnings: list[str] = []
            try:
                tree = discover(session.log, set(session.selected), config, run_warnings)
            except NoAdmissibleCutError as exc:
                raise HTTPException(422, str(exc)) from exc
            session.last_model = tree
            session.model_id = uuid.uuid4().hex
            session.warnings.extend(run_warnings)
            persist(session)
            return {
                "model_id": session.model_id,
                "text": process_tree.to_text(tree),
                "json": process_tree.to_json_obj(tree),
                "dot": process_tree.to_dot(tree),
                "warnings": session.drain_warnings(),
            }
        finally:
            session.lock.release()

    @app.get("/sessions/{session_id}/model")
    def get_model(session_id: str, format: str = Query(default="text")):
        session = get_session(session_id)
        if session.last_model is None:
            raise HTTPException(404, "no discovery has run for this session")
        tree = session.last_model
        if format == "text":
            serialized = process_tree.to_text(tree)
        elif format == "json":
            serialized = process_tree.to_json_obj(tree)
        elif format == "dot":
            serialized = process_tree.to_dot(tree)
        else:
            raise HTTPException(422, f"unknown model format {format!r}")
        return {
            "model_id": session.model_id,
            "format": format,
            "model": serialized,
            "warnings": session.drain_warnings(),
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
