"""Command-line entry points: headless discovery, rule checking, extraction
evaluation, and the HTTP server."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import process_tree
from .declare import batch_stats, format_ratio, RuleStats, rules_from_json
from .eventlog import EventLog, LogError, parse_csv, parse_xes
from .evaluation import Granularity, load_cases, run_suite
from .imr import DiscoveryConfig, NoAdmissibleCutError, RuleFallback, discover
from .llm.client import ClientError, build_client
from .llm.prompts import PromptVariant


def _load_log(path: Path) -> EventLog:
    content = path.read_bytes()
    if path.suffix.lower() == ".xes":
        return parse_xes(content)
    return parse_csv(content)


def _load_rules(path: Path | None):
    if path is None:
        return set()
    return set(rules_from_json(path.read_text(encoding="utf-8")))


@click.group()
def main() -> None:
    """Rule-guided process discovery toolkit."""


@main.command("discover")
@click.option("--log", "log_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--sup", type=click.FloatRange(0.0, 1.0), default=0.2, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json", "dot"]),
    default="text",
    show_default=True,
)
@click.option(
    "--fallback",
    type=click.Choice(["warn", "abort"]),
    default="warn",
    show_default=True,
    help="What to do when rules prune every candidate cut at some step.",
)
def discover_command(log_path, rules_path, sup, out_path, fmt, fallback):
    """Discover a process model from an event log, guided by optional rules."""
    try:
        log = _load_log(log_path)
        rules = _load_rules(rules_path)
    except (LogError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    config = DiscoveryConfig(sup=sup, rule_fallback=RuleFallback(fallback))
    warnings: list[str] = []
    try:
        tree = discover(log, rules, config, warnings)
    except NoAdmissibleCutError as exc:
        raise click.ClickException(str(exc)) from exc
    if fmt == "text":
        serialized = process_tree.to_text(tree)
    elif fmt == "json":
        serialized = process_tree.to_json(tree)
    else:
        serialized = process_tree.to_dot(tree)
    if out_path:
        out_path.write_text(serialized + "\n", encoding="utf-8")
    else:
        click.echo(serialized)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)


@main.command("check-rules")
@click.option("--log", "log_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path), required=True)
def check_rules_command(log_path, rules_path):
    """Evaluate rules against a log and print support/confidence per rule."""
    try:
        log = _load_log(log_path)
        rules = sorted(_load_rules(rules_path), key=str)
    except (LogError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    header = f"{'rule':<60} {'activated':>9} {'satisfied':>9} {'support':>8} {'confidence':>10}"
    click.echo(header)
    for result in batch_stats(rules, log):
        if isinstance(result, RuleStats):
            click.echo(
                f"{str(result.rule):<60} {result.activated:>9} {result.satisfied:>9} "
                f"{format_ratio(result.support):>8} {format_ratio(result.confidence):>10}"
            )
        else:
            click.echo(f"error: {result}", err=True)


@main.command("evaluate")
@click.option("--cases", "cases_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--client", "client_spec", required=True, help="scripted:FILE or provider:model")
@click.option(
    "--prompt-variant",
    type=click.Choice(["zero", "few"]),
    default="few",
    show_default=True,
)
@click.option("--granularity", type=click.Choice(["s2s", "par"]), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
def evaluate_command(cases_path, client_spec, prompt_variant, granularity, out_path):
    """Score rule extraction against ground-truth cases."""
    try:
        cases = load_cases(cases_path.read_text(encoding="utf-8"))
        client = build_client(client_spec)
    except (ValueError, ClientError) as exc:
        raise click.ClickException(str(exc)) from exc
    if granularity:
        wanted = Granularity(granularity)
        cases = [c for c in cases if c.granularity is wanted]
    if not cases:
        raise click.ClickException("no cases match the requested granularity")
    variant = PromptVariant.ZERO_SHOT if prompt_variant == "zero" else PromptVariant.FEW_SHOT
    report = run_suite(cases, client, variant)
    payload = json.dumps(report.to_json_obj(), indent=2)
    if out_path:
        out_path.write_text(payload + "\n", encoding="utf-8")
    else:
        click.echo(payload)
    click.echo(
        f"recall={float(report.recall):.4f} precision={float(report.precision):.4f} "
        f"error_rate={float(report.error_rate):.4f} failure_rate={float(report.failure_rate):.4f}",
        err=True,
    )


@main.command("serve")
@click.option(
    "--port",
    type=int,
    default=None,
    help="Listen port [default: $RULEMINE_PORT or 8000].",
)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--state-dir", type=click.Path(path_type=Path), default=None)
@click.option(
    "--ui-dir",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Directory with the built web console (its index.html is served at /).",
)
def serve_command(port, host, state_dir, ui_dir):
    """Run the HTTP service, optionally fronted by the web console."""
    import os

    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("RULEMINE_PORT", "8000"))
    uvicorn.run(create_app(state_dir, ui_dir), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
