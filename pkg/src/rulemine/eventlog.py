"""Event log ingestion and the core log abstraction.

A trace is an ordered activity sequence for one case; an event log is a
multiset of traces. Parsers accept CSV (case/activity columns, optional
timestamp) and a minimal XES subset. Activity labels are opaque,
case-sensitive strings.
"""

from __future__ import annotations

import csv
import io
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime

START_MARKER = "▷"  # ▷ artificial start, reserved
END_MARKER = "□"  # □ artificial end, reserved

Trace = tuple[str, ...]


class LogError(ValueError):
    """Base class for event log parsing problems."""


class LogSchemaError(LogError):
    """A mapped column is missing from the CSV header."""

    def __init__(self, column: str) -> None:
        super().__init__(f"missing mapped column: {column!r}")
        self.column = column


class LogRowError(LogError):
    """A data row could not be interpreted (carries the 1-based line number)."""

    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line


class EmptyLogError(LogError):
    """The source contained no events at all."""


class XesParseError(LogError):
    """XES content is not well-formed XML (carries an approximate byte offset)."""

    def __init__(self, reason: str, byte_offset: int) -> None:
        super().__init__(f"malformed XES at byte {byte_offset}: {reason}")
        self.byte_offset = byte_offset


def check_activity(label: str) -> str:
    """Trim surrounding whitespace and reject empty or reserved labels."""
    label = label.strip()
    if not label:
        raise LogError("activity label is empty")
    if START_MARKER in label or END_MARKER in label:
        raise LogError(f"activity label contains a reserved marker: {label!r}")
    return label


@dataclass(frozen=True)
class EventLog:
    """Multiset of traces. Immutable once built; traces keep file/case order."""

    traces: tuple[Trace, ...]
    alphabet: frozenset[str] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "alphabet", frozenset(a for t in self.traces for a in t)
        )

    @property
    def trace_count(self) -> int:
        return len(self.traces)

    @property
    def event_count(self) -> int:
        return sum(len(t) for t in self.traces)

    def project(self, subset: frozenset[str] | set[str]) -> "EventLog":
        """Filter every trace to the given activities (traces may become empty)."""
        keep = frozenset(subset)
        return EventLog(tuple(tuple(a for a in t if a in keep) for t in self.traces))


@dataclass(frozen=True)
class CsvColumns:
    """Column mapping for CSV ingestion; defaults follow the usual log headers."""

    case: str = "case:concept:name"
    activity: str = "concept:name"
    timestamp: str | None = "time:timestamp"


def alphabet(log: EventLog) -> frozenset[str]:
    """Activities occurring in at least one trace."""
    return log.alphabet


def _parse_timestamp(raw: str, line: int) -> datetime:
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        raise LogRowError(line, f"unparsable timestamp {raw!r}") from None


def parse_csv(content: str | bytes, columns: CsvColumns | None = None) -> EventLog:
    """Group CSV events into one trace per case.

    Within a case, events are ordered by timestamp when the timestamp column
    is mapped and present, otherwise by file order.
    """
    if isinstance(content, bytes):
        content = content.decode("utf-8")
    columns = columns or CsvColumns()
    reader = csv.DictReader(io.StringIO(content))
    if reader.fieldnames is None:
        raise EmptyLogError("no header row")
    for required in (columns.case, columns.activity):
        if required not in reader.fieldnames:
            raise LogSchemaError(required)
    has_ts = columns.timestamp is not None and columns.timestamp in reader.fieldnames

    # case id -> list of (sort key, file order, activity)
    cases: dict[str, list[tuple[datetime | None, int, str]]] = {}
    case_order: list[str] = []
    for idx, row in enumerate(reader):
        line = idx + 2  # header is line 1
        case_id = row[columns.case]
        if case_id is None:
            raise LogRowError(line, "missing case value")
        activity = row[columns.activity]
        if activity is None:
            raise LogRowError(line, "missing activity value")
        activity = check_activity(activity)
        ts: datetime | None = None
        if has_ts:
            raw_ts = row.get(columns.timestamp or "")
            if raw_ts is not None and raw_ts.strip():
                ts = _parse_timestamp(raw_ts, line)
        if case_id not in cases:
            cases[case_id] = []
            case_order.append(case_id)
        cases[case_id].append((ts, idx, activity))

    if not cases:
        raise EmptyLogError("no event rows")

    traces: list[Trace] = []
    for case_id in case_order:
        events = cases[case_id]
        if any(ts is not None for ts, _, _ in events):
            if any(ts is None for ts, _, _ in events):
                bad = next(i for ts, i, _ in events if ts is None)
                raise LogRowError(bad + 2, f"case {case_id!r} mixes timestamped and untimestamped events")
            events.sort(key=lambda e: (e[0], e[1]))
        traces.append(tuple(a for _, _, a in events))
    return EventLog(tuple(traces))


def serialize_csv(log: EventLog, columns: CsvColumns | None = None) -> str:
    """Inverse of parse_csv for timestamp-free logs (file order carries the order)."""
    columns = columns or CsvColumns()
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([columns.case, columns.activity])
    for i, trace in enumerate(log.traces, start=1):
        for act in trace:
            writer.writerow([str(i), act])
    return out.getvalue()


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _byte_offset(content: bytes, line: int, column: int) -> int:
    lines = content.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def parse_xes(content: str | bytes) -> EventLog:
    """Parse the minimal XES subset: log -> trace* -> event*, key "concept:name".

    Events without a concept:name string attribute are dropped; one warning is
    emitted per dropped event.
    """
    if isinstance(content, str):
        content = content.encode("utf-8")
    try:
        root = ET.fromstring(content)
    except ET.ParseError as exc:
        line, column = exc.position
        raise XesParseError(str(exc), _byte_offset(content, line, column)) from exc

    traces: list[Trace] = []
    for trace_el in root.iter():
        if _local_name(trace_el.tag) != "trace":
            continue
        events: list[str] = []
        for event_el in trace_el:
            if _local_name(event_el.tag) != "event":
                continue
            name: str | None = None
            for attr in event_el:
                if (
                    _local_name(attr.tag) == "string"
                    and attr.get("key") == "concept:name"
                    and attr.get("value") is not None
                ):
                    name = attr.get("value")
                    break
            if name is None:
                warnings.warn("XES event without concept:name skipped", stacklevel=2)
                continue
            events.append(check_activity(name))
        traces.append(tuple(events))

    if not traces:
        raise EmptyLogError("XES log contains no traces")
    return EventLog(tuple(traces))
