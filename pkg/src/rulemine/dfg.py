"""Directly-follows graph with artificial start and end nodes.

The DFG is the per-step intermediate of discovery: nodes are the activities
of the (sub-)log plus the start/end markers, edges form a multiset of
immediate-successor pairs, and node frequencies count events (the markers
carry the trace count).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .eventlog import END_MARKER, START_MARKER, EventLog


@dataclass(frozen=True)
class Dfg:
    nodes: frozenset[str]  # activities only; markers are implicit
    edges: Counter  # (src, dst) -> multiplicity, markers included
    node_freq: dict  # node -> event count; markers -> trace count

    trace_count: int = field(default=0)

    def multiplicity(self, src: str, dst: str) -> int:
        return self.edges.get((src, dst), 0)

    @property
    def total_edges(self) -> int:
        return sum(self.edges.values())


def build_dfg(log: EventLog) -> Dfg:
    """One edge per adjacent event pair, plus start/end edges per trace."""
    edges: Counter = Counter()
    freq: Counter = Counter()
    for trace in log.traces:
        path = (START_MARKER, *trace, END_MARKER)
        for src, dst in zip(path, path[1:]):
            edges[(src, dst)] += 1
        for activity in trace:
            freq[activity] += 1
    node_freq = dict(freq)
    node_freq[START_MARKER] = log.trace_count
    node_freq[END_MARKER] = log.trace_count
    return Dfg(log.alphabet, edges, node_freq, log.trace_count)


def project(log: EventLog, subset: frozenset[str] | set[str]) -> Dfg:
    """DFG of the log with every trace filtered to the given activities."""
    return build_dfg(log.project(subset))


def to_dot(dfg: Dfg) -> str:
    """DOT rendering with multiplicities as edge labels."""
    lines = ["digraph dfg {", "  rankdir=LR;"]
    ids = {START_MARKER: "__start__", END_MARKER: "__end__"}
    for i, node in enumerate(sorted(dfg.nodes)):
        ids[node] = f"n{i}"
    lines.append('  __start__ [label="start", shape=circle];')
    lines.append('  __end__ [label="end", shape=doublecircle];')
    for node in sorted(dfg.nodes):
        freq = dfg.node_freq.get(node, 0)
        lines.append(f'  {ids[node]} [label="{node} ({freq})", shape=box];')
    for (src, dst), count in sorted(dfg.edges.items()):
        lines.append(f'  {ids[src]} -> {ids[dst]} [label="{count}"];')
    lines.append("}")
    return "\n".join(lines)
