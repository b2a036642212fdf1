"""Rule-guided process discovery toolkit.

Event logs in, process trees out: declarative rules (written by hand or
extracted from natural language through an LLM loop) prune the cut search of
a recursive inductive miner so the discovered model respects domain
knowledge.
"""

from .declare import Rule, RuleStats, Template, batch_stats, evaluate_trace, stats
from .dfg import Dfg, build_dfg, project
from .eventlog import EventLog, parse_csv, parse_xes
from .imr import Cut, DiscoveryConfig, RuleFallback, discover, explore
from .process_tree import Leaf, Node, Operator, ProcessTree, Tau, tree_language_sample

__version__ = "0.1.0"

__all__ = [
    "Cut",
    "Dfg",
    "DiscoveryConfig",
    "EventLog",
    "Leaf",
    "Node",
    "Operator",
    "ProcessTree",
    "Rule",
    "RuleFallback",
    "RuleStats",
    "Tau",
    "Template",
    "batch_stats",
    "build_dfg",
    "discover",
    "evaluate_trace",
    "explore",
    "parse_csv",
    "parse_xes",
    "project",
    "stats",
    "tree_language_sample",
]
