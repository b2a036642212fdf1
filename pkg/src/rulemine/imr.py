"""Recursive rule-guided discovery over directly-follows graphs.

Each step enumerates binary cuts of the current activity set, removes cuts
that no reachable model could reconcile with the selected rules, picks the
cheapest survivor, splits the log, and recurses. Cut cost combines observed
deviating edges with a sup-scaled penalty for expected-but-absent edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .declare import Rule, Template
from .dfg import Dfg, build_dfg
from .eventlog import END_MARKER, START_MARKER, EventLog
from .process_tree import TAU, Leaf, Node, Operator, ProcessTree


@dataclass(frozen=True)
class Cut:
    operator: Operator
    sigma1: frozenset[str]
    sigma2: frozenset[str]

    @property
    def sigma(self) -> frozenset[str]:
        return self.sigma1 | self.sigma2

    def __str__(self) -> str:
        fmt = lambda s: "{" + ", ".join(sorted(s)) + "}"
        return f"({self.operator.value}, {fmt(self.sigma1)}, {fmt(self.sigma2)})"


class RuleFallback(Enum):
    WARN = "warn"  # ignore rules for the blocked step, record a warning
    ABORT = "abort"


@dataclass(frozen=True)
class DiscoveryConfig:
    sup: float = 0.2
    rule_fallback: RuleFallback = RuleFallback.WARN

    def __post_init__(self) -> None:
        if not 0.0 <= self.sup <= 1.0:
            raise ValueError(f"sup must be in [0, 1], got {self.sup}")


class CutApplicabilityError(ValueError):
    """A rule references activities outside the cut under test."""


class NoAdmissibleCutError(RuntimeError):
    """Every candidate cut was pruned and the fallback policy is abort."""

    def __init__(self, sigma: frozenset[str], rules: list[Rule]) -> None:
        names = "; ".join(str(r) for r in rules)
        acts = ", ".join(sorted(sigma))
        super().__init__(
            f"no admissible cut over {{{acts}}}: every candidate violates "
            f"one of [{names}]"
        )
        self.sigma = sigma
        self.rules = rules


def check_base_case(log: EventLog) -> ProcessTree | None:
    """Terminal constructions for empty and single-activity logs."""
    if not log.alphabet:
        return TAU
    if len(log.alphabet) > 1:
        return None
    (activity,) = log.alphabet
    has_empty = any(len(t) == 0 for t in log.traces)
    has_repeat = any(len(t) >= 2 for t in log.traces)
    tree: ProcessTree = Leaf(activity)
    if has_repeat:
        tree = Node(Operator.LOOP, tree, TAU)
    if has_empty:
        tree = Node(Operator.XOR, TAU, tree)
    return tree


_ORDERED_OPS = (Operator.SEQUENCE, Operator.LOOP)
_OPERATOR_ORDER = (Operator.SEQUENCE, Operator.XOR, Operator.PARALLEL, Operator.LOOP)


def enumerate_cuts(sigma: frozenset[str] | set[str]) -> list[Cut]:
    """All binary cuts in the deterministic order used for tie-breaking.

    Sequence and loop cuts are ordered (both orientations); exclusive choice
    and parallel cuts are canonicalized by keeping the lexicographically
    smallest activity in sigma1.
    """
    acts = sorted(sigma)
    n = len(acts)
    if n < 2:
        raise ValueError(f"cut enumeration needs at least 2 activities, got {n}")
    cuts: list[Cut] = []
    for op in _OPERATOR_ORDER:
        ordered = op in _ORDERED_OPS
        for mask in range(1, 2**n - 1):
            if not ordered and not mask & 1:
                continue
            s1 = frozenset(acts[i] for i in range(n) if mask >> i & 1)
            s2 = frozenset(acts[i] for i in range(n) if not mask >> i & 1)
            cuts.append(Cut(op, s1, s2))
    return cuts


def violates(cut: Cut, rule: Rule) -> bool:
    """Whether every model buildable from the cut breaks the rule.

    Decided by a closed-form table over (template, operator, activity
    placement); the exhaustive model-enumeration test in the suite certifies
    the table against the tree semantics.
    """
    placement = []
    for activity in rule.activities:
        if activity in cut.sigma1:
            placement.append(1)
        elif activity in cut.sigma2:
            placement.append(2)
        else:
            raise CutApplicabilityError(
                f"rule activity {activity!r} is outside the cut's activity set"
            )
    op = cut.operator
    t = rule.template

    if t is Template.AT_LEAST_1:
        if op is Operator.XOR:
            return True
        return op is Operator.LOOP and placement[0] == 2
    if t is Template.AT_MOST_1:
        return op is Operator.LOOP

    a_side, b_side = placement
    sep = a_side != b_side
    if t is Template.RESPONSE:
        if op is Operator.SEQUENCE:
            return a_side == 2 and b_side == 1
        if op is Operator.LOOP:
            return a_side == 1 and b_side == 2
        return sep  # XOR, PARALLEL
    if t is Template.PRECEDENCE:
        if op in (Operator.SEQUENCE, Operator.LOOP):
            return b_side == 1 and a_side == 2
        return sep  # XOR, PARALLEL
    if t is Template.RESPONDED_EXISTENCE:
        if op is Operator.XOR:
            return sep
        return op is Operator.LOOP and a_side == 1 and b_side == 2
    if t is Template.CO_EXISTENCE:
        return op in (Operator.XOR, Operator.LOOP) and sep
    if t is Template.NOT_CO_EXISTENCE:
        # a loop revisits both partitions across iterations, so placement
        # within the cut cannot keep the two activities apart
        if op is Operator.LOOP:
            return True
        return op is not Operator.XOR and sep
    if t is Template.NOT_SUCCESSION:
        if op is Operator.SEQUENCE:
            return a_side == 1 and b_side == 2
        if op is Operator.LOOP:
            return True
        return op is Operator.PARALLEL and sep
    raise AssertionError(t)


def applicable_rules(rules, sigma: frozenset[str]) -> list[Rule]:
    """Rules whose activities all occur in the step's activity set, in stable order."""
    return sorted(
        (r for r in rules if set(r.activities) <= sigma),
        key=lambda r: (r.template.value, r.activities),
    )


def explore(dfg: Dfg, rules) -> list[Cut]:
    """Enumerated cuts minus those violating any applicable rule."""
    active = applicable_rules(rules, dfg.nodes)
    return [
        c
        for c in enumerate_cuts(dfg.nodes)
        if not any(violates(c, r) for r in active)
    ]


def deviation_cost(dfg: Dfg, cut: Cut) -> int:
    """Observed edges incompatible with the cut's operator."""
    s1, s2 = cut.sigma1, cut.sigma2
    op = cut.operator
    total = 0
    if op is Operator.SEQUENCE:
        # backward edges, plus traces ending before reaching sigma2
        for (u, v), k in dfg.edges.items():
            if (u in s2 and v in s1) or (u in s1 and v == END_MARKER):
                total += k
    elif op is Operator.XOR:
        for (u, v), k in dfg.edges.items():
            if (u in s1 and v in s2) or (u in s2 and v in s1):
                total += k
    elif op is Operator.LOOP:
        # redo part must not start or end a trace
        for (u, v), k in dfg.edges.items():
            if (u == START_MARKER and v in s2) or (u in s2 and v == END_MARKER):
                total += k
    return total


def missing_cost(dfg: Dfg, cut: Cut) -> int:
    """Penalty mass for expected directly-follows pairs never observed."""
    op = cut.operator
    if op is Operator.XOR:
        return 0
    pairs = [(x, y) for x in cut.sigma1 for y in cut.sigma2]
    if op in (Operator.PARALLEL, Operator.LOOP):
        pairs += [(y, x) for x in cut.sigma1 for y in cut.sigma2]
    total = 0
    for x, y in pairs:
        if dfg.multiplicity(x, y) == 0:
            total += min(dfg.node_freq.get(x, 0), dfg.node_freq.get(y, 0))
    return total


def cut_cost(dfg: Dfg, cut: Cut, sup: float) -> float:
    return deviation_cost(dfg, cut) + sup * missing_cost(dfg, cut)


def split_log(log: EventLog, cut: Cut) -> tuple[EventLog, EventLog]:
    """Divide the log for recursion according to the cut's operator.

    Sequence and parallel project every trace onto each side. Exclusive
    choice assigns each whole trace to the side holding the majority of its
    events (ties to sigma1) and drops the minority events. Loop segments each
    trace into maximal same-side runs.
    """
    s1, s2 = cut.sigma1, cut.sigma2
    if cut.operator in (Operator.SEQUENCE, Operator.PARALLEL):
        return log.project(s1), log.project(s2)
    if cut.operator is Operator.XOR:
        left: list[tuple[str, ...]] = []
        right: list[tuple[str, ...]] = []
        for trace in log.traces:
            n1 = sum(1 for a in trace if a in s1)
            n2 = len(trace) - n1
            if n1 >= n2:
                left.append(tuple(a for a in trace if a in s1))
            else:
                right.append(tuple(a for a in trace if a in s2))
        return EventLog(tuple(left)), EventLog(tuple(right))
    # loop: maximal runs by side membership
    body: list[tuple[str, ...]] = []
    redo: list[tuple[str, ...]] = []
    for trace in log.traces:
        run: list[str] = []
        run_in_body = True
        for activity in trace:
            in_body = activity in s1
            if run and in_body != run_in_body:
                (body if run_in_body else redo).append(tuple(run))
                run = []
            run.append(activity)
            run_in_body = in_body
        if run:
            (body if run_in_body else redo).append(tuple(run))
    return EventLog(tuple(body)), EventLog(tuple(redo))


@dataclass
class _Step:
    cut: Cut
    warned: bool


def discover(
    log: EventLog,
    rules,
    config: DiscoveryConfig | None = None,
    warnings: list[str] | None = None,
) -> ProcessTree:
    """Run the full recursion and return the process tree.

    The complete rule set is passed down unchanged; at each step only rules
    whose activities all appear in the step's alphabet take part in pruning.
    When pruning removes every candidate the configured fallback applies:
    warn-and-ignore-rules re-ranks the unpruned enumeration and records a
    warning, abort raises naming the rules responsible.
    """
    config = config or DiscoveryConfig()
    sink = warnings if warnings is not None else []
    return _discover(log, frozenset(rules), config, sink)


def _discover(
    log: EventLog, rules: frozenset[Rule], config: DiscoveryConfig, sink: list[str]
) -> ProcessTree:
    base = check_base_case(log)
    if base is not None:
        return base
    graph = build_dfg(log)
    candidates = explore(graph, rules)
    if not candidates:
        active = applicable_rules(rules, graph.nodes)
        all_cuts = enumerate_cuts(graph.nodes)
        blocking = [r for r in active if any(violates(c, r) for c in all_cuts)]
        if config.rule_fallback is RuleFallback.ABORT:
            raise NoAdmissibleCutError(graph.nodes, blocking)
        names = "; ".join(str(r) for r in blocking)
        acts = ", ".join(sorted(graph.nodes))
        sink.append(
            f"all cuts over {{{acts}}} were pruned; ignoring rules for this "
            f"step: {names}"
        )
        candidates = all_cuts
    best = min(candidates, key=lambda c: cut_cost(graph, c, config.sup))
    left_log, right_log = split_log(log, best)
    return Node(
        best.operator,
        _discover(left_log, rules, config, sink),
        _discover(right_log, rules, config, sink),
    )
