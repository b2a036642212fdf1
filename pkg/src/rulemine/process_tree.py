"""Block-structured process trees: the discovery output.

A tree is a leaf (activity or silent tau), or a binary node combining two
subtrees with one of four operators: sequence, exclusive choice, parallel,
loop. For a loop the left child is the body (runs first and last) and the
right child the redo. Serializations: nested text, JSON, DOT.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Union

from .eventlog import Trace


class Operator(Enum):
    SEQUENCE = "->"
    XOR = "X"
    PARALLEL = "+"
    LOOP = "*"


@dataclass(frozen=True)
class Leaf:
    activity: str


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class Node:
    operator: Operator
    left: "ProcessTree"
    right: "ProcessTree"


ProcessTree = Union[Leaf, Tau, Node]

TAU = Tau()


def leaves(tree: ProcessTree) -> list[str]:
    """Activity labels in leaf order (tau excluded)."""
    if isinstance(tree, Leaf):
        return [tree.activity]
    if isinstance(tree, Tau):
        return []
    return leaves(tree.left) + leaves(tree.right)


# --- text form --------------------------------------------------------------


def _quote(label: str) -> str:
    return "'" + label.replace("\\", "\\\\").replace("'", "\\'") + "'"


def to_text(tree: ProcessTree) -> str:
    """Nested text form, e.g. "->( 'a', X( tau, 'b' ) )"."""
    if isinstance(tree, Tau):
        return "tau"
    if isinstance(tree, Leaf):
        return _quote(tree.activity)
    return f"{tree.operator.value}( {to_text(tree.left)}, {to_text(tree.right)} )"


class TreeParseError(ValueError):
    pass


class _TextParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _expect(self, token: str) -> None:
        self._skip_ws()
        if not self.text.startswith(token, self.pos):
            raise TreeParseError(f"expected {token!r} at position {self.pos}")
        self.pos += len(token)

    def parse(self) -> ProcessTree:
        tree = self._tree()
        self._skip_ws()
        if self.pos != len(self.text):
            raise TreeParseError(f"trailing input at position {self.pos}")
        return tree

    def _tree(self) -> ProcessTree:
        self._skip_ws()
        if self.text.startswith("tau", self.pos):
            self.pos += 3
            return TAU
        if self.text.startswith("'", self.pos):
            return Leaf(self._label())
        for op in Operator:
            if self.text.startswith(op.value + "(", self.pos) or self.text.startswith(
                op.value + " (", self.pos
            ):
                self.pos += len(op.value)
                self._expect("(")
                left = self._tree()
                self._expect(",")
                right = self._tree()
                self._expect(")")
                return Node(op, left, right)
        raise TreeParseError(f"unrecognized input at position {self.pos}")

    def _label(self) -> str:
        assert self.text[self.pos] == "'"
        self.pos += 1
        out: list[str] = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.text):
                out.append(self.text[self.pos + 1])
                self.pos += 2
                continue
            if ch == "'":
                self.pos += 1
                return "".join(out)
            out.append(ch)
            self.pos += 1
        raise TreeParseError("unterminated activity label")


def from_text(text: str) -> ProcessTree:
    return _TextParser(text).parse()


# --- JSON form ---------------------------------------------------------------


def to_json_obj(tree: ProcessTree) -> dict:
    if isinstance(tree, Tau):
        return {"tau": True}
    if isinstance(tree, Leaf):
        return {"leaf": tree.activity}
    return {
        "op": tree.operator.value,
        "children": [to_json_obj(tree.left), to_json_obj(tree.right)],
    }


def to_json(tree: ProcessTree) -> str:
    return json.dumps(to_json_obj(tree), indent=2)


def from_json_obj(obj: dict) -> ProcessTree:
    if obj.get("tau"):
        return TAU
    if "leaf" in obj:
        return Leaf(obj["leaf"])
    ops = {o.value: o for o in Operator}
    if obj.get("op") not in ops or len(obj.get("children", [])) != 2:
        raise TreeParseError(f"malformed tree node: {obj!r}")
    left, right = obj["children"]
    return Node(ops[obj["op"]], from_json_obj(left), from_json_obj(right))


def from_json(text: str) -> ProcessTree:
    return from_json_obj(json.loads(text))


# --- DOT form ----------------------------------------------------------------


def to_dot(tree: ProcessTree) -> str:
    lines = ["digraph tree {", "  node [shape=box];"]
    counter = [0]

    def walk(t: ProcessTree) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(t, Tau):
            lines.append(f'  {name} [label="tau", shape=circle];')
        elif isinstance(t, Leaf):
            label = t.activity.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  {name} [label="{label}"];')
        else:
            lines.append(f'  {name} [label="{t.operator.value}", shape=ellipse];')
            for child in (t.left, t.right):
                child_name = walk(child)
                lines.append(f"  {name} -> {child_name};")
        return name

    walk(tree)
    lines.append("}")
    return "\n".join(lines)


# --- bounded language --------------------------------------------------------


@lru_cache(maxsize=None)
def _interleavings(s: Trace, t: Trace) -> frozenset[Trace]:
    if not s:
        return frozenset({t})
    if not t:
        return frozenset({s})
    first_s = {(s[0],) + rest for rest in _interleavings(s[1:], t)}
    first_t = {(t[0],) + rest for rest in _interleavings(s, t[1:])}
    return frozenset(first_s | first_t)


def compose_language(
    op: Operator, left: frozenset[Trace], right: frozenset[Trace], max_len: int
) -> frozenset[Trace]:
    """Traces of op(M1, M2) up to max_len, given the children's trace sets."""
    if op is Operator.XOR:
        return frozenset(left | right)

    # length-sorted views let the quadratic composers break early
    left_sorted = sorted(left, key=len)
    right_sorted = sorted(right, key=len)

    if op is Operator.SEQUENCE:
        out: set[Trace] = set()
        for s in left_sorted:
            budget = max_len - len(s)
            if budget < 0:
                break
            for t in right_sorted:
                if len(t) > budget:
                    break
                out.add(s + t)
        return frozenset(out)
    if op is Operator.PARALLEL:
        out = set()
        for s in left_sorted:
            budget = max_len - len(s)
            if budget < 0:
                break
            for t in right_sorted:
                if len(t) > budget:
                    break
                out |= _interleavings(s, t)
        return frozenset(out)
    if op is Operator.LOOP:
        # body (redo body)*
        acc = set(left)
        frontier = sorted(acc, key=len)
        while frontier:
            new: set[Trace] = set()
            for prefix in frontier:
                budget = max_len - len(prefix)
                if budget < 0:
                    continue
                for u in right_sorted:
                    rest = budget - len(u)
                    if rest < 0:
                        break
                    for v in left_sorted:
                        if len(v) > rest:
                            break
                        cand = prefix + u + v
                        if cand not in acc:
                            new.add(cand)
            acc |= new
            frontier = sorted(new, key=len)
        return frozenset(acc)
    raise AssertionError(op)


def tree_language_sample(tree: ProcessTree, max_len: int) -> frozenset[Trace]:
    """All traces of the tree's language with length <= max_len."""
    if isinstance(tree, Tau):
        return frozenset({()})
    if isinstance(tree, Leaf):
        return frozenset({(tree.activity,)}) if max_len >= 1 else frozenset()
    left = tree_language_sample(tree.left, max_len)
    right = tree_language_sample(tree.right, max_len)
    return compose_language(tree.operator, left, right, max_len)
