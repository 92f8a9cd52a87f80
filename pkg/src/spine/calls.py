"""Behavior-call vocabulary: typed calls, the textual call syntax used inside
plan strings, per-behavior constraint sets, and the update-call dialect used
to report map deltas back to the planner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import scene_graph as sg

# Constraint kinds (per-behavior validation requirements).
SYNTAX = "syntax"
REACHABLE = "reachable"
EXPLORABLE = "explorable"


@dataclass(frozen=True)
class Goto:
    region: str


@dataclass(frozen=True)
class MapRegion:
    region: str


@dataclass(frozen=True)
class ExploreRegion:
    region: str
    radius: float


@dataclass(frozen=True)
class ExtendMap:
    east: float
    north: float


@dataclass(frozen=True)
class Inspect:
    object: str
    query: str


@dataclass(frozen=True)
class SetLabels:
    labels: tuple


@dataclass(frozen=True)
class Clarify:
    question: str


@dataclass(frozen=True)
class Answer:
    text: str


@dataclass(frozen=True)
class Replan:
    pass


@dataclass(frozen=True)
class UnknownCall:
    """A call whose behavior name is not in the library; kept so semantic
    validation can reject it with feedback instead of a parse error."""
    name: str
    args_text: str


@dataclass(frozen=True)
class MalformedCall:
    """A known behavior invoked with arguments that do not fit its signature."""
    name: str
    args_text: str
    problem: str


BehaviorCall = (
    Goto | MapRegion | ExploreRegion | ExtendMap | Inspect | SetLabels
    | Clarify | Answer | Replan | UnknownCall | MalformedCall
)

BEHAVIOR_NAMES = ("goto", "map_region", "explore_region", "extend_map",
                  "inspect", "set_labels", "clarify", "answer", "replan")

CONSTRAINTS = {
    Goto: frozenset({SYNTAX, REACHABLE}),
    MapRegion: frozenset({SYNTAX, REACHABLE}),
    ExploreRegion: frozenset({SYNTAX, REACHABLE, EXPLORABLE}),
    ExtendMap: frozenset({SYNTAX, EXPLORABLE}),
    Inspect: frozenset({SYNTAX, REACHABLE}),
    SetLabels: frozenset({SYNTAX}),
    Clarify: frozenset({SYNTAX}),
    Answer: frozenset({SYNTAX}),
    Replan: frozenset({SYNTAX}),
}


def constraints_for(call: BehaviorCall) -> frozenset:
    return CONSTRAINTS.get(type(call), frozenset({SYNTAX}))


class CallSyntaxError(ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


def _strip_quotes(s: str) -> str:
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "'\"":
        return s[1:-1]
    return s


def _split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested inside (), [] or quotes."""
    parts, depth, buf = [], 0, []
    in_quote = None
    for ch in text:
        if in_quote:
            if ch == in_quote:
                in_quote = None
            buf.append(ch)
            continue
        if ch in "'\"":
            in_quote = ch
            buf.append(ch)
        elif ch in "([":
            depth += 1
            buf.append(ch)
        elif ch in ")]":
            depth -= 1
            buf.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    if buf or parts:
        parts.append("".join(buf))
    return parts


def _parse_float(token: str, name: str, arg: str) -> float:
    try:
        v = float(_strip_quotes(token))
    except ValueError:
        raise CallSyntaxError(f"{name}: {arg} must be a number, got {token.strip()!r}")
    if not math.isfinite(v):
        raise CallSyntaxError(f"{name}: {arg} must be finite")
    return v


def parse_call(text: str) -> BehaviorCall:
    """Parse one `name(args)` call. Unknown behavior names and known names
    with unusable arguments come back as UnknownCall / MalformedCall values
    so the validator (not the parser) owns the rejection."""
    text = text.strip()
    open_i = text.find("(")
    if open_i <= 0 or not text.endswith(")"):
        raise CallSyntaxError(f"expected name(args), got {text!r}")
    name = text[:open_i].strip()
    args_text = text[open_i + 1:-1]
    if name not in BEHAVIOR_NAMES:
        return UnknownCall(name, args_text)
    try:
        return _parse_known(name, args_text)
    except CallSyntaxError as e:
        return MalformedCall(name, args_text, str(e))


def _parse_known(name: str, args_text: str) -> BehaviorCall:
    args = [a for a in (p.strip() for p in _split_top_level(args_text)) if a != ""]
    if name == "goto":
        if len(args) != 1:
            raise CallSyntaxError(f"goto takes one region, got {len(args)} arguments")
        return Goto(_strip_quotes(args[0]))
    if name == "map_region":
        if len(args) != 1:
            raise CallSyntaxError(f"map_region takes one region, got {len(args)} arguments")
        return MapRegion(_strip_quotes(args[0]))
    if name == "explore_region":
        if len(args) != 2:
            raise CallSyntaxError(f"explore_region takes region and radius, got {len(args)} arguments")
        return ExploreRegion(_strip_quotes(args[0]), _parse_float(args[1], "explore_region", "radius"))
    if name == "extend_map":
        if len(args) != 2:
            raise CallSyntaxError(f"extend_map takes two coordinates, got {len(args)} arguments")
        return ExtendMap(_parse_float(args[0], "extend_map", "x"),
                         _parse_float(args[1], "extend_map", "y"))
    if name == "inspect":
        first, _, rest = args_text.partition(",")
        if not first.strip() or not rest.strip():
            raise CallSyntaxError("inspect takes an object and a query")
        return Inspect(_strip_quotes(first), _strip_quotes(rest))
    if name == "set_labels":
        inner = args_text.strip()
        if inner.startswith("[") and inner.endswith("]"):
            inner = inner[1:-1]
        labels = tuple(_strip_quotes(t) for t in _split_top_level(inner) if t.strip())
        return SetLabels(labels)
    if name == "clarify":
        return Clarify(_strip_quotes(args_text))
    if name == "answer":
        return Answer(_strip_quotes(args_text))
    if name == "replan":
        if args:
            raise CallSyntaxError("replan takes no arguments")
        return Replan()
    raise CallSyntaxError(f"unknown behavior '{name}'")


def parse_call_list(text: str) -> list[BehaviorCall]:
    """Parse a bracketed, comma-separated behavior-call list."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise CallSyntaxError("plan must be a bracketed list of behavior calls", 0)
    inner = text[1:-1].strip()
    if not inner:
        return []
    return [parse_call(part) for part in _split_top_level(inner) if part.strip()]


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:g}"


def format_call(call: BehaviorCall) -> str:
    if isinstance(call, Goto):
        return f"goto({call.region})"
    if isinstance(call, MapRegion):
        return f"map_region({call.region})"
    if isinstance(call, ExploreRegion):
        return f"explore_region({call.region}, {_num(call.radius)})"
    if isinstance(call, ExtendMap):
        return f"extend_map({_num(call.east)}, {_num(call.north)})"
    if isinstance(call, Inspect):
        return f"inspect({call.object}, {call.query})"
    if isinstance(call, SetLabels):
        return f"set_labels([{', '.join(call.labels)}])"
    if isinstance(call, Clarify):
        return f"clarify({call.question})"
    if isinstance(call, Answer):
        return f"answer({call.text})"
    if isinstance(call, Replan):
        return "replan()"
    if isinstance(call, UnknownCall):
        return f"{call.name}({call.args_text})"
    if isinstance(call, MalformedCall):
        return f"{call.name}({call.args_text})"
    raise ValueError(f"unsupported call {call!r}")


def format_call_list(calls) -> str:
    return "[" + ", ".join(format_call(c) for c in calls) + "]"


# ---------------------------------------------------------------------------
# Update dialect: how map deltas are narrated back to the planner.
# ---------------------------------------------------------------------------

def delta_to_update_call(delta: sg.GraphDelta, include_coords: bool = False) -> str:
    if isinstance(delta, sg.AddNode):
        extra = ""
        if include_coords:
            extra = f", coords: [{_num(delta.coords[0])}, {_num(delta.coords[1])}]"
        return f"add_nodes({{ name: {delta.name}, type: {delta.kind}{extra}}})"
    if isinstance(delta, sg.RemoveNode):
        return f"remove_nodes({delta.name})"
    if isinstance(delta, sg.AddConnection):
        return f"add_connections([{delta.a}, {delta.b}])"
    if isinstance(delta, sg.RemoveConnection):
        return f"remove_connections([{delta.a}, {delta.b}])"
    if isinstance(delta, sg.UpdateRobotLocation):
        return f"update_robot_location({delta.region})"
    if isinstance(delta, sg.UpdateNodeAttributes):
        attrs = ", ".join(f"{k}: {v}" for k, v in sorted(delta.attributes.items()))
        return f"update_node_attributes({delta.name}, {{ {attrs}}})"
    if isinstance(delta, sg.NoUpdates):
        return "no_updates()"
    raise ValueError(f"unsupported delta {delta!r}")


def format_updates_message(deltas, include_coords: bool = False) -> str:
    if not deltas:
        return "updates:[no_updates()]"
    inner = ", ".join(delta_to_update_call(d, include_coords) for d in deltas)
    return f"updates:[{inner}]"
