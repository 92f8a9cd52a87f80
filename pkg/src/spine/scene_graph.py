"""Topological semantic map: region/object nodes, typed deltas, JSON wire format,
and metric shortest-path search over region connectivity.

Graphs are plain values: every mutation goes through ``apply_delta``, which
returns a new graph and leaves the input untouched.
"""

from __future__ import annotations

import heapq
import json
import math
import re
from dataclasses import dataclass, field

Coords = tuple[float, float]

REGION = "region"
OBJECT = "object"
REGION_CONNECTION = "region_connection"
OBJECT_CONNECTION = "object_connection"

_NAME_CONVENTION = re.compile(r"^[a-z][a-z0-9_]*_\d+$")


class GraphError(ValueError):
    """Base class for scene-graph failures."""


class DeltaError(GraphError):
    """A delta could not be applied; the message is planner-facing feedback."""


class UnknownNodeError(GraphError):
    def __init__(self, name: str):
        super().__init__(f"unknown node '{name}'")
        self.node = name


class GraphParseError(GraphError):
    """Schema or syntax error in a serialized graph document."""

    def __init__(self, message: str, path: str = "", offset: int = 0):
        super().__init__(f"{message} (at {path or '$'}, byte {offset})")
        self.path = path
        self.offset = offset


def _check_coords(coords, where: str) -> Coords:
    try:
        e, n = coords
        e, n = float(e), float(n)
    except (TypeError, ValueError):
        raise GraphError(f"{where}: coords must be two numbers, got {coords!r}")
    if not (math.isfinite(e) and math.isfinite(n)):
        raise GraphError(f"{where}: coords must be finite, got {coords!r}")
    return (e, n)


@dataclass(frozen=True)
class RegionNode:
    name: str
    coords: Coords
    attributes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ObjectNode:
    name: str
    coords: Coords
    attributes: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Deltas: the mapper -> planner update vocabulary.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AddNode:
    kind: str  # REGION or OBJECT
    name: str
    coords: Coords
    attributes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RemoveNode:
    name: str


@dataclass(frozen=True)
class AddConnection:
    kind: str  # REGION_CONNECTION or OBJECT_CONNECTION
    a: str
    b: str


@dataclass(frozen=True)
class RemoveConnection:
    kind: str
    a: str
    b: str


@dataclass(frozen=True)
class UpdateRobotLocation:
    region: str


@dataclass(frozen=True)
class UpdateNodeAttributes:
    name: str
    attributes: dict


@dataclass(frozen=True)
class NoUpdates:
    pass


GraphDelta = (
    AddNode | RemoveNode | AddConnection | RemoveConnection
    | UpdateRobotLocation | UpdateNodeAttributes | NoUpdates
)


@dataclass(frozen=True)
class SceneGraph:
    regions: dict[str, RegionNode] = field(default_factory=dict)
    objects: dict[str, ObjectNode] = field(default_factory=dict)
    region_connections: frozenset = frozenset()   # of tuple(a, b), a < b
    object_connections: frozenset = frozenset()   # of tuple(object, region)
    robot_location: str = ""

    def has_node(self, name: str) -> bool:
        return name in self.regions or name in self.objects

    def node_coords(self, name: str) -> Coords:
        if name in self.regions:
            return self.regions[name].coords
        if name in self.objects:
            return self.objects[name].coords
        raise UnknownNodeError(name)

    def region_neighbors(self, name: str) -> list[str]:
        out = []
        for a, b in self.region_connections:
            if a == name:
                out.append(b)
            elif b == name:
                out.append(a)
        return sorted(out)

    def connected_regions(self, object_name: str) -> list[str]:
        return sorted(r for o, r in self.object_connections if o == object_name)

    def check_invariants(self) -> None:
        for a, b in self.region_connections:
            for end in (a, b):
                if end not in self.regions:
                    raise GraphError(f"region connection [{a}, {b}] references missing region '{end}'")
            if a == b:
                raise GraphError(f"self-edge on region '{a}'")
        for o, r in self.object_connections:
            if o not in self.objects:
                raise GraphError(f"object connection [{o}, {r}] references missing object '{o}'")
            if r not in self.regions:
                raise GraphError(f"object connection [{o}, {r}] references missing region '{r}'")
        if self.robot_location not in self.regions:
            raise GraphError(f"robot location '{self.robot_location}' is not a region in the graph")
        overlap = set(self.regions) & set(self.objects)
        if overlap:
            raise GraphError(f"names used as both region and object: {sorted(overlap)}")


def _region_edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def name_convention_warnings(graph: SceneGraph) -> list[str]:
    """Lint: node names are expected to look like `<type>_<index>`."""
    bad = [n for n in list(graph.regions) + list(graph.objects) if not _NAME_CONVENTION.match(n)]
    return [f"node name '{n}' does not follow the <type>_<index> convention" for n in sorted(bad)]


def apply_delta(graph: SceneGraph, delta: GraphDelta) -> SceneGraph:
    """Apply one delta, returning a new graph.

    Re-adding an existing node merges attributes (last writer wins per key)
    and refreshes coords; removal drops incident edges. Dangling-edge and
    unknown-node deltas raise DeltaError with a planner-readable message.
    """
    if isinstance(delta, NoUpdates):
        return graph

    regions = dict(graph.regions)
    objects = dict(graph.objects)
    r_edges = set(graph.region_connections)
    o_edges = set(graph.object_connections)
    robot = graph.robot_location

    if isinstance(delta, AddNode):
        coords = _check_coords(delta.coords, f"add_node {delta.name}")
        if delta.kind == REGION:
            if delta.name in objects:
                raise DeltaError(f"node '{delta.name}' already exists as an object")
            prev = regions.get(delta.name)
            attrs = dict(prev.attributes) if prev else {}
            attrs.update(delta.attributes)
            regions[delta.name] = RegionNode(delta.name, coords, attrs)
        elif delta.kind == OBJECT:
            if delta.name in regions:
                raise DeltaError(f"node '{delta.name}' already exists as a region")
            prev = objects.get(delta.name)
            attrs = dict(prev.attributes) if prev else {}
            attrs.update(delta.attributes)
            objects[delta.name] = ObjectNode(delta.name, coords, attrs)
        else:
            raise DeltaError(f"unknown node kind '{delta.kind}'")

    elif isinstance(delta, RemoveNode):
        name = delta.name
        if name == robot:
            raise DeltaError(f"cannot remove '{name}': it is the robot's current location")
        if name in regions:
            del regions[name]
            r_edges = {e for e in r_edges if name not in e}
            o_edges = {(o, r) for o, r in o_edges if r != name}
        elif name in objects:
            del objects[name]
            o_edges = {(o, r) for o, r in o_edges if o != name}
        else:
            raise DeltaError(f"cannot remove missing node '{name}'")

    elif isinstance(delta, AddConnection):
        if delta.kind == REGION_CONNECTION:
            for end in (delta.a, delta.b):
                if end not in regions:
                    raise DeltaError(f"connection [{delta.a}, {delta.b}] references missing region '{end}'")
            if delta.a == delta.b:
                raise DeltaError(f"self-connection on '{delta.a}'")
            r_edges.add(_region_edge(delta.a, delta.b))
        elif delta.kind == OBJECT_CONNECTION:
            if delta.a not in objects:
                raise DeltaError(f"connection [{delta.a}, {delta.b}] references missing object '{delta.a}'")
            if delta.b not in regions:
                raise DeltaError(f"connection [{delta.a}, {delta.b}] references missing region '{delta.b}'")
            o_edges.add((delta.a, delta.b))
        else:
            raise DeltaError(f"unknown connection kind '{delta.kind}'")

    elif isinstance(delta, RemoveConnection):
        if delta.kind == REGION_CONNECTION:
            r_edges.discard(_region_edge(delta.a, delta.b))
        elif delta.kind == OBJECT_CONNECTION:
            o_edges.discard((delta.a, delta.b))
        else:
            raise DeltaError(f"unknown connection kind '{delta.kind}'")

    elif isinstance(delta, UpdateRobotLocation):
        if delta.region not in regions:
            raise DeltaError(f"robot location '{delta.region}' is not a region in the graph")
        robot = delta.region

    elif isinstance(delta, UpdateNodeAttributes):
        name = delta.name
        if name in regions:
            node = regions[name]
            attrs = dict(node.attributes)
            attrs.update(delta.attributes)
            regions[name] = RegionNode(name, node.coords, attrs)
        elif name in objects:
            node = objects[name]
            attrs = dict(node.attributes)
            attrs.update(delta.attributes)
            objects[name] = ObjectNode(name, node.coords, attrs)
        else:
            raise DeltaError(f"cannot update attributes of missing node '{name}'")

    else:
        raise DeltaError(f"unsupported delta {delta!r}")

    out = SceneGraph(regions, objects, frozenset(r_edges), frozenset(o_edges), robot)
    out.check_invariants()
    return out


def apply_deltas(graph: SceneGraph, deltas) -> SceneGraph:
    for d in deltas:
        graph = apply_delta(graph, d)
    return graph


# ---------------------------------------------------------------------------
# Wire format. Field names and coordinate order are part of the protocol:
# coords are [west_east, south_north].
# ---------------------------------------------------------------------------

_TOP_FIELDS = ("objects", "regions", "object_connections", "region_connections", "robot_location")


def _coord_out(v: float):
    return int(v) if float(v).is_integer() else v


def _node_out(node) -> dict:
    d = {"name": node.name, "coords": [_coord_out(node.coords[0]), _coord_out(node.coords[1])]}
    if node.attributes:
        d["attributes"] = dict(sorted(node.attributes.items()))
    return d


def serialize(graph: SceneGraph, indent: int | None = None) -> str:
    doc = {
        "objects": [_node_out(graph.objects[k]) for k in sorted(graph.objects)],
        "regions": [_node_out(graph.regions[k]) for k in sorted(graph.regions)],
        "object_connections": [list(e) for e in sorted(graph.object_connections)],
        "region_connections": [list(e) for e in sorted(graph.region_connections)],
        "robot_location": graph.robot_location,
    }
    return json.dumps(doc, indent=indent)


def _offset_of(text: str, token: str) -> int:
    i = text.find(token)
    return max(i, 0)


def _parse_node(entry, path: str, text: str, kind: str):
    if not isinstance(entry, dict):
        raise GraphParseError(f"expected object for node entry, got {type(entry).__name__}", path)
    extra = set(entry) - {"name", "coords", "attributes"}
    if extra:
        k = sorted(extra)[0]
        raise GraphParseError(f"unknown field '{k}'", f"{path}.{k}", _offset_of(text, f'"{k}"'))
    for req in ("name", "coords"):
        if req not in entry:
            raise GraphParseError(f"missing field '{req}'", f"{path}.{req}")
    name = entry["name"]
    if not isinstance(name, str) or not name:
        raise GraphParseError("node name must be a non-empty string", f"{path}.name")
    coords = entry["coords"]
    if not isinstance(coords, list) or len(coords) != 2:
        raise GraphParseError(
            f"coords must have exactly 2 entries, got {coords!r}",
            f"{path}.coords", _offset_of(text, f'"{name}"'))
    try:
        coords = _check_coords(coords, name)
    except GraphError as e:
        raise GraphParseError(str(e), f"{path}.coords", _offset_of(text, f'"{name}"'))
    attrs = entry.get("attributes", {})
    if not isinstance(attrs, dict):
        raise GraphParseError("attributes must be an object", f"{path}.attributes")
    cls = RegionNode if kind == REGION else ObjectNode
    return cls(name, coords, dict(attrs))


def deserialize(text: str) -> SceneGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphParseError(f"invalid JSON: {e.msg}", "$", e.pos)
    if not isinstance(doc, dict):
        raise GraphParseError("top-level document must be an object", "$")
    extra = set(doc) - set(_TOP_FIELDS)
    if extra:
        k = sorted(extra)[0]
        raise GraphParseError(f"unknown field '{k}'", k, _offset_of(text, f'"{k}"'))
    for req in _TOP_FIELDS:
        if req not in doc:
            raise GraphParseError(f"missing field '{req}'", req)

    regions, objects = {}, {}
    for i, entry in enumerate(doc["regions"]):
        node = _parse_node(entry, f"regions[{i}]", text, REGION)
        if node.name in regions:
            raise GraphParseError(f"duplicate region '{node.name}'", f"regions[{i}]",
                                  _offset_of(text, f'"{node.name}"'))
        regions[node.name] = node
    for i, entry in enumerate(doc["objects"]):
        node = _parse_node(entry, f"objects[{i}]", text, OBJECT)
        if node.name in objects:
            raise GraphParseError(f"duplicate object '{node.name}'", f"objects[{i}]",
                                  _offset_of(text, f'"{node.name}"'))
        objects[node.name] = node

    def _edge(entry, i, field_name):
        if not isinstance(entry, list) or len(entry) != 2 or not all(isinstance(x, str) for x in entry):
            raise GraphParseError("connection must be a pair of node names", f"{field_name}[{i}]")
        return entry

    r_edges = set()
    for i, entry in enumerate(doc["region_connections"]):
        a, b = _edge(entry, i, "region_connections")
        r_edges.add(_region_edge(a, b))
    o_edges = set()
    for i, entry in enumerate(doc["object_connections"]):
        o, r = _edge(entry, i, "object_connections")
        o_edges.add((o, r))

    graph = SceneGraph(regions, objects, frozenset(r_edges), frozenset(o_edges), doc["robot_location"])
    try:
        graph.check_invariants()
    except GraphError as e:
        raise GraphParseError(str(e), "$", _offset_of(text, '"robot_location"'))
    return graph


def write_delta_log(deltas, fp) -> None:
    """Newline-delimited JSON records, one delta each."""
    for d in deltas:
        fp.write(json.dumps(delta_to_record(d), sort_keys=True) + "\n")


def delta_to_record(delta: GraphDelta) -> dict:
    if isinstance(delta, AddNode):
        return {"op": "add_node", "kind": delta.kind, "name": delta.name,
                "coords": list(delta.coords), "attributes": dict(delta.attributes)}
    if isinstance(delta, RemoveNode):
        return {"op": "remove_node", "name": delta.name}
    if isinstance(delta, AddConnection):
        return {"op": "add_connection", "kind": delta.kind, "a": delta.a, "b": delta.b}
    if isinstance(delta, RemoveConnection):
        return {"op": "remove_connection", "kind": delta.kind, "a": delta.a, "b": delta.b}
    if isinstance(delta, UpdateRobotLocation):
        return {"op": "update_robot_location", "region": delta.region}
    if isinstance(delta, UpdateNodeAttributes):
        return {"op": "update_node_attributes", "name": delta.name,
                "attributes": dict(delta.attributes)}
    if isinstance(delta, NoUpdates):
        return {"op": "no_updates"}
    raise ValueError(f"unsupported delta {delta!r}")


def record_to_delta(rec: dict) -> GraphDelta:
    op = rec.get("op")
    if op == "add_node":
        return AddNode(rec["kind"], rec["name"], tuple(rec["coords"]), dict(rec.get("attributes", {})))
    if op == "remove_node":
        return RemoveNode(rec["name"])
    if op == "add_connection":
        return AddConnection(rec["kind"], rec["a"], rec["b"])
    if op == "remove_connection":
        return RemoveConnection(rec["kind"], rec["a"], rec["b"])
    if op == "update_robot_location":
        return UpdateRobotLocation(rec["region"])
    if op == "update_node_attributes":
        return UpdateNodeAttributes(rec["name"], dict(rec["attributes"]))
    if op == "no_updates":
        return NoUpdates()
    raise ValueError(f"unsupported delta record {rec!r}")


# ---------------------------------------------------------------------------
# Search. Edge weight is the Euclidean distance between region coords; ties
# between equal-length paths break lexicographically on the name sequence.
# ---------------------------------------------------------------------------

def euclid(a: Coords, b: Coords) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def shortest_path(graph: SceneGraph, frm: str, to: str) -> list[str] | None:
    """Minimal-total-length region path, or None when unreachable."""
    for n in (frm, to):
        if n not in graph.regions:
            raise UnknownNodeError(n)
    if frm == to:
        return [frm]
    adjacency: dict[str, list[str]] = {}
    for a, b in graph.region_connections:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    for k in adjacency:
        adjacency[k].sort()

    heap = [(0.0, (frm,))]
    settled: set[str] = set()
    while heap:
        dist, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == to:
            return list(path)
        for nxt in adjacency.get(node, ()):
            if nxt not in settled:
                w = euclid(graph.regions[node].coords, graph.regions[nxt].coords)
                heapq.heappush(heap, (dist + w, path + (nxt,)))
    return None


def path_length(graph: SceneGraph, path: list[str]) -> float:
    return sum(euclid(graph.regions[a].coords, graph.regions[b].coords)
               for a, b in zip(path, path[1:]))


def reachable(graph: SceneGraph, frm: str, to: str) -> bool:
    """True when a region path exists; object goals count as reachable when
    any region they connect to is reachable."""
    if frm not in graph.regions:
        raise UnknownNodeError(frm)
    if to in graph.regions:
        return shortest_path(graph, frm, to) is not None
    if to in graph.objects:
        return any(shortest_path(graph, frm, r) is not None
                   for r in graph.connected_regions(to))
    raise UnknownNodeError(to)
