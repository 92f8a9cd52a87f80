#!/usr/bin/env python3
"""Walk through the scene-graph data model: build a small map, apply mapper
deltas, serialize it to the wire format, and run graph search over it."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spine import (
    AddConnection,
    AddNode,
    RemoveConnection,
    apply_delta,
    deserialize,
    reachable,
    serialize,
    shortest_path,
)
from spine.scene_graph import OBJECT, OBJECT_CONNECTION, REGION, REGION_CONNECTION

# A graph always arrives as (or serializes to) this JSON shape.
DOC = """
{
  "objects": [{"name": "boat_1", "coords": [12, 3]}],
  "regions": [
    {"name": "ground_1", "coords": [0, 0]},
    {"name": "road_1", "coords": [6, 0]},
    {"name": "dock_1", "coords": [12, 1]}
  ],
  "object_connections": [["boat_1", "dock_1"]],
  "region_connections": [["ground_1", "road_1"], ["dock_1", "road_1"]],
  "robot_location": "ground_1"
}
"""

graph = deserialize(DOC)
print("loaded:", sorted(graph.regions), "robot at", graph.robot_location)

# The mapper speaks in deltas; each application returns a fresh graph.
graph = apply_delta(graph, AddNode(REGION, "field_1", (6.0, 6.0)))
graph = apply_delta(graph, AddConnection(REGION_CONNECTION, "field_1", "road_1"))
graph = apply_delta(graph, AddNode(OBJECT, "crate_1", (7.0, 7.0), {"note": "tarped"}))
graph = apply_delta(graph, AddConnection(OBJECT_CONNECTION, "crate_1", "field_1"))

print("path to the dock:", shortest_path(graph, "ground_1", "dock_1"))
print("crate reachable:", reachable(graph, "ground_1", "crate_1"))

# Losing an edge reroutes (or strands) traffic.
graph = apply_delta(graph, RemoveConnection(REGION_CONNECTION, "dock_1", "road_1"))
print("path after losing the dock road:", shortest_path(graph, "ground_1", "dock_1"))

print("\nwire format round trip:")
print(serialize(graph, indent=2))
