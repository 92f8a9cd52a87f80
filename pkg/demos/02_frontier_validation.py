#!/usr/bin/env python3
"""Show spatial validation at work: a plan asks to extend the map through a
wall, and the validator clamps the goal to the nearest reachable point with
corrective feedback."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spine import OCCUPIED, FREE, OccupancyGrid, frontier_search, validate
from spine.calls import ExtendMap, Goto, SetLabels, format_call, parse_call_list
from spine.scene_graph import RegionNode, SceneGraph

# A 30 x 10 m strip with a wall at x = 20 m, fully known to the robot.
grid = OccupancyGrid.filled(0.5, (0.0, 0.0), 60, 20, FREE)
grid.cells[:, 40] = OCCUPIED

graph = SceneGraph({"ground_1": RegionNode("ground_1", (2.0, 5.0), {})},
                   {}, frozenset(), frozenset(), "ground_1")

plan = parse_call_list("[set_labels([barrel]), extend_map(27, 5), goto(ghost_9)]")
report = validate(plan, graph, grid)

print("submitted plan:")
for call in plan:
    print("  ", format_call(call))
print("\nvalidated sequence:")
for call in report.valid_sequence:
    print("  ", format_call(call))
print("\nfeedback to the planner:")
for line in report.feedback:
    print("  ", line)

out = frontier_search(grid, (2.0, 5.0), (27.0, 5.0))
print(f"\nfrontier search alone: reason={out.reason}, "
      f"clamped to ({out.reached[0]:.2f}, {out.reached[1]:.2f}), "
      f"path of {len(out.path)} waypoints")
