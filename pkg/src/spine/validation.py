"""Plan validation: a semantic pass (behavior names, arguments, node existence,
reachability, with corrective feedback) followed by a spatial pass that clamps
exploration goals to reachable points via frontier search over the local
occupancy grid.

Validation never raises on planner mistakes; every failure becomes feedback
text so the planner can correct itself.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from . import scene_graph as sg
from .calls import (
    Answer,
    BehaviorCall,
    Clarify,
    ExploreRegion,
    ExtendMap,
    Goto,
    Inspect,
    MalformedCall,
    MapRegion,
    Replan,
    SetLabels,
    UnknownCall,
    BEHAVIOR_NAMES,
)
from .world import OCCUPIED, OccupancyGrid
from .scene_graph import euclid

SQRT2 = math.sqrt(2.0)

REACHED_GOAL = "reached_goal"
HIT_OBSTACLE = "hit_obstacle"
EXHAUSTED_BUDGET = "exhausted_budget"

# Failure kinds for feedback templates.
UNKNOWN_BEHAVIOR = "unknown_behavior"
BAD_ARGUMENTS = "bad_arguments"
UNKNOWN_NODE = "unknown_node"
UNREACHABLE = "unreachable"
OBSTACLE_CLAMP = "obstacle_clamp"
BUDGET_CLAMP = "budget_clamp"


class FrontierStartError(ValueError):
    """The search was started on an occupied cell: an engine bug, never a
    planner fault."""


@dataclass(frozen=True)
class FrontierOutcome:
    reached: tuple  # (east, north)
    path: tuple     # ordered coords, starting at the query start
    reason: str     # REACHED_GOAL | HIT_OBSTACLE | EXHAUSTED_BUDGET


@dataclass
class ValidationReport:
    valid_sequence: list = field(default_factory=list)
    feedback: list = field(default_factory=list)
    rejected_at: int | None = None


def _neighbors(grid: OccupancyGrid, ix: int, iy: int):
    # 8-connected, but a diagonal move may not cut the corner of an occupied
    # cell (matching the physical supercover travel rule).
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            nx, ny = ix + dx, iy + dy
            if not grid.in_bounds(nx, ny):
                continue
            if grid.cells[ny, nx] == OCCUPIED:
                continue
            diag = dx != 0 and dy != 0
            if diag and (grid.state_at(ix + dx, iy) == OCCUPIED
                         or grid.state_at(ix, iy + dy) == OCCUPIED):
                continue
            yield nx, ny, diag


def frontier_search(grid: OccupancyGrid, start, goal, budget: int | None = None) -> FrontierOutcome:
    """Best-first expansion through free and unknown cells (8-connected,
    priority = path cost + Euclidean distance to goal).

    Reaching the goal cell returns REACHED_GOAL with the path; otherwise the
    settled cell nearest the goal wins (ties: lower path cost, then
    lexicographic cell index), with the reason recording whether the frontier
    was fully enclosed or the expansion budget ran out.

    Path costs are tracked as exact (straight, diagonal) step counts so equal
    costs compare equal regardless of the order the steps were taken in.
    """
    res = grid.resolution
    start = (float(start[0]), float(start[1]))
    goal = (float(goal[0]), float(goal[1]))
    if budget is None:
        budget = grid.width * grid.height
    if budget <= 0:
        raise ValueError("frontier budget must be positive")

    s_cell = grid.cell_of(start)
    if grid.state_at(*s_cell) == OCCUPIED:
        raise FrontierStartError(f"search started on an occupied cell {s_cell}")
    g_cell = grid.cell_of(goal)
    goal_in_bounds = grid.in_bounds(*g_cell)

    def h(cell):
        return euclid(grid.center_of(*cell), goal)

    # Heap entries: (f, tiebreak counter, cell, (straights, diagonals), parent)
    counter = 0
    heap = [(h(s_cell), counter, s_cell, (0, 0), None)]
    settled: dict = {}   # cell -> ((straights, diagonals), parent)
    expansions = 0
    reason = HIT_OBSTACLE
    while heap:
        if expansions >= budget:
            reason = EXHAUSTED_BUDGET
            break
        _, _, cell, g_pair, parent = heapq.heappop(heap)
        if cell in settled:
            continue
        settled[cell] = (g_pair, parent)
        expansions += 1
        if goal_in_bounds and cell == g_cell:
            return FrontierOutcome(goal, _rebuild_path(grid, settled, cell, start, goal),
                                   REACHED_GOAL)
        ns, nd = g_pair
        for nx, ny, diag in _neighbors(grid, *cell):
            if (nx, ny) in settled:
                continue
            pair = (ns, nd + 1) if diag else (ns + 1, nd)
            g_cost = (pair[0] + pair[1] * SQRT2) * res
            counter += 1
            heapq.heappush(heap, (g_cost + h((nx, ny)), counter, (nx, ny), pair, cell))

    best = min(
        settled,
        key=lambda c: (h(c), settled[c][0][0] + settled[c][0][1] * SQRT2, c),
    )
    reached = grid.center_of(*best)
    return FrontierOutcome(reached, _rebuild_path(grid, settled, best, start, reached), reason)


def _rebuild_path(grid, settled, cell, start, endpoint):
    cells = []
    cur = cell
    while cur is not None:
        cells.append(cur)
        cur = settled[cur][1]
    cells.reverse()
    pts = [start]
    for c in cells[1:]:
        pts.append(grid.center_of(*c))
    if len(pts) > 1:
        pts[-1] = endpoint
    elif endpoint != start:
        pts.append(endpoint)
    return tuple(pts)


# ---------------------------------------------------------------------------
# Feedback templates.
# ---------------------------------------------------------------------------

def _closest_reachable(graph: sg.SceneGraph, frm: str, goal_name: str) -> str | None:
    """Reachable region nearest the goal node, used to suggest exploration
    objectives."""
    try:
        goal_coords = graph.node_coords(goal_name)
    except sg.UnknownNodeError:
        return None
    best = None
    for name in sorted(graph.regions):
        if name == goal_name:
            continue
        if sg.shortest_path(graph, frm, name) is None:
            continue
        d = euclid(graph.regions[name].coords, goal_coords)
        if best is None or d < best[0]:
            best = (d, name)
    return best[1] if best else None


def feedback_for(call: BehaviorCall, failure_kind: str, graph: sg.SceneGraph,
                 robot_location: str | None = None, detail: str = "",
                 adjusted=None) -> str:
    from .calls import format_call  # local import keeps module load order simple

    loc = robot_location or graph.robot_location
    if failure_kind == UNKNOWN_BEHAVIOR:
        name = call.name if isinstance(call, UnknownCall) else format_call(call)
        return (f"unknown behavior '{name}'. Check your function spelling; the available "
                f"behaviors are: {', '.join(BEHAVIOR_NAMES)}.")
    if failure_kind == BAD_ARGUMENTS:
        name = call.name if isinstance(call, MalformedCall) else format_call(call)
        return f"invalid arguments for {name}: {detail}"
    if failure_kind == UNKNOWN_NODE:
        return (f"node {detail} is not in the scene graph. Only use nodes that are "
                f"currently observed.")
    if failure_kind == UNREACHABLE:
        goal = detail
        msg = (f"node {goal} is unreachable from your current location. "
               f"Consider exploring, and update your plan accordingly.")
        near = _closest_reachable(graph, loc, goal)
        if near is not None:
            msg += f" The closest reachable node to {goal} is {near}."
        return msg
    if failure_kind == OBSTACLE_CLAMP:
        x, y = adjusted
        return (f"exploration toward {format_call(call)} terminated after encountering an "
                f"obstacle; the goal was adjusted to ({x:.1f}, {y:.1f}).")
    if failure_kind == BUDGET_CLAMP:
        x, y = adjusted
        return (f"exploration toward {format_call(call)} exhausted its search budget; "
                f"the goal was adjusted to ({x:.1f}, {y:.1f}).")
    raise ValueError(f"unknown failure kind '{failure_kind}'")


# ---------------------------------------------------------------------------
# The validation pass.
# ---------------------------------------------------------------------------

def _nearest_connected_reachable(graph: sg.SceneGraph, obj: str, frm: str) -> str | None:
    obj_coords = graph.objects[obj].coords
    best = None
    for region in graph.connected_regions(obj):
        if sg.shortest_path(graph, frm, region) is None:
            continue
        d = euclid(graph.regions[region].coords, obj_coords)
        if best is None or (d, region) < best:
            best = (d, region)
    return best[1] if best else None


def validate(plan, graph: sg.SceneGraph, grid: OccupancyGrid,
             robot_pose=None, budget: int | None = None) -> ValidationReport:
    """Two-pass validation of a parsed behavior-call list.

    Pass 1 walks the calls in order, simulating the robot's graph location;
    the first unknown behavior, bad argument, unknown node, or reachability
    violation stops the walk, producing feedback and the surviving prefix.
    Pass 2 rewrites exploration goals in the prefix to frontier-reachable
    points, appending feedback whenever a goal moved.
    """
    report = ValidationReport()
    location = graph.robot_location
    pose = tuple(robot_pose) if robot_pose is not None else graph.regions[location].coords
    locations_before = []  # (location name, pose) ahead of each surviving call

    def reject(i, call, kind, detail="", loc=None):
        report.feedback.append(feedback_for(call, kind, graph, loc or location, detail))
        report.rejected_at = i

    for i, call in enumerate(plan):
        locations_before.append((location, pose))
        if isinstance(call, UnknownCall):
            reject(i, call, UNKNOWN_BEHAVIOR)
            break
        if isinstance(call, MalformedCall):
            reject(i, call, BAD_ARGUMENTS, call.problem)
            break
        if isinstance(call, (Goto, MapRegion, ExploreRegion)):
            region = call.region
            if region not in graph.regions:
                reject(i, call, UNKNOWN_NODE, region)
                break
            if isinstance(call, ExploreRegion) and not (call.radius > 0):
                reject(i, call, BAD_ARGUMENTS, "exploration radius must be positive")
                break
            if sg.shortest_path(graph, location, region) is None:
                reject(i, call, UNREACHABLE, region)
                break
            location = region
            pose = graph.regions[region].coords
        elif isinstance(call, Inspect):
            if call.object not in graph.objects:
                reject(i, call, UNKNOWN_NODE, call.object)
                break
            vantage = _nearest_connected_reachable(graph, call.object, location)
            if vantage is None:
                reject(i, call, UNREACHABLE, call.object)
                break
            location = vantage
            pose = graph.regions[vantage].coords
        elif isinstance(call, ExtendMap):
            pass  # spatially validated below; graph location is unchanged
        elif isinstance(call, SetLabels):
            if not call.labels:
                reject(i, call, BAD_ARGUMENTS, "label list must not be empty")
                break
        elif isinstance(call, (Clarify, Answer, Replan)):
            pass
        else:
            reject(i, call, UNKNOWN_BEHAVIOR)
            break
        report.valid_sequence.append(call)

    # Pass 2: clamp exploration goals within the surviving prefix.
    for idx, call in enumerate(report.valid_sequence):
        if not isinstance(call, ExtendMap):
            continue
        _, start = locations_before[idx]
        try:
            outcome = frontier_search(grid, start, (call.east, call.north), budget)
        except FrontierStartError:
            # A wrong prior can park the simulated robot on a known-occupied
            # cell; drop the exploration step rather than crash.
            report.valid_sequence = report.valid_sequence[:idx]
            report.rejected_at = idx
            report.feedback.append(
                feedback_for(call, OBSTACLE_CLAMP, graph, adjusted=start))
            break
        if outcome.reason == REACHED_GOAL:
            continue
        kind = OBSTACLE_CLAMP if outcome.reason == HIT_OBSTACLE else BUDGET_CLAMP
        report.feedback.append(
            feedback_for(call, kind, graph, adjusted=outcome.reached))
        report.valid_sequence[idx] = ExtendMap(outcome.reached[0], outcome.reached[1])
    return report
