"""Execution of the behavior library against the simulated world.

Each executor runs to completion synchronously, mutating the execution
context only through scene-graph deltas (so the delta log reconstructs the
graph exactly) and through the robot/grid state it owns. Exactly one behavior
executes per accepted plan; that discipline lives in the engine, not here.
"""

from __future__ import annotations

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
    MapRegion,
    Replan,
    SetLabels,
)
from .config import EngineConfig
from .scene_graph import (
    REGION,
    REGION_CONNECTION,
    AddConnection,
    AddNode,
    RemoveConnection,
    SceneGraph,
    UpdateNodeAttributes,
    UpdateRobotLocation,
    euclid,
)
from .validation import REACHED_GOAL, FrontierStartError, frontier_search
from .world import (
    FREE,
    OCCUPIED,
    GroundTruthWorld,
    OccupancyGrid,
    RobotState,
    SensorModel,
    WorldError,
    line_in_state,
    scan_traversability,
    sense_objects,
    travel,
    vlm_inspect,
)


@dataclass
class BehaviorOutcome:
    deltas: list = field(default_factory=list)
    user_messages: list = field(default_factory=list)
    terminal: bool = False
    blocked: str | None = None
    refused: str | None = None
    expected_location: str | None = None  # nominal arrival region, for update suppression


@dataclass
class ExecutionContext:
    """All mutable engine state a behavior may touch."""
    world: GroundTruthWorld
    graph: SceneGraph
    local_grid: OccupancyGrid
    robot: RobotState
    sensor: SensorModel
    config: EngineConfig = field(default_factory=EngineConfig)

    def apply(self, deltas, outcome: BehaviorOutcome) -> None:
        for d in deltas:
            self.graph = sg.apply_delta(self.graph, d)
            outcome.deltas.append(d)

    def scan(self, outcome: BehaviorOutcome) -> None:
        deltas = scan_traversability(
            self.world, self.local_grid, self.graph, self.robot.pose,
            self.config.scan_radius, self.config.d_region, self.config.d_edge)
        self.apply(deltas, outcome)

    def sense(self, outcome: BehaviorOutcome) -> None:
        deltas = sense_objects(self.world, self.graph, self.robot.pose, self.sensor)
        self.robot.overhead_time += self.config.sense_overhead_s
        self.apply(deltas, outcome)


def execute(call: BehaviorCall, ctx: ExecutionContext) -> BehaviorOutcome:
    if isinstance(call, Goto):
        return execute_goto(call.region, ctx)
    if isinstance(call, MapRegion):
        return execute_map_region(call.region, ctx)
    if isinstance(call, ExploreRegion):
        return execute_explore_region(call.region, call.radius, ctx)
    if isinstance(call, ExtendMap):
        return execute_extend_map(call.east, call.north, ctx)
    if isinstance(call, Inspect):
        return execute_inspect(call.object, call.query, ctx)
    if isinstance(call, SetLabels):
        return execute_set_labels(call.labels, ctx)
    if isinstance(call, Clarify):
        return execute_clarify(call.question, ctx)
    if isinstance(call, Answer):
        return execute_answer(call.text, ctx)
    if isinstance(call, Replan):
        # A planning placeholder; the engine strips it before execution.
        return BehaviorOutcome()
    out = BehaviorOutcome()
    out.refused = f"behavior {call!r} cannot be executed"
    return out


def _travel_leg(ctx: ExecutionContext, outcome: BehaviorOutcome, waypoints) -> bool:
    """Drive waypoints against ground truth. Returns True when all were
    reached; on blockage, records the event, leaves the robot at the last
    safe waypoint, and marks the offending cell in the local grid (the robot
    just learned about it the hard way)."""
    state, event = travel(ctx.robot, waypoints, ctx.world.grid)
    ctx.robot = state
    if event is not None:
        ix, iy = ctx.local_grid.cell_of(event.hit_point)
        if ctx.local_grid.in_bounds(ix, iy):
            ctx.local_grid.cells[iy, ix] = OCCUPIED
        outcome.blocked = (
            f"travel blocked by an obstacle near "
            f"({event.hit_point[0]:.1f}, {event.hit_point[1]:.1f})")
        return False
    return True


def _goto_along_graph(region: str, ctx: ExecutionContext, outcome: BehaviorOutcome,
                      sense_en_route: bool = False) -> bool:
    """Shared goto/map_region motion: follow the graph shortest path, removing
    the blocking edge and stopping short when ground truth disagrees with the
    map. Returns True when the goal region was reached."""
    graph = ctx.graph
    if region not in graph.regions:
        outcome.refused = f"goto refused: unknown region '{region}'"
        return False
    path = sg.shortest_path(graph, graph.robot_location, region)
    if path is None:
        outcome.refused = f"goto refused: no path to '{region}' in the current graph"
        return False

    outcome.expected_location = region
    if sense_en_route:
        ctx.sense(outcome)
    for prev, nxt in zip(path, path[1:]):
        target = graph.regions[nxt].coords
        if not _travel_leg(ctx, outcome, [target]):
            ctx.apply([RemoveConnection(REGION_CONNECTION, prev, nxt)], outcome)
            if ctx.graph.robot_location != prev:
                ctx.apply([UpdateRobotLocation(prev)], outcome)
            return False
        if ctx.graph.robot_location != nxt:
            ctx.apply([UpdateRobotLocation(nxt)], outcome)
        if sense_en_route:
            ctx.sense(outcome)
    return True


def execute_goto(region: str, ctx: ExecutionContext) -> BehaviorOutcome:
    outcome = BehaviorOutcome()
    _goto_along_graph(region, ctx, outcome)
    return outcome


def execute_map_region(region: str, ctx: ExecutionContext) -> BehaviorOutcome:
    outcome = BehaviorOutcome()
    _goto_along_graph(region, ctx, outcome, sense_en_route=True)
    return outcome


def _cardinal_candidates(center, r: float):
    x, y = center
    return [(x + r, y), (x - r, y), (x, y + r), (x, y - r)]


def execute_explore_region(region: str, radius: float, ctx: ExecutionContext) -> BehaviorOutcome:
    """Sweep the four cardinal points around a region: frontier-search to each
    candidate, travel out, scan and sense there, drop a region at the reached
    point, and return to the center before trying the next one. Blockages are
    recorded and the sweep continues."""
    outcome = BehaviorOutcome()
    if radius <= 0:
        outcome.refused = "explore_region refused: radius must be positive"
        return outcome
    if not _goto_along_graph(region, ctx, outcome):
        return outcome
    center = ctx.graph.regions[region].coords
    ctx.scan(outcome)
    ctx.sense(outcome)
    start_cell = ctx.local_grid.cell_of(center)
    for candidate in _cardinal_candidates(center, radius):
        if ctx.config.use_spatial_exec:
            try:
                found = frontier_search(ctx.local_grid, center, candidate,
                                        ctx.config.frontier_budget)
            except FrontierStartError:
                outcome.blocked = "exploration cannot start: the center cell is occupied"
                break
            target, out_path = found.reached, list(found.path)
        else:
            target, out_path = candidate, [center, candidate]
        if (ctx.local_grid.cell_of(target) == start_cell
                or euclid(target, center) < ctx.local_grid.resolution):
            continue  # candidate collapsed onto the center cell
        # The outbound leg may still stop early against ground truth.
        reached_all = _travel_leg(ctx, outcome, out_path[1:])
        moved = ctx.robot.pose != center
        ctx.scan(outcome)
        ctx.sense(outcome)
        if moved:
            _region_at(ctx, outcome, ctx.robot.pose)
            back = list(reversed(out_path[:_index_of(out_path, ctx.robot.pose)]))
            if not back or back[-1] != center:
                back.append(center)
            _travel_leg(ctx, outcome, back)
        if not reached_all and outcome.blocked is None:
            outcome.blocked = "exploration leg blocked"
    outcome.expected_location = region
    return outcome


def _index_of(path, pose):
    for i, p in enumerate(path):
        if abs(p[0] - pose[0]) < 1e-9 and abs(p[1] - pose[1]) < 1e-9:
            return i
    return len(path)


def _travel_with_scans(ctx: ExecutionContext, outcome: BehaviorOutcome, waypoints) -> bool:
    """Travel a waypoint chain, scanning every scan_stride meters so the local
    grid (and the region chain) grows along the way."""
    since_scan = 0.0
    for wp in waypoints:
        step = euclid(ctx.robot.pose, wp)
        if not _travel_leg(ctx, outcome, [wp]):
            ctx.scan(outcome)
            return False
        since_scan += step
        if since_scan >= ctx.config.scan_stride:
            ctx.scan(outcome)
            since_scan = 0.0
    return True


def execute_extend_map(east: float, north: float, ctx: ExecutionContext) -> BehaviorOutcome:
    """Push the map toward a coordinate, then drop a region at the reached
    point and hook it into the graph.

    With spatial execution on, the controller replans internally: drive the
    frontier path, scan along the way, and re-search as blockages and new
    cells come in, until the goal is reached or progress stalls. Without it,
    the robot makes one straight-line attempt (the dumb-controller mode the
    validation ablation measures against)."""
    outcome = BehaviorOutcome()
    goal = (float(east), float(north))
    goal_cell = ctx.local_grid.cell_of(goal)
    ctx.scan(outcome)
    if not ctx.config.use_spatial_exec:
        _travel_with_scans(ctx, outcome, [goal])
        ctx.scan(outcome)
    else:
        for _ in range(ctx.config.extend_replan_iters):
            try:
                found = frontier_search(ctx.local_grid, ctx.robot.pose, goal,
                                        ctx.config.frontier_budget)
            except FrontierStartError:
                outcome.blocked = "exploration cannot start: the robot's cell is occupied"
                break
            target_cell = ctx.local_grid.cell_of(found.reached)
            pose_cell = ctx.local_grid.cell_of(ctx.robot.pose)
            if target_cell == pose_cell and pose_cell != goal_cell:
                break  # no reachable progress left
            pose_before = ctx.robot.pose
            done = _travel_with_scans(ctx, outcome, list(found.path)[1:])
            ctx.scan(outcome)
            if done and found.reason == REACHED_GOAL:
                break
            if not done and ctx.robot.pose == pose_before:
                # Pinned: the collision mark is the only new knowledge; keep
                # replanning until even that stops helping.
                continue
            if done:
                break  # arrived at a clamped point; good enough

    pose = ctx.robot.pose
    region = _region_at(ctx, outcome, pose)
    if region is not None and ctx.graph.robot_location != region:
        ctx.apply([UpdateRobotLocation(region)], outcome)
    ctx.sense(outcome)
    return outcome


def _connectable_neighbors(ctx: ExecutionContext, name: str, pose):
    graph = ctx.graph
    linked = {r for e in graph.region_connections for r in e if name in e}
    for other in sorted(graph.regions):
        if other == name or other in linked:
            continue
        o_coords = graph.regions[other].coords
        if euclid(o_coords, pose) <= ctx.config.d_edge and \
                line_in_state(ctx.local_grid, pose, o_coords, (FREE,)):
            yield other


def _region_at(ctx: ExecutionContext, outcome: BehaviorOutcome, pose):
    """Region node at the pose: reuse one within merge distance, otherwise add
    a new one. Either way, connect it to every known region within d_edge
    whose straight line is known free (the occupancy map owns connectivity)."""
    graph = ctx.graph
    best = None
    for name in sorted(graph.regions):
        d = euclid(graph.regions[name].coords, pose)
        if best is None or d < best[0]:
            best = (d, name)
    if best is not None and best[0] <= ctx.config.region_merge_eps:
        name = best[1]
        anchor = graph.regions[name].coords
    else:
        from .world import _next_region_name
        name = _next_region_name(graph)
        anchor = pose
        ctx.apply([AddNode(REGION, name, pose)], outcome)
    deltas = [AddConnection(REGION_CONNECTION, name, other)
              for other in _connectable_neighbors(ctx, name, anchor)]
    ctx.apply(deltas, outcome)
    return name


def execute_inspect(object_name: str, query: str, ctx: ExecutionContext) -> BehaviorOutcome:
    outcome = BehaviorOutcome()
    graph = ctx.graph
    if object_name not in graph.objects:
        outcome.refused = f"inspect refused: unknown object '{object_name}'"
        return outcome
    obj_coords = graph.objects[object_name].coords
    vantages = []
    for region in graph.connected_regions(object_name):
        if sg.shortest_path(graph, graph.robot_location, region) is not None:
            vantages.append((euclid(graph.regions[region].coords, obj_coords), region))
    if not vantages:
        outcome.refused = f"inspect refused: no reachable region connected to '{object_name}'"
        return outcome
    vantage = min(vantages)[1]
    if not _goto_along_graph(vantage, ctx, outcome):
        return outcome
    try:
        answer = vlm_inspect(ctx.world, object_name, query)
    except WorldError:
        answer = "the object could not be located for inspection"
    ctx.robot.overhead_time += ctx.config.inspect_overhead_s
    ctx.apply([UpdateNodeAttributes(object_name, {"inspection": answer, "query": query})],
              outcome)
    outcome.user_messages.append(f"{object_name}: {answer}")
    outcome.expected_location = vantage
    return outcome


def execute_set_labels(labels, ctx: ExecutionContext) -> BehaviorOutcome:
    outcome = BehaviorOutcome()
    if not labels:
        outcome.refused = "set_labels refused: label list must not be empty"
        return outcome
    ctx.sensor.active_labels = set(labels)
    return outcome


def execute_clarify(question: str, ctx: ExecutionContext) -> BehaviorOutcome:
    outcome = BehaviorOutcome()
    outcome.user_messages.append(question)
    return outcome


def execute_answer(text: str, ctx: ExecutionContext) -> BehaviorOutcome:
    outcome = BehaviorOutcome()
    outcome.terminal = True
    outcome.user_messages.append(text)
    return outcome
