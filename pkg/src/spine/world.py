"""Simulated world: ground-truth occupancy, robot motion accounting, table-driven
object detection and inspection, and traversability scanning that grows the
scene graph as the robot moves.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .scene_graph import (
    OBJECT,
    OBJECT_CONNECTION,
    REGION,
    REGION_CONNECTION,
    AddConnection,
    AddNode,
    Coords,
    GraphDelta,
    SceneGraph,
    UpdateNodeAttributes,
    euclid,
)

FREE = 0
OCCUPIED = 1
UNKNOWN = 2

DEFAULT_SPEED = 0.5  # m/s, ground controller target velocity
DEFAULT_MIN_RANGE = 1.0  # m, obstacles/objects closer than this are missed


class WorldError(ValueError):
    pass


@dataclass
class OccupancyGrid:
    resolution: float
    origin: Coords  # world coords of the (0, 0) cell's lower-left corner
    width: int
    height: int
    cells: np.ndarray  # shape (height, width), indexed [iy, ix]

    @classmethod
    def filled(cls, resolution, origin, width, height, value) -> "OccupancyGrid":
        if resolution <= 0:
            raise WorldError("grid resolution must be positive")
        return cls(resolution, tuple(origin), width, height,
                   np.full((height, width), value, dtype=np.int8))

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(self.resolution, self.origin, self.width, self.height,
                             self.cells.copy())

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def cell_of(self, point: Coords) -> tuple[int, int]:
        return (int(math.floor((point[0] - self.origin[0]) / self.resolution)),
                int(math.floor((point[1] - self.origin[1]) / self.resolution)))

    def center_of(self, ix: int, iy: int) -> Coords:
        return (self.origin[0] + (ix + 0.5) * self.resolution,
                self.origin[1] + (iy + 0.5) * self.resolution)

    def state_at(self, ix: int, iy: int) -> int:
        if not self.in_bounds(ix, iy):
            return OCCUPIED  # the world edge behaves like a wall
        return int(self.cells[iy, ix])

    def to_pgm(self, path) -> None:
        """Debug export; free=white, occupied=black, unknown=gray."""
        shade = {FREE: 255, OCCUPIED: 0, UNKNOWN: 127}
        img = np.vectorize(shade.get)(self.cells).astype(np.uint8)
        with open(path, "wb") as fp:
            fp.write(f"P5\n{self.width} {self.height}\n255\n".encode())
            fp.write(np.flipud(img).tobytes())  # row 0 at the south edge

    @classmethod
    def from_pgm(cls, path, resolution=1.0, origin=(0.0, 0.0)) -> "OccupancyGrid":
        with open(path, "rb") as fp:
            data = fp.read()
        m = re.match(rb"P5\s+(\d+)\s+(\d+)\s+(\d+)\s", data)
        if not m:
            raise WorldError(f"{path}: not a binary PGM file")
        w, h, _ = (int(m.group(i)) for i in (1, 2, 3))
        raw = np.frombuffer(data[m.end():m.end() + w * h], dtype=np.uint8).reshape(h, w)
        raw = np.flipud(raw)
        cells = np.full((h, w), UNKNOWN, dtype=np.int8)
        cells[raw > 191] = FREE
        cells[raw < 64] = OCCUPIED
        return cls(resolution, tuple(origin), w, h, cells)


def grid_to_rle_rows(grid: OccupancyGrid) -> list[str]:
    """Run-length-encode rows, northernmost row first. Symbols: '.' free,
    '#' occupied, '?' unknown."""
    sym = {FREE: ".", OCCUPIED: "#", UNKNOWN: "?"}
    rows = []
    for iy in range(grid.height - 1, -1, -1):
        row = grid.cells[iy]
        parts = []
        run_val, run_len = int(row[0]), 0
        for v in row:
            if int(v) == run_val:
                run_len += 1
            else:
                parts.append(f"{run_len}{sym[run_val]}")
                run_val, run_len = int(v), 1
        parts.append(f"{run_len}{sym[run_val]}")
        rows.append("".join(parts))
    return rows


_RLE_TOKEN = re.compile(r"(\d+)([.#?])")


def grid_from_rle_rows(rows: list[str], resolution: float, origin) -> OccupancyGrid:
    val = {".": FREE, "#": OCCUPIED, "?": UNKNOWN}
    height = len(rows)
    decoded = []
    for i, row in enumerate(rows):
        cells, pos = [], 0
        for m in _RLE_TOKEN.finditer(row):
            if m.start() != pos:
                raise WorldError(f"grid row {i}: malformed run-length data at column {pos}")
            pos = m.end()
            cells.extend([val[m.group(2)]] * int(m.group(1)))
        if pos != len(row):
            raise WorldError(f"grid row {i}: malformed run-length data at column {pos}")
        decoded.append(cells)
    width = len(decoded[0])
    if any(len(r) != width for r in decoded):
        raise WorldError("grid rows decode to different widths")
    cells = np.array(decoded[::-1], dtype=np.int8)  # first listed row is northernmost
    return OccupancyGrid(resolution, tuple(origin), width, height, cells)


def cells_on_segment(grid: OccupancyGrid, a: Coords, b: Coords) -> list[tuple[int, int]]:
    """Every cell a straight segment passes through, in travel order
    (supercover traversal: an exact corner crossing includes both side cells,
    so diagonal gaps between occupied cells do not leak)."""
    res = grid.resolution
    ax, ay = (a[0] - grid.origin[0]) / res, (a[1] - grid.origin[1]) / res
    bx, by = (b[0] - grid.origin[0]) / res, (b[1] - grid.origin[1]) / res
    ix, iy = int(math.floor(ax)), int(math.floor(ay))
    tx, ty = int(math.floor(bx)), int(math.floor(by))
    cells = [(ix, iy)]
    dx, dy = bx - ax, by - ay
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    t_max_x = ((ix + (step_x > 0)) - ax) / dx if dx != 0 else math.inf
    t_max_y = ((iy + (step_y > 0)) - ay) / dy if dy != 0 else math.inf
    t_dx = abs(1.0 / dx) if dx != 0 else math.inf
    t_dy = abs(1.0 / dy) if dy != 0 else math.inf
    eps = 1e-12
    while (ix, iy) != (tx, ty):
        t = min(t_max_x, t_max_y)
        if t > 1.0 + eps:
            break  # the endpoint lies inside the current cell
        if abs(t_max_x - t_max_y) <= eps:
            # Corner crossing: touch both side cells, then the diagonal one.
            cells.append((ix + step_x, iy))
            cells.append((ix, iy + step_y))
            ix += step_x
            iy += step_y
            t_max_x += t_dx
            t_max_y += t_dy
        elif t_max_x < t_max_y:
            ix += step_x
            t_max_x += t_dx
        else:
            iy += step_y
            t_max_y += t_dy
        cells.append((ix, iy))
    return cells


def first_blocked_cell(grid: OccupancyGrid, a: Coords, b: Coords):
    """First occupied (or out-of-bounds) cell a segment crosses, or None."""
    for ix, iy in cells_on_segment(grid, a, b):
        if grid.state_at(ix, iy) == OCCUPIED:
            return (ix, iy)
    return None


def line_of_sight(grid: OccupancyGrid, a: Coords, b: Coords, see_into_target=True) -> bool:
    """True when no occupied cell lies strictly between a and b. With
    see_into_target, the final cell itself may be occupied (an obstacle is
    visible even though it cannot be traversed)."""
    cells = cells_on_segment(grid, a, b)
    if see_into_target:
        cells = cells[:-1]
    return all(grid.state_at(ix, iy) != OCCUPIED for ix, iy in cells)


def line_in_state(grid: OccupancyGrid, a: Coords, b: Coords, allowed) -> bool:
    return all(grid.state_at(ix, iy) in allowed for ix, iy in cells_on_segment(grid, a, b))


# ---------------------------------------------------------------------------
# Ground truth and robot state.
# ---------------------------------------------------------------------------

@dataclass
class TrueObject:
    name: str
    label: str
    coords: Coords
    attributes: dict = field(default_factory=dict)
    inspection_answers: dict = field(default_factory=dict)


@dataclass
class GroundTruthWorld:
    grid: OccupancyGrid  # fully known: no UNKNOWN cells
    true_objects: list[TrueObject] = field(default_factory=list)
    true_region_hints: dict = field(default_factory=dict)  # name -> coords, authoring aid

    def __post_init__(self):
        if np.any(self.grid.cells == UNKNOWN):
            raise WorldError("ground-truth grid may not contain unknown cells")
        for obj in self.true_objects:
            ix, iy = self.grid.cell_of(obj.coords)
            if not self.grid.in_bounds(ix, iy):
                raise WorldError(f"object '{obj.name}' lies outside the grid")

    def object_named(self, name: str) -> TrueObject:
        for obj in self.true_objects:
            if obj.name == name:
                return obj
        raise WorldError(f"no object named '{name}' in the world")

    def blank_local_grid(self) -> OccupancyGrid:
        g = self.grid
        return OccupancyGrid.filled(g.resolution, g.origin, g.width, g.height, UNKNOWN)


@dataclass
class RobotState:
    pose: Coords
    cumulative_distance: float = 0.0
    overhead_time: float = 0.0
    speed: float = DEFAULT_SPEED

    @property
    def elapsed_time(self) -> float:
        return self.cumulative_distance / self.speed + self.overhead_time


@dataclass
class SensorModel:
    detection_radius: float = 3.0
    min_range: float = DEFAULT_MIN_RANGE
    active_labels: set = field(default_factory=set)

    def __post_init__(self):
        if not (0 <= self.min_range < self.detection_radius):
            raise WorldError("sensor needs 0 <= min_range < detection_radius")


@dataclass(frozen=True)
class BlockageEvent:
    """Travel hit an occupied cell; the robot stopped at the last safe waypoint."""
    at_waypoint: int          # index into the waypoint list (-1: start pose)
    blocked_segment_to: Coords
    hit_point: Coords         # center of the occupied cell that stopped travel


def travel(robot: RobotState, waypoints, world_grid: OccupancyGrid):
    """Drive straight segments through the ground-truth grid.

    Returns (new_state, event): event is a BlockageEvent when a segment
    crossed an occupied cell, in which case the robot holds at the last
    safe waypoint and the blocked segment adds no distance.
    """
    pose = robot.pose
    dist = robot.cumulative_distance
    reached = -1
    event = None
    for i, wp in enumerate(waypoints):
        wp = (float(wp[0]), float(wp[1]))
        hit = first_blocked_cell(world_grid, pose, wp)
        if hit is not None:
            event = BlockageEvent(reached, wp, world_grid.center_of(*hit))
            break
        dist += euclid(pose, wp)
        pose = wp
        reached = i
    return replace(robot, pose=pose, cumulative_distance=dist), event


# ---------------------------------------------------------------------------
# Sensing.
# ---------------------------------------------------------------------------

def nearest_region(graph: SceneGraph, point: Coords) -> str | None:
    best = None
    for name in sorted(graph.regions):
        d = euclid(graph.regions[name].coords, point)
        if best is None or d < best[0]:
            best = (d, name)
    return best[1] if best else None


def sense_objects(world: GroundTruthWorld, graph: SceneGraph, pose: Coords,
                  sensor: SensorModel) -> list[GraphDelta]:
    """Detect active-label objects within range and line of sight.

    New objects produce AddNode + AddConnection to the nearest graph region;
    already-known objects produce UpdateNodeAttributes only when the true
    attributes differ. Output is ordered by distance, then name.
    """
    hits = []
    for obj in world.true_objects:
        if obj.label not in sensor.active_labels:
            continue
        d = euclid(pose, obj.coords)
        if not (sensor.min_range <= d <= sensor.detection_radius):
            continue
        if not line_of_sight(world.grid, pose, obj.coords):
            continue
        hits.append((d, obj.name, obj))
    hits.sort(key=lambda t: (t[0], t[1]))

    deltas: list[GraphDelta] = []
    seen = set()
    for _, name, obj in hits:
        if name in seen:
            continue
        seen.add(name)
        if name not in graph.objects:
            deltas.append(AddNode(OBJECT, name, obj.coords, dict(obj.attributes)))
            region = nearest_region(graph, obj.coords)
            if region is not None:
                deltas.append(AddConnection(OBJECT_CONNECTION, name, region))
        else:
            known = graph.objects[name].attributes
            changed = {k: v for k, v in obj.attributes.items() if known.get(k) != v}
            if changed:
                deltas.append(UpdateNodeAttributes(name, changed))
            if not graph.connected_regions(name):
                # A known object with no surviving edges would be permanently
                # un-inspectable; re-anchor it where it was observed from.
                region = nearest_region(graph, obj.coords)
                if region is not None:
                    deltas.append(AddConnection(OBJECT_CONNECTION, name, region))
    return deltas


def _next_region_name(graph: SceneGraph) -> str:
    best = 0
    for name in graph.regions:
        m = re.match(r"^region_(\d+)$", name)
        if m:
            best = max(best, int(m.group(1)))
    return f"region_{best + 1}"


def scan_traversability(world: GroundTruthWorld, local_grid: OccupancyGrid,
                        graph: SceneGraph, pose: Coords, radius: float,
                        d_region: float = 5.0, d_edge: float = 10.0) -> list[GraphDelta]:
    """Reveal ground truth within radius and line of sight into the local grid
    (in place), then grow the region graph: when the robot stands at least
    d_region from every known region, add a region at the pose and connect it
    to every region within d_edge whose straight line is fully known-free.
    """
    if radius <= 0:
        raise WorldError("scan radius must be positive")
    g = world.grid
    px, py = pose
    r_cells = int(math.ceil(radius / g.resolution))
    cx, cy = g.cell_of(pose)
    for iy in range(max(0, cy - r_cells), min(g.height, cy + r_cells + 1)):
        for ix in range(max(0, cx - r_cells), min(g.width, cx + r_cells + 1)):
            if local_grid.cells[iy, ix] != UNKNOWN:
                continue
            center = g.center_of(ix, iy)
            if euclid(pose, center) > radius:
                continue
            if line_of_sight(g, pose, center, see_into_target=True):
                local_grid.cells[iy, ix] = g.cells[iy, ix]

    deltas: list[GraphDelta] = []
    dists = [euclid(graph.regions[n].coords, pose) for n in graph.regions]
    if not dists or min(dists) >= d_region:
        name = _next_region_name(graph)
        deltas.append(AddNode(REGION, name, pose))
        for other in sorted(graph.regions):
            o_coords = graph.regions[other].coords
            if euclid(o_coords, pose) <= d_edge and line_in_state(local_grid, pose, o_coords, (FREE,)):
                deltas.append(AddConnection(REGION_CONNECTION, name, other))
    return deltas


DEFAULT_INSPECTION_ANSWER = "no notable findings"


def vlm_inspect(world: GroundTruthWorld, object_name: str, query: str) -> str:
    """Scripted stand-in for a vision-language model: the first answer whose
    keyword appears (case-insensitively) in the query wins."""
    obj = world.object_named(object_name)
    q = query.lower()
    for keyword, answer in obj.inspection_answers.items():
        if keyword.lower() in q:
            return answer
    return DEFAULT_INSPECTION_ANSWER
