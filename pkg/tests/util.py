"""Shared test oracles and generators, kept independent of the code paths
they check: brute-force path enumeration for graph search, and a Dijkstra
nearest-reachable-cell oracle for frontier clamping."""

from __future__ import annotations

import heapq
import math
import random

import numpy as np

from spine.scene_graph import (
    RegionNode,
    ObjectNode,
    SceneGraph,
    euclid,
)
from spine.world import FREE, OCCUPIED, UNKNOWN, OccupancyGrid

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Graph oracles.
# ---------------------------------------------------------------------------

def brute_force_shortest(graph: SceneGraph, frm: str, to: str):
    """Enumerate every simple path; pick minimal length with lexicographic
    name-sequence tie-break. Only usable on small graphs."""
    best = None

    def dfs(node, visited, length, path):
        nonlocal best
        if best is not None and length > best[0] + 1e-9:
            return
        if node == to:
            cand = (length, path)
            if best is None or length < best[0] - 1e-12 or \
                    (abs(length - best[0]) <= 1e-12 and path < best[1]):
                best = cand
            return
        for nxt in graph.region_neighbors(node):
            if nxt in visited:
                continue
            w = euclid(graph.regions[node].coords, graph.regions[nxt].coords)
            dfs(nxt, visited | {nxt}, length + w, path + (nxt,))

    dfs(frm, {frm}, 0.0, (frm,))
    return None if best is None else list(best[1])


def random_graph(rng: random.Random, n_regions=6, n_objects=2, edge_prob=0.35,
                 integer_coords=False) -> SceneGraph:
    regions = {}
    for i in range(n_regions):
        name = f"ground_{i + 1}"
        if integer_coords:
            coords = (rng.randint(-8, 8), rng.randint(-8, 8))
        else:
            coords = (round(rng.uniform(-20, 20), 3), round(rng.uniform(-20, 20), 3))
        regions[name] = RegionNode(name, coords, {})
    names = sorted(regions)
    edges = set()
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if rng.random() < edge_prob:
                edges.add((a, b))
    objects = {}
    o_edges = set()
    for i in range(n_objects):
        name = f"crate_{i + 1}"
        coords = (round(rng.uniform(-20, 20), 3), round(rng.uniform(-20, 20), 3))
        attrs = {"note": f"n{rng.randint(0, 9)}"} if rng.random() < 0.5 else {}
        objects[name] = ObjectNode(name, coords, attrs)
        if rng.random() < 0.8:
            o_edges.add((name, rng.choice(names)))
    robot = rng.choice(names)
    return SceneGraph(regions, objects, frozenset(edges), frozenset(o_edges), robot)


# ---------------------------------------------------------------------------
# Grid oracles.
# ---------------------------------------------------------------------------

def random_grid(rng: random.Random, max_side=64, density=None) -> OccupancyGrid:
    w = rng.randint(8, max_side)
    h = rng.randint(8, max_side)
    density = rng.uniform(0.0, 0.4) if density is None else density
    cells = np.zeros((h, w), dtype=np.int8)
    occupied = np.array(
        [[rng.random() < density for _ in range(w)] for _ in range(h)], dtype=bool)
    cells[occupied] = OCCUPIED
    unknown = np.array(
        [[rng.random() < 0.15 for _ in range(w)] for _ in range(h)], dtype=bool)
    cells[np.logical_and(unknown, ~occupied)] = UNKNOWN
    return OccupancyGrid(0.5, (0.0, 0.0), w, h, cells)


def free_cells(grid: OccupancyGrid):
    out = []
    for iy in range(grid.height):
        for ix in range(grid.width):
            if grid.cells[iy, ix] == FREE:
                out.append((ix, iy))
    return out


# ---------------------------------------------------------------------------
# Mini scenario for engine-level tests.
# ---------------------------------------------------------------------------

def mini_scenario_doc(success=None, clarify_responses=(), labels=(),
                      config=None) -> dict:
    """A 10x10 m open world with a two-region prior and one hidden crate."""
    rows = ["20."] * 20
    return {
        "name": "mini",
        "mission": "Is there a crate in the scene?",
        "world": {
            "resolution": 0.5, "origin": [0.0, 0.0], "grid_rows": rows,
            "objects": [
                {"name": "crate_1", "label": "crate", "coords": [7.0, 4.0],
                 "inspection_answers": {"holding": "the crate is sealed"}},
            ],
            "region_hints": {},
        },
        "sensor": {"detection_radius": 3.0, "min_range": 1.0,
                   "active_labels": list(labels)},
        "prior_graph": {
            "objects": [],
            "regions": [{"name": "ground_1", "coords": [2, 2]},
                        {"name": "ground_2", "coords": [7, 2]}],
            "object_connections": [],
            "region_connections": [["ground_1", "ground_2"]],
            "robot_location": "ground_1",
        },
        "full_map_graph": None,
        "success": success or {"kind": "answer_contains", "keywords": ["done"]},
        "clarify_responses": list(clarify_responses),
        "explicit_task_sequence": None,
        "oracle_policy": None,
        "config": dict(config or {}),
        "seeds": [0],
    }


def plan_doc(calls: str, goal="test", reasoning="scripted test step") -> str:
    import json
    return json.dumps({"primary_goal": goal, "relevant_graph": "",
                       "reasoning": reasoning, "plan": f"[{calls}]"})


def dijkstra_nearest_reachable(grid: OccupancyGrid, start, goal):
    """Independent clamp oracle: settle the whole traversable component with
    Dijkstra (exact straight/diagonal step counts), then either report the
    goal cell as reached or the settled cell nearest the goal point
    (ties: lower path cost, then lexicographic cell index)."""
    start_cell = grid.cell_of(start)
    goal_point = (float(goal[0]), float(goal[1]))
    goal_cell = grid.cell_of(goal)
    dist: dict = {}
    heap = [(0.0, (0, 0), start_cell)]
    while heap:
        cost, pair, cell = heapq.heappop(heap)
        if cell in dist:
            continue
        dist[cell] = pair
        ix, iy = cell
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = ix + dx, iy + dy
                if not (0 <= nx < grid.width and 0 <= ny < grid.height):
                    continue
                if grid.cells[ny, nx] == OCCUPIED or (nx, ny) in dist:
                    continue
                if dx != 0 and dy != 0:
                    # No corner cutting past occupied cells.
                    if grid.state_at(ix + dx, iy) == OCCUPIED or \
                            grid.state_at(ix, iy + dy) == OCCUPIED:
                        continue
                    npair = (pair[0], pair[1] + 1)
                else:
                    npair = (pair[0] + 1, pair[1])
                heapq.heappush(heap, (npair[0] + npair[1] * SQRT2, npair, (nx, ny)))
    if grid.in_bounds(*goal_cell) and goal_cell in dist:
        return ("reached", goal_cell)
    best = min(dist, key=lambda c: (
        math.hypot(grid.center_of(*c)[0] - goal_point[0],
                   grid.center_of(*c)[1] - goal_point[1]),
        dist[c][0] + dist[c][1] * SQRT2,
        c))
    return ("clamped", best)
