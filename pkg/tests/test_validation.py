import random

import pytest

from spine.calls import (
    Answer,
    ExploreRegion,
    ExtendMap,
    Goto,
    Inspect,
    MapRegion,
    Replan,
    SetLabels,
    parse_call,
)
from spine.scene_graph import RegionNode, ObjectNode, SceneGraph
from spine.validation import (
    BUDGET_CLAMP,
    EXHAUSTED_BUDGET,
    HIT_OBSTACLE,
    OBSTACLE_CLAMP,
    REACHED_GOAL,
    UNKNOWN_BEHAVIOR,
    UNREACHABLE,
    FrontierStartError,
    feedback_for,
    frontier_search,
    validate,
)
from spine.world import FREE, OCCUPIED, UNKNOWN, OccupancyGrid

from util import dijkstra_nearest_reachable, random_grid


def open_grid(w=40, h=40, res=0.5):
    return OccupancyGrid.filled(res, (0.0, 0.0), w, h, FREE)


def graph_with_chain():
    regions = {
        "ground_1": RegionNode("ground_1", (2.0, 2.0), {}),
        "ground_2": RegionNode("ground_2", (6.0, 2.0), {}),
        "island_1": RegionNode("island_1", (16.0, 16.0), {}),
    }
    objects = {
        "tower_1": ObjectNode("tower_1", (15.0, 15.0), {}),
        "crate_1": ObjectNode("crate_1", (5.0, 2.0), {}),
    }
    edges = frozenset({("ground_1", "ground_2")})
    o_edges = frozenset({("tower_1", "island_1"), ("crate_1", "ground_2")})
    return SceneGraph(regions, objects, edges, o_edges, "ground_1")


# ---------------------------------------------------------------------------
# Frontier search.
# ---------------------------------------------------------------------------

def test_goal_equals_start():
    g = open_grid()
    out = frontier_search(g, (2.25, 2.25), (2.25, 2.25))
    assert out.reason == REACHED_GOAL
    assert out.reached == (2.25, 2.25)
    assert out.path == ((2.25, 2.25),)


def test_straight_corridor():
    g = OccupancyGrid.filled(0.5, (0.0, 0.0), 30, 3, OCCUPIED)
    g.cells[1, :] = FREE  # one-cell corridor at y in [0.5, 1.0)
    out = frontier_search(g, (0.25, 0.75), (14.25, 0.75))
    assert out.reason == REACHED_GOAL
    # Corridor length within one cell of the straight-line distance.
    length = sum(((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) ** 0.5
                 for a, b in zip(out.path, out.path[1:]))
    assert length == pytest.approx(14.0, abs=0.5)
    assert out.path[0] == (0.25, 0.75) and out.path[-1] == (14.25, 0.75)


def test_unknown_cells_are_traversable():
    g = OccupancyGrid.filled(0.5, (0.0, 0.0), 30, 30, UNKNOWN)
    g.cells[1, 1] = FREE
    out = frontier_search(g, (0.75, 0.75), (12.75, 0.75))
    assert out.reason == REACHED_GOAL


def test_goal_behind_closed_room_clamps_to_oracle():
    g = open_grid(40, 40)
    # Closed room in the north-east quadrant.
    g.cells[20:36, 20:36] = OCCUPIED
    g.cells[22:34, 22:34] = FREE  # interior, fully sealed
    start = (2.25, 2.25)
    goal = (14.25, 14.25)  # inside the sealed interior
    out = frontier_search(g, start, goal)
    kind, cell = dijkstra_nearest_reachable(g, start, goal)
    assert kind == "clamped"
    assert out.reason == HIT_OBSTACLE
    assert g.cell_of(out.reached) == cell


def test_budget_exhaustion():
    g = open_grid(60, 60)
    out = frontier_search(g, (1.25, 1.25), (28.25, 1.25), budget=50)
    assert out.reason == EXHAUSTED_BUDGET
    # The clamped point moved toward the goal.
    assert out.reached[0] > 1.25


def test_start_on_occupied_cell_is_an_error():
    g = open_grid()
    g.cells[4, 4] = OCCUPIED
    with pytest.raises(FrontierStartError):
        frontier_search(g, (2.25, 2.25), (5.0, 5.0))


def test_path_cells_never_occupied():
    rng = random.Random(77)
    for _ in range(40):
        g = random_grid(rng, max_side=32)
        free = [(ix, iy) for ix in range(g.width) for iy in range(g.height)
                if g.cells[iy, ix] == FREE]
        if not free:
            continue
        s = g.center_of(*rng.choice(free))
        goal = (rng.uniform(0, g.width * 0.5), rng.uniform(0, g.height * 0.5))
        out = frontier_search(g, s, goal)
        for p in out.path:
            assert g.state_at(*g.cell_of(p)) != OCCUPIED


def test_frontier_matches_oracle_on_random_grids():
    # Small version of the acceptance sweep; the full 1000-grid run lives in
    # the acceptance suite.
    rng = random.Random(123)
    for _ in range(100):
        g = random_grid(rng, max_side=32)
        free = [(ix, iy) for ix in range(g.width) for iy in range(g.height)
                if g.cells[iy, ix] == FREE]
        if not free:
            continue
        s_cell = rng.choice(free)
        start = g.center_of(*s_cell)
        goal_cell = (rng.randrange(g.width), rng.randrange(g.height))
        goal = g.center_of(*goal_cell)
        out = frontier_search(g, start, goal)
        kind, cell = dijkstra_nearest_reachable(g, start, goal)
        if kind == "reached":
            assert out.reason == REACHED_GOAL
            assert g.cell_of(out.reached) == cell
        else:
            assert out.reason == HIT_OBSTACLE
            assert g.cell_of(out.reached) == cell


# ---------------------------------------------------------------------------
# Feedback.
# ---------------------------------------------------------------------------

def test_feedback_unknown_behavior_lists_library():
    call = parse_call("gotoo(ground_1)")
    msg = feedback_for(call, UNKNOWN_BEHAVIOR, graph_with_chain())
    assert "gotoo" in msg
    for name in ("goto", "map_region", "explore_region", "extend_map", "inspect",
                 "set_labels", "clarify", "answer", "replan"):
        assert name in msg


def test_feedback_unreachable_names_node_and_nearest():
    graph = graph_with_chain()
    msg = feedback_for(Goto("island_1"), UNREACHABLE, graph, detail="island_1")
    assert "island_1 is unreachable from your current location" in msg
    assert "Consider exploring" in msg
    assert "ground_2" in msg  # the closest reachable node to the island


def test_feedback_obstacle_clamp_mentions_obstacle():
    msg = feedback_for(ExtendMap(50, 0), OBSTACLE_CLAMP, graph_with_chain(),
                       adjusted=(20.0, 0.0))
    assert "encountering an obstacle" in msg
    msg = feedback_for(ExtendMap(50, 0), BUDGET_CLAMP, graph_with_chain(),
                       adjusted=(20.0, 0.0))
    assert "budget" in msg


# ---------------------------------------------------------------------------
# validate().
# ---------------------------------------------------------------------------

def test_empty_plan_is_empty_report():
    report = validate([], graph_with_chain(), open_grid())
    assert report.valid_sequence == [] and report.feedback == []
    assert report.rejected_at is None


def test_unreachable_goto_rejected_with_feedback():
    report = validate([Goto("island_1")], graph_with_chain(), open_grid())
    assert report.valid_sequence == []
    assert report.rejected_at == 0
    assert "island_1 is unreachable from your current location" in report.feedback[0]


def test_unknown_node_and_behavior_stop_the_walk():
    graph = graph_with_chain()
    report = validate([Goto("ghost_1"), Goto("ground_2")], graph, open_grid())
    assert report.valid_sequence == [] and "ghost_1" in report.feedback[0]
    report = validate([Goto("ground_2"), parse_call("gotoo(ground_1)"), Goto("ground_1")],
                      graph, open_grid())
    assert report.valid_sequence == [Goto("ground_2")]
    assert report.rejected_at == 1


def test_walk_simulates_robot_location():
    # ground_2 is reachable only after the first goto; inspect then moves the
    # simulated robot to the object's vantage region.
    graph = graph_with_chain()
    report = validate([Goto("ground_2"), Inspect("crate_1", "status"),
                       Goto("ground_1")], graph, open_grid())
    assert len(report.valid_sequence) == 3
    assert report.feedback == []


def test_bad_arguments_rejected():
    graph = graph_with_chain()
    report = validate([ExploreRegion("ground_2", -1.0)], graph, open_grid())
    assert report.valid_sequence == [] and "radius" in report.feedback[0]
    report = validate([SetLabels(())], graph, open_grid())
    assert report.valid_sequence == [] and "label" in report.feedback[0]
    report = validate([parse_call("extend_map(a, b)")], graph, open_grid())
    assert report.valid_sequence == []


def test_inspect_requires_reachable_connected_region():
    graph = graph_with_chain()
    report = validate([Inspect("tower_1", "is it damaged")], graph, open_grid())
    assert report.valid_sequence == []
    assert "tower_1 is unreachable" in report.feedback[0]


def test_extend_map_clamped_by_wall():
    graph = graph_with_chain()
    grid = open_grid(60, 20)
    grid.cells[:, 40] = OCCUPIED  # known wall at x in [20.0, 20.5)
    plan = [SetLabels(("boat",)), ExtendMap(25.0, 2.0)]
    report = validate(plan, graph, grid, robot_pose=(2.0, 2.0))
    assert report.valid_sequence[0] == SetLabels(("boat",))
    clamped = report.valid_sequence[1]
    assert isinstance(clamped, ExtendMap)
    assert clamped.east < 20.0  # kept on the near side of the wall
    kind, cell = dijkstra_nearest_reachable(grid, (2.0, 2.0), (25.0, 2.0))
    assert grid.cell_of((clamped.east, clamped.north)) == cell
    assert any("obstacle" in fb for fb in report.feedback)


def test_extend_map_reaching_goal_is_untouched():
    graph = graph_with_chain()
    report = validate([ExtendMap(15.0, 2.0)], graph, open_grid())
    assert report.valid_sequence == [ExtendMap(15.0, 2.0)]
    assert report.feedback == []


def test_replan_and_answer_pass_syntax():
    graph = graph_with_chain()
    report = validate([Replan(), Answer("done")], graph, open_grid())
    assert report.valid_sequence == [Replan(), Answer("done")]


def test_validate_is_pure_and_deterministic():
    graph = graph_with_chain()
    grid = open_grid(60, 20)
    grid.cells[:, 40] = OCCUPIED
    plan = [Goto("ground_2"), ExtendMap(25.0, 2.0), parse_call("gotoo(x)")]
    r1 = validate(plan, graph, grid)
    r2 = validate(plan, graph, grid)
    assert r1.valid_sequence == r2.valid_sequence
    assert r1.feedback == r2.feedback
    assert plan[1] == ExtendMap(25.0, 2.0)  # input untouched


def test_feedback_nonempty_iff_sequence_differs():
    rng = random.Random(55)
    graph = graph_with_chain()
    grid = open_grid(60, 20)
    grid.cells[:, 40] = OCCUPIED
    pool = [Goto("ground_2"), Goto("island_1"), Goto("ghost_1"),
            MapRegion("ground_1"), ExtendMap(25.0, 2.0), ExtendMap(5.0, 3.0),
            Inspect("crate_1", "status"), Inspect("tower_1", "status"),
            SetLabels(("a",)), Answer("done"), Replan(), parse_call("gotoo(x)")]
    for _ in range(200):
        plan = [rng.choice(pool) for _ in range(rng.randint(0, 5))]
        report = validate(plan, graph, grid, robot_pose=(2.0, 2.0))
        if report.valid_sequence == plan:
            assert report.feedback == []
        else:
            assert report.feedback
