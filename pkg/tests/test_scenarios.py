import pytest

from spine.scenarios import (
    BUILTIN_MISSIONS,
    ScenarioError,
    ablate_prior,
    evaluate_success,
    load_scenario,
    scenario_from_dict,
    world_from_dict,
    world_to_dict,
)

from util import mini_scenario_doc


def test_all_builtin_missions_load():
    for name in BUILTIN_MISSIONS:
        scenario = load_scenario(name)
        assert scenario.name == name
        assert scenario.prior_graph.robot_location in scenario.prior_graph.regions
        assert scenario.success["kind"] in ("all", "answer_contains")


def test_load_rejects_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("/nonexistent/path.json")


def test_minimal_scenario_loads():
    scenario = scenario_from_dict(mini_scenario_doc())
    assert scenario.mission.startswith("Is there a crate")
    assert scenario.world.true_objects[0].name == "crate_1"


def test_comms_down_has_two_inspection_targets():
    scenario = load_scenario("comms_down")
    towers = [o for o in scenario.world.true_objects if o.label == "tower"]
    assert len(towers) == 2
    assert {t.name for t in towers} == {"tower_1", "tower_2"}
    # Both are also provided in the prior map.
    assert {"tower_1", "tower_2"} <= set(scenario.prior_graph.objects)


def test_predicate_referencing_unknown_object_is_a_load_error():
    doc = mini_scenario_doc(success={"kind": "inspected", "objects": ["ghost_9"]})
    with pytest.raises(ScenarioError) as err:
        scenario_from_dict(doc)
    assert "ghost_9" in str(err.value)


def test_schema_violation_names_field_path():
    doc = mini_scenario_doc()
    del doc["world"]["grid_rows"]
    with pytest.raises(ScenarioError) as err:
        scenario_from_dict(doc)
    assert "world" in str(err.value) and "grid_rows" in str(err.value)


def test_world_round_trips_through_dict():
    scenario = scenario_from_dict(mini_scenario_doc())
    doc = world_to_dict(scenario.world)
    world2 = world_from_dict(doc)
    assert world2.grid.width == scenario.world.grid.width
    assert (world2.grid.cells == scenario.world.grid.cells).all()
    assert world2.true_objects[0].inspection_answers == \
        scenario.world.true_objects[0].inspection_answers


def test_object_names_assigned_per_label_order():
    doc = mini_scenario_doc()
    doc["world"]["objects"] = [
        {"label": "cone", "coords": [1, 1]},
        {"label": "barrel", "coords": [2, 2]},
        {"label": "cone", "coords": [3, 3]},
    ]
    doc["success"] = {"kind": "answer_contains", "keywords": ["done"]}
    scenario = scenario_from_dict(doc)
    assert [o.name for o in scenario.world.true_objects] == \
        ["cone_1", "barrel_1", "cone_2"]


# ---------------------------------------------------------------------------
# Success evaluation.
# ---------------------------------------------------------------------------

def events_for(terminal="completed", answer="all done", interventions=0,
               inspected=(), visited=()):
    events = [{"type": "meta", "seq": 0,
               "scenario": {"prior_graph": {"robot_location": "ground_1"}}}]
    for name in inspected:
        events.append({"type": "delta", "record": {
            "op": "update_node_attributes", "name": name,
            "attributes": {"inspection": "looked at"}}})
    for region in visited:
        events.append({"type": "delta",
                       "record": {"op": "update_robot_location", "region": region}})
    for _ in range(interventions):
        events.append({"type": "message", "role": "user", "kind": "intervention",
                       "content": "steer"})
    if terminal == "completed":
        events.append({"type": "state", "state": "completed", "detail": answer})
    elif terminal:
        events.append({"type": "state", "state": "failed", "detail": terminal})
    return events


def test_answer_keywords_all_required():
    pred = {"kind": "answer_contains", "keywords": ["bridge", "blocked"]}
    assert evaluate_success(events_for(answer="the Bridge is BLOCKED"), pred)
    assert not evaluate_success(events_for(answer="the bridge is fine"), pred)


def test_partial_inspection_fails_the_pair_predicate():
    pred = {"kind": "inspected", "objects": ["tower_1", "tower_2"]}
    assert not evaluate_success(
        events_for(answer="done", inspected=["tower_1"]), pred)
    assert evaluate_success(
        events_for(answer="done", inspected=["tower_1", "tower_2"]), pred)


def test_failed_runs_never_succeed():
    pred = {"kind": "answer_contains", "keywords": ["done"]}
    assert not evaluate_success(events_for(terminal="query_limit"), pred)


def test_interventions_force_failure():
    pred = {"kind": "answer_contains", "keywords": ["done"]}
    assert not evaluate_success(events_for(answer="done", interventions=1), pred)


def test_visited_includes_start_region():
    pred = {"kind": "visited", "regions": ["ground_1", "dock_3"]}
    assert evaluate_success(events_for(visited=["dock_3"]), pred)
    assert not evaluate_success(events_for(visited=[]), pred)


def test_conjunction_predicate():
    pred = {"kind": "all", "of": [
        {"kind": "answer_contains", "keywords": ["rusted"]},
        {"kind": "inspected", "objects": ["tower_1"]}]}
    good = events_for(answer="it is rusted", inspected=["tower_1"])
    assert evaluate_success(good, pred)
    assert not evaluate_success(events_for(answer="it is rusted"), pred)


# ---------------------------------------------------------------------------
# Prior-map ablation.
# ---------------------------------------------------------------------------

def test_ablate_fraction_zero_is_identity():
    scenario = load_scenario("comms_relay")
    out = ablate_prior(scenario, 0.0, 7)
    assert out.prior_graph == scenario.prior_graph


def test_ablate_fraction_one_leaves_only_the_robot_region():
    scenario = load_scenario("comms_relay")
    out = ablate_prior(scenario, 1.0, 7)
    assert set(out.prior_graph.regions) == {scenario.prior_graph.robot_location}
    assert out.prior_graph.objects == {}
    assert out.prior_graph.region_connections == frozenset()


def test_ablate_removes_exact_count_deterministically():
    scenario = load_scenario("comms_relay")
    graph = scenario.prior_graph
    total = len(graph.regions) + len(graph.objects)
    import math
    want_removed = math.ceil(0.5 * total)
    a = ablate_prior(scenario, 0.5, seed=7)
    b = ablate_prior(scenario, 0.5, seed=7)
    removed_a = (set(graph.regions) | set(graph.objects)) - \
        (set(a.prior_graph.regions) | set(a.prior_graph.objects))
    assert len(removed_a) == want_removed
    assert a.prior_graph == b.prior_graph  # same seed, same graph
    c = ablate_prior(scenario, 0.5, seed=8)
    assert c.prior_graph != a.prior_graph  # almost surely


def test_ablate_never_removes_robot_location():
    scenario = load_scenario("comms_relay")
    for seed in range(20):
        out = ablate_prior(scenario, 0.9, seed)
        assert out.prior_graph.robot_location == scenario.prior_graph.robot_location
