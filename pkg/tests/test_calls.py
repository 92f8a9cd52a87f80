import pytest

from spine.calls import (
    Answer,
    CallSyntaxError,
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
    constraints_for,
    delta_to_update_call,
    format_call_list,
    format_updates_message,
    parse_call,
    parse_call_list,
    EXPLORABLE,
    REACHABLE,
    SYNTAX,
)
from spine.scene_graph import (
    OBJECT,
    OBJECT_CONNECTION,
    REGION_CONNECTION,
    AddConnection,
    AddNode,
    NoUpdates,
    RemoveConnection,
    RemoveNode,
    UpdateNodeAttributes,
    UpdateRobotLocation,
)


def test_parse_canonical_plan_string():
    calls = parse_call_list(
        "[goto(field_11), map_region(field_11), goto(field_13), map_region(field_13)]")
    assert calls == [Goto("field_11"), MapRegion("field_11"),
                     Goto("field_13"), MapRegion("field_13")]


def test_parse_each_behavior():
    assert parse_call("explore_region(field_11, 10.0)") == ExploreRegion("field_11", 10.0)
    assert parse_call("extend_map(50, -12.5)") == ExtendMap(50.0, -12.5)
    assert parse_call("inspect(tower_1, is this radio tower damaged)") == \
        Inspect("tower_1", "is this radio tower damaged")
    assert parse_call("set_labels([person, barrel])") == SetLabels(("person", "barrel"))
    assert parse_call("set_labels(boat)") == SetLabels(("boat",))
    assert parse_call("clarify(which dock?)") == Clarify("which dock?")
    assert parse_call("replan()") == Replan()


def test_answer_text_keeps_commas_and_parens():
    call = parse_call(
        "answer(There is a shovel, shovel_1, that is near shed_2 and connected to field_13.)")
    assert call == Answer("There is a shovel, shovel_1, that is near shed_2 and "
                          "connected to field_13.")
    nested = parse_call("answer(Found robot_1 at (83, 73), stationary.)")
    assert nested == Answer("Found robot_1 at (83, 73), stationary.")


def test_quoted_arguments_are_stripped():
    assert parse_call('goto("field_11")') == Goto("field_11")
    assert parse_call("inspect('tower_1', 'is it damaged')") == \
        Inspect("tower_1", "is it damaged")


def test_unknown_behavior_is_retained_not_raised():
    call = parse_call("gotoo(field_11)")
    assert call == UnknownCall("gotoo", "field_11")


def test_malformed_known_behavior_is_retained():
    call = parse_call("explore_region(field_11)")
    assert isinstance(call, MalformedCall)
    assert call.name == "explore_region"
    call = parse_call("extend_map(a, b)")
    assert isinstance(call, MalformedCall)


def test_bad_call_shapes_raise():
    with pytest.raises(CallSyntaxError):
        parse_call("not a call")
    with pytest.raises(CallSyntaxError):
        parse_call_list("goto(a), goto(b)")  # missing brackets


def test_empty_plan_parses_to_no_calls():
    assert parse_call_list("[]") == []
    assert parse_call_list("[  ]") == []


def test_format_round_trips():
    calls = [Goto("a_1"), MapRegion("b_2"), ExploreRegion("c_3", 7.5),
             ExtendMap(12.0, -3.25), Inspect("tower_1", "is it damaged"),
             SetLabels(("person", "barrel")), Clarify("which one?"),
             Answer("all clear, nothing found"), Replan()]
    text = format_call_list(calls)
    assert parse_call_list(text) == calls


def test_constraint_sets_match_behavior_table():
    assert constraints_for(Goto("x")) == {SYNTAX, REACHABLE}
    assert constraints_for(MapRegion("x")) == {SYNTAX, REACHABLE}
    assert constraints_for(ExploreRegion("x", 1.0)) == {SYNTAX, REACHABLE, EXPLORABLE}
    assert constraints_for(ExtendMap(0, 0)) == {SYNTAX, EXPLORABLE}
    assert constraints_for(Inspect("x", "q")) == {SYNTAX, REACHABLE}
    for call in (SetLabels(("a",)), Clarify("q"), Answer("a"), Replan()):
        assert constraints_for(call) == {SYNTAX}


# ---------------------------------------------------------------------------
# The update dialect: exact shapes matter, live planners see these bytes.
# ---------------------------------------------------------------------------

def test_update_call_formats():
    assert delta_to_update_call(AddNode(OBJECT, "shovel_1", (1.0, 4.5))) == \
        "add_nodes({ name: shovel_1, type: object})"
    assert delta_to_update_call(AddNode(OBJECT, "shovel_1", (1.0, 4.5)),
                                include_coords=True) == \
        "add_nodes({ name: shovel_1, type: object, coords: [1, 4.5]})"
    assert delta_to_update_call(AddConnection(OBJECT_CONNECTION, "shovel_1", "field_13")) == \
        "add_connections([shovel_1, field_13])"
    assert delta_to_update_call(RemoveNode("shed_1")) == "remove_nodes(shed_1)"
    assert delta_to_update_call(RemoveConnection(REGION_CONNECTION, "a_1", "b_1")) == \
        "remove_connections([a_1, b_1])"
    assert delta_to_update_call(UpdateRobotLocation("field_11")) == \
        "update_robot_location(field_11)"
    assert delta_to_update_call(UpdateNodeAttributes("tower_1", {"inspection": "rusted"})) == \
        "update_node_attributes(tower_1, { inspection: rusted})"
    assert delta_to_update_call(NoUpdates()) == "no_updates()"


def test_updates_message_shapes():
    assert format_updates_message([]) == "updates:[no_updates()]"
    deltas = [AddNode(OBJECT, "shovel_1", (1.0, 4.5)),
              AddConnection(OBJECT_CONNECTION, "shovel_1", "field_13")]
    assert format_updates_message(deltas) == \
        "updates:[add_nodes({ name: shovel_1, type: object}), " \
        "add_connections([shovel_1, field_13])]"
