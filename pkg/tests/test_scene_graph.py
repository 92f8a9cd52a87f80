import json
import random

import pytest

from spine.scene_graph import (
    OBJECT,
    OBJECT_CONNECTION,
    REGION,
    REGION_CONNECTION,
    AddConnection,
    AddNode,
    DeltaError,
    GraphParseError,
    NoUpdates,
    RemoveConnection,
    RemoveNode,
    SceneGraph,
    RegionNode,
    UnknownNodeError,
    UpdateNodeAttributes,
    UpdateRobotLocation,
    apply_delta,
    apply_deltas,
    delta_to_record,
    deserialize,
    name_convention_warnings,
    path_length,
    reachable,
    record_to_delta,
    serialize,
    shortest_path,
)

from util import brute_force_shortest, random_graph

EXAMPLE_GRAPH_TEXT = json.dumps({
    "objects": [
        {"name": "house_1", "coords": [-1, -1]},
        {"name": "house_2", "coords": [-3, -1]},
        {"name": "grocery_store_1", "coords": [-5, -1]},
        {"name": "shed_1", "coords": [1, 3]},
        {"name": "shed_2", "coords": [1, 5]},
    ],
    "regions": [
        {"name": "example_road_1", "coords": [-1, 0]},
        {"name": "example_road_2", "coords": [-2, 0]},
        {"name": "field_11", "coords": [0, 1]},
        {"name": "field_13", "coords": [2, 3]},
    ],
    "object_connections": [
        ["house_1", "example_road_1"],
        ["house_2", "example_road_2"],
        ["shed_1", "field_11"],
        ["shed_2", "field_13"],
    ],
    "region_connections": [
        ["example_road_1", "example_road_2"],
        ["example_road_1", "field_11"],
        ["field_11", "field_13"],
    ],
    "robot_location": "example_road_1",
})


@pytest.fixture
def example_graph():
    return deserialize(EXAMPLE_GRAPH_TEXT)


# ---------------------------------------------------------------------------
# Deltas.
# ---------------------------------------------------------------------------

def test_no_updates_is_identity(example_graph):
    assert apply_delta(example_graph, NoUpdates()) == example_graph


def test_add_object_and_connection(example_graph):
    g = apply_deltas(example_graph, [
        AddNode(OBJECT, "shovel_1", (1.0, 4.5)),
        AddConnection(OBJECT_CONNECTION, "shovel_1", "field_13"),
    ])
    assert len(g.objects) == len(example_graph.objects) + 1
    assert ("shovel_1", "field_13") in g.object_connections
    # input untouched
    assert "shovel_1" not in example_graph.objects


def test_remove_node_drops_incident_edges(example_graph):
    # Count derived by hand: example_road_1 touches house_1 plus two region
    # edges (to example_road_2 and field_11).
    g = apply_delta(example_graph, UpdateRobotLocation("field_11"))
    edges_before = len(g.region_connections) + len(g.object_connections)
    g2 = apply_delta(g, RemoveNode("example_road_1"))
    edges_after = len(g2.region_connections) + len(g2.object_connections)
    assert edges_before - edges_after == 3
    assert "example_road_1" not in g2.regions


def test_remove_robot_location_rejected(example_graph):
    with pytest.raises(DeltaError):
        apply_delta(example_graph, RemoveNode("example_road_1"))


def test_readd_merges_attributes_and_coords(example_graph):
    g = apply_delta(example_graph, AddNode(OBJECT, "house_1", (-1.5, -1.0),
                                           {"roof": "tile"}))
    g = apply_delta(g, AddNode(OBJECT, "house_1", (-1.5, -1.2), {"roof": "slate"}))
    node = g.objects["house_1"]
    assert node.coords == (-1.5, -1.2)
    assert node.attributes == {"roof": "slate"}


def test_dangling_connection_names_missing_node(example_graph):
    with pytest.raises(DeltaError) as err:
        apply_delta(example_graph, AddConnection(REGION_CONNECTION, "field_11", "ghost_7"))
    assert "ghost_7" in str(err.value)


def test_robot_location_must_be_region(example_graph):
    with pytest.raises(DeltaError):
        apply_delta(example_graph, UpdateRobotLocation("house_1"))
    with pytest.raises(DeltaError):
        apply_delta(example_graph, UpdateRobotLocation("nowhere_1"))


def test_update_attributes_merges_last_writer_wins(example_graph):
    g = apply_delta(example_graph, UpdateNodeAttributes("shed_1", {"a": "1", "b": "2"}))
    g = apply_delta(g, UpdateNodeAttributes("shed_1", {"b": "3"}))
    assert g.objects["shed_1"].attributes == {"a": "1", "b": "3"}


def test_delta_fuzz_preserves_invariants():
    rng = random.Random(7)
    for trial in range(60):
        graph = random_graph(rng)
        for _ in range(40):
            roll = rng.random()
            names = sorted(graph.regions) + sorted(graph.objects)
            try:
                if roll < 0.25:
                    kind = REGION if rng.random() < 0.5 else OBJECT
                    delta = AddNode(kind, f"{'ground' if kind == REGION else 'crate'}_{rng.randint(1, 12)}",
                                    (rng.uniform(-9, 9), rng.uniform(-9, 9)))
                elif roll < 0.4:
                    delta = RemoveNode(rng.choice(names))
                elif roll < 0.6:
                    kind = REGION_CONNECTION if rng.random() < 0.6 else OBJECT_CONNECTION
                    delta = AddConnection(kind, rng.choice(names), rng.choice(names))
                elif roll < 0.7:
                    kind = REGION_CONNECTION if rng.random() < 0.6 else OBJECT_CONNECTION
                    delta = RemoveConnection(kind, rng.choice(names), rng.choice(names))
                elif roll < 0.85:
                    delta = UpdateRobotLocation(rng.choice(names))
                else:
                    delta = UpdateNodeAttributes(rng.choice(names), {"k": str(rng.randint(0, 5))})
                graph = apply_delta(graph, delta)
            except DeltaError:
                continue
            graph.check_invariants()


def test_delta_record_round_trip(example_graph):
    deltas = [
        AddNode(OBJECT, "shovel_1", (1.0, 4.5), {"seen": "yes"}),
        AddConnection(OBJECT_CONNECTION, "shovel_1", "field_13"),
        RemoveConnection(REGION_CONNECTION, "example_road_1", "field_11"),
        UpdateRobotLocation("field_11"),
        UpdateNodeAttributes("shed_1", {"x": "1"}),
        RemoveNode("shed_1"),
        NoUpdates(),
    ]
    for d in deltas:
        assert record_to_delta(delta_to_record(d)) == d


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def test_minimal_graph_serializes_with_all_fields():
    g = SceneGraph({"ground_1": RegionNode("ground_1", (0.0, 0.0), {})},
                   {}, frozenset(), frozenset(), "ground_1")
    doc = json.loads(serialize(g))
    assert set(doc) == {"objects", "regions", "object_connections",
                        "region_connections", "robot_location"}
    assert doc["objects"] == [] and doc["object_connections"] == []


def test_example_graph_round_trips(example_graph):
    assert deserialize(serialize(example_graph)) == example_graph


def test_deserialize_rejects_unknown_and_missing_fields():
    doc = json.loads(EXAMPLE_GRAPH_TEXT)
    doc["extra_field"] = 1
    with pytest.raises(GraphParseError) as err:
        deserialize(json.dumps(doc))
    assert "extra_field" in str(err.value)
    assert err.value.offset > 0

    doc = json.loads(EXAMPLE_GRAPH_TEXT)
    del doc["regions"]
    with pytest.raises(GraphParseError) as err:
        deserialize(json.dumps(doc))
    assert "regions" in str(err.value)


def test_deserialize_rejects_bad_coord_arity():
    doc = json.loads(EXAMPLE_GRAPH_TEXT)
    doc["regions"][0]["coords"] = [1, 2, 3]
    with pytest.raises(GraphParseError) as err:
        deserialize(json.dumps(doc))
    assert "coords" in err.value.path


def test_deserialize_rejects_undefined_robot_location():
    doc = json.loads(EXAMPLE_GRAPH_TEXT)
    doc["robot_location"] = "ghost_7"
    with pytest.raises(GraphParseError) as err:
        deserialize(json.dumps(doc))
    assert "ghost_7" in str(err.value)


def test_deserialize_reports_syntax_error_offset():
    with pytest.raises(GraphParseError) as err:
        deserialize('{"objects": [}')
    assert err.value.offset == 13


def test_random_graphs_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        g = random_graph(rng, n_regions=rng.randint(1, 8), n_objects=rng.randint(0, 4))
        assert deserialize(serialize(g)) == g


def test_serialize_of_deserialized_text_is_stable(example_graph):
    text = serialize(example_graph)
    assert serialize(deserialize(text)) == text


def test_name_convention_lint(example_graph):
    assert name_convention_warnings(example_graph) == []
    g = apply_delta(example_graph, AddNode(OBJECT, "WeirdName", (0, 0)))
    warnings = name_convention_warnings(g)
    assert len(warnings) == 1 and "WeirdName" in warnings[0]


# ---------------------------------------------------------------------------
# Search.
# ---------------------------------------------------------------------------

def test_path_to_self_is_single_element(example_graph):
    assert shortest_path(example_graph, "field_11", "field_11") == ["field_11"]


def test_example_paths_match_enumeration(example_graph):
    # Derived by enumerating all simple paths in the 4-region graph.
    assert shortest_path(example_graph, "example_road_1", "field_13") == \
        ["example_road_1", "field_11", "field_13"]
    assert shortest_path(example_graph, "example_road_2", "field_13") == \
        ["example_road_2", "example_road_1", "field_11", "field_13"]
    for frm, to in [("example_road_1", "field_13"), ("example_road_2", "field_13")]:
        assert shortest_path(example_graph, frm, to) == \
            brute_force_shortest(example_graph, frm, to)


def test_unreachable_and_unknown_nodes(example_graph):
    g = SceneGraph(example_graph.regions, example_graph.objects,
                   frozenset(), frozenset(), "example_road_1")
    assert shortest_path(g, "example_road_1", "field_13") is None
    assert reachable(g, "example_road_1", "example_road_1")
    assert not reachable(g, "example_road_1", "field_13")
    with pytest.raises(UnknownNodeError):
        shortest_path(example_graph, "example_road_1", "ghost_9")


def test_lexicographic_tie_break():
    # Unit square with two equal-length routes; the name-ordered one wins.
    regions = {n: RegionNode(n, c, {}) for n, c in
               [("a_1", (0, 0)), ("b_1", (0, 1)), ("c_1", (1, 0)), ("d_1", (1, 1))]}
    edges = frozenset({("a_1", "b_1"), ("a_1", "c_1"), ("b_1", "d_1"), ("c_1", "d_1")})
    g = SceneGraph(regions, {}, edges, frozenset(), "a_1")
    assert shortest_path(g, "a_1", "d_1") == ["a_1", "b_1", "d_1"]


def test_object_reachability_via_connected_regions(example_graph):
    assert reachable(example_graph, "example_road_1", "shed_2")
    g = SceneGraph(example_graph.regions, example_graph.objects,
                   frozenset({("example_road_1", "example_road_2")}),
                   example_graph.object_connections, "example_road_1")
    assert not reachable(g, "example_road_1", "shed_2")


def test_search_matches_brute_force_on_random_graphs():
    rng = random.Random(23)
    for _ in range(150):
        g = random_graph(rng, n_regions=rng.randint(2, 8))
        names = sorted(g.regions)
        frm, to = rng.choice(names), rng.choice(names)
        got = shortest_path(g, frm, to)
        want = brute_force_shortest(g, frm, to)
        if want is None:
            assert got is None
        else:
            assert got == want


def test_adding_edge_never_lengthens_paths():
    rng = random.Random(31)
    for _ in range(80):
        g = random_graph(rng, n_regions=rng.randint(3, 8), edge_prob=0.3)
        names = sorted(g.regions)
        frm, to = rng.choice(names), rng.choice(names)
        before = shortest_path(g, frm, to)
        a, b = rng.sample(names, 2)
        g2 = apply_delta(g, AddConnection(REGION_CONNECTION, a, b))
        after = shortest_path(g2, frm, to)
        if before is not None:
            assert after is not None
            assert path_length(g2, after) <= path_length(g, before) + 1e-9


def test_region_reachability_is_symmetric():
    rng = random.Random(41)
    for _ in range(50):
        g = random_graph(rng, n_regions=6, edge_prob=0.25)
        names = sorted(g.regions)
        for frm in names:
            for to in names:
                assert reachable(g, frm, to) == reachable(g, to, frm)
