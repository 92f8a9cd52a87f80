#!/usr/bin/env python3
"""Author the bundled mission scenarios and write them to src/spine/missions/.

Worlds are drawn programmatically (walls, rivers, buildings) on 0.5 m grids;
graphs, scripted policies, baselines, and success predicates are spelled out
by hand. Run from the repository root:

    python3 scripts/build_missions.py
"""

import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from spine.world import FREE, OCCUPIED, OccupancyGrid, grid_to_rle_rows  # noqa: E402

OUT = ROOT / "src" / "spine" / "missions"
RES = 0.5


def blank(width_m, height_m, origin=(0.0, 0.0)):
    w, h = int(width_m / RES), int(height_m / RES)
    return OccupancyGrid.filled(RES, origin, w, h, FREE)


def fill_rect(grid, x0, x1, y0, y1, value=OCCUPIED):
    """Occupy world-coordinate rectangle [x0, x1) x [y0, y1)."""
    ox, oy = grid.origin
    ix0 = max(0, int(round((x0 - ox) / grid.resolution)))
    ix1 = min(grid.width, int(round((x1 - ox) / grid.resolution)))
    iy0 = max(0, int(round((y0 - oy) / grid.resolution)))
    iy1 = min(grid.height, int(round((y1 - oy) / grid.resolution)))
    grid.cells[iy0:iy1, ix0:ix1] = value


def graph_doc(regions, objects, region_connections, object_connections, robot):
    return {
        "objects": [{"name": n, "coords": list(c)} for n, c in objects],
        "regions": [{"name": n, "coords": list(c)} for n, c in regions],
        "object_connections": [list(e) for e in object_connections],
        "region_connections": [list(e) for e in region_connections],
        "robot_location": robot,
    }


def plan(goal, reasoning, calls):
    return json.dumps({
        "primary_goal": goal,
        "relevant_graph": "",
        "reasoning": reasoning,
        "plan": f"[{calls}]",
    })


def steps(*call_texts):
    """Step-indexed oracle script: one single-action plan per query."""
    rules = []
    for i, (calls, why) in enumerate(call_texts):
        rules.append({"trigger": i, "response": plan("complete the mission", why, calls)})
    return {"rules": rules, "fallback": plan("hold", "No scripted step matched.", "replan()")}


def write(name, doc):
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {path} ({path.stat().st_size} bytes)")


# ---------------------------------------------------------------------------
# shovel_search: the two-round search protocol on the canonical example graph.
# ---------------------------------------------------------------------------

def shovel_search():
    grid = blank(16, 16, origin=(-8.0, -8.0))
    world = {
        "resolution": RES, "origin": [-8.0, -8.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "house_1", "label": "house", "coords": [-1, -1]},
            {"name": "house_2", "label": "house", "coords": [-3, -1]},
            {"name": "grocery_store_1", "label": "grocery_store", "coords": [-5, -1]},
            {"name": "shed_1", "label": "shed", "coords": [1, 3]},
            {"name": "shed_2", "label": "shed", "coords": [1, 5]},
            {"name": "shovel_1", "label": "shovel", "coords": [1.0, 4.5]},
        ],
        "region_hints": {},
    }
    prior = graph_doc(
        regions=[("example_road_1", (-1, 0)), ("example_road_2", (-2, 0)),
                 ("field_11", (0, 1)), ("field_13", (2, 3))],
        objects=[("house_1", (-1, -1)), ("house_2", (-3, -1)),
                 ("grocery_store_1", (-5, -1)), ("shed_1", (1, 3)), ("shed_2", (1, 5))],
        region_connections=[("example_road_1", "example_road_2"),
                            ("example_road_1", "field_11"), ("field_11", "field_13")],
        object_connections=[("house_1", "example_road_1"), ("house_2", "example_road_2"),
                            ("shed_1", "field_11"), ("shed_2", "field_13")],
        robot="example_road_1",
    )
    oracle = {
        "rules": [
            {"trigger": "task:", "response": plan(
                "find a shovel for the user.",
                "No shovels are in the graph, but the scene may be incomplete. Shovels "
                "are often found near sheds, so I will map the region near each shed.",
                "map_region(field_11), map_region(field_13)")},
            {"trigger": "updates:[no_updates()]", "response": plan(
                "find a shovel for the user.",
                "Mapping field_11 near shed_1 found nothing. I will continue my plan "
                "and map field_13 near shed_2.",
                "map_region(field_13)")},
            {"trigger": "add_nodes({ name: shovel_1", "response": plan(
                "find a shovel for the user.",
                "Mapping field_13 near shed_2 found shovel_1 connected to field_13. "
                "This fulfills the request.",
                "answer(There is a shovel, shovel_1, that is near shed_2 and connected to field_13.)")},
        ],
        "fallback": plan("hold", "No scripted step matched.", "replan()"),
    }
    doc = {
        "name": "shovel_search",
        "mission": "I need a shovel. Is there one in the scene?",
        "world": world,
        "sensor": {"detection_radius": 3.0, "min_range": 1.0, "active_labels": ["shovel"]},
        "prior_graph": prior,
        "full_map_graph": prior,
        "success": {"kind": "answer_contains", "keywords": ["shovel_1"]},
        "clarify_responses": [],
        "explicit_task_sequence": [
            "map_region(field_11)", "map_region(field_13)",
            "answer(There is a shovel, shovel_1, near shed_2.)"],
        "oracle_policy": oracle,
        "two_stage_policy": oracle,
        "config": {},
        "seeds": [0],
    }
    write("shovel_search", doc)


# ---------------------------------------------------------------------------
# storm_logistics: route inspection to a supply depot across a blocked bridge.
# ---------------------------------------------------------------------------

def storm_logistics():
    grid = blank(100, 100)
    fill_rect(grid, 58, 62, 0, 100)          # river
    fill_rect(grid, 58, 62, 48, 52, FREE)    # bridge deck
    fill_rect(grid, 58, 62, 48, 52)          # storm debris: the deck is blocked
    world = {
        "resolution": RES, "origin": [0.0, 0.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "supply_depot_1", "label": "depot", "coords": [82, 82]},
            {"name": "debris_1", "label": "debris", "coords": [57, 50],
             "attributes": {"description": "fallen trees across the bridge deck"}},
        ],
        "region_hints": {"bridge_west": [56, 50], "bridge_east": [64, 50]},
    }
    regions = [("ground_1", (20, 20)), ("road_1", (35, 30)), ("road_2", (50, 40)),
               ("road_3", (56, 50)), ("road_4", (64, 50)), ("road_5", (75, 70)),
               ("road_6", (80, 80))]
    chain = [("ground_1", "road_1"), ("road_1", "road_2"), ("road_2", "road_3"),
             ("road_3", "road_4"), ("road_4", "road_5"), ("road_5", "road_6")]
    prior = graph_doc(regions, [("supply_depot_1", (82, 82))], chain,
                      [("supply_depot_1", "road_6")], "ground_1")
    full = graph_doc(regions, [("supply_depot_1", (82, 82)), ("debris_1", (57, 50))],
                     [e for e in chain if e != ("road_3", "road_4")],
                     [("supply_depot_1", "road_6"), ("debris_1", "road_3")], "ground_1")
    answer = ("answer(No - the bridge over the river is blocked by storm debris, so "
              "the route to the supply depot is impassable and the delivery cannot "
              "happen today.)")
    doc = {
        "name": "storm_logistics",
        "mission": ("There was a storm last night. I am worried that impacted "
                    "logistics, because I need to drop off supplies today. "
                    "Can I still do that?"),
        "world": world,
        "sensor": {"detection_radius": 3.0, "min_range": 1.0, "active_labels": []},
        "prior_graph": prior,
        "full_map_graph": full,
        "success": {"kind": "answer_contains", "keywords": ["bridge", "blocked"]},
        "clarify_responses": [],
        "explicit_task_sequence": ["goto(road_6)", answer],
        "oracle_policy": steps(
            ("goto(road_6)",
             "The depot connects to road_6; drive the route to check it is clear."),
            (answer, "Travel stopped at the bridge and the crossing edge was removed; "
                     "the route is blocked."),
        ),
        "two_stage_policy": steps(
            (answer, "The complete map has no crossing over the river; the bridge "
                     "is impassable."),
        ),
        "config": {},
        "seeds": [0],
    }
    write("storm_logistics", doc)


# ---------------------------------------------------------------------------
# missing_robot: search three docks for a silent supply robot.
# ---------------------------------------------------------------------------

def missing_robot():
    grid = blank(100, 100)
    fill_rect(grid, 62, 78, 38, 62)   # warehouse
    fill_rect(grid, 92, 100, 0, 100)  # water
    world = {
        "resolution": RES, "origin": [0.0, 0.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "robot_1", "label": "robot", "coords": [83, 73],
             "attributes": {"description": "ground robot, hauling trailer"},
             "inspection_answers": {
                 "moving": "the robot is stationary; its battery appears drained",
                 "disabled": "the robot is stationary; its battery appears drained"}},
            {"name": "boat_1", "label": "boat", "coords": [87, 76]},
        ],
        "region_hints": {},
    }
    regions = [("ground_1", (15, 50)), ("road_1", (30, 50)), ("road_2", (45, 50)),
               ("road_3", (55, 50)), ("dock_1", (85, 25)), ("dock_2", (85, 50)),
               ("dock_3", (85, 75))]
    chain = [("ground_1", "road_1"), ("road_1", "road_2"), ("road_2", "road_3")]
    prior = graph_doc(regions, [], chain, [], "ground_1")
    full_regions = regions + [("corner_1", (60, 28)), ("corner_2", (72, 26))]
    full_edges = chain + [("road_3", "corner_1"), ("corner_1", "corner_2"),
                          ("corner_2", "dock_1"), ("dock_1", "dock_2"),
                          ("dock_2", "dock_3")]
    full = graph_doc(full_regions,
                     [("robot_1", (83, 73)), ("boat_1", (87, 76))],
                     full_edges,
                     [("robot_1", "dock_3"), ("boat_1", "dock_3")], "ground_1")
    answer = ("answer(Found robot_1 near dock_3 at (83, 73). It is stationary with a "
              "drained battery, which is why it never reported back.)")
    doc = {
        "name": "missing_robot",
        "mission": ("I sent a robot out to collect supplies from an incoming boat. "
                    "I have not heard back. What happened?"),
        "world": world,
        "sensor": {"detection_radius": 3.0, "min_range": 1.0, "active_labels": []},
        "prior_graph": prior,
        "full_map_graph": full,
        "success": {"kind": "all", "of": [
            {"kind": "inspected", "objects": ["robot_1"]},
            {"kind": "answer_contains", "keywords": ["robot_1", "stationary"]}]},
        "clarify_responses": [],
        "explicit_task_sequence": [
            "set_labels([robot, boat])", "goto(road_3)", "extend_map(60, 28)",
            "extend_map(85, 25)", "extend_map(85, 50)", "extend_map(85, 75)",
            "inspect(robot_1, is it moving or disabled)", answer],
        "oracle_policy": steps(
            ("set_labels([robot, boat])",
             "The mission concerns a missing robot near an incoming boat; configure "
             "detection for those."),
            ("goto(road_3)", "Drive to the end of the known road toward the docks."),
            ("extend_map(60, 28)", "No connections reach the docks; extend south of "
                                   "the warehouse toward the first dock."),
            ("extend_map(85, 25)", "Continue to the first dock."),
            ("extend_map(85, 50)", "Nothing at dock_1; continue north to dock_2."),
            ("extend_map(85, 75)", "Nothing at dock_2; continue north to dock_3."),
            ("inspect(robot_1, is it moving or disabled)",
             "The missing robot appeared near dock_3; inspect it."),
            (answer, "Report the robot's position and condition."),
        ),
        "two_stage_policy": steps(
            ("set_labels([robot, boat])", "Configure detection."),
            ("map_region(dock_3)", "The robot was sent to the docks; dock_3 is the "
                                   "farthest along its route, map it."),
            ("inspect(robot_1, is it moving or disabled)", "Inspect the found robot."),
            (answer, "Report findings."),
        ),
        "config": {},
        "seeds": [0],
    }
    write("missing_robot", doc)


# ---------------------------------------------------------------------------
# comms_down: infer and inspect two radio towers behind a ridge.
# ---------------------------------------------------------------------------

def comms_down():
    grid = blank(100, 100)
    fill_rect(grid, 50, 52, 0, 70)    # ridge, south stretch
    fill_rect(grid, 50, 52, 76, 100)  # ridge, north stretch (gap at y in [70, 76))
    world = {
        "resolution": RES, "origin": [0.0, 0.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "tower_1", "label": "tower", "coords": [70, 30],
             "attributes": {"description": "radio tower"},
             "inspection_answers": {
                 "damaged": "the tower is rusted and leaning; several guy-wires have snapped",
                 "condition": "the tower is rusted and leaning; several guy-wires have snapped"}},
            {"name": "tower_2", "label": "tower", "coords": [70, 55],
             "attributes": {"description": "radio tower"},
             "inspection_answers": {
                 "damaged": "the tower is rusted and its antenna mount is cracked",
                 "condition": "the tower is rusted and its antenna mount is cracked"}},
        ],
        "region_hints": {"ridge_gap": [51, 73]},
    }
    regions = [("ground_1", (15, 15)), ("road_1", (25, 25)), ("road_2", (40, 40)),
               ("hill_1", (68, 32)), ("hill_2", (68, 57))]
    prior = graph_doc(
        regions,
        [("tower_1", (70, 30)), ("tower_2", (70, 55))],
        [("ground_1", "road_1"), ("road_1", "road_2")],
        [("tower_1", "hill_1"), ("tower_2", "hill_2")], "ground_1")
    full_regions = regions + [("pass_1", (48, 70)), ("pass_2", (54, 73))]
    full = graph_doc(
        full_regions,
        [("tower_1", (70, 30)), ("tower_2", (70, 55))],
        [("ground_1", "road_1"), ("road_1", "road_2"), ("road_2", "pass_1"),
         ("pass_1", "pass_2"), ("pass_2", "hill_2"), ("hill_2", "hill_1")],
        [("tower_1", "hill_1"), ("tower_2", "hill_2")], "ground_1")
    answer = ("answer(Both radio towers are rusted and damaged: tower_1 is leaning "
              "with snapped guy-wires and tower_2 has a cracked antenna mount. That "
              "is the likely cause of the outage.)")
    doc = {
        "name": "comms_down",
        "mission": "Communications are down, why?",
        "world": world,
        "sensor": {"detection_radius": 3.0, "min_range": 1.0, "active_labels": []},
        "prior_graph": prior,
        "full_map_graph": full,
        "success": {"kind": "all", "of": [
            {"kind": "inspected", "objects": ["tower_1", "tower_2"]},
            {"kind": "answer_contains", "keywords": ["rusted"]}]},
        "clarify_responses": ["Please check both towers and report what you find."],
        "explicit_task_sequence": [
            "set_labels([tower])", "goto(road_2)", "extend_map(48, 70)",
            "extend_map(54, 73)", "extend_map(68, 32)",
            "inspect(tower_1, is this radio tower damaged)", "extend_map(68, 57)",
            "inspect(tower_2, is this radio tower damaged)", answer],
        "oracle_policy": steps(
            ("clarify(Should I inspect both radio towers, or is one enough?)",
             "The mission does not say how thorough to be; ask the user."),
            ("set_labels([tower])",
             "Radio towers are the relevant communication infrastructure."),
            ("goto(road_2)", "Drive to the known map boundary."),
            ("extend_map(48, 70)", "The towers sit east of a ridge with no mapped "
                                   "crossing; head for the gap to the north."),
            ("extend_map(54, 73)", "Pass through the ridge gap."),
            ("extend_map(68, 32)", "Drop south-east to the first tower's hill."),
            ("inspect(tower_1, is this radio tower damaged)", "Inspect the first tower."),
            ("extend_map(68, 57)", "Head north to the second tower's hill."),
            ("inspect(tower_2, is this radio tower damaged)", "Inspect the second tower."),
            (answer, "Both towers inspected; report the damage."),
        ),
        "two_stage_policy": steps(
            ("set_labels([tower])", "Configure detection."),
            ("inspect(tower_1, is this radio tower damaged)",
             "The full map connects both hills; inspect the first tower."),
            ("inspect(tower_2, is this radio tower damaged)", "Inspect the second tower."),
            (answer, "Report the damage."),
        ),
        "config": {},
        "seeds": [0],
    }
    write("comms_down", doc)


# ---------------------------------------------------------------------------
# dock_construction: a new fence blocks the prior route to the dock.
# ---------------------------------------------------------------------------

def dock_construction():
    grid = blank(100, 100)
    fill_rect(grid, 74, 76, 20, 50)   # newly built fence
    fill_rect(grid, 90, 100, 0, 40)   # water by the dock
    world = {
        "resolution": RES, "origin": [0.0, 0.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "fence_1", "label": "fence", "coords": [73.6, 38.2],
             "attributes": {"description": "new construction fence across the road"}},
            {"name": "boat_1", "label": "boat", "coords": [88, 28]},
        ],
        "region_hints": {},
    }
    regions = [("ground_1", (20, 80)), ("road_1", (35, 70)), ("road_2", (50, 60)),
               ("road_3", (70, 40)), ("dock_1", (85, 30))]
    prior = graph_doc(regions, [("boat_1", (88, 28))],
                      [("ground_1", "road_1"), ("road_1", "road_2"),
                       ("road_3", "dock_1")],
                      [("boat_1", "dock_1")], "ground_1")
    full = graph_doc(regions, [("boat_1", (88, 28)), ("fence_1", (73.6, 38.2))],
                     [("ground_1", "road_1"), ("road_1", "road_2"),
                      ("road_2", "road_3")],
                     [("boat_1", "dock_1"), ("fence_1", "road_3")], "ground_1")
    answer = ("answer(Recent construction put a fence across the road just east of "
              "road_3; the route to the dock and your boat is blocked until it is "
              "cleared.)")
    doc = {
        "name": "dock_construction",
        "mission": ("I need to gather supplies from my boat. Has recent construction "
                    "impacted that?"),
        "world": world,
        "sensor": {"detection_radius": 6.0, "min_range": 1.0, "active_labels": []},
        "prior_graph": prior,
        "full_map_graph": full,
        "success": {"kind": "answer_contains", "keywords": ["fence", "blocked"]},
        "clarify_responses": [],
        "explicit_task_sequence": [
            "set_labels([fence, boat])", "goto(road_2)", "extend_map(70, 40)",
            "map_region(dock_1)", answer],
        "oracle_policy": steps(
            ("set_labels([fence, boat])",
             "Construction means fences; the goal involves the boat."),
            ("goto(road_2)", "Follow the known route toward the dock."),
            ("extend_map(70, 40)", "The prior route has a gap; extend toward road_3."),
            ("map_region(dock_1)", "Drive the final stretch to the dock, watching "
                                   "for construction."),
            (answer, "Travel was blocked at a new fence; report it."),
        ),
        "two_stage_policy": steps(
            ("set_labels([fence, boat])", "Configure detection."),
            ("map_region(road_3)", "Check the route toward the dock on the complete map."),
            (answer, "The complete map shows no crossing past the fence; report it."),
        ),
        "config": {},
        "seeds": [0],
    }
    write("dock_construction", doc)


# ---------------------------------------------------------------------------
# air_ground_triage: cover what the UAV cannot see (building interior, trees).
# ---------------------------------------------------------------------------

def air_ground_triage():
    grid = blank(100, 100)
    fill_rect(grid, 30, 50, 30, 31)   # building south wall
    fill_rect(grid, 38, 41, 30, 31, FREE)  # door
    fill_rect(grid, 30, 50, 49, 50)   # north wall
    fill_rect(grid, 30, 31, 30, 50)   # west wall
    fill_rect(grid, 49, 50, 30, 50)   # east wall
    world = {
        "resolution": RES, "origin": [0.0, 0.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "person_1", "label": "person", "coords": [43, 41],
             "inspection_answers": {
                 "injured": "one worker, conscious, complaining of fumes",
                 "help": "one worker, conscious, complaining of fumes"}},
            {"name": "barrel_1", "label": "barrel", "coords": [42, 44],
             "inspection_answers": {"leaking": "the barrel is sealed"}},
            {"name": "barrel_2", "label": "barrel", "coords": [76, 27],
             "inspection_answers": {
                 "leaking": "the barrel is intact; no active leak"}},
        ],
        "region_hints": {"tree_cover": [75, 25]},
    }
    regions = [("ground_1", (20, 20)), ("road_1", (35, 25)), ("road_2", (60, 25)),
               ("road_3", (70, 20))]
    prior = graph_doc(regions, [],
                      [("ground_1", "road_1"), ("road_1", "road_2"),
                       ("road_2", "road_3")], [], "ground_1")
    full_regions = regions + [("door_1", (39.5, 27)), ("inside_1", (39.5, 40)),
                              ("trees_1", (75, 25))]
    full = graph_doc(full_regions,
                     [("person_1", (43, 41)), ("barrel_1", (42, 44)),
                      ("barrel_2", (76, 27))],
                     [("ground_1", "road_1"), ("road_1", "road_2"),
                      ("road_2", "road_3"), ("road_1", "door_1"),
                      ("door_1", "inside_1"), ("road_2", "trees_1")],
                     [("person_1", "inside_1"), ("barrel_1", "inside_1"),
                      ("barrel_2", "trees_1")], "ground_1")
    answer = ("answer(Triage complete. Inside the building: person_1 is conscious "
              "but complaining of fumes, next to barrel_1 which is sealed. Under the "
              "tree cover: barrel_2 is intact with no active leak.)")
    doc = {
        "name": "air_ground_triage",
        "mission": ("You are assisting a high-altitude UAV in responding to a "
                    "chemical spill. Triage regions that are not visible from the air."),
        "world": world,
        "sensor": {"detection_radius": 6.0, "min_range": 1.0, "active_labels": []},
        "prior_graph": prior,
        "full_map_graph": full,
        "success": {"kind": "all", "of": [
            {"kind": "inspected", "objects": ["person_1", "barrel_2"]},
            {"kind": "answer_contains", "keywords": ["person_1", "barrel_2"]}]},
        "clarify_responses": [],
        "explicit_task_sequence": [
            "set_labels([person, barrel])", "goto(road_1)", "extend_map(39.5, 28)",
            "extend_map(39.5, 40)", "inspect(person_1, are you injured or need help)",
            "extend_map(39.5, 26)", "extend_map(60, 25)", "extend_map(75, 25)",
            "inspect(barrel_2, is the barrel leaking)", answer],
        "oracle_policy": steps(
            ("set_labels([person, barrel])",
             "A chemical spill implies people and chemical barrels."),
            ("goto(road_1)", "Drive to the building the UAV cannot see into."),
            ("extend_map(39.5, 28)", "Line up with the door on the south face."),
            ("extend_map(39.5, 40)", "Enter the building through the door."),
            ("inspect(person_1, are you injured or need help)",
             "A person is inside; check on them."),
            ("extend_map(39.5, 26)", "Exit the building the way I came in."),
            ("extend_map(60, 25)", "Head east toward the tree cover."),
            ("extend_map(75, 25)", "Push under the tree canopy."),
            ("inspect(barrel_2, is the barrel leaking)",
             "A barrel sits under the trees; check it."),
            (answer, "Both hidden areas triaged; report."),
        ),
        "two_stage_policy": steps(
            ("set_labels([person, barrel])", "Configure detection."),
            ("map_region(inside_1)", "Map the building interior."),
            ("inspect(person_1, are you injured or need help)", "Check the person."),
            ("map_region(trees_1)", "Map the tree cover."),
            ("inspect(barrel_2, is the barrel leaking)", "Check the barrel."),
            (answer, "Report."),
        ),
        "config": {},
        "seeds": [0],
    }
    write("air_ground_triage", doc)


# ---------------------------------------------------------------------------
# comms_relay: compact inspection world for the validation ablation study.
# The prior is complete; ablation degrades it.
# ---------------------------------------------------------------------------

def comms_relay():
    grid = blank(70, 70)
    fill_rect(grid, 38, 40, 0, 36)    # wall, south stretch
    fill_rect(grid, 38, 40, 44, 70)   # wall, north stretch (gap y in [36, 44))
    world = {
        "resolution": RES, "origin": [0.0, 0.0], "grid_rows": grid_to_rle_rows(grid),
        "objects": [
            {"name": "tower_1", "label": "tower", "coords": [50, 24],
             "inspection_answers": {
                 "damaged": "the tower is rusted through at the base"}},
            {"name": "tower_2", "label": "tower", "coords": [54, 46],
             "inspection_answers": {
                 "damaged": "the tower is rusted and its feed line is severed"}},
        ],
        "region_hints": {},
    }
    # Two redundant prior chains from the start through the ridge gap.
    regions = [("ground_1", (10, 10)), ("road_1", (22, 20)), ("road_2", (34, 38)),
               ("trail_1", (14, 26)), ("trail_2", (30, 40)),
               ("road_6", (46, 36)), ("hill_1", (48, 26)), ("hill_2", (52, 44))]
    edges = [("ground_1", "road_1"), ("road_1", "road_2"), ("road_2", "road_6"),
             ("ground_1", "trail_1"), ("trail_1", "trail_2"), ("trail_2", "road_6"),
             ("road_6", "hill_1"), ("road_6", "hill_2"), ("hill_1", "hill_2")]
    prior = graph_doc(regions, [("tower_1", (50, 24)), ("tower_2", (54, 46))],
                      edges, [("tower_1", "hill_1"), ("tower_2", "hill_2")], "ground_1")
    answer = ("answer(Both relay towers are rusted and damaged; that is the likely "
              "cause of the outage.)")
    doc = {
        "name": "comms_relay",
        "mission": "The relay network is down. Inspect both towers and report.",
        "world": world,
        "sensor": {"detection_radius": 3.0, "min_range": 1.0, "active_labels": []},
        "prior_graph": prior,
        "full_map_graph": prior,
        "success": {"kind": "all", "of": [
            {"kind": "inspected", "objects": ["tower_1", "tower_2"]},
            {"kind": "answer_contains", "keywords": ["rusted"]}]},
        "clarify_responses": [],
        "explicit_task_sequence": [
            "set_labels([tower])", "inspect(tower_1, is this tower damaged)",
            "inspect(tower_2, is this tower damaged)", answer],
        "oracle_policy": steps(
            ("set_labels([tower])", "Configure detection for relay towers."),
            ("inspect(tower_1, is this tower damaged)", "Inspect the first tower."),
            ("inspect(tower_2, is this tower damaged)", "Inspect the second tower."),
            (answer, "Report the damage."),
        ),
        "adversarial_policy": {
            "labels": ["tower"],
            "targets": [
                {"name": "tower_1", "label": "tower", "guess_coords": [48, 26],
                 "query": "is this tower damaged"},
                {"name": "tower_2", "label": "tower", "guess_coords": [52, 44],
                 "query": "is this tower damaged"},
            ],
            "answer_text": ("Both relay towers are rusted and damaged; that is the "
                            "likely cause of the outage."),
            "hallucination_rate": 0.1,
        },
        "config": {"frontier_budget": 1500, "scan_radius": 8.0},
        "seeds": [0],
    }
    write("comms_relay", doc)


if __name__ == "__main__":
    shovel_search()
    storm_logistics()
    missing_robot()
    comms_down()
    dock_construction()
    air_ground_triage()
    comms_relay()
