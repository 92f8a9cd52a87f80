"""Scenario files: a single JSON document bundling the ground-truth world
(grid as run-length-encoded rows), the prior scene graph, the mission text,
a declarative success predicate, scripted operator replies, baseline task
sequences, and per-scenario engine overrides. Also: the seeded prior-map
ablation used to study how validation copes with degraded priors.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import scene_graph as sg
from .world import (
    GroundTruthWorld,
    SensorModel,
    TrueObject,
    grid_from_rle_rows,
    grid_to_rle_rows,
)


class ScenarioError(ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Scenario:
    name: str
    mission: str
    world: GroundTruthWorld
    sensor: SensorModel
    prior_graph: sg.SceneGraph
    success: dict
    clarify_responses: list = field(default_factory=list)
    explicit_task_sequence: list | None = None   # call-syntax strings
    full_map_graph: sg.SceneGraph | None = None
    oracle_policy: dict | None = None
    two_stage_policy: dict | None = None
    adversarial_policy: dict | None = None
    config_overrides: dict = field(default_factory=dict)
    seeds: list = field(default_factory=lambda: [0])
    doc: dict = field(default_factory=dict)      # the source document, for transcripts

    def fresh_sensor(self) -> SensorModel:
        return SensorModel(self.sensor.detection_radius, self.sensor.min_range,
                           set(self.sensor.active_labels))


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ScenarioError(f"missing field '{key}'", path)
    return doc[key]


def _object_name(entry: dict, counts: dict) -> str:
    if "name" in entry:
        return entry["name"]
    label = entry["label"]
    counts[label] = counts.get(label, 0) + 1
    return f"{label}_{counts[label]}"


def world_from_dict(doc: dict, path: str = "world") -> GroundTruthWorld:
    rows = _require(doc, "grid_rows", path)
    resolution = float(_require(doc, "resolution", path))
    origin = tuple(_require(doc, "origin", path))
    grid = grid_from_rle_rows(rows, resolution, origin)
    objects = []
    counts: dict = {}
    for i, entry in enumerate(doc.get("objects", [])):
        opath = f"{path}.objects[{i}]"
        label = _require(entry, "label", opath)
        coords = tuple(_require(entry, "coords", opath))
        name = _object_name(entry, counts)
        objects.append(TrueObject(name, label, coords,
                                  dict(entry.get("attributes", {})),
                                  dict(entry.get("inspection_answers", {}))))
    hints = {k: tuple(v) for k, v in doc.get("region_hints", {}).items()}
    seen = set()
    for obj in objects:
        if obj.name in seen:
            raise ScenarioError(f"duplicate object name '{obj.name}'", path)
        seen.add(obj.name)
    return GroundTruthWorld(grid, objects, hints)


def world_to_dict(world: GroundTruthWorld) -> dict:
    return {
        "resolution": world.grid.resolution,
        "origin": list(world.grid.origin),
        "grid_rows": grid_to_rle_rows(world.grid),
        "objects": [
            {"name": o.name, "label": o.label, "coords": list(o.coords),
             "attributes": dict(o.attributes),
             "inspection_answers": dict(o.inspection_answers)}
            for o in world.true_objects
        ],
        "region_hints": {k: list(v) for k, v in world.true_region_hints.items()},
    }


PREDICATE_KINDS = ("answer_contains", "inspected", "visited", "all")


def _check_predicate(pred: dict, scenario: "Scenario", path: str):
    kind = _require(pred, "kind", path)
    if kind not in PREDICATE_KINDS:
        raise ScenarioError(f"unknown predicate kind '{kind}'", path)
    if kind == "answer_contains":
        kws = _require(pred, "keywords", path)
        if not kws:
            raise ScenarioError("keywords must be non-empty", path)
    elif kind == "inspected":
        names = {o.name for o in scenario.world.true_objects}
        for obj in _require(pred, "objects", path):
            if obj not in names:
                raise ScenarioError(f"predicate references unknown object '{obj}'", path)
    elif kind == "visited":
        known = set(scenario.prior_graph.regions) | set(scenario.world.true_region_hints)
        if scenario.full_map_graph:
            known |= set(scenario.full_map_graph.regions)
        for region in _require(pred, "regions", path):
            if region not in known:
                raise ScenarioError(f"predicate references unknown region '{region}'", path)
    else:
        for i, sub in enumerate(_require(pred, "of", path)):
            _check_predicate(sub, scenario, f"{path}.of[{i}]")


def scenario_from_dict(doc: dict) -> Scenario:
    name = _require(doc, "name", "$")
    mission = _require(doc, "mission", "$")
    world = world_from_dict(_require(doc, "world", "$"))
    sdoc = doc.get("sensor", {})
    sensor = SensorModel(float(sdoc.get("detection_radius", 3.0)),
                         float(sdoc.get("min_range", 1.0)),
                         set(sdoc.get("active_labels", [])))
    try:
        prior = sg.deserialize(json.dumps(_require(doc, "prior_graph", "$")))
    except sg.GraphParseError as e:
        raise ScenarioError(str(e), "prior_graph")
    full = None
    if doc.get("full_map_graph"):
        try:
            full = sg.deserialize(json.dumps(doc["full_map_graph"]))
        except sg.GraphParseError as e:
            raise ScenarioError(str(e), "full_map_graph")
    scenario = Scenario(
        name=name,
        mission=mission,
        world=world,
        sensor=sensor,
        prior_graph=prior,
        success=_require(doc, "success", "$"),
        clarify_responses=list(doc.get("clarify_responses", [])),
        explicit_task_sequence=doc.get("explicit_task_sequence"),
        full_map_graph=full,
        oracle_policy=doc.get("oracle_policy"),
        two_stage_policy=doc.get("two_stage_policy"),
        adversarial_policy=doc.get("adversarial_policy"),
        config_overrides=dict(doc.get("config", {})),
        seeds=list(doc.get("seeds", [0])),
        doc=doc,
    )
    _check_predicate(scenario.success, scenario, "success")
    return scenario


def scenario_to_dict(scenario: Scenario) -> dict:
    return dict(scenario.doc) if scenario.doc else {
        "name": scenario.name,
        "mission": scenario.mission,
        "world": world_to_dict(scenario.world),
        "sensor": {"detection_radius": scenario.sensor.detection_radius,
                   "min_range": scenario.sensor.min_range,
                   "active_labels": sorted(scenario.sensor.active_labels)},
        "prior_graph": json.loads(sg.serialize(scenario.prior_graph)),
        "success": scenario.success,
    }


BUILTIN_MISSIONS = ("shovel_search", "storm_logistics", "missing_robot",
                    "comms_down", "dock_construction", "air_ground_triage",
                    "comms_relay")


def load_scenario(path_or_name) -> Scenario:
    """Load from a file path, or by built-in mission name."""
    p = str(path_or_name)
    if p in BUILTIN_MISSIONS:
        text = resources.files("spine").joinpath(f"missions/{p}.json").read_text()
    else:
        path = Path(p)
        if not path.exists():
            raise ScenarioError(f"no such scenario file or built-in mission: {p}")
        text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"invalid JSON: {e.msg} (byte {e.pos})")
    return scenario_from_dict(doc)


# ---------------------------------------------------------------------------
# Success evaluation over a transcript.
# ---------------------------------------------------------------------------

def _transcript_facts(events):
    answer = None
    terminal = None
    interventions = 0
    inspected = set()
    visited = set()
    for ev in events:
        t = ev.get("type")
        if t == "meta":
            prior = ev.get("scenario", {}).get("prior_graph", {})
            if prior.get("robot_location"):
                visited.add(prior["robot_location"])
        elif t == "state":
            terminal = ev["state"]
            if ev["state"] == "completed":
                answer = ev.get("detail", "")
        elif t == "message" and ev.get("role") == "user" and ev.get("kind") == "intervention":
            interventions += 1
        elif t == "delta":
            rec = ev.get("record", {})
            if rec.get("op") == "update_robot_location":
                visited.add(rec["region"])
            elif rec.get("op") == "update_node_attributes" and "inspection" in rec.get("attributes", {}):
                inspected.add(rec["name"])
    return terminal, answer, interventions, inspected, visited


def _eval_predicate(pred: dict, answer: str, inspected: set, visited: set) -> bool:
    kind = pred["kind"]
    if kind == "answer_contains":
        text = (answer or "").lower()
        return all(kw.lower() in text for kw in pred["keywords"])
    if kind == "inspected":
        return set(pred["objects"]) <= inspected
    if kind == "visited":
        return set(pred["regions"]) <= visited
    if kind == "all":
        return all(_eval_predicate(p, answer, inspected, visited) for p in pred["of"])
    raise ScenarioError(f"unknown predicate kind '{kind}'", "success")


def evaluate_success(events, predicate: dict) -> bool:
    """A trial succeeds when the mission completed, the predicate holds over
    the transcript, and no unsolicited operator intervention was needed.
    Scripted clarify replies and explicit-tasking instructions do not count
    as interventions."""
    terminal, answer, interventions, inspected, visited = _transcript_facts(events)
    if terminal != "completed" or interventions > 0:
        return False
    return _eval_predicate(predicate, answer, inspected, visited)


# ---------------------------------------------------------------------------
# Prior-map ablation.
# ---------------------------------------------------------------------------

def ablate_prior(scenario: Scenario, fraction: float, seed: int) -> Scenario:
    """Remove ceil(fraction * node count) prior nodes (and incident edges)
    uniformly at random; the robot's location region is never removed."""
    if not (0.0 <= fraction <= 1.0):
        raise ValueError("fraction must be within [0, 1]")
    graph = scenario.prior_graph
    total = len(graph.regions) + len(graph.objects)
    k = math.ceil(fraction * total)
    eligible = sorted((set(graph.regions) | set(graph.objects)) - {graph.robot_location})
    k = min(k, len(eligible))
    rng = random.Random(seed)
    removed = rng.sample(eligible, k)
    for name in removed:
        graph = sg.apply_delta(graph, sg.RemoveNode(name))

    doc = dict(scenario.doc)
    doc["prior_graph"] = json.loads(sg.serialize(graph))
    doc["name"] = f"{scenario.name}~ablated_{fraction:g}_{seed}"
    return scenario_from_dict(doc)
