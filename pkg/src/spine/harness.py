"""Mission harness: oracle and baseline runners (explicit tasking, two-stage
mapping-then-planning) and the prior-map ablation study comparing validated
against unvalidated execution under an adversarial planner.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from . import scene_graph as sg
from .backends import (
    AdversarialBackend,
    AdversarialPolicy,
    ScriptedBackend,
    ScriptedPolicy,
    ScriptedRule,
)
from .config import EngineConfig
from .engine import MissionResult, ScriptedOperator, run_mission
from .scenarios import Scenario, ablate_prior, scenario_from_dict

logger = logging.getLogger(__name__)


def _plan_doc(call_text: str, goal: str = "follow the operator's instruction") -> str:
    return json.dumps({
        "primary_goal": goal,
        "relevant_graph": "",
        "reasoning": "Executing the instructed step.",
        "plan": f"[{call_text}]",
    })


def run_oracle(scenario: Scenario, config: EngineConfig | None = None,
               validated: bool = True) -> MissionResult:
    """Run the scenario's scripted oracle policy through the full engine."""
    if not scenario.oracle_policy:
        raise ValueError(f"scenario '{scenario.name}' has no oracle policy")
    backend = ScriptedBackend(ScriptedPolicy.from_dict(scenario.oracle_policy))
    return run_mission(scenario, backend, config, validated=validated,
                       backend_label="scripted")


def run_explicit(scenario: Scenario, config: EngineConfig | None = None) -> MissionResult:
    """Explicit-tasking baseline: the operator supplies every behavior, one
    instruction per round; the planner merely echoes each instruction. Each
    instruction counts as one interaction and one query."""
    seq = scenario.explicit_task_sequence
    if not seq:
        raise ValueError(f"scenario '{scenario.name}' has no explicit task sequence")
    rules = [ScriptedRule(f"instruction: {call}", _plan_doc(call)) for call in seq]
    backend = ScriptedBackend(ScriptedPolicy(
        rules, fallback=_plan_doc("replan()", "awaiting instruction")))
    operator = ScriptedOperator(
        clarify_responses=scenario.clarify_responses,
        messages=[("instruction", f"instruction: {call}") for call in seq])
    return run_mission(scenario, backend, config, operator=operator,
                       backend_label="scripted")


def _mapping_tour_cost(graph: sg.SceneGraph, config: EngineConfig) -> tuple[float, float]:
    """Distance/time to visit every region of a complete map before planning:
    greedy nearest-unvisited tour over graph shortest paths, plus one sensing
    sweep per region."""
    unvisited = set(graph.regions) - {graph.robot_location}
    at = graph.robot_location
    distance = 0.0
    while unvisited:
        best = None
        for region in sorted(unvisited):
            path = sg.shortest_path(graph, at, region)
            if path is None:
                continue
            d = sg.path_length(graph, path)
            if best is None or (d, region) < (best[0], best[1]):
                best = (d, region)
        if best is None:
            break  # disconnected leftovers cannot be toured
        distance += best[0]
        at = best[1]
        unvisited.discard(at)
    time = distance / config.speed + config.sense_overhead_s * len(graph.regions)
    return distance, time


def run_two_stage(scenario: Scenario, config: EngineConfig | None = None) -> MissionResult:
    """Two-stage baseline: map everything first (charged to the run), then
    plan over the complete prior."""
    if scenario.full_map_graph is None:
        raise ValueError(f"scenario '{scenario.name}' has no full map graph")
    policy_doc = scenario.two_stage_policy or scenario.oracle_policy
    if not policy_doc:
        raise ValueError(f"scenario '{scenario.name}' has no two-stage policy")
    doc = dict(scenario.doc)
    doc["prior_graph"] = doc["full_map_graph"]
    doc["name"] = f"{scenario.name}~two_stage"
    staged = scenario_from_dict(doc)

    cfg = (config or EngineConfig()).override(staged.config_overrides)
    backend = ScriptedBackend(ScriptedPolicy.from_dict(policy_doc))
    result = run_mission(staged, backend, cfg, backend_label="scripted")
    map_dist, map_time = _mapping_tour_cost(staged.prior_graph, cfg)
    result.metrics.distance += map_dist
    result.metrics.time += map_time
    return result


METHOD_RUNNERS = {
    "online": run_oracle,
    "explicit": run_explicit,
    "two_stage": run_two_stage,
}


# ---------------------------------------------------------------------------
# Ablation: validation on/off as the prior map decays.
# ---------------------------------------------------------------------------

@dataclass
class AblationResult:
    fractions: list
    trials: int
    success_rates: dict = field(default_factory=dict)  # method -> [rate per fraction]

    def to_csv(self) -> str:
        lines = ["fraction," + ",".join(self.success_rates)]
        for i, f in enumerate(self.fractions):
            row = [f"{f:g}"] + [f"{self.success_rates[m][i]:.3f}" for m in self.success_rates]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        methods = list(self.success_rates)
        header = "fraction  " + "  ".join(f"{m:>12}" for m in methods)
        lines = [header]
        for i, f in enumerate(self.fractions):
            cells = "  ".join(f"{self.success_rates[m][i]:>11.1%}" for m in methods)
            lines.append(f"{f:>8g}  {cells}")
        lines.append(f"({self.trials} trials per cell)")
        return "\n".join(lines) + "\n"


def _trial_seed(base_seed: int, fraction_index: int, trial: int) -> int:
    return base_seed * 1_000_003 + fraction_index * 10_007 + trial


def run_ablation(scenario: Scenario, fractions, trials: int,
                 config: EngineConfig | None = None, base_seed: int = 0,
                 methods=("validated", "unvalidated")) -> AblationResult:
    """For each prior-removal fraction, run paired trials (same degraded prior
    and same adversarial planner seed) with and without the validation module;
    report success rates."""
    if not scenario.adversarial_policy:
        raise ValueError(f"scenario '{scenario.name}' has no adversarial policy")
    result = AblationResult(list(fractions), trials,
                            {m: [] for m in methods})
    for fi, fraction in enumerate(fractions):
        wins = {m: 0 for m in methods}
        for trial in range(trials):
            seed = _trial_seed(base_seed, fi, trial)
            degraded = ablate_prior(scenario, fraction, seed)
            for method in methods:
                policy = AdversarialPolicy.from_dict(scenario.adversarial_policy)
                backend = AdversarialBackend(policy, seed=seed + 1)
                run = run_mission(degraded, backend, config,
                                  validated=(method == "validated"),
                                  backend_label="scripted")
                if run.metrics.success:
                    wins[method] += 1
            logger.debug("fraction %.2f trial %d: %s", fraction, trial, wins)
        for method in methods:
            result.success_rates[method].append(wins[method] / trials)
    return result
