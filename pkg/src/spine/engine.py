"""The receding-horizon mission engine: assembles the planner context, queries
a backend, validates each proposed plan, executes exactly the first valid
action, applies the resulting map deltas, and narrates updates back to the
planner until the mission answers, fails, or hits its limits.

Transcripts are newline-delimited JSON events; replaying one through the
replay backend must reproduce it byte for byte.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import scene_graph as sg
from .backends import BackendError
from .behaviors import BehaviorOutcome, ExecutionContext, execute
from .calls import (
    CallSyntaxError,
    Clarify,
    Replan,
    format_call,
    format_updates_message,
    parse_call,
    parse_call_list,
)
from .config import EngineConfig
from .metrics import MissionMetrics
from .scenarios import Scenario, evaluate_success, scenario_to_dict
from .validation import ValidationReport, validate
from .world import RobotState, grid_to_rle_rows, scan_traversability

logger = logging.getLogger(__name__)

RUNNING = "running"
AWAITING_CLARIFICATION = "awaiting_clarification"
COMPLETED = "completed"
FAILED = "failed"

QUERY_LIMIT = "query_limit"
TIME_LIMIT = "time_limit"
BACKEND_ERROR = "backend_error"
PARSE_LIMIT = "parse_limit"

PROMPT_PARTS = ("role.txt", "perception_api.txt", "planning_api.txt",
                "advice.txt", "examples.txt")


def assemble_system_prompt(config: EngineConfig, asset_dir=None) -> str:
    """Concatenate the prompt parts in their fixed order: role description,
    perception API, planning API, advice, then in-context examples."""
    parts = []
    names = PROMPT_PARTS if config.include_examples else PROMPT_PARTS[:-1]
    for name in names:
        if asset_dir is not None:
            path = Path(asset_dir) / name
            if not path.exists():
                raise FileNotFoundError(f"prompt asset missing: {path}")
            parts.append(path.read_text())
        else:
            ref = resources.files("spine").joinpath(f"prompts/{name}")
            if not ref.is_file():
                raise FileNotFoundError(f"prompt asset missing: prompts/{name}")
            parts.append(ref.read_text())
    return "\n\n".join(p.strip("\n") for p in parts) + "\n"


# ---------------------------------------------------------------------------
# Plan documents.
# ---------------------------------------------------------------------------

PLAN_FIELDS = ("primary_goal", "relevant_graph", "reasoning", "plan")


@dataclass
class PlanDocument:
    primary_goal: str
    relevant_graph: str
    reasoning: str
    plan_text: str
    calls: list


@dataclass
class ParseFailure:
    detail: str
    position: int = 0


def _strip_fences(text: str) -> str:
    t = text.strip()
    if t.startswith("```"):
        lines = t.splitlines()
        if lines[-1].strip().startswith("```"):
            lines = lines[:-1]
        t = "\n".join(lines[1:])
    return t.strip()


def parse_plan(text: str):
    """Strict four-field JSON plan document; the plan string is a bracketed
    behavior-call list. Unknown behavior names survive parsing (semantic
    validation owns that rejection)."""
    body = _strip_fences(text)
    try:
        doc = json.loads(body)
    except json.JSONDecodeError as e:
        return ParseFailure(f"invalid JSON: {e.msg}", e.pos)
    if not isinstance(doc, dict):
        return ParseFailure("plan document must be a JSON object")
    for name in PLAN_FIELDS:
        if name not in doc:
            return ParseFailure(f"missing field '{name}'")
    extra = set(doc) - set(PLAN_FIELDS)
    if extra:
        return ParseFailure(f"unknown field '{sorted(extra)[0]}'")
    plan_value = doc["plan"]
    try:
        if isinstance(plan_value, str):
            calls = parse_call_list(plan_value)
            plan_text = plan_value
        elif isinstance(plan_value, list):
            calls = [parse_call(str(item)) for item in plan_value]
            plan_text = "[" + ", ".join(str(i) for i in plan_value) + "]"
        else:
            return ParseFailure("plan must be a string or a list of call strings")
    except CallSyntaxError as e:
        return ParseFailure(str(e), e.position)
    return PlanDocument(str(doc["primary_goal"]), str(doc["relevant_graph"]),
                        str(doc["reasoning"]), plan_text, calls)


# ---------------------------------------------------------------------------
# Operator interface: scripted for headless runs, queue-backed for the bridge.
# ---------------------------------------------------------------------------

class ScriptedOperator:
    """Feeds scripted clarify replies; optionally a queue of instruction or
    intervention messages polled between rounds."""

    def __init__(self, clarify_responses=(), messages=()):
        self._clarify = list(clarify_responses)
        self._messages = list(messages)  # (kind, text) with kind instruction|intervention

    def clarify_reply(self, question: str) -> str | None:
        return self._clarify.pop(0) if self._clarify else None

    def poll_message(self):
        return self._messages.pop(0) if self._messages else None


@dataclass
class MissionResult:
    state: str
    reason: str = ""
    answer: str = ""
    metrics: MissionMetrics = field(default_factory=MissionMetrics)
    events: list = field(default_factory=list)

    def transcript_lines(self) -> list[str]:
        return [json.dumps(ev, sort_keys=True, separators=(",", ":")) for ev in self.events]


class MissionEngine:
    """Single-threaded loop owning all mutable state. Observers get immutable
    event dicts through event_sink; operators feed messages through the
    operator object."""

    def __init__(self, scenario: Scenario, backend, config: EngineConfig | None = None,
                 operator=None, event_sink=None, validated: bool = True,
                 backend_label: str = "scripted"):
        base = config or EngineConfig()
        self.config = base.override(scenario.config_overrides)
        if not validated:
            self.config = self.config.override({"use_spatial_exec": False})
        self.scenario = scenario
        self.backend = backend
        self.operator = operator or ScriptedOperator(scenario.clarify_responses)
        self.event_sink = event_sink
        self.validated = validated
        self.backend_label = backend_label

        self.ctx = ExecutionContext(
            world=scenario.world,
            graph=scenario.prior_graph,
            local_grid=scenario.world.blank_local_grid(),
            robot=RobotState(
                pose=scenario.prior_graph.regions[scenario.prior_graph.robot_location].coords,
                speed=self.config.speed),
            sensor=scenario.fresh_sensor(),
            config=self.config,
        )
        self.messages: list[dict] = []   # the planner context log
        self.events: list[dict] = []
        self.state = RUNNING
        self.reason = ""
        self.answer = ""
        self.queries = 0
        self.interactions = 0

    # -- event plumbing ------------------------------------------------------

    def _emit(self, event: dict) -> dict:
        event = dict(event, seq=len(self.events))
        self.events.append(event)
        if self.event_sink is not None:
            self.event_sink(event)
        return event

    def _message(self, role: str, content: str, kind: str) -> None:
        self.messages.append({"role": role, "content": content})
        self._emit({"type": "message", "role": role, "content": content, "kind": kind})

    def _deltas(self, deltas) -> None:
        for d in deltas:
            self._emit({"type": "delta", "record": sg.delta_to_record(d)})

    def snapshot(self) -> dict:
        g = self.ctx.local_grid
        return {
            "type": "snapshot",
            "graph": json.loads(sg.serialize(self.ctx.graph)),
            "grid": {"resolution": g.resolution, "origin": list(g.origin),
                     "width": g.width, "height": g.height,
                     "rows": grid_to_rle_rows(g)},
            "robot": {"pose": list(self.ctx.robot.pose),
                      "distance": self.ctx.robot.cumulative_distance,
                      "time": self.ctx.robot.elapsed_time},
            "metrics": self._metrics().as_dict(),
            "state": self.state,
        }

    def _metrics(self) -> MissionMetrics:
        return MissionMetrics(
            success=False,
            time=self.ctx.robot.elapsed_time,
            distance=self.ctx.robot.cumulative_distance,
            interactions=self.interactions,
            queries=self.queries,
        )

    def _fail(self, reason: str, detail: str = "") -> None:
        self.state = FAILED
        self.reason = reason
        self._emit({"type": "state", "state": FAILED, "detail": reason, "note": detail})

    # -- operator input ------------------------------------------------------

    def inject_operator_message(self, text: str, kind: str = "intervention") -> None:
        """Append an operator message as a user turn; counts one interaction."""
        if self.state in (COMPLETED, FAILED):
            raise RuntimeError(f"mission is terminal ({self.state}); message rejected")
        self.interactions += 1
        self._message("user", text, kind)
        if self.state == AWAITING_CLARIFICATION:
            self.state = RUNNING

    def _drain_operator(self) -> None:
        # One message per loop turn: each operator input gets its own
        # plan-execute round.
        msg = self.operator.poll_message()
        if msg is not None:
            kind, text = msg
            self.inject_operator_message(text, kind)

    # -- the loop ------------------------------------------------------------

    def run(self) -> MissionResult:
        cfg = self.config
        self._emit({"type": "meta", "scenario": scenario_to_dict(self.scenario),
                    "config": vars(cfg) | {}, "backend": self.backend_label,
                    "validated": self.validated, "seed": cfg.seed})
        self._message("system", assemble_system_prompt(cfg), "system")
        # Boot scan: seed local knowledge around the start pose.
        boot = scan_traversability(self.ctx.world, self.ctx.local_grid, self.ctx.graph,
                                   self.ctx.robot.pose, cfg.scan_radius,
                                   cfg.d_region, cfg.d_edge)
        outcome0 = BehaviorOutcome()
        self.ctx.apply(boot, outcome0)
        self._deltas(outcome0.deltas)
        self._message("user",
                      f"task: {self.scenario.mission}\n"
                      f"scene graph: {sg.serialize(self.ctx.graph)}", "task")
        self._emit(self.snapshot())

        strikes = 0
        while self.state == RUNNING:
            self._drain_operator()
            if self.queries >= cfg.query_limit:
                self._fail(QUERY_LIMIT)
                break
            try:
                text = self.backend.propose(list(self.messages))
            except BackendError as e:
                self._fail(BACKEND_ERROR, str(e))
                break
            self.queries += 1
            self._message("assistant", text, "plan")

            doc = parse_plan(text)
            if isinstance(doc, ParseFailure):
                strikes += 1
                if strikes >= cfg.parse_limit:
                    self._fail(PARSE_LIMIT, doc.detail)
                    break
                self._message(
                    "user",
                    f"your plan could not be parsed: {doc.detail}. Reply with a valid "
                    f"JSON document containing primary_goal, relevant_graph, reasoning, "
                    f"and plan.", "feedback")
                continue
            strikes = 0
            self._emit({"type": "plan_proposed",
                        "document": {"primary_goal": doc.primary_goal,
                                     "relevant_graph": doc.relevant_graph,
                                     "reasoning": doc.reasoning,
                                     "plan": doc.plan_text}})

            if self.validated:
                report = validate(doc.calls, self.ctx.graph, self.ctx.local_grid,
                                  self.ctx.robot.pose, cfg.frontier_budget)
            else:
                report = ValidationReport(valid_sequence=list(doc.calls))
            for fb in report.feedback:
                self._emit({"type": "feedback", "text": fb})

            if not report.valid_sequence:
                fb = report.feedback or \
                    ["your plan is empty; provide at least one action, or answer() "
                     "if the task is complete"]
                self._message("user", "\n".join(fb), "feedback")
                continue

            first = report.valid_sequence[0]
            if isinstance(first, Replan):
                self._message("user",
                              "replan() is a placeholder and cannot be executed; "
                              "provide the next concrete action.", "feedback")
                continue

            outcome = execute(first, self.ctx)
            self._deltas(outcome.deltas)
            self._emit({"type": "behavior", "call": format_call(first),
                        "blocked": outcome.blocked, "refused": outcome.refused,
                        "user_messages": list(outcome.user_messages),
                        "distance": self.ctx.robot.cumulative_distance,
                        "time": self.ctx.robot.elapsed_time})
            self._emit(self.snapshot())

            if isinstance(first, Clarify):
                self.state = AWAITING_CLARIFICATION
                self._emit({"type": "clarify_asked", "question": first.question})
                reply = self.operator.clarify_reply(first.question)
                if reply is None:
                    self._fail(TIME_LIMIT, "no operator reply to clarify()")
                    break
                self.interactions += 1
                self.state = RUNNING
                self._message("user", reply, "clarify_reply")
                continue

            if outcome.terminal:
                self.state = COMPLETED
                self.answer = outcome.user_messages[-1] if outcome.user_messages else ""
                self._emit({"type": "state", "state": COMPLETED, "detail": self.answer})
                break

            if self.ctx.robot.elapsed_time > cfg.time_limit_s:
                self._fail(TIME_LIMIT)
                break

            # Nominal arrival is implied by executing the action; only surprise
            # location changes (blockage stops) are narrated back.
            arrived_as_planned = (outcome.expected_location is not None and
                                  self.ctx.graph.robot_location == outcome.expected_location)
            shown = [d for d in outcome.deltas
                     if not (isinstance(d, sg.UpdateRobotLocation) and arrived_as_planned)]
            update_msg = format_updates_message(shown, cfg.coords_in_updates)
            if cfg.resend_full_graph:
                update_msg += f"\nscene graph: {sg.serialize(self.ctx.graph)}"
            if report.feedback:
                update_msg += "\n" + "\n".join(report.feedback)
            self._message("user", update_msg, "updates")

        if self.state == RUNNING:  # loop exited without a terminal transition
            self._fail(TIME_LIMIT, "engine loop ended unexpectedly")
        metrics = self._metrics()
        metrics.success = (self.state == COMPLETED and
                           evaluate_success(self.events, self.scenario.success))
        self._emit({"type": "metric", **metrics.as_dict()})
        if self.event_sink is not None:
            self.event_sink(dict(self.snapshot(), seq=len(self.events)))
        return MissionResult(self.state, self.reason, self.answer, metrics, self.events)


def run_mission(scenario: Scenario, backend, config: EngineConfig | None = None,
                validated: bool = True, operator=None, event_sink=None,
                backend_label: str = "scripted") -> MissionResult:
    engine = MissionEngine(scenario, backend, config, operator=operator,
                           event_sink=event_sink, validated=validated,
                           backend_label=backend_label)
    return engine.run()


# ---------------------------------------------------------------------------
# Replay.
# ---------------------------------------------------------------------------

def replay_transcript(lines) -> MissionResult:
    """Re-run a transcript through the replay backend, reproducing the engine
    inputs from the embedded scenario and config. The caller compares bytes."""
    from .backends import ReplayBackend
    from .scenarios import scenario_from_dict

    events = [json.loads(ln) for ln in lines if ln.strip()]
    meta = next(ev for ev in events if ev["type"] == "meta")
    scenario = scenario_from_dict(meta["scenario"])
    config = EngineConfig().override(
        {k: v for k, v in meta["config"].items() if k != "seed"}).override(
        {"seed": meta["config"].get("seed", 0)})
    recorded = [{"role": ev["role"], "content": ev["content"]}
                for ev in events if ev["type"] == "message"]
    backend = ReplayBackend(recorded)
    return run_mission(scenario, backend, config, validated=meta.get("validated", True),
                       backend_label=meta.get("backend", "scripted"))
