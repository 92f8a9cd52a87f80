"""Planner backends: a chat-completions HTTP client, deterministic scripted
policies, a transcript replayer, and a seeded adversarial policy that mixes a
greedy search-and-inspect strategy with hallucinated nodes and coordinates.
"""

from __future__ import annotations

import json
import logging
import os
import random
import re
import time
from dataclasses import dataclass

import requests

logger = logging.getLogger(__name__)

DEFAULT_CREDENTIAL_ENV = "SPINE_API_KEY"


class BackendError(RuntimeError):
    pass


class DivergenceError(BackendError):
    def __init__(self, message: str, offset: int, turn: int):
        super().__init__(f"{message} (turn {turn}, byte {offset})")
        self.offset = offset
        self.turn = turn


@dataclass
class BackendConfig:
    kind: str = "scripted"           # http | scripted | replay
    endpoint: str = ""
    model: str = ""
    temperature: float = 0.0
    timeout_s: float = 60.0
    max_retries: int = 3
    credential_env: str = DEFAULT_CREDENTIAL_ENV

    def __post_init__(self):
        if self.kind == "http" and (not self.endpoint or not self.model):
            raise ValueError("http backend requires an endpoint and a model name")
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must be within [0, 2]")


class HttpBackend:
    """Chat-completions client. The only observable effects are the requests
    it sends and the assistant text it returns; credentials come from the
    environment and are never logged."""

    def __init__(self, config: BackendConfig, session=None, sleeper=time.sleep):
        self.config = config
        self.session = session or requests.Session()
        self.sleeper = sleeper

    def _scrub(self, text: str) -> str:
        key = os.environ.get(self.config.credential_env, "")
        return text.replace(key, "***") if key else text

    def propose(self, messages) -> str:
        if not messages:
            raise BackendError("cannot query with an empty context")
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.credential_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        body = {
            "model": self.config.model,
            "messages": [{"role": m["role"], "content": m["content"]} for m in messages],
            "temperature": self.config.temperature,
        }
        delay = 1.0
        last_error = "no attempts made"
        for attempt in range(self.config.max_retries + 1):
            try:
                resp = self.session.post(self.config.endpoint, json=body,
                                         headers=headers, timeout=self.config.timeout_s)
            except requests.RequestException as e:
                last_error = self._scrub(f"transport failure: {e}")
            else:
                if resp.status_code == 200:
                    try:
                        return resp.json()["choices"][0]["message"]["content"]
                    except (ValueError, KeyError, IndexError) as e:
                        raise BackendError(f"malformed completion response: {e}")
                if resp.status_code < 500 and resp.status_code != 429:
                    raise BackendError(f"backend rejected request: HTTP {resp.status_code}")
                last_error = f"HTTP {resp.status_code}"
            if attempt < self.config.max_retries:
                logger.debug("retrying after %s (attempt %d)", last_error, attempt + 1)
                self.sleeper(delay)
                delay *= 2
        raise BackendError(f"exhausted retries: {last_error}")


@dataclass
class ScriptedRule:
    trigger: object  # int: fires at that query index; str: substring of the last user message
    response: str


@dataclass
class ScriptedPolicy:
    rules: list
    fallback: str

    @classmethod
    def from_dict(cls, doc: dict) -> "ScriptedPolicy":
        rules = [ScriptedRule(r["trigger"], r["response"]) for r in doc.get("rules", [])]
        if "fallback" not in doc:
            raise ValueError("scripted policy requires a fallback response")
        return cls(rules, doc["fallback"])


class ScriptedBackend:
    """Deterministic planner: rules are consumed top-down, each firing at most
    once when its trigger matches the current step or last user message."""

    def __init__(self, policy: ScriptedPolicy):
        self.policy = policy
        self.step = 0
        self.consumed: set[int] = set()

    def propose(self, messages) -> str:
        last_user = next((m["content"] for m in reversed(messages)
                          if m["role"] == "user"), "")
        response = self.policy.fallback
        for i, rule in enumerate(self.policy.rules):
            if i in self.consumed:
                continue
            hit = (rule.trigger == self.step if isinstance(rule.trigger, int)
                   else str(rule.trigger) in last_user)
            if hit:
                self.consumed.add(i)
                response = rule.response
                break
        self.step += 1
        return response


class ReplayBackend:
    """Replays the assistant turns of a recorded transcript, verifying that
    the engine reproduces every preceding turn byte-for-byte."""

    def __init__(self, recorded_messages):
        # recorded_messages: list of {"role", "content"} in transcript order
        self.recorded = list(recorded_messages)
        self.cursor = 0

    def propose(self, messages) -> str:
        for turn, expected in enumerate(self.recorded):
            if expected["role"] == "assistant" and turn >= len(messages):
                self.cursor = turn
                return expected["content"]
            if turn >= len(messages):
                raise DivergenceError("engine produced fewer turns than the recording", 0, turn)
            got = messages[turn]
            if got["role"] != expected["role"] or got["content"] != expected["content"]:
                offset = _first_divergent_byte(expected, got)
                raise DivergenceError("context diverged from the recording", offset, turn)
        raise DivergenceError("recording exhausted: the engine asked for another turn",
                              0, len(self.recorded))


def _first_divergent_byte(expected, got) -> int:
    a = f"{expected['role']}:{expected['content']}"
    b = f"{got['role']}:{got['content']}"
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return min(len(a), len(b))


# ---------------------------------------------------------------------------
# Adversarial policy: a greedy search-and-inspect planner with hallucinations.
# ---------------------------------------------------------------------------

@dataclass
class InspectionTarget:
    name: str
    label: str
    guess_coords: tuple  # prior belief of where to search
    query: str


@dataclass
class AdversarialPolicy:
    labels: list
    targets: list
    answer_text: str
    hallucination_rate: float = 0.1

    @classmethod
    def from_dict(cls, doc: dict) -> "AdversarialPolicy":
        targets = [InspectionTarget(t["name"], t["label"], tuple(t["guess_coords"]),
                                    t["query"]) for t in doc["targets"]]
        return cls(list(doc["labels"]), targets, doc["answer_text"],
                   float(doc.get("hallucination_rate", 0.1)))


_ADD_OBJECT = re.compile(r"add_nodes\(\{ name: ([A-Za-z0-9_]+), type: object")
_INSPECTED = re.compile(r"update_node_attributes\(([A-Za-z0-9_]+), \{ [^)]*inspection:")
_UNREACHABLE = re.compile(r"node ([A-Za-z0-9_]+) is unreachable")


def _plan_doc(goal: str, reasoning: str, calls: str) -> str:
    return json.dumps({
        "primary_goal": goal,
        "relevant_graph": "",
        "reasoning": reasoning,
        "plan": calls,
    })


class AdversarialBackend:
    """Greedy inspector: configure detection, then for each target either
    inspect it (when known) or push the map toward its believed position;
    answer once every target is inspected. Each turn has a seeded chance of
    hallucinating a nonexistent node or a far-out-of-map coordinate instead.
    """

    EXPLORE_BURST = 4  # extends between successive inspect retries

    def __init__(self, policy: AdversarialPolicy, seed: int = 0):
        self.policy = policy
        self.rng = random.Random(seed)
        self._ghost = 0
        self._exploring: dict[str, int] = {}  # target -> extends since last inspect

    # -- context digestion ---------------------------------------------------

    def _scan_context(self, messages):
        known: set[str] = set()
        inspected: set[str] = set()
        labels_set = False
        last_user = ""
        last_plan_first = ""
        for m in messages:
            if m["role"] == "assistant":
                if "set_labels(" in m["content"]:
                    labels_set = True
                plan = re.search(r'"plan":\s*"\[(.*?)\]"', m["content"], re.S)
                if plan:
                    last_plan_first = plan.group(1).split("(")[0].strip()
            if m["role"] != "user":
                continue
            last_user = m["content"]
            if "scene graph:" in m["content"]:
                try:
                    doc = json.loads(m["content"].split("scene graph:", 1)[1])
                    for node in doc.get("objects", []):
                        known.add(node["name"])
                        if "inspection" in node.get("attributes", {}):
                            inspected.add(node["name"])
                except (ValueError, KeyError):
                    pass
            for name in _ADD_OBJECT.findall(m["content"]):
                known.add(name)
            for name in _INSPECTED.findall(m["content"]):
                inspected.add(name)
        return known, inspected, labels_set, last_user, last_plan_first

    def _hallucinate(self) -> str:
        roll = self.rng.random()
        self._ghost += 1
        if roll < 0.4:
            call = f"goto(zone_{self.rng.randint(10, 99)})"
            why = "I recall a promising zone nearby."
        elif roll < 0.8:
            x = self.rng.choice((-1, 1)) * self.rng.uniform(150, 400)
            y = self.rng.choice((-1, 1)) * self.rng.uniform(150, 400)
            call = f"extend_map({x:.1f}, {y:.1f})"
            why = "Extending far toward where the target should be."
        else:
            call = f"inspect(phantom_{self._ghost}, current status)"
            why = "Inspecting the object I believe is there."
        return _plan_doc("pursue the mission", why, f"[{call}]")

    def propose(self, messages) -> str:
        known, inspected, labels_set, last_user, last_first = \
            self._scan_context(messages)
        if self.rng.random() < self.policy.hallucination_rate:
            return self._hallucinate()
        if not labels_set:
            labels = ", ".join(self.policy.labels)
            return _plan_doc("configure detection",
                             "Set detector labels relevant to the mission.",
                             f"[set_labels([{labels}])]")
        for target in self.policy.targets:
            if target.name in inspected:
                continue
            # Always approach via the believed vantage point, not the object
            # itself: arriving on top of it would put it inside min range.
            guess = target.guess_coords
            extend = _plan_doc(
                f"reach {target.name}",
                f"{target.name} cannot be reached yet; extend the map toward it.",
                f"[extend_map({guess[0]:.1f}, {guess[1]:.1f})]")
            if target.name not in known:
                self._exploring.pop(target.name, None)
                return extend
            unreachable = _UNREACHABLE.search(last_user)
            refused = last_first == "inspect" and "no_updates()" in last_user
            if (unreachable and unreachable.group(1) == target.name) or refused:
                self._exploring[target.name] = 0
                return extend
            if target.name in self._exploring:
                # Explore in bursts rather than re-asking after every step;
                # fresh mentions of the target are a cue to try again.
                if target.name in last_user or \
                        self._exploring[target.name] >= self.EXPLORE_BURST:
                    del self._exploring[target.name]
                else:
                    self._exploring[target.name] += 1
                    return extend
            return _plan_doc(f"inspect {target.name}",
                             f"{target.name} is in the graph; inspect it.",
                             f"[inspect({target.name}, {target.query})]")
        return _plan_doc("report", "All targets inspected; report to the user.",
                         f"[answer({self.policy.answer_text})]")
