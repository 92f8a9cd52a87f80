#!/usr/bin/env python3
"""Run a bundled mission end to end with its scripted oracle planner and walk
the transcript: plans, executed behaviors, map updates, and final metrics."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spine import load_scenario
from spine.harness import run_explicit, run_oracle, run_two_stage
from spine.metrics import normalize, report_to_text

NAME = sys.argv[1] if len(sys.argv) > 1 else "comms_down"
scenario = load_scenario(NAME)
print(f"mission: {scenario.mission}\n")

result = run_oracle(scenario)
for ev in result.events:
    if ev["type"] == "message" and ev["role"] == "assistant":
        doc = json.loads(ev["content"])
        print(f"plan      > {doc['plan']}")
    elif ev["type"] == "message" and ev.get("kind") in ("updates", "feedback"):
        print(f"mapper    < {ev['content'].splitlines()[0][:100]}")
    elif ev["type"] == "behavior":
        note = ev["blocked"] or ev["refused"] or ""
        print(f"executed  = {ev['call'][:80]}  {note}")
    elif ev["type"] == "clarify_asked":
        print(f"clarify   ? {ev['question']}")

m = result.metrics
print(f"\n{result.state}: success={m.success} time={m.time:.0f}s "
      f"distance={m.distance:.0f}m interactions={m.interactions} queries={m.queries}")

# Compare against the two baselines, normalized by explicit tasking.
runs = {
    "online": {NAME: [m]},
    "explicit": {NAME: [run_explicit(scenario).metrics]},
    "two_stage": {NAME: [run_two_stage(scenario).metrics]},
}
print("\n" + report_to_text(normalize(runs, "explicit")))
