#!/usr/bin/env python3
"""Reproduce the validation ablation: degrade the prior map by increasing
fractions and compare mission success with and without the validation module,
using the seeded adversarial planner. A few trials per cell keeps this quick;
the acceptance suite runs the full 50."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spine import load_scenario
from spine.harness import run_ablation

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 10
scenario = load_scenario("comms_relay")
print(f"mission: {scenario.mission}")
print(f"{trials} trials per cell; paired degraded priors and planner seeds\n")

result = run_ablation(scenario, [0.0, 0.25, 0.5, 0.75], trials=trials, base_seed=0)
print(result.to_text())
print("The unvalidated arm executes plans as parsed with a straight-line")
print("controller; the validated arm clamps exploration goals via frontier")
print("search and feeds corrective feedback to the planner.")
