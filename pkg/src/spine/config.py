"""Tunable engine parameters. Scenario files may override any field through
their `config` block; everything else defaults to desk-scale values."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class EngineConfig:
    speed: float = 0.5                  # m/s travel speed
    sense_overhead_s: float = 2.0       # per object-detection sweep
    inspect_overhead_s: float = 5.0     # per inspection query
    d_region: float = 5.0               # min spacing before a new region is dropped
    d_edge: float = 10.0                # max length of an auto-created region edge
    scan_radius: float = 8.0            # traversability scan radius, meters
    scan_stride: float = 2.5            # meters traveled between en-route scans
    region_merge_eps: float = 0.25      # reuse an existing region this close
    frontier_budget: int | None = None  # cell expansions; None = grid area
    extend_replan_iters: int = 32       # drive-scan-replan rounds inside extend_map
    query_limit: int = 50
    parse_limit: int = 3                # consecutive unparseable replies before failing
    time_limit_s: float = 3600.0        # simulated seconds
    detection_drop_rate: float = 0.0    # probability a detection is missed
    coords_in_updates: bool = False     # include coords in add_nodes update calls
    resend_full_graph: bool = False     # resend the serialized graph each turn
    include_examples: bool = True       # in-context examples in the system prompt
    use_spatial_exec: bool = True       # frontier-path execution for exploration goals
    seed: int = 0

    def override(self, values: dict) -> "EngineConfig":
        known = {f.name for f in fields(self)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return replace(self, **values)
