"""SPINE: a receding-horizon semantic mission planner and simulator for
partially-known environments.

The package bundles a topological scene-graph data model, a deterministic
simulated world (occupancy mapping, detection, inspection), an eight-behavior
library, semantic + spatial plan validation, pluggable planner backends, a
mission/metrics harness with a prior-map ablation study, and a CLI plus
operator-console bridge.
"""

from .calls import (
    Answer,
    Clarify,
    ExploreRegion,
    ExtendMap,
    Goto,
    Inspect,
    MapRegion,
    Replan,
    SetLabels,
    format_call,
    format_call_list,
    parse_call,
    parse_call_list,
)
from .config import EngineConfig
from .engine import (
    MissionEngine,
    MissionResult,
    assemble_system_prompt,
    parse_plan,
    replay_transcript,
    run_mission,
)
from .metrics import MissionMetrics, NormalizedReport, normalize
from .scene_graph import (
    AddConnection,
    AddNode,
    NoUpdates,
    RemoveConnection,
    RemoveNode,
    SceneGraph,
    UpdateNodeAttributes,
    UpdateRobotLocation,
    apply_delta,
    deserialize,
    reachable,
    serialize,
    shortest_path,
)
from .scenarios import Scenario, ablate_prior, evaluate_success, load_scenario
from .validation import FrontierOutcome, ValidationReport, frontier_search, validate
from .world import (
    FREE,
    OCCUPIED,
    UNKNOWN,
    GroundTruthWorld,
    OccupancyGrid,
    RobotState,
    SensorModel,
    scan_traversability,
    sense_objects,
    travel,
    vlm_inspect,
)

__version__ = "0.1.0"
