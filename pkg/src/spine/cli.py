"""Command-line entry points: run missions, replay transcripts, run the
validation-ablation study, lint plans, and serve the operator console bridge.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .backends import (
    DEFAULT_CREDENTIAL_ENV,
    AdversarialBackend,
    AdversarialPolicy,
    BackendConfig,
    HttpBackend,
    ScriptedBackend,
    ScriptedPolicy,
)
from .config import EngineConfig
from .engine import COMPLETED, parse_plan, ParseFailure, replay_transcript, run_mission
from .harness import METHOD_RUNNERS, run_ablation
from .scenarios import load_scenario
from .validation import validate
from .world import OccupancyGrid
from . import scene_graph as sg

logger = logging.getLogger(__name__)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spine",
        description="Receding-horizon semantic mission planner and simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a mission and write transcript + metrics")
    run_p.add_argument("--scenario", required=True, help="scenario file or built-in name")
    run_p.add_argument("--backend", choices=("http", "scripted", "replay"),
                       default="scripted")
    run_p.add_argument("--method", choices=tuple(METHOD_RUNNERS), default="online",
                       help="online planner, explicit tasking, or two-stage baseline")
    run_p.add_argument("--endpoint", default="", help="chat-completions URL (http backend)")
    run_p.add_argument("--model", default="", help="model name (http backend)")
    run_p.add_argument("--credential-env", default=DEFAULT_CREDENTIAL_ENV,
                       help="environment variable holding the API key")
    run_p.add_argument("--out", default="out", help="output directory")
    run_p.add_argument("--no-validate", action="store_true",
                       help="bypass the validation module (for studies)")
    _add_common(run_p)

    replay_p = sub.add_parser("replay", help="re-execute a transcript and verify byte identity")
    replay_p.add_argument("--transcript", required=True)
    _add_common(replay_p)

    ablate_p = sub.add_parser("ablate", help="success vs prior-removal fraction, validated vs not")
    ablate_p.add_argument("--scenario", required=True)
    ablate_p.add_argument("--fractions", default="0,0.25,0.5,0.75",
                          help="comma-separated removal fractions")
    ablate_p.add_argument("--trials", type=int, default=50)
    ablate_p.add_argument("--out", default="out")
    _add_common(ablate_p)

    val_p = sub.add_parser("validate", help="lint a plan against a graph and occupancy grid")
    val_p.add_argument("--plan", required=True, help="plan document or bare call list file")
    val_p.add_argument("--graph", required=True, help="scene graph JSON file")
    val_p.add_argument("--grid", required=True, help="occupancy grid PGM file")
    val_p.add_argument("--resolution", type=float, default=0.5)
    val_p.add_argument("--origin", default="0,0", help="grid origin 'east,north'")
    _add_common(val_p)

    serve_p = sub.add_parser("serve", help="serve the operator console bridge")
    serve_p.add_argument("--scenario", required=True)
    serve_p.add_argument("--backend", choices=("http", "scripted", "adversarial"),
                         default="scripted")
    serve_p.add_argument("--endpoint", default="")
    serve_p.add_argument("--model", default="")
    serve_p.add_argument("--credential-env", default=DEFAULT_CREDENTIAL_ENV)
    serve_p.add_argument("--port", type=int, default=8733)
    _add_common(serve_p)
    return parser


def _make_backend(args, scenario):
    if args.backend == "http":
        cfg = BackendConfig(kind="http", endpoint=args.endpoint, model=args.model,
                            credential_env=args.credential_env)
        return HttpBackend(cfg)
    if args.backend == "adversarial":
        if not scenario.adversarial_policy:
            raise SystemExit("scenario has no adversarial policy")
        return AdversarialBackend(AdversarialPolicy.from_dict(scenario.adversarial_policy),
                                  seed=args.seed)
    if not scenario.oracle_policy:
        raise SystemExit("scenario has no scripted oracle policy; use --backend http")
    return ScriptedBackend(ScriptedPolicy.from_dict(scenario.oracle_policy))


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    config = EngineConfig(seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.method != "online":
        result = METHOD_RUNNERS[args.method](scenario, config)
    elif args.backend == "replay":
        raise SystemExit("use the `replay` subcommand to re-run transcripts")
    else:
        backend = _make_backend(args, scenario)
        result = run_mission(scenario, backend, config,
                             validated=not args.no_validate,
                             backend_label=args.backend)

    transcript = out / f"{scenario.name}.transcript.ndjson"
    transcript.write_text("\n".join(result.transcript_lines()) + "\n")
    metrics_path = out / f"{scenario.name}.metrics.json"
    metrics_path.write_text(json.dumps(result.metrics.as_dict(), indent=2) + "\n")
    print(f"mission {scenario.name}: {result.state}"
          + (f" ({result.reason})" if result.reason else ""))
    print(f"  success={result.metrics.success} time={result.metrics.time:.1f}s "
          f"distance={result.metrics.distance:.1f}m "
          f"interactions={result.metrics.interactions} queries={result.metrics.queries}")
    print(f"  transcript: {transcript}")
    return 0 if (result.state == COMPLETED and result.metrics.success) else 1


def cmd_replay(args) -> int:
    original = Path(args.transcript).read_text().splitlines()
    result = replay_transcript(original)
    fresh = result.transcript_lines()
    if fresh == [ln for ln in original if ln.strip()]:
        print(f"replay ok: {len(fresh)} events, byte-identical")
        return 0
    for i, (a, b) in enumerate(zip(original, fresh)):
        if a != b:
            print(f"replay diverged at event {i}:\n  recorded: {a[:200]}\n  replayed: {b[:200]}")
            return 1
    print(f"replay diverged: event count {len(original)} vs {len(fresh)}")
    return 1


def cmd_ablate(args) -> int:
    scenario = load_scenario(args.scenario)
    fractions = [float(f) for f in args.fractions.split(",") if f.strip()]
    result = run_ablation(scenario, fractions, args.trials,
                          EngineConfig(seed=args.seed), base_seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{scenario.name}.ablation.csv").write_text(result.to_csv())
    print(result.to_text())
    print(f"  table: {out / f'{scenario.name}.ablation.csv'}")
    return 0


def cmd_validate(args) -> int:
    plan_text = Path(args.plan).read_text().strip()
    doc = parse_plan(plan_text)
    if isinstance(doc, ParseFailure):
        # Also accept a bare bracketed call list.
        from .calls import CallSyntaxError, parse_call_list
        try:
            calls = parse_call_list(plan_text)
        except CallSyntaxError:
            print(f"plan could not be parsed: {doc.detail}")
            return 0
    else:
        calls = doc.calls
    graph = sg.deserialize(Path(args.graph).read_text())
    origin = tuple(float(x) for x in args.origin.split(","))
    grid = OccupancyGrid.from_pgm(args.grid, args.resolution, origin)
    report = validate(calls, graph, grid)
    print("valid sequence:")
    from .calls import format_call
    for call in report.valid_sequence:
        print(f"  {format_call(call)}")
    if report.rejected_at is not None:
        print(f"rejected at call index {report.rejected_at}")
    if report.feedback:
        print("feedback:")
        for fb in report.feedback:
            print(f"  {fb}")
    else:
        print("feedback: none")
    return 0


def cmd_serve(args) -> int:
    from .bridge import ConsoleBridge, serve

    scenario = load_scenario(args.scenario)
    bridge = ConsoleBridge(scenario, lambda: _make_backend(args, scenario),
                           EngineConfig(seed=args.seed))
    server = serve(bridge, args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


COMMANDS = {
    "run": cmd_run,
    "replay": cmd_replay,
    "ablate": cmd_ablate,
    "validate": cmd_validate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else
        logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except SystemExit:
        raise
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
