"""Mission metrics, normalization against a baseline method, and report
rendering (CSV and aligned text)."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

METRIC_NAMES = ("time", "distance", "interactions", "queries")


@dataclass
class MissionMetrics:
    success: bool = False
    time: float = 0.0          # simulated seconds
    distance: float = 0.0      # meters
    interactions: int = 0
    queries: int = 0

    def as_dict(self) -> dict:
        return {"success": self.success, "time": self.time, "distance": self.distance,
                "interactions": self.interactions, "queries": self.queries}


@dataclass
class NormalizedReport:
    """Per-method percentages of the baseline for each metric; success is the
    raw rate. None marks a ratio with a zero baseline (undefined)."""
    baseline: str
    methods: dict = field(default_factory=dict)  # method -> {metric: pct | None, "success": pct}


def _mean(values):
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def normalize(runs: dict, baseline: str) -> NormalizedReport:
    """runs: method -> scenario -> list of MissionMetrics.

    Each metric is averaged per scenario, divided by the baseline's scenario
    mean, then averaged across scenarios and expressed as a percentage.
    """
    if baseline not in runs:
        raise ValueError(f"baseline method '{baseline}' has no runs")
    base_means = {}
    for scenario, rs in runs[baseline].items():
        if not rs:
            raise ValueError(f"baseline has no runs for scenario '{scenario}'")
        base_means[scenario] = {m: _mean(getattr(r, m) for r in rs) for m in METRIC_NAMES}

    report = NormalizedReport(baseline)
    for method, per_scenario in runs.items():
        row: dict = {}
        all_runs = [r for rs in per_scenario.values() for r in rs]
        row["success"] = 100.0 * _mean(1.0 if r.success else 0.0 for r in all_runs)
        for metric in METRIC_NAMES:
            ratios = []
            for scenario, rs in per_scenario.items():
                if scenario not in base_means or not rs:
                    continue
                base = base_means[scenario][metric]
                if base == 0:
                    ratios.append(None)
                else:
                    ratios.append(_mean(getattr(r, metric) for r in rs) / base)
            defined = [r for r in ratios if r is not None]
            row[metric] = 100.0 * _mean(defined) if defined else None
        report.methods[method] = row
    return report


def _cell(v) -> str:
    return "undefined" if v is None else f"{v:.1f}%"


def report_to_csv(report: NormalizedReport) -> str:
    out = io.StringIO()
    out.write("method,success," + ",".join(METRIC_NAMES) + "\n")
    for method, row in report.methods.items():
        cells = [method, _cell(row["success"])] + [_cell(row[m]) for m in METRIC_NAMES]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def report_to_text(report: NormalizedReport) -> str:
    headers = ["method", "success"] + list(METRIC_NAMES)
    rows = [[method, _cell(row["success"])] + [_cell(row[m]) for m in METRIC_NAMES]
            for method, row in report.methods.items()]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    lines.append(f"(normalized by {report.baseline})")
    return "\n".join(lines) + "\n"
