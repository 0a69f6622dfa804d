"""CSV, metadata, and event-log emission.

Time-series CSV schema (fixed): ``t,N_mean,N_sd,A_mean,A_sd,ratio_mean,ratio_sd``
with one row per sweep. Catch-up curve CSV: ``q,tc_mean,tc_sd,fraction_reached``.
Floats carry 12 significant digits. The metadata file doubles as a config
file: plain lines are config keys, informational records are comments.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Optional

from .dynamics import EventRecord
from .ensemble import EnsembleStats, TcCurve
from .params import SimParams

TIMESERIES_HEADER = "t,N_mean,N_sd,A_mean,A_sd,ratio_mean,ratio_sd"
TC_CURVE_HEADER = "q,tc_mean,tc_sd,fraction_reached"


def _fmt(x: float) -> str:
    return format(x, ".12g")


def emit_timeseries_csv(stats: EnsembleStats, path: str | Path) -> Path:
    path = Path(path)
    lines = [TIMESERIES_HEADER]
    for i in range(len(stats.t)):
        lines.append(",".join((
            str(int(stats.t[i])),
            _fmt(stats.n_mean[i]),
            _fmt(stats.n_sd[i]),
            _fmt(stats.a_mean[i]),
            _fmt(stats.a_sd[i]),
            _fmt(stats.ratio_mean[i]),
            _fmt(stats.ratio_sd[i]),
        )))
    path.write_text("\n".join(lines) + "\n")
    return path


def emit_tc_curve_csv(curve: TcCurve, path: str | Path) -> Path:
    path = Path(path)
    lines = [TC_CURVE_HEADER]
    for i in range(len(curve.q)):
        lines.append(",".join((
            _fmt(curve.q[i]),
            _fmt(curve.tc_mean[i]),
            _fmt(curve.tc_sd[i]),
            _fmt(curve.fraction_reached[i]),
        )))
    path.write_text("\n".join(lines) + "\n")
    return path


def metadata_text(params: SimParams, scenario: str, replicas: int,
                  version: str, max_renorm_error: Optional[float] = None,
                  notes: Iterable[str] = ()) -> str:
    """Render run metadata; the plain lines round-trip as a config file."""
    lines = [
        "# techmarket run metadata; reusable as a config file",
        f"# version={version}",
        "# replica k stream seed: SeedSequence(entropy=seed, spawn_key=(k,))",
        f"scenario={scenario}",
        f"seed={params.seed}",
        f"replicas={replicas}",
        f"sigma={params.sigma!r}",
        f"s={params.s!r}",
        f"b={params.b!r}",
        f"nmin={params.n_min}",
        f"omega_s={params.omega_s!r}",
        f"c={params.c!r}",
        f"q={params.q!r}",
        f"policy={params.policy.value}",
        f"variant={params.variant.value}",
        f"lx={params.lx}",
        f"ly={params.ly}",
        f"tmax={params.t_max}",
    ]
    if max_renorm_error is not None:
        lines.append(f"# max_renorm_error={max_renorm_error:.6e}")
    lines.extend(f"# {note}" for note in notes)
    return "\n".join(lines) + "\n"


def emit_run_metadata(path: str | Path, params: SimParams, scenario: str,
                      replicas: int, version: str,
                      max_renorm_error: Optional[float] = None,
                      notes: Iterable[str] = ()) -> Path:
    path = Path(path)
    path.write_text(metadata_text(params, scenario, replicas, version,
                                  max_renorm_error, notes))
    return path


def event_to_json(event: EventRecord, replica: int) -> str:
    record = {"replica": replica, "t": event.sweep, "firm": event.firm,
              "kind": event.kind.name.lower()}
    if event.partner is not None:
        record["partner"] = event.partner
    if event.child is not None:
        record["child"] = event.child
    if event.rescued:
        record["rescued"] = True
    return json.dumps(record, separators=(",", ":"))


def emit_event_log(path: str | Path,
                   events_by_replica: Iterable[tuple[int, Iterable[EventRecord]]],
                   ) -> Path:
    """Line-delimited JSON event log, ordered by replica then sweep."""
    path = Path(path)
    with path.open("w") as fh:
        for replica, events in events_by_replica:
            for event in events:
                fh.write(event_to_json(event, replica))
                fh.write("\n")
    return path
