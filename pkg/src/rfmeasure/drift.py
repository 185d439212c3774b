"""Windowed measure series over an ordered log, and their variability statistics."""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from .estimators import NAN
from .evaluator import parallel_map
from .logmodel import EventLog
from .measures import bundle, compute_measure, normalize, select_measures
from .specification import SpecMode, Specification


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class WindowConfig:
    size: int = 50
    slide: int = 50

    def __post_init__(self):
        if self.size < 1 or self.slide < 1:
            raise WindowError("window size and slide must be positive")


@dataclass(frozen=True)
class Window:
    index: int
    offset: int
    log: EventLog
    start: Optional[datetime] = None


def slice_log(log: EventLog, size: int, slide: int) -> list:
    """Full windows of ``size`` consecutive traces at offsets ``0, slide, 2*slide, ...``."""
    WindowConfig(size, slide)
    refs = log.order
    if len(refs) < size:
        raise WindowError(f"log has {len(refs)} traces, fewer than one window of {size}")
    out = []
    for k, off in enumerate(range(0, len(refs) - size + 1, slide)):
        chunk = refs[off:off + size]
        out.append(Window(k, off, log.sublog(chunk), chunk[0].start))
    return out


def dropped_traces(n_traces: int, size: int, slide: int) -> int:
    """Traces after the last full window."""
    if n_traces < size:
        return n_traces
    last = (n_traces - size) // slide * slide
    return n_traces - (last + size)


@dataclass
class WindowSeries:
    windows: list
    values: dict = field(default_factory=dict)  # measure name -> list of floats
    normalized: bool = False

    @property
    def measures(self) -> list:
        return list(self.values)


def measure_series(s: Specification, windows, measures=None, mode: SpecMode = SpecMode.TABLE,
                   normalized: bool = False, threads=None) -> WindowSeries:
    if not windows:
        raise WindowError("no windows")
    measures = list(measures) if measures is not None else select_measures("all")
    bundles = parallel_map(lambda w: bundle(s, w.log, mode), windows, threads)
    values = {}
    for m in measures:
        row = []
        for b in bundles:
            v = compute_measure(m, b)
            row.append(normalize(v, m.range) if normalized else v)
        values[m.name] = row
    return WindowSeries(list(windows), values, normalized)


@dataclass(frozen=True)
class SeriesStats:
    measure: str
    mean: float
    std_dev: float
    cv: float
    count: int
    excluded: int


def stats_of(name: str, values) -> SeriesStats:
    kept = [v for v in values if not math.isnan(v)]
    excluded = len(values) - len(kept)
    if not kept:
        return SeriesStats(name, NAN, NAN, NAN, 0, excluded)
    mean = statistics.fmean(kept)
    std = statistics.pstdev(kept)
    cv = std / mean if mean != 0 else NAN
    return SeriesStats(name, mean, std, cv, len(kept), excluded)


def series_stats(series: WindowSeries) -> list:
    return [stats_of(name, vals) for name, vals in series.values.items()]


def _desc(x: float):
    # NaN after every number; larger numbers first
    return (1, 0.0) if math.isnan(x) else (0, -x)


def sort_stats(stats) -> list:
    """Descending by cv, then std, then mean; NaN last; name breaks ties."""
    return sorted(stats, key=lambda s: (_desc(s.cv), _desc(s.std_dev), _desc(s.mean), s.measure))


# -- output -------------------------------------------------------------------

def fmt_float(x: float) -> str:
    return "NaN" if math.isnan(x) else f"{x:.6f}"


def json_float(x: float):
    return "NaN" if math.isnan(x) else x


def _start(w: Window) -> str:
    return w.start.isoformat() if w.start is not None else ""


def series_to_csv(series: WindowSeries) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["window_index", "window_start", "measure", "value"])
    for k, w in enumerate(series.windows):
        for name, vals in series.values.items():
            wr.writerow([w.index, _start(w), name, fmt_float(vals[k])])
    return buf.getvalue()


def series_to_json(series: WindowSeries, stats=None, extra: dict | None = None) -> str:
    doc = dict(extra or {})
    doc["normalized"] = series.normalized
    doc["windows"] = [{"index": w.index, "offset": w.offset, "start": _start(w) or None,
                       "traces": w.log.cardinality} for w in series.windows]
    doc["series"] = {name: [json_float(v) for v in vals] for name, vals in series.values.items()}
    if stats is not None:
        doc["stats"] = [stats_to_dict(s) for s in stats]
    return json.dumps(doc, indent=2) + "\n"


def stats_to_dict(s: SeriesStats) -> dict:
    return {"measure": s.measure, "mean": json_float(s.mean), "std_dev": json_float(s.std_dev),
            "cv": json_float(s.cv), "count": s.count, "excluded": s.excluded}


def stats_to_csv(stats) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["measure", "mean", "std_dev", "cv", "count", "excluded"])
    for s in stats:
        wr.writerow([s.measure, fmt_float(s.mean), fmt_float(s.std_dev), fmt_float(s.cv),
                     s.count, s.excluded])
    return buf.getvalue()
