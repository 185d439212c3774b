"""Events, traces and multiset event logs, plus CSV / XES / text ingestion."""
from __future__ import annotations

import csv
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

log = logging.getLogger(__name__)


class LogFormatError(ValueError):
    """Raised when an event log file cannot be interpreted."""


@dataclass(frozen=True)
class Event:
    activity: str
    attributes: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True, eq=False)
class Trace:
    """A non-empty sequence of events; equality looks at activities only."""

    events: tuple

    def __post_init__(self):
        if not self.events:
            raise ValueError("a trace must contain at least one event")

    @classmethod
    def of(cls, activities: Iterable[str]) -> "Trace":
        return cls(tuple(Event(a) for a in activities))

    @cached_property
    def activities(self) -> tuple:
        return tuple(e.activity for e in self.events)

    @cached_property
    def symbol_masks(self) -> dict:
        """activity -> bitmask of the instants where it holds (bit 0 = instant 1)."""
        masks = {}
        for i, a in enumerate(self.activities):
            masks[a] = masks.get(a, 0) | (1 << i)
        return masks

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.activities)

    def __getitem__(self, i):
        return self.activities[i]

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return self.activities == other.activities

    @cached_property
    def _hash(self) -> int:
        return hash(self.activities)

    def __hash__(self):
        return self._hash

    def reversed(self) -> "Trace":
        return Trace(tuple(reversed(self.events)))

    def __str__(self):
        return "<" + ",".join(self.activities) + ">"


@dataclass(frozen=True)
class CaseRef:
    """One trace occurrence in original log order."""

    entry: int
    case_id: str = ""
    start: Optional[datetime] = None


@dataclass(frozen=True, eq=False)
class EventLog:
    """A multiset of traces.

    ``entries`` holds each distinct trace once with its multiplicity, in order of
    first appearance. ``order`` lists every occurrence (multiplicities expanded)
    in the order the cases appeared in the source, which windowing relies on.
    """

    entries: tuple
    order: tuple = ()

    def __post_init__(self):
        for trace, mult in self.entries:
            if mult < 1:
                raise ValueError("multiplicities must be positive")
        if not self.order:
            order = tuple(CaseRef(i) for i, (_, m) in enumerate(self.entries) for _ in range(m))
            object.__setattr__(self, "order", order)

    @classmethod
    def from_traces(cls, traces: Iterable, case_ids=None, starts=None) -> "EventLog":
        """Build a log from a sequence of traces (Trace objects or activity lists), deduplicating."""
        index = {}
        entries = []
        order = []
        case_ids = list(case_ids) if case_ids is not None else None
        starts = list(starts) if starts is not None else None
        for k, t in enumerate(traces):
            if not isinstance(t, Trace):
                t = Trace.of(t)
            i = index.get(t)
            if i is None:
                i = index[t] = len(entries)
                entries.append([t, 0])
            entries[i][1] += 1
            order.append(CaseRef(i, case_ids[k] if case_ids else str(k + 1),
                                 starts[k] if starts else None))
        return cls(tuple((t, m) for t, m in entries), tuple(order))

    @classmethod
    def from_counts(cls, pairs: Iterable) -> "EventLog":
        """Build from ``(trace, multiplicity)`` pairs; repeated traces are merged."""
        traces = []
        for t, m in pairs:
            traces.extend([t] * m)
        return cls.from_traces(traces)

    @property
    def cardinality(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self):
        return self.cardinality

    @property
    def unique_traces(self) -> tuple:
        return tuple(t for t, _ in self.entries)

    def ordered_traces(self) -> list:
        return [self.entries[ref.entry][0] for ref in self.order]

    def alphabet(self) -> list:
        seen = {}
        for t, _ in self.entries:
            for a in t.activities:
                seen.setdefault(a, None)
        return sorted(seen)

    def sublog(self, refs) -> "EventLog":
        refs = list(refs)
        return EventLog.from_traces([self.entries[r.entry][0] for r in refs],
                                    case_ids=[r.case_id for r in refs],
                                    starts=[r.start for r in refs])


def parse_trace_string(text: str) -> Trace:
    """``"b,c,a"`` -> trace of three events."""
    if text is None or not text.strip():
        raise ValueError("empty trace string")
    tokens = [tok.strip() for tok in text.split(",")]
    if any(not tok for tok in tokens):
        raise ValueError(f"empty activity in trace string {text!r}")
    return Trace.of(tokens)


def log_summary(log_: EventLog) -> dict:
    return {
        "unique_traces": len(log_.entries),
        "cardinality": log_.cardinality,
        "alphabet_size": len(log_.alphabet()),
        "event_count": sum(len(t) * m for t, m in log_.entries),
    }


def _parse_timestamp(value: str) -> datetime:
    value = value.strip()
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    try:
        return datetime.fromisoformat(value)
    except ValueError:
        raise LogFormatError(f"unparsable timestamp {value!r}") from None


def load_csv(path, case_column="case_id", activity_column="activity",
             timestamp_column: Optional[str] = "timestamp") -> EventLog:
    """Group rows by case id; order events by timestamp when that column exists.

    The timestamp column is optional: when the header lacks it, file order is used.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (case_column, activity_column):
            if col not in header:
                raise LogFormatError(f"{path}: missing column {col!r} (have {header})")
        use_ts = bool(timestamp_column) and timestamp_column in header
        cases = {}
        for lineno, row in enumerate(reader, start=2):
            case = row[case_column]
            activity = row[activity_column]
            if case is None or activity is None or activity == "":
                log.warning("%s:%d: skipping row without case or activity", path, lineno)
                continue
            ts = None
            if use_ts and row[timestamp_column]:
                try:
                    ts = _parse_timestamp(row[timestamp_column])
                except LogFormatError as exc:
                    raise LogFormatError(f"{path}:{lineno}: {exc}") from None
            rows = cases.setdefault(case, [])
            rows.append((ts, len(rows), activity))
    traces, ids, starts = [], [], []
    for case, rows in cases.items():
        if use_ts and all(ts is not None for ts, _, _ in rows):
            rows = sorted(rows, key=lambda r: (r[0], r[1]))
        traces.append(Trace.of(a for _, _, a in rows))
        ids.append(case)
        starts.append(rows[0][0])
    if not traces:
        raise LogFormatError(f"{path}: no complete cases")
    return EventLog.from_traces(traces, case_ids=ids, starts=starts)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def load_xes(path) -> EventLog:
    """Read ``<trace>``/``<event>`` elements; activity from ``concept:name``."""
    path = Path(path)
    traces, ids, starts = [], [], []
    skipped = 0
    try:
        for _, elem in ET.iterparse(str(path), events=("end",)):
            if _local(elem.tag) != "trace":
                continue
            case_id = str(len(traces) + skipped + 1)
            activities = []
            first_ts = None
            for child in elem:
                tag = _local(child.tag)
                if tag == "string" and child.get("key") == "concept:name":
                    case_id = child.get("value", case_id)
                elif tag == "event":
                    name = None
                    for attr in child:
                        key = attr.get("key")
                        if key == "concept:name":
                            name = attr.get("value")
                        elif key == "time:timestamp" and first_ts is None and attr.get("value"):
                            first_ts = _parse_timestamp(attr.get("value"))
                    if name is None:
                        raise LogFormatError(
                            f"{path}: event {len(activities) + 1} of trace "
                            f"{len(traces) + skipped + 1} has no concept:name")
                    activities.append(name)
            elem.clear()
            if not activities:
                skipped += 1
                continue
            traces.append(Trace.of(activities))
            ids.append(case_id)
            starts.append(first_ts)
    except ET.ParseError as exc:
        raise LogFormatError(f"{path}: malformed XML: {exc}") from None
    if skipped:
        log.warning("%s: skipped %d empty traces", path, skipped)
    if not traces:
        raise LogFormatError(f"{path}: no traces")
    return EventLog.from_traces(traces, case_ids=ids, starts=starts)


def load_text(path) -> EventLog:
    """One trace per line as ``multiplicity;a,b,c`` (multiplicity optional)."""
    path = Path(path)
    traces = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        mult = 1
        if ";" in line:
            head, line = line.split(";", 1)
            try:
                mult = int(head)
            except ValueError:
                raise LogFormatError(f"{path}:{lineno}: bad multiplicity {head!r}") from None
            if mult < 1:
                raise LogFormatError(f"{path}:{lineno}: multiplicity must be positive")
        try:
            trace = parse_trace_string(line)
        except ValueError as exc:
            raise LogFormatError(f"{path}:{lineno}: {exc}") from None
        traces.extend([trace] * mult)
    if not traces:
        raise LogFormatError(f"{path}: no traces")
    return EventLog.from_traces(traces)


def dump_text(log_: EventLog) -> str:
    return "".join(f"{m};{','.join(t.activities)}\n" for t, m in log_.entries)


def load_log(path, fmt: Optional[str] = None, **csv_options) -> EventLog:
    path = Path(path)
    if fmt is None:
        suffix = path.suffix.lower()
        fmt = {".xes": "xes", ".csv": "csv"}.get(suffix, "txt")
    if fmt == "xes":
        return load_xes(path)
    if fmt == "csv":
        return load_csv(path, **csv_options)
    if fmt == "txt":
        return load_text(path)
    raise LogFormatError(f"unknown log format {fmt!r}")
