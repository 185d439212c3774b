"""Command line entry point: ``rfmeasure {measure,windows,mine,templates}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .drift import (
    WindowError, dropped_traces, fmt_float, json_float, measure_series, series_stats,
    series_to_csv, series_to_json, slice_log, sort_stats, stats_to_csv,
)
from .formula import FormulaSyntaxError
from .logmodel import EventLog, LogFormatError, load_log, log_summary
from .measures import bundle, compute_measure, normalize, select_measures
from .miner import MinerConfig, discover, parse_sweep, threshold_sweep
from .reactive import TEMPLATES, TemplateError, template_names
from .specification import SpecFormatError, SpecMode, dump_spec, load_spec, spec_to_json

log = logging.getLogger("rfmeasure")

USER_ERRORS = (OSError, LogFormatError, SpecFormatError, FormulaSyntaxError, TemplateError,
               WindowError, KeyError, ValueError)


class UsageError(Exception):
    pass


# -- shared -------------------------------------------------------------------

def _load_log(args) -> EventLog:
    opts = {}
    if args.log_format == "csv" or (args.log_format is None and str(args.log).lower().endswith(".csv")):
        opts = {"case_column": args.case_column, "activity_column": args.activity_column,
                "timestamp_column": args.timestamp_column}
    return load_log(args.log, args.log_format, **opts)


def _load_spec(path):
    spec = load_spec(path)
    if spec is None:
        raise UsageError(f"{path}: specification has no rules")
    return spec


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _meta(args) -> dict:
    return {"tool": "rfmeasure", "version": __version__, "mode": args.mode}


# -- measure ------------------------------------------------------------------

def _rows(spec, event_log, scope, measures, mode):
    subjects = [("rule", rf.name, rf) for rf in spec.rfs] + [("specification", spec.name, spec)]
    if scope == "log":
        scopes = [("log", event_log)]
    else:
        scopes = [(f"trace:{k}", t) for k, (t, _) in enumerate(event_log.entries, start=1)]
        scopes.append(("log", event_log))
    rows = []
    for kind, name, subject in subjects:
        for scope_name, target in scopes:
            b = bundle(subject, target, mode)
            raw = {m.name: compute_measure(m, b) for m in measures}
            norm = {m.name: normalize(raw[m.name], m.range) for m in measures}
            rows.append({"subject": name, "kind": kind, "scope": scope_name,
                         "raw": raw, "normalized": norm})
    return rows


def measure_report(args) -> str:
    spec = _load_spec(args.spec)
    event_log = _load_log(args)
    measures = select_measures(args.measures)
    mode = SpecMode(args.mode)
    rows = _rows(spec, event_log, args.scope, measures, mode)
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["subject", "kind", "scope", "measure", "value", "normalized"])
        for r in rows:
            for m in measures:
                wr.writerow([r["subject"], r["kind"], r["scope"], m.name,
                             fmt_float(r["raw"][m.name]), fmt_float(r["normalized"][m.name])])
        return buf.getvalue()
    doc = _meta(args)
    doc["log"] = log_summary(event_log)
    if args.scope == "trace":
        doc["traces"] = [{"id": f"trace:{k}", "multiplicity": m, "activities": list(t.activities)}
                         for k, (t, m) in enumerate(event_log.entries, start=1)]
    doc["measures"] = [{"name": m.name, "range": m.range} for m in measures]
    doc["rows"] = [{"subject": r["subject"], "kind": r["kind"], "scope": r["scope"],
                    "values": {k: json_float(v) for k, v in r["raw"].items()},
                    "normalized": {k: json_float(v) for k, v in r["normalized"].items()}}
                   for r in rows]
    return json.dumps(doc, indent=2) + "\n"


def cmd_measure(args) -> int:
    _emit(measure_report(args), args.out)
    return 0


# -- windows ------------------------------------------------------------------

def cmd_windows(args) -> int:
    spec = _load_spec(args.spec)
    event_log = _load_log(args)
    windows = slice_log(event_log, args.size, args.slide)
    dropped = dropped_traces(event_log.cardinality, args.size, args.slide)
    if dropped:
        log.warning("dropped %d trailing traces that do not fill a window", dropped)
    series = measure_series(spec, windows, select_measures(args.measures), SpecMode(args.mode),
                            args.normalized, args.threads)
    stats = sort_stats(series_stats(series))
    if args.format == "json":
        extra = _meta(args)
        extra.update({"size": args.size, "slide": args.slide, "dropped_traces": dropped})
        _emit(series_to_json(series, stats, extra), args.out)
    else:
        _emit(series_to_csv(series), args.out)
    stats_text = stats_to_csv(stats)
    if args.stats_out:
        _emit(stats_text, args.stats_out)
    elif args.format != "json":
        sys.stderr.write(stats_text)
    return 0


# -- mine ---------------------------------------------------------------------

def cmd_mine(args) -> int:
    event_log = _load_log(args)
    names = template_names() if args.templates in (None, "all") else \
        [t.strip() for t in args.templates.split(",") if t.strip()]
    cfg = MinerConfig(tuple(names), args.confidence, SpecMode(args.mode), args.name)
    spec = discover(event_log, cfg, args.threads)
    if spec is None:
        log.warning("no rule reached confidence %s", args.confidence)
    if args.out is None or args.out == "-":
        sys.stdout.write(json.dumps(spec_to_json(spec, cfg.name), indent=2) + "\n")
    else:
        dump_spec(spec, args.out, cfg.name)
    if args.sweep:
        rows = threshold_sweep(event_log, cfg, parse_sweep(args.sweep), args.threads)
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["threshold", "rule_count", "spec_confidence", "mean_rule_confidence"])
        for r in rows:
            wr.writerow([f"{r.threshold:.2f}", r.rule_count, fmt_float(r.spec_confidence),
                         fmt_float(r.mean_rule_confidence)])
        _emit(buf.getvalue(), args.sweep_out)
    return 0


# -- templates ----------------------------------------------------------------

def cmd_templates(args) -> int:
    for name in template_names():
        tpl = TEMPLATES[name.lower()]
        params = "(a)" if tpl.arity == 1 else "(a,b)"
        sys.stdout.write(f"{name}{params}\t{tpl.description}\n")
    return 0


# -- parser -------------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _unit(text: str) -> float:
    value = float(text)
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("must lie in [0,1]")
    return value


def _add_log_options(p):
    p.add_argument("--log", required=True, help="event log (.xes, .csv or text)")
    p.add_argument("--log-format", choices=["xes", "csv", "txt"], default=None)
    p.add_argument("--case-column", default="case_id")
    p.add_argument("--activity-column", default="activity")
    p.add_argument("--timestamp-column", default="timestamp")
    p.add_argument("--threads", type=_positive, default=None,
                   help="labeling threads (default: $RFMEASURE_THREADS or 1)")


def _add_measure_options(p):
    p.add_argument("--spec", required=True, help="specification file (JSON or text)")
    p.add_argument("--mode", choices=[m.value for m in SpecMode], default=SpecMode.TABLE.value)
    p.add_argument("--measures", default="all", help="comma separated names, or 'all'")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfmeasure",
                                     description="Measure reactive-form specifications on event logs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="measures of each rule and of the whole specification")
    _add_log_options(p)
    _add_measure_options(p)
    p.add_argument("--scope", choices=["log", "trace"], default="log")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("windows", help="measure series over windows of consecutive traces")
    _add_log_options(p)
    _add_measure_options(p)
    p.add_argument("--size", type=_positive, default=50)
    p.add_argument("--slide", type=_positive, default=50)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--stats-out", default=None, help="CSV of mean/std/cv sorted by cv")
    p.set_defaults(func=cmd_windows)

    p = sub.add_parser("mine", help="discover a specification by confidence threshold")
    _add_log_options(p)
    p.add_argument("--templates", default="all", help="comma separated template names, or 'all'")
    p.add_argument("--confidence", type=_unit, default=1.0)
    p.add_argument("--mode", choices=[m.value for m in SpecMode], default=SpecMode.TABLE.value)
    p.add_argument("--name", default="mined")
    p.add_argument("--out", default=None, help="specification file to write (default stdout)")
    p.add_argument("--sweep", default=None, metavar="START:STOP:STEP")
    p.add_argument("--sweep-out", default=None, help="sweep CSV (default stdout)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("templates", help="list the rule template catalog")
    p.set_defaults(func=cmd_templates)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, *USER_ERRORS) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"rfmeasure: error: {msg}\n")
        return 2
    except Exception as exc:  # invariant broken somewhere below
        log.exception("internal error")
        sys.stderr.write(f"rfmeasure: internal error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
