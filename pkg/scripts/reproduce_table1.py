#!/usr/bin/env python3
"""Print the worked log's measure table (rules and specification, per trace and whole log)."""
import argparse
import math

from rfmeasure.logmodel import EventLog, parse_trace_string
from rfmeasure.measures import bundle, compute_measure
from rfmeasure.reactive import instantiate_template
from rfmeasure.specification import SpecMode, Specification

TRACES = {
    "t1": ("a,b,c,d,b,c,e,c,b", 17),
    "t2": ("b,d,a,b,b,d,e,d,c", 6),
    "t3": ("c,d,a,b,c,e,b,c,b,c", 5),
    "t4": ("b,c,a,c,e,a", 12),
    "t5": ("b,b,b", 5),
}
COLUMNS = ["P(rule)", "P(act)", "P(target)", "Support", "Confidence", "Recall", "Specificity", "Lift"]


def cells(subject, scope, mode):
    b = bundle(subject, scope, mode)
    conf = compute_measure("Confidence", b)
    return [conf, float(b.p_a), float(b.p_t)] + [compute_measure(m, b) for m in COLUMNS[3:]]


def fmt(x):
    return "NaN" if math.isnan(x) else f"{x:.2f}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mode", choices=[m.value for m in SpecMode], default="table")
    args = ap.parse_args()
    mode = SpecMode(args.mode)

    traces = {k: parse_trace_string(v) for k, (v, _) in TRACES.items()}
    log = EventLog.from_counts((traces[k], m) for k, (_, m) in TRACES.items())
    psi1 = instantiate_template("Precedence", ("a", "c"))
    psi2 = instantiate_template("Response", ("d", "e"))
    subjects = [("psi1", psi1), ("psi2", psi2), ("spec", Specification([psi1, psi2]))]

    print(f"{'subject':8}{'scope':7}" + "".join(f"{c:>12}" for c in COLUMNS))
    for label, subject in subjects:
        for key in [*TRACES, "log"]:
            scope = log if key == "log" else traces[key]
            print(f"{label:8}{key:7}" + "".join(f"{fmt(v):>12}" for v in cells(subject, scope, mode)))


if __name__ == "__main__":
    main()
