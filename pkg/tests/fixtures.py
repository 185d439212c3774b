from rfmeasure.formula import Atom, Not, TRUE
from rfmeasure.logmodel import EventLog, Trace, parse_trace_string
from rfmeasure.reactive import ReactiveForm, instantiate_template
from rfmeasure.specification import Specification

from . import golden

TRACES = {k: parse_trace_string(v) for k, v in golden.TRACES.items()}
LOG = EventLog.from_counts((TRACES[k], golden.MULTIPLICITY[k]) for k in golden.TRACES)

PSI1 = instantiate_template("Precedence", ("a", "c"))   # c |> O a
PSI2 = instantiate_template("Response", ("d", "e"))     # d |> F e
SPEC = Specification((PSI1, PSI2), "S")

WVP_TRACES = {k: parse_trace_string(v) for k, v in golden.WVP_TRACES.items()}
WVP_LOG = EventLog.from_counts((WVP_TRACES[k], golden.WVP_MULTIPLICITY[k]) for k in golden.WVP_TRACES)
WVP_RULES = tuple(ReactiveForm(f"true |> !{z}", TRUE, Not(Atom(z))) for z in "abcdef")
WVP_SPEC = Specification(WVP_RULES, "S")


def close(value, expected, tol=0.005):
    """Two-decimal agreement; ``None`` expects NaN."""
    if expected is None:
        return value != value
    return value == value and abs(value - expected) <= tol + 1e-9


# one trace: a x100 then b,c,b -- rule A fires 100 times, rule B twice (once violated)
INTRO_TRACE = Trace.of(["a"] * 100 + ["b", "c", "b"])
INTRO_LOG = EventLog.from_traces([INTRO_TRACE])
INTRO_RULES = (instantiate_template("RespondedExistence", ("a", "c")),
               instantiate_template("ChainResponse", ("b", "c")))

# each Response rule holds on half the a-events, and every a-event breaks one of them
SPLIT_LOG = EventLog.from_traces([Trace.of("ab"), Trace.of("ac")])
