"""Probabilistic measures for reactive-form specifications over event logs."""

__version__ = "0.1.0"

from .formula import Formula, FormulaSyntaxError, parse_formula, pretty  # noqa: E402
from .logmodel import Event, EventLog, Trace, load_log  # noqa: E402
from .evaluator import eval_at, label_formula  # noqa: E402
from .reactive import ReactiveForm, instantiate_template, label_rf  # noqa: E402
from .specification import Specification, SpecMode, label_spec  # noqa: E402
from .measures import bundle, compute_measure, normalize  # noqa: E402

__all__ = [
    "Formula", "FormulaSyntaxError", "parse_formula", "pretty",
    "Event", "EventLog", "Trace", "load_log",
    "eval_at", "label_formula",
    "ReactiveForm", "instantiate_template", "label_rf",
    "Specification", "SpecMode", "label_spec",
    "bundle", "compute_measure", "normalize",
]
