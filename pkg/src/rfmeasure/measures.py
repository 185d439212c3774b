"""Interestingness measures over activator/target probability bundles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .estimators import log_fraction, subject_masks
from .evaluator import packed
from .logmodel import EventLog, Trace
from .reactive import ReactiveForm, rf_masks
from .specification import SpecMode, Specification, spec_masks

NAN = float("nan")

Number = Union[Fraction, float]

UNIT = "[0,1]"
SIGNED_UNIT = "[-1,1]"
NON_NEGATIVE = "[0,inf)"
UPPER_ONE = "(-inf,1]"
REAL = "(-inf,inf)"
RANGES = (UNIT, SIGNED_UNIT, NON_NEGATIVE, UPPER_ONE, REAL)


@dataclass(frozen=True)
class ProbabilityBundle:
    """Base probabilities of activator ``a`` and target ``t``; exact when finite."""

    p_a: Fraction
    p_t: Fraction
    p_at: Fraction
    p_not_a_not_t: Fraction
    scope: str = "log"

    @property
    def p_not_a(self) -> Fraction:
        return 1 - self.p_a

    @property
    def p_not_t(self) -> Fraction:
        return 1 - self.p_t

    @property
    def p_a_not_t(self) -> Fraction:
        return self.p_a - self.p_at

    @property
    def p_not_a_t(self) -> Fraction:
        return self.p_t - self.p_at

    def as_floats(self) -> dict:
        return {k: float(getattr(self, k)) for k in
                ("p_a", "p_t", "p_at", "p_a_not_t", "p_not_a_not_t")}


def bundle(subject, scope, mode: SpecMode = SpecMode.TABLE) -> ProbabilityBundle:
    """Probability bundle of a specification or reactive form on a trace or a log."""
    if isinstance(scope, Trace):
        if isinstance(subject, Specification):
            a, tau = spec_masks(subject, scope, mode)
        elif isinstance(subject, ReactiveForm):
            a, tau = rf_masks(subject, scope)
        else:
            raise TypeError(f"cannot measure {type(subject).__name__}")
        n = len(scope)
        full = (1 << n) - 1
        return ProbabilityBundle(Fraction(a.bit_count(), n), Fraction(tau.bit_count(), n),
                                 Fraction((a & tau).bit_count(), n),
                                 Fraction((full & ~(a | tau)).bit_count(), n), "trace")
    if isinstance(scope, EventLog):
        a, tau = subject_masks(subject, scope, mode)
        full = packed(scope).full
        f = lambda bits: log_fraction(scope, bits)
        return ProbabilityBundle(f(a), f(tau), f(a & tau), f(full & ~(a | tau)), "log")
    raise TypeError(f"cannot measure over {type(scope).__name__}")


# -- arithmetic helpers: exact where possible, NaN on anything undefined ----

def _div(x: Number, y: Number) -> Number:
    if _isnan(x) or _isnan(y) or y == 0:
        return NAN
    return x / y


def _isnan(x) -> bool:
    return isinstance(x, float) and math.isnan(x)


def _log(x: Number, base: float = math.e) -> float:
    if _isnan(x) or x <= 0:
        return NAN
    return math.log(x, base) if base != math.e else math.log(x)


def _sqrt(x: Number) -> float:
    if _isnan(x) or x < 0:
        return NAN
    return math.sqrt(x)


def _max(x: Number, y: Number) -> Number:
    if _isnan(x) or _isnan(y):
        return NAN
    return max(x, y)


def _xlog(weight: Number, ratio: Number) -> Number:
    # 0 * log(anything) is taken as 0
    if not _isnan(weight) and weight == 0:
        return 0
    return weight * _log(ratio)


def _conf(b):
    return _div(b.p_at, b.p_a)


def _recall(b):
    return _div(b.p_at, b.p_t)


def _lift(b):
    return _div(b.p_at, b.p_a * b.p_t)


def _j_measure(b):
    return (_xlog(b.p_at, _div(_conf(b), b.p_t))
            + _xlog(b.p_a_not_t, _div(_div(b.p_a_not_t, b.p_a), b.p_not_t)))


@dataclass(frozen=True)
class MeasureDefinition:
    name: str
    expression: Callable
    range: str
    aliases: tuple = ()

    def __call__(self, b: ProbabilityBundle) -> float:
        return compute_measure(self, b)


MEASURES = (
    MeasureDefinition("Support", lambda b: b.p_at, UNIT),
    MeasureDefinition("Confidence", _conf, UNIT, ("precision",)),
    MeasureDefinition("Recall", _recall, UNIT),
    MeasureDefinition("Specificity", lambda b: _div(b.p_not_a_not_t, b.p_not_a), UNIT),
    MeasureDefinition("Accuracy", lambda b: b.p_at + b.p_not_a_not_t, UNIT),
    MeasureDefinition("Lift", _lift, NON_NEGATIVE, ("interest",)),
    MeasureDefinition("Leverage", lambda b: _conf(b) - b.p_a * b.p_t, SIGNED_UNIT),
    MeasureDefinition("Added Value", lambda b: _conf(b) - b.p_t, SIGNED_UNIT),
    MeasureDefinition("Jaccard", lambda b: _div(b.p_at, b.p_a + b.p_t - b.p_at), UNIT),
    MeasureDefinition("Certainty Factor", lambda b: _div(_conf(b) - b.p_t, b.p_not_t), UPPER_ONE),
    MeasureDefinition("Klosgen", lambda b: _sqrt(b.p_at) * _max(_conf(b) - b.p_t, _recall(b) - b.p_a),
                      SIGNED_UNIT),
    MeasureDefinition("Conviction", lambda b: _div(b.p_a * b.p_not_t, b.p_a_not_t), NON_NEGATIVE),
    MeasureDefinition("J-Measure", _j_measure, REAL),
    MeasureDefinition("One-Way Support", lambda b: _conf(b) * _log(_lift(b), 2), REAL),
    MeasureDefinition("Two-Way Support", lambda b: b.p_at * _log(_lift(b), 2), REAL),
    MeasureDefinition("Piatetsky-Shapiro", lambda b: b.p_at - b.p_a * b.p_t, SIGNED_UNIT),
    MeasureDefinition("Cosine", lambda b: _div(b.p_at, _sqrt(b.p_a * b.p_t)), UNIT),
    MeasureDefinition("Loevinger", lambda b: 1 - _div(b.p_a * b.p_not_t, b.p_a_not_t), UPPER_ONE),
    MeasureDefinition("Information Gain", lambda b: _log(_lift(b)), REAL),
    MeasureDefinition("Sebag-Schoenauer", lambda b: _div(b.p_at, b.p_a_not_t), NON_NEGATIVE),
    MeasureDefinition("Least Contradiction", lambda b: _div(b.p_at - b.p_a_not_t, b.p_t), REAL),
    MeasureDefinition("Odd Multiplier", lambda b: _div(b.p_at * b.p_not_t, b.p_t * b.p_a_not_t),
                      NON_NEGATIVE),
    MeasureDefinition("Example and Counterexample Rate", lambda b: 1 - _div(b.p_a_not_t, b.p_at),
                      UPPER_ONE),
    MeasureDefinition("Zhang", lambda b: _div(b.p_at - b.p_a * b.p_t,
                                              _max(b.p_at * b.p_not_t, b.p_t * b.p_a_not_t)), REAL),
)


def _key(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


_BY_KEY = {}
for _m in MEASURES:
    for _k in (_m.name, *_m.aliases):
        _BY_KEY[_key(_k)] = _m


def measure_names() -> list:
    return [m.name for m in MEASURES]


def get_measure(name: str) -> MeasureDefinition:
    try:
        return _BY_KEY[_key(name)]
    except KeyError:
        raise KeyError(f"unknown measure {name!r}") from None


def select_measures(spec: str | None) -> list:
    """``"all"``/None -> full catalog; otherwise comma separated names, catalog order kept as given."""
    if spec is None or spec.strip().lower() == "all":
        return list(MEASURES)
    out = []
    for name in spec.split(","):
        if name.strip():
            m = get_measure(name)
            if m not in out:
                out.append(m)
    if not out:
        raise KeyError("no measures selected")
    return out


def compute_measure(m: MeasureDefinition | str, b: ProbabilityBundle) -> float:
    if isinstance(m, str):
        m = get_measure(m)
    try:
        value = float(m.expression(b))
    except (ZeroDivisionError, OverflowError, ValueError):
        return NAN
    return value if math.isfinite(value) else NAN


def normalize(value: float, range_: str) -> float:
    """Monotone map of a declared range onto [0,1]."""
    if value is None or math.isnan(value):
        return NAN
    if range_ == UNIT:
        return value
    if range_ == SIGNED_UNIT:
        return (value + 1) / 2
    if range_ == NON_NEGATIVE:
        return value / (1 + value)
    if range_ == UPPER_ONE:
        return 1 / (2 - value)
    if range_ == REAL:
        return (1 + value / (1 + abs(value))) / 2
    raise ValueError(f"unknown range {range_!r}")


def evaluate(b: ProbabilityBundle, measures=None, normalized: bool = False) -> dict:
    """``{measure name: value}`` in catalog (or given) order."""
    out = {}
    for m in measures or MEASURES:
        v = compute_measure(m, b)
        out[m.name] = normalize(v, m.range) if normalized else v
    return out
