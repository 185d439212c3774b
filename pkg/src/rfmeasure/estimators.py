"""Maximum-likelihood estimates of satisfaction probabilities.

Trace scope: fraction of instants with label 1. Log scope: multiplicity-weighted
mean of per-trace fractions. Conditionals are ratios of the corresponding sums
and are NaN when the conditioning event never occurs.

Log-scope sums are reduced exactly: integer tallies ``j_i * c_i`` are pooled
per trace length and the result is a ``Fraction`` converted to float once, so
values do not depend on entry order or thread count. Log labelings come from
``PackedLog``, which labels every distinct trace in one pass per subformula.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .evaluator import _cached_label_bits, packed
from .formula import Formula
from .logmodel import EventLog, Trace
from .reactive import ReactiveForm
from .specification import SpecMode, Specification, compose_masks, spec_masks

NAN = float("nan")


def _ratio(num, den) -> float:
    return NAN if den == 0 else float(Fraction(num) / Fraction(den))


@dataclass(frozen=True)
class JointCounts:
    """Instant counts of the four outcomes of two labelings on one trace."""

    n11: int
    n10: int
    n01: int
    n00: int

    @classmethod
    def from_masks(cls, x1: int, x2: int, n: int) -> "JointCounts":
        full = (1 << n) - 1
        n11 = (x1 & x2).bit_count()
        n10 = (x1 & ~x2 & full).bit_count()
        n01 = (~x1 & x2 & full).bit_count()
        return cls(n11, n10, n01, n - n11 - n10 - n01)

    @property
    def total(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00

    def p(self, i: int, j: int) -> Fraction:
        return Fraction(getattr(self, f"n{i}{j}"), self.total)


def joint_counts(f1: Formula, f2: Formula, t: Trace) -> JointCounts:
    return JointCounts.from_masks(_cached_label_bits(f1, t), _cached_label_bits(f2, t), len(t))


# -- exact log reduction -------------------------------------------------------

def _fraction(tallies: dict, cardinality: int) -> Fraction:
    total = sum((Fraction(v, n) for n, v in sorted(tallies.items())), Fraction(0))
    return total / cardinality


def weighted_fraction(log: EventLog, counts) -> Fraction:
    """``(1/|L|) * sum_i j_i * c_i / n_i`` for per-entry counts ``c_i``."""
    tallies = {}
    for (t, mult), c in zip(log.entries, counts):
        tallies[len(t)] = tallies.get(len(t), 0) + mult * c
    return _fraction(tallies, log.cardinality)


def log_fraction(log: EventLog, bits: int) -> Fraction:
    """Weighted fraction of a whole-log labeling (see ``PackedLog``)."""
    return _fraction(packed(log).length_tallies(bits), log.cardinality)


def subject_masks(subject, log: EventLog, mode: SpecMode = SpecMode.TABLE) -> tuple:
    """Whole-log ``(activator bits, target bits)`` of a rule or specification."""
    pl = packed(log)
    if isinstance(subject, Specification):
        return compose_masks(subject, pl.label, pl.full, mode)
    if isinstance(subject, ReactiveForm):
        return pl.label(subject.activator), pl.label(subject.target)
    raise TypeError(f"cannot measure {type(subject).__name__}")


# -- trace scope ---------------------------------------------------------------

def p_trace(f: Formula, t: Trace) -> float:
    return _cached_label_bits(f, t).bit_count() / len(t)


def p_joint_trace(f1: Formula, f2: Formula, t: Trace) -> float:
    return (_cached_label_bits(f1, t) & _cached_label_bits(f2, t)).bit_count() / len(t)


def p_cond_trace(f1: Formula, f2: Formula, t: Trace) -> float:
    """P(f1 | f2) on ``t``."""
    x2 = _cached_label_bits(f2, t)
    return _ratio((_cached_label_bits(f1, t) & x2).bit_count(), x2.bit_count())


def p_rf_trace(rf: ReactiveForm, t: Trace) -> float:
    return p_cond_trace(rf.target, rf.activator, t)


def p_spec_trace(s: Specification, t: Trace, mode: SpecMode = SpecMode.TABLE) -> float:
    a, tau = spec_masks(s, t, mode)
    return _ratio((a & tau).bit_count(), a.bit_count())


# -- log scope -----------------------------------------------------------------

def p_log_exact(f: Formula, log: EventLog) -> Fraction:
    return log_fraction(log, packed(log).label(f))


def p_joint_log_exact(f1: Formula, f2: Formula, log: EventLog) -> Fraction:
    pl = packed(log)
    return log_fraction(log, pl.label(f1) & pl.label(f2))


def p_log(f: Formula, log: EventLog) -> float:
    return float(p_log_exact(f, log))


def p_joint_log(f1: Formula, f2: Formula, log: EventLog) -> float:
    return float(p_joint_log_exact(f1, f2, log))


def p_cond_log(f1: Formula, f2: Formula, log: EventLog) -> float:
    """P(f1 | f2) over the log: ratio of weighted sums."""
    return _ratio(p_joint_log_exact(f1, f2, log), p_log_exact(f2, log))


def p_rf_log(rf: ReactiveForm, log: EventLog) -> float:
    return p_cond_log(rf.target, rf.activator, log)


def spec_log_exact(s: Specification, log: EventLog, mode: SpecMode = SpecMode.TABLE) -> tuple:
    """``(P(S_tau & S_alpha), P(S_alpha))`` over the log as fractions."""
    a, tau = subject_masks(s, log, mode)
    return log_fraction(log, a & tau), log_fraction(log, a)


def p_spec_log(s: Specification, log: EventLog, mode: SpecMode = SpecMode.TABLE) -> float:
    joint, act = spec_log_exact(s, log, mode)
    return _ratio(joint, act)
