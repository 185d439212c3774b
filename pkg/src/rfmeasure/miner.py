"""Confidence-threshold template miner and threshold sweeps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .estimators import NAN, log_fraction, spec_log_exact, subject_masks
from .evaluator import packed, parallel_map
from .logmodel import EventLog
from .reactive import expand_template, get_template, template_names
from .specification import SpecMode, Specification


@dataclass(frozen=True)
class MinerConfig:
    templates: tuple = tuple(template_names())
    threshold: float = 1.0
    mode: SpecMode = SpecMode.TABLE
    name: str = "mined"

    def __post_init__(self):
        object.__setattr__(self, "templates",
                           tuple(get_template(t).name for t in self.templates))
        if not self.templates:
            raise ValueError("at least one template is required")
        if not 0 <= self.threshold <= 1:
            raise ValueError(f"threshold {self.threshold} outside [0,1]")


@dataclass(frozen=True)
class Candidate:
    rf: object
    confidence: Fraction  # exact; only activated candidates are kept

    @property
    def name(self) -> str:
        return self.rf.name


def _exact(x) -> Fraction:
    # "0.8" means 4/5, not the nearest binary double
    return x if isinstance(x, Fraction) else Fraction(repr(float(x)))


def candidates(log: EventLog, templates) -> list:
    alphabet = log.alphabet()
    seen, out = set(), []
    for name in templates:
        tpl = get_template(name)
        args_iter = (itertools.permutations(alphabet, 2) if tpl.arity == 2
                     else ((a,) for a in alphabet))
        for args in args_iter:
            for rf in expand_template(tpl.name, args):
                if rf.name not in seen:
                    seen.add(rf.name)
                    out.append(rf)
    return out


def score_candidates(log: EventLog, templates, threads=None) -> list:
    """Every activated candidate with its exact log confidence, best first."""
    def score(rf):
        a, tau = subject_masks(rf, log)
        if not a:
            return None
        return Candidate(rf, log_fraction(log, a & tau) / log_fraction(log, a))

    packed(log)  # build once before any worker starts
    scored = [c for c in parallel_map(score, candidates(log, templates), threads) if c]
    scored.sort(key=lambda c: (-c.confidence, c.name))
    return scored


def _select(scored, threshold) -> list:
    th = _exact(threshold)
    return [c for c in scored if c.confidence >= th]


def discover(log: EventLog, cfg: MinerConfig, threads=None) -> Optional[Specification]:
    """Rules passing the threshold, or ``None`` when nothing does."""
    kept = _select(score_candidates(log, cfg.templates, threads), cfg.threshold)
    if not kept:
        return None
    return Specification(tuple(c.rf for c in kept), cfg.name)


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    rule_count: int
    spec_confidence: float
    mean_rule_confidence: float


def threshold_sweep(log: EventLog, cfg: MinerConfig, thresholds, threads=None) -> list:
    scored = score_candidates(log, cfg.templates, threads)
    rows = []
    for th in thresholds:
        if not 0 <= th <= 1:
            raise ValueError(f"threshold {th} outside [0,1]")
        kept = _select(scored, th)
        if not kept:
            rows.append(SweepRow(float(th), 0, NAN, NAN))
            continue
        spec = Specification(tuple(c.rf for c in kept), cfg.name)
        joint, act = spec_log_exact(spec, log, cfg.mode)
        mean_rule = sum(c.confidence for c in kept) / len(kept)
        rows.append(SweepRow(float(th), len(kept), float(joint / act), float(mean_rule)))
    return rows


def parse_sweep(text: str) -> list:
    """``"0:1:0.05"`` -> thresholds 0, 0.05, ..., 1 (both ends included)."""
    try:
        lo, hi, step = (Fraction(part.strip()) for part in text.split(":"))
    except ValueError:
        raise ValueError(f"sweep must look like start:stop:step, got {text!r}") from None
    if step <= 0 or lo > hi or lo < 0 or hi > 1:
        raise ValueError(f"bad sweep range {text!r}")
    count = int((hi - lo) / step)
    return [float(lo + k * step) for k in range(count + 1)]
