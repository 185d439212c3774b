"""Reactive forms (activator |> target), tri-valued labeling and the template catalog."""
from __future__ import annotations

import csv
import enum
import re
from dataclasses import dataclass, field
from typing import Callable

from .evaluator import _cached_label_bits
from .formula import (
    END, START, And, Atom, Eventually, Formula, Next, Not, Once, Or, Since, Until,
    Yesterday, parse_formula, pretty,
)
from .logmodel import Trace


class Label(enum.Enum):
    VIOLATED = "0"
    SATISFIED = "1"
    UNAFFECTED = "x"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ReactiveForm:
    name: str
    activator: Formula
    target: Formula
    # set when the rule came from the catalog, so it can be written back as such
    template: str | None = field(default=None, compare=False)
    args: tuple = field(default=(), compare=False)

    @classmethod
    def parse(cls, activator: str, target: str, name: str | None = None) -> "ReactiveForm":
        a, t = parse_formula(activator), parse_formula(target)
        return cls(name or f"{pretty(a)} |> {pretty(t)}", a, t)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TriLabelSequence:
    """Two bitmasks over ``length`` instants: where the activator holds, and where it
    holds together with the target."""

    activated: int
    satisfied: int
    length: int

    @property
    def violated(self) -> int:
        return self.activated & ~self.satisfied

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> Label:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        if not (self.activated >> i) & 1:
            return Label.UNAFFECTED
        return Label.SATISFIED if (self.satisfied >> i) & 1 else Label.VIOLATED

    def __iter__(self):
        return (self[i] for i in range(self.length))

    def to_list(self) -> list:
        return list(self)

    def __str__(self):
        return "<" + ",".join(str(x) for x in self) + ">"

    @classmethod
    def from_string(cls, text: str) -> "TriLabelSequence":
        """``"x,1,0"`` -> labels; handy in tests."""
        act = sat = 0
        tokens = [tok.strip() for tok in text.strip("<> ").split(",")]
        for i, tok in enumerate(tokens):
            lab = Label(tok)
            if lab is not Label.UNAFFECTED:
                act |= 1 << i
                if lab is Label.SATISFIED:
                    sat |= 1 << i
        return cls(act, sat, len(tokens))


def rf_masks(rf: ReactiveForm, t: Trace) -> tuple:
    """``(activator bits, target bits)`` of ``rf`` on ``t``."""
    return _cached_label_bits(rf.activator, t), _cached_label_bits(rf.target, t)


def label_rf(rf: ReactiveForm, t: Trace) -> TriLabelSequence:
    a, tau = rf_masks(rf, t)
    return TriLabelSequence(a, a & tau, len(t))


def is_activated(rf: ReactiveForm, t: Trace) -> bool:
    return _cached_label_bits(rf.activator, t) != 0


# -- template catalog ------------------------------------------------------

class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class Template:
    name: str
    arity: int
    build: Callable
    distinct: bool = True
    composite: bool = False
    description: str = ""


def _rf(template, args, activator, target):
    return ReactiveForm(f"{template}({','.join(args)})", activator, target, template, tuple(args))


def _coexistence(a, b):
    return [_responded_existence(a, b), _responded_existence(b, a)]


def _responded_existence(a, b):
    return _rf("RespondedExistence", (a, b), Atom(a), Or(Once(Atom(b)), Eventually(Atom(b))))


_CATALOG = [
    Template("Participation", 1, lambda a: _rf("Participation", (a,), START, Eventually(Atom(a))),
             description="Start |> F a"),
    Template("AtMostOne", 1, lambda a: _rf("AtMostOne", (a,), Atom(a), Not(Next(Eventually(Atom(a))))),
             description="a |> !X F a"),
    Template("Init", 1, lambda a: _rf("Init", (a,), START, Atom(a)),
             description="Start |> a"),
    Template("End", 1, lambda a: _rf("End", (a,), START, Eventually(And(Atom(a), END))),
             description="Start |> F (a & End)"),
    Template("RespondedExistence", 2, _responded_existence,
             description="a |> O b | F b"),
    Template("Response", 2, lambda a, b: _rf("Response", (a, b), Atom(a), Eventually(Atom(b))),
             description="a |> F b"),
    Template("AlternateResponse", 2,
             lambda a, b: _rf("AlternateResponse", (a, b), Atom(a),
                              Next(Until(Not(Atom(a)), Atom(b)))),
             description="a |> X (!a U b)"),
    Template("ChainResponse", 2, lambda a, b: _rf("ChainResponse", (a, b), Atom(a), Next(Atom(b))),
             description="a |> X b"),
    Template("Precedence", 2, lambda a, b: _rf("Precedence", (a, b), Atom(b), Once(Atom(a))),
             description="b |> O a"),
    Template("AlternatePrecedence", 2,
             lambda a, b: _rf("AlternatePrecedence", (a, b), Atom(b),
                              Yesterday(Since(Not(Atom(b)), Atom(a)))),
             description="b |> Y (!b S a)"),
    Template("ChainPrecedence", 2,
             lambda a, b: _rf("ChainPrecedence", (a, b), Atom(b), Yesterday(Atom(a))),
             description="b |> Y a"),
    Template("CoExistence", 2, _coexistence, composite=True,
             description="RespondedExistence(a,b) and RespondedExistence(b,a)"),
    Template("NotResponse", 2,
             lambda a, b: _rf("NotResponse", (a, b), Atom(a), Not(Eventually(Atom(b)))),
             description="a |> !F b"),
    Template("NotChainResponse", 2,
             lambda a, b: _rf("NotChainResponse", (a, b), Atom(a), Not(Next(Atom(b)))),
             description="a |> !X b"),
    Template("NotPrecedence", 2,
             lambda a, b: _rf("NotPrecedence", (a, b), Atom(b), Not(Once(Atom(a)))),
             description="b |> !O a"),
]

TEMPLATES = {tpl.name.lower(): tpl for tpl in _CATALOG}


def template_names() -> list:
    return [tpl.name for tpl in _CATALOG]


def get_template(name: str) -> Template:
    try:
        return TEMPLATES[name.strip().lower()]
    except KeyError:
        raise TemplateError(f"unknown template {name!r}; known: {', '.join(template_names())}") from None


def expand_template(name: str, args) -> list:
    """All reactive forms a template instance stands for (one, except for composites)."""
    tpl = get_template(name)
    args = tuple(args)
    if len(args) != tpl.arity:
        raise TemplateError(f"{tpl.name} takes {tpl.arity} argument(s), got {len(args)}")
    if any(not isinstance(a, str) or not a for a in args):
        raise TemplateError(f"{tpl.name}: arguments must be non-empty activity names")
    if tpl.distinct and len(set(args)) != len(args):
        raise TemplateError(f"{tpl.name}: arguments must be distinct")
    out = tpl.build(*args)
    return list(out) if tpl.composite else [out]


def instantiate_template(name: str, args) -> ReactiveForm:
    rfs = expand_template(name, args)
    if len(rfs) != 1:
        raise TemplateError(f"{get_template(name).name} expands to {len(rfs)} rules; use expand_template")
    return rfs[0]


_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$")


def parse_rule(text: str) -> list:
    """``Response(a,b)`` or ``activator |> target`` -> list of reactive forms."""
    if "|>" in text:
        act, tgt = text.split("|>", 1)
        return [ReactiveForm.parse(act.strip(), tgt.strip())]
    m = _CALL.match(text)
    if not m:
        raise TemplateError(f"cannot read rule {text!r}")
    body = m.group(2).strip()
    # arguments may be double-quoted to carry spaces or commas
    args = [a.strip() for a in next(csv.reader([body], skipinitialspace=True))] if body else []
    return expand_template(m.group(1), args)
