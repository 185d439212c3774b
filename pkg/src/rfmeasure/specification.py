"""Specifications: finite non-empty sets of reactive forms treated as one rule.

The combined activator is the disjunction of the member activators. Two
combined targets are offered:

* ``FORMAL``: conjunction of ``!a_j | t_j``; true wherever nothing fires.
* ``TABLE`` (default): same as formal where some activator fires, and the
  conjunction of the raw targets elsewhere. Only unactivated instants differ,
  so confidence and support are the same in both modes.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

from .formula import (
    And, Formula, Not, Or, conjunction, disjunction, to_string,
)
from .evaluator import _cached_label_bits
from .logmodel import Trace
from .reactive import ReactiveForm, TriLabelSequence, expand_template, parse_rule


class SpecMode(enum.Enum):
    FORMAL = "formal"
    TABLE = "table"


class SpecFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Specification:
    rfs: tuple
    name: str = "S"

    def __post_init__(self):
        object.__setattr__(self, "rfs", tuple(self.rfs))
        if not self.rfs:
            raise ValueError("a specification needs at least one reactive form")

    def __len__(self):
        return len(self.rfs)

    def __iter__(self):
        return iter(self.rfs)


def spec_activator(s: Specification) -> Formula:
    return disjunction([rf.activator for rf in s.rfs])


def spec_target(s: Specification, mode: SpecMode = SpecMode.TABLE) -> Formula:
    guarded = conjunction([Or(Not(rf.activator), rf.target) for rf in s.rfs])
    if mode is SpecMode.FORMAL:
        return guarded
    alpha = spec_activator(s)
    raw = conjunction([rf.target for rf in s.rfs])
    return Or(And(alpha, guarded), And(Not(alpha), raw))


def spec_as_rf(s: Specification, mode: SpecMode = SpecMode.TABLE) -> ReactiveForm:
    return ReactiveForm(s.name, spec_activator(s), spec_target(s, mode))


def compose_masks(s: Specification, label, full: int, mode: SpecMode = SpecMode.TABLE) -> tuple:
    """``(S_alpha bits, S_tau bits)`` from the member labels given by ``label(formula)``.

    Equivalent to labeling ``spec_activator``/``spec_target`` directly but
    without building formulas whose size grows with the number of rules.
    """
    alpha, guarded, raw = 0, full, full
    for rf in s.rfs:
        a, tau = label(rf.activator), label(rf.target)
        alpha |= a
        guarded &= (full & ~a) | tau
        raw &= tau
    if mode is SpecMode.FORMAL:
        return alpha, guarded
    return alpha, (alpha & guarded) | (full & ~alpha & raw)


def spec_masks(s: Specification, t: Trace, mode: SpecMode = SpecMode.TABLE) -> tuple:
    return compose_masks(s, lambda f: _cached_label_bits(f, t), (1 << len(t)) - 1, mode)


def label_spec(s: Specification, t: Trace, mode: SpecMode = SpecMode.TABLE) -> TriLabelSequence:
    alpha, tau = spec_masks(s, t, mode)
    return TriLabelSequence(alpha, alpha & tau, len(t))


# -- files -------------------------------------------------------------------

def _rule_from_json(item, where: str) -> list:
    if not isinstance(item, dict):
        raise SpecFormatError(f"{where}: rule must be an object")
    try:
        if "template" in item:
            args = item.get("args", [])
            if not isinstance(args, list):
                raise SpecFormatError(f"{where}: args must be a list")
            return expand_template(str(item["template"]), [str(a) for a in args])
        if "activator" in item and "target" in item:
            rf = ReactiveForm.parse(item["activator"], item["target"], item.get("name"))
            return [rf]
    except SpecFormatError:
        raise
    except ValueError as exc:
        raise SpecFormatError(f"{where}: {exc}") from None
    raise SpecFormatError(f"{where}: need 'template'/'args' or 'activator'/'target'")


def spec_from_json(data, source: str = "<json>") -> Specification | None:
    """Returns ``None`` for an explicit empty rule list."""
    if not isinstance(data, dict) or not isinstance(data.get("rules"), list):
        raise SpecFormatError(f"{source}: expected an object with a 'rules' list")
    rfs = []
    for k, item in enumerate(data["rules"], start=1):
        rfs.extend(_rule_from_json(item, f"{source}: rule {k}"))
    if not rfs:
        return None
    return Specification(tuple(rfs), str(data.get("name", "S")))


def spec_from_text(text: str, name: str = "S", source: str = "<text>") -> Specification | None:
    """One rule per line: ``Template(a,b)`` or ``activator |> target``; ``#`` comments."""
    rfs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rfs.extend(parse_rule(line))
        except ValueError as exc:
            raise SpecFormatError(f"{source}:{lineno}: {exc}") from None
    return Specification(tuple(rfs), name) if rfs else None


def load_spec(path) -> Specification | None:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(f"{path}: invalid JSON: {exc}") from None
        return spec_from_json(data, str(path))
    return spec_from_text(text, path.stem, str(path))


def rule_to_json(rf: ReactiveForm) -> dict:
    if rf.template is not None:
        return {"template": rf.template, "args": list(rf.args)}
    return {"name": rf.name, "activator": to_string(rf.activator), "target": to_string(rf.target)}


def spec_to_json(s: Specification | None, name: str = "S") -> dict:
    if s is None:
        return {"name": name, "rules": []}
    return {"name": s.name, "rules": [rule_to_json(rf) for rf in s.rfs]}


def dump_spec(s: Specification | None, path, name: str = "S") -> None:
    Path(path).write_text(json.dumps(spec_to_json(s, name), indent=2) + "\n", encoding="utf-8")

