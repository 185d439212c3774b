import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfmeasure.formula import Atom, Not, TRUE, parse_formula
from rfmeasure.logmodel import Trace
from rfmeasure.reactive import Label, ReactiveForm, TriLabelSequence, instantiate_template, label_rf
from rfmeasure.specification import (
    SpecFormatError, SpecMode, Specification, dump_spec, label_spec, load_spec, spec_activator,
    spec_masks, spec_target, spec_to_json,
)
from rfmeasure.evaluator import eval_all

from . import golden, oracles
from .fixtures import PSI1, PSI2, SPEC, TRACES, WVP_SPEC
from .strategies import traces

POOL = [instantiate_template(n, args) for n, args in [
    ("Response", ("a", "b")), ("Precedence", ("b", "c")), ("ChainResponse", ("c", "a")),
    ("NotResponse", ("b", "a")), ("Init", ("a",)), ("AlternatePrecedence", ("a", "c")),
]]
SMALL_TRACES = [Trace.of(p) for n in range(1, 6) for p in itertools.product("abc", repeat=n)]
SPECS = [Specification(c) for k in (1, 2, 3) for c in itertools.combinations(POOL, k)]


def _fold(spec, t):
    out = []
    for labs in zip(*(label_rf(rf, t) for rf in spec.rfs)):
        if Label.VIOLATED in labs:
            out.append(Label.VIOLATED)
        elif Label.SATISFIED in labs:
            out.append(Label.SATISFIED)
        else:
            out.append(Label.UNAFFECTED)
    return out


def test_spec_activator():
    assert spec_activator(SPEC) == parse_formula("c | d")
    assert spec_activator(Specification([PSI1])) == Atom("c")
    wvp = spec_activator(WVP_SPEC)
    assert all(eval_all(wvp, Trace.of("abc")))


def test_formal_target_shape():
    assert spec_target(SPEC, SpecMode.FORMAL) == parse_formula("(!c | O a) & (!d | F e)")


def test_table_target_on_t4():
    _, tau = spec_masks(SPEC, TRACES["t4"], SpecMode.TABLE)
    assert [(tau >> i) & 1 for i in range(6)] == [0, 0, 1, 1, 1, 0]


def test_formal_target_on_t2():
    _, tau = spec_masks(SPEC, TRACES["t2"], SpecMode.FORMAL)
    assert tau.bit_count() == 8


@pytest.mark.parametrize("mode", list(SpecMode))
def test_masks_match_formula_labels(mode):
    for t in TRACES.values():
        a, tau = spec_masks(SPEC, t, mode)
        assert [(a >> i) & 1 for i in range(len(t))] == eval_all(spec_activator(SPEC), t)
        assert [(tau >> i) & 1 for i in range(len(t))] == eval_all(spec_target(SPEC, mode), t)
        assert [(tau >> i) & 1 for i in range(len(t))] == \
            oracles.spec_target_instants(SPEC, t, mode is SpecMode.FORMAL)


def test_worked_spec_labelings():
    for key in ("t2", "t3"):
        expected = TriLabelSequence.from_string(golden.LABELS[("spec", key)])
        assert label_spec(SPEC, TRACES[key]) == expected


def test_singleton_spec_is_the_rule():
    one = Specification([PSI1])
    for t in TRACES.values():
        for mode in SpecMode:
            assert label_spec(one, t, mode) == label_rf(PSI1, t)


def test_empty_spec_rejected():
    with pytest.raises(ValueError):
        Specification([])


@pytest.mark.parametrize("mode", list(SpecMode))
def test_composition_law_exhaustive(mode):
    for spec in SPECS:
        for t in SMALL_TRACES:
            assert label_spec(spec, t, mode).to_list() == _fold(spec, t)


def test_modes_agree_on_activated_instants():
    for spec in SPECS:
        for t in SMALL_TRACES:
            a, f = spec_masks(spec, t, SpecMode.FORMAL)
            a2, g = spec_masks(spec, t, SpecMode.TABLE)
            assert a == a2 and a & f == a & g


@settings(max_examples=200, deadline=None)
@given(st.permutations(POOL[:4]), traces)
def test_rule_order_never_changes_labels(rules, t):
    for mode in SpecMode:
        assert label_spec(Specification(rules), t, mode) == label_spec(Specification(POOL[:4]), t, mode)


def test_whole_versus_parts_on_t1():
    t = Trace.of("abcdef")
    seq = label_spec(WVP_SPEC, t)
    assert seq.satisfied == 0


def test_json_round_trip(tmp_path):
    raw = ReactiveForm("mine", TRUE, Not(Atom("z")))
    spec = Specification([PSI1, PSI2, raw], "demo")
    path = tmp_path / "s.json"
    dump_spec(spec, path)
    again = load_spec(path)
    assert again.name == "demo" and again.rfs == spec.rfs


def test_text_spec(tmp_path):
    path = tmp_path / "rules.txt"
    path.write_text("# worked pair\nPrecedence(a,c)\nd |> F e  # response\n\nCoExistence(a,b)\n")
    spec = load_spec(path)
    assert [rf.name for rf in spec.rfs][:1] == ["Precedence(a,c)"]
    assert spec.rfs[1].target == parse_formula("F e")
    assert len(spec) == 4


def test_empty_rule_list_is_none(tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps(spec_to_json(None, "mined")))
    assert load_spec(path) is None


@pytest.mark.parametrize("text", [
    "{not json",
    '{"rules": 3}',
    '{"rules": [{"template": "Response", "args": ["a"]}]}',
    '{"rules": [{"activator": "a &", "target": "b"}]}',
    '{"rules": [{"foo": 1}]}',
])
def test_bad_json_specs(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(SpecFormatError):
        load_spec(path)


def test_bad_text_spec_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("Response(a,b)\nResponse(a)\n")
    with pytest.raises(SpecFormatError, match=":2:"):
        load_spec(path)

