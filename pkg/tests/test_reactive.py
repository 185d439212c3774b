import itertools

import pytest
from hypothesis import given, settings

from rfmeasure.evaluator import eval_all
from rfmeasure.formula import TRUE, Atom, parse_formula, to_string
from rfmeasure.logmodel import Trace
from rfmeasure.reactive import (
    Label, ReactiveForm, TemplateError, TriLabelSequence, expand_template, get_template,
    instantiate_template, is_activated, label_rf, parse_rule, template_names,
)

from . import golden
from .fixtures import PSI1, PSI2, TRACES
from .strategies import formulas, traces


def test_worked_labelings():
    assert str(label_rf(PSI1, TRACES["t4"])) == "<x,0,x,1,x,x>"
    assert label_rf(PSI1, TRACES["t1"]) == TriLabelSequence.from_string(golden.LABELS[("psi1", "t1")])
    assert set(label_rf(PSI2, TRACES["t5"])) == {Label.UNAFFECTED}


def test_activation():
    assert not is_activated(PSI2, TRACES["t4"])
    assert is_activated(PSI1, TRACES["t4"])
    assert is_activated(ReactiveForm("r", TRUE, Atom("q")), TRACES["t5"])


def test_template_encodings():
    resp = instantiate_template("Response", ("d", "e"))
    assert (resp.activator, resp.target) == (Atom("d"), parse_formula("F e"))
    prec = instantiate_template("precedence", ("a", "c"))
    assert (prec.activator, prec.target) == (Atom("c"), parse_formula("O a"))
    assert prec.name == "Precedence(a,c)"


@pytest.mark.parametrize("name,args", [
    ("Response", ("d",)),
    ("Response", ("d", "e", "f")),
    ("Response", ("d", "d")),
    ("Response", ("d", "")),
    ("Nope", ("a", "b")),
])
def test_template_errors(name, args):
    with pytest.raises(TemplateError):
        instantiate_template(name, args)


def test_composite_template():
    rfs = expand_template("CoExistence", ("a", "b"))
    assert [rf.name for rf in rfs] == ["RespondedExistence(a,b)", "RespondedExistence(b,a)"]
    with pytest.raises(TemplateError):
        instantiate_template("CoExistence", ("a", "b"))


def test_parse_rule_forms():
    assert parse_rule("Response(d, e)") == [PSI2]
    [raw] = parse_rule("c |> O a")
    assert (raw.activator, raw.target) == (PSI1.activator, PSI1.target)
    with pytest.raises(TemplateError):
        parse_rule("what is this")


def test_tri_label_indexing():
    seq = TriLabelSequence.from_string("<x,1,0>")
    assert seq[-1] is Label.VIOLATED
    assert seq.violated == 0b100
    with pytest.raises(IndexError):
        seq[3]


def test_every_template_round_trips_on_two_letters():
    for name in template_names():
        tpl = get_template(name)
        for args in itertools.permutations("ab", tpl.arity):
            for rf in expand_template(name, args):
                again = ReactiveForm.parse(to_string(rf.activator), to_string(rf.target))
                assert (again.activator, again.target) == (rf.activator, rf.target)
                assert len(label_rf(rf, Trace.of("abba"))) == 4


@settings(max_examples=300, deadline=None)
@given(formulas, formulas, traces)
def test_labels_follow_activator_and_target(act, tgt, t):
    seq = label_rf(ReactiveForm("r", act, tgt), t)
    for lab, a, b in zip(seq, eval_all(act, t), eval_all(tgt, t)):
        expected = Label.UNAFFECTED if not a else (Label.SATISFIED if b else Label.VIOLATED)
        assert lab is expected


@settings(max_examples=200, deadline=None)
@given(formulas, traces)
def test_always_active_rules_are_never_unaffected(tgt, t):
    assert Label.UNAFFECTED not in set(label_rf(ReactiveForm("r", TRUE, tgt), t))


def test_parse_rule_quoted_arguments():
    [rf] = parse_rule('Response("ER Triage", "a,b")')
    assert rf.activator == Atom("ER Triage")
    assert rf.args == ("ER Triage", "a,b")
