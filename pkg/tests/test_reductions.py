import pytest

from src.controllers.common import parse_relation
from src.models.ep_word import EpWord, ZEROS
from src.models.errors import TemplateError
from src.models.reductions import (AllZerosSoFar, ConsistentWithWellFounded, OneAt, ProbeUnknown, WitnessOfChain,
                                   chain_pairs_accepted, compile_union_demo, compile_wf_variant, full_template,
                                   golden_diff, normalize_spec_text, probe_full, probe_run, probe_solutions,
                                   wf_template, wf_variant_template)
from src.models.rewrite_engine import Got, stream_prefix
from src.models.tm_compiler import solutions_template
from src.models.turing_machine import load_machine
from src.utils.content import resolve_resource


def golden(name: str) -> str:
    with open(resolve_resource(name, "golden", ".spec"), "r", encoding="utf-8") as f:
        return f.read()


@pytest.mark.parametrize("name,compiled", [
    ("wf", lambda: wf_template(parse_relation("total"))),
    ("full", lambda: full_template(parse_relation("total"), 4, 2)),
    ("solutions", lambda: solutions_template(load_machine("bounce"))),
    ("union", compile_union_demo),
])
def test_generated_specifications_match_transcriptions(name, compiled):
    assert golden_diff(compiled().display_text(), golden(name)) == []


def test_golden_diff_reports_both_sides():
    assert normalize_spec_text("# note\neq  a = b   # tail\n\n") == ["eqa=b"]
    assert golden_diff("eq a = b\neq c = d\n", "eq a=b\n") == ["+eqc=d"]
    assert golden_diff("eq c = d\neq a = b\n", "eq a = b\neq c = d\n") == ["~order"]


def test_generated_specifications_build():
    total = parse_relation("total")
    for compiled in (wf_template(total), full_template(total, 2, 0), compile_union_demo().nxor,
                     solutions_template(load_machine("bounce"))):
        assert compiled.spec.equations
    assert compile_wf_variant(total, "at_most_full").has_symbol("leq")


@pytest.mark.parametrize("n", [0, 3, 5])
def test_quantifier_count_must_be_even(n):
    with pytest.raises(TemplateError):
        full_template(parse_relation("total"), n, 0)


def test_template_arguments_are_checked():
    with pytest.raises(TemplateError):
        wf_variant_template(parse_relation("total"), "at_most_two")
    with pytest.raises(TemplateError):
        wf_template(load_machine("bounce"))
    with pytest.raises(TemplateError):
        full_template(parse_relation("empty"), 2, -1)


@pytest.mark.parametrize("x", ["(0)", "(10)", "1(0)", "(110)", "0(1110)"])
def test_empty_relation_has_no_chain(x):
    result = probe_run(wf_template(parse_relation("empty")).spec, EpWord.parse(x), 8)
    assert result.verdict == ConsistentWithWellFounded(1)
    assert result.bits().startswith("01")


def test_total_relation_accepts_every_pair():
    result = probe_run(wf_template(parse_relation("total")).spec, EpWord.parse("(0)"), 8)
    assert result.verdict == WitnessOfChain(8)
    assert result.bits() == "0" * 9


def test_finite_cycle_is_a_chain():
    m = parse_relation("1,2;2,1")
    x = EpWord.parse("(10110)")
    result = probe_run(wf_template(m).spec, x, 8)
    assert result.verdict == WitnessOfChain(8)
    assert chain_pairs_accepted(m, x, 8) == [True] * 8


def test_finite_relation_without_the_pair():
    m = parse_relation("1,2")
    result = probe_run(wf_template(m).spec, EpWord.parse("(10110)"), 8)
    # (1, 2) is accepted, (2, 1) is not
    assert result.verdict == ConsistentWithWellFounded(2)
    assert chain_pairs_accepted(m, EpWord.parse("(10110)"), 2) == [True, False]


def test_budget_exhaustion_is_unknown():
    result = probe_run(wf_template(parse_relation("total")).spec, EpWord.parse("(0)"), 8, budget=0)
    assert result.verdict == ProbeUnknown(0)


def test_full_model_probe():
    total = full_template(parse_relation("total"), 2, 0).spec
    assert probe_full(total, [ZEROS], prefix_len=6).verdict == AllZerosSoFar(6)
    empty = full_template(parse_relation("empty"), 2, 0).spec
    assert probe_full(empty, [ZEROS], prefix_len=6).verdict == OneAt(1)
    with pytest.raises(ValueError):
        probe_full(total, [ZEROS, ZEROS])


def test_solutions_probe():
    progress = EpWord.parse("(10)")
    right = probe_solutions(load_machine("always_right"), ZEROS, ZEROS, progress, 8)
    assert right.verdict == AllZerosSoFar(8)
    bounce = probe_solutions(load_machine("bounce"), ZEROS, ZEROS, progress, 8)
    assert bounce.verdict == OneAt(1)
    # without progress checks the stream never produces an element
    stalled = probe_solutions(load_machine("always_right"), ZEROS, ZEROS, EpWord.parse("(1)"), 4, budget=300)
    assert stalled.verdict == ProbeUnknown(0)


def test_union_parts():
    demo = compile_union_demo()
    inv = demo.inv_example
    assert [r.value for r in stream_prefix(inv, inv.constant("M"), 4, 100)] == [1, 1, 1, 1]
    n_prefix = stream_prefix(inv, inv.constant("N"), 2, 100)
    assert not all(isinstance(r, Got) for r in n_prefix)
    nxor = demo.nxor_example
    assert [r.value for r in stream_prefix(nxor, nxor.constant("blink"), 4, 100)] == [0, 1, 0, 1]
