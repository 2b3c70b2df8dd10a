import pytest

from src.models.errors import DuplicateSymbolError, SortError, SpecSyntaxError, UndeclaredSymbolError
from src.models.spec_parser import load_spec, parse_equation, parse_spec, parse_term
from src.models.specification import RuleClass, classify_equation, classify_rules, print_spec
from src.models.term import Sort

CORPUS = ["zip_alt", "zip_dup", "copy_tail", "ones_f", "standard", "is_zeros", "unary", "natstr", "nat", "leq",
          "inv", "nxor", "blink", "stream_functions", "nstream_unary"]


def test_zip_alt_has_four_symbols_and_four_equations(zip_alt):
    assert [s.name for s in zip_alt.symbols] == ["zeros", "ones", "blink", "zip2"]
    assert len(zip_alt.equations) == 4
    assert all(c is RuleClass.EVALUABLE for c in classify_rules(zip_alt).values())


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_prints_and_parses_back(name):
    spec = load_spec(name)
    assert parse_spec(print_spec(spec), name=spec.name) == spec


def test_variable_sorts_are_inferred_from_positions(zip_alt):
    e = zip_alt.equations[3]
    x, s = e.lhs.args[0].head, e.lhs.args[0].tail
    assert (x.name, x.sort) == ("x", Sort.B)
    assert (s.name, s.sort) == ("s", Sort.S)


def test_classification():
    spec = load_spec("natstr")
    natstr_ones = next(e for e in spec.equations if str(e.lhs) == "natstr(ones)")
    assert classify_equation(natstr_ones) is RuleClass.CONSTRAINT
    spec = parse_spec("sym f : S -> S\neq f(s) = t\nconstraint f(0 : s) = s\n")
    assert classify_equation(spec.equations[0]) is RuleClass.NON_ORIENTABLE
    assert classify_equation(spec.equations[1]) is RuleClass.CONSTRAINT


def test_nat_sort_enables_the_natural_constructors():
    spec = load_spec("nstream_unary")
    assert spec.nat_sort
    t = parse_term("unary(succ(succ(zero)))", spec)
    assert t.symbol.res_sort is Sort.S
    with pytest.raises(SortError):
        parse_term("succ(zero)", load_spec("zip_alt"))


def test_syntax_errors_carry_line_and_column():
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec("sym a : S\nfoo a = a\n")
    assert info.value.line == 2
    assert info.value.column == 1
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec("sym a : S\neq a = 0 :\n")
    assert info.value.line == 2


def test_sort_errors():
    with pytest.raises(SortError):
        parse_spec("sym f : S -> S\neq f(s) = 0\n")
    with pytest.raises(SortError):
        parse_spec("sym f : S -> S\neq g(x : s) = s\n")
    with pytest.raises(SortError):
        parse_spec("sym a : S\neq a(0) = a\n")


def test_duplicate_and_undeclared_symbols(zip_alt):
    with pytest.raises(DuplicateSymbolError):
        parse_spec("sym a : S\nsym a : S\n")
    with pytest.raises(DuplicateSymbolError):
        parse_spec("sym zip2 : S -> S\n").union(zip_alt)
    with pytest.raises(UndeclaredSymbolError):
        zip_alt.symbol("dup")


def test_union_drops_duplicate_equations(zip_alt):
    merged = zip_alt.union(load_spec("blink"))
    assert len(merged.symbols) == 4
    assert len(merged.equations) == 4


def test_parse_equation_against_a_signature(zip_alt):
    e = parse_equation("zip2(zeros, ones) = blink", zip_alt)
    assert str(e) == "zip2(zeros, ones) = blink"
    assert e.source_line() == "eq zip2(zeros, ones) = blink"
