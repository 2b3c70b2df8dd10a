import pytest
from hypothesis import given, settings, strategies as st

from src.models.ep_word import (BLINK, EpWord, ONES, ZEROS, dup_sem, even_sem, inv_sem, nxor_sem, odd_sem, zip2,
                                zip_k)
from src.models.errors import NonGroundTermError, OrthogonalityError
from src.models.rewrite_engine import (Diff, Equal, ExternalFunction, ExternalStream, Got, PrefixUnknown,
                                       RewriteEngine, Unknown, eval_bit, format_prefix, prefix_equal, stream_prefix)
from src.models.spec_parser import load_spec, parse_spec, parse_term
from tests.conftest import epwords

SIGMA_TAU_RHO = "sym sigma : S\nsym tau : S\nsym rho : S\n"


@pytest.fixture(scope="module")
def functions_spec():
    return load_spec("zip_alt").union(load_spec("stream_functions"), name="functions")


def bits(results):
    return [r.value for r in results]


def test_zeros_and_zip(zip_alt):
    assert bits(stream_prefix(zip_alt, zip_alt.constant("zeros"), 4, 100)) == [0, 0, 0, 0]
    t = parse_term("zip2(zeros, ones)", zip_alt)
    assert bits(stream_prefix(zip_alt, t, 6, 100)) == [0, 1, 0, 1, 0, 1]


def test_zip3_reads_its_external_arguments_in_order():
    spec = load_spec("standard").union(parse_spec(SIGMA_TAU_RHO))
    t = parse_term("zip3(sigma, tau, rho)", spec)
    externals = {"sigma": ZEROS, "tau": ONES, "rho": BLINK}
    assert bits(stream_prefix(spec, t, 6, 1000, externals)) == [0, 1, 0, 0, 0, 1]


def test_budget_exhaustion_is_unknown():
    spec = parse_spec("sym ones : S\nsym f : S -> S\nsym hd : S -> B\n"
                      "eq ones = 1 : ones\neq f(x : s) = s\neq hd(x : s) = x\n")
    t = parse_term("hd(f(ones))", spec)
    assert eval_bit(spec, t, 0) == Unknown(0)
    assert eval_bit(spec, t, 10).value == 1


def test_underspecified_stream_is_unknown_after_its_head():
    spec = parse_spec("sym M : S\nsym tail : S -> S\neq M = 0 : tail(M)\neq tail(x : s) = s\n")
    results = stream_prefix(spec, spec.constant("M"), 3, 1000)
    assert results[0].value == 0
    assert isinstance(results[1], Unknown)
    assert isinstance(results[2], Unknown)


def test_unproductive_self_reference_is_unknown():
    spec = load_spec("inv")
    result = stream_prefix(spec, spec.constant("N"), 1, 500)[0]
    assert isinstance(result, Unknown)
    assert format_prefix(stream_prefix(spec, spec.constant("M"), 4, 100)) == "1111"


def test_prefix_equal_verdicts(zip_alt):
    lhs = parse_term("zip2(zeros, ones)", zip_alt)
    assert prefix_equal(zip_alt, lhs, zip_alt, zip_alt.constant("blink"), 64, 1000) == Equal(64)
    assert prefix_equal(zip_alt, lhs, zip_alt, parse_term("zip2(ones, zeros)", zip_alt), 8, 1000) == Diff(0, 0, 1)
    inv = load_spec("inv")
    assert prefix_equal(inv, inv.constant("M"), inv, inv.constant("N"), 4, 200) == PrefixUnknown(0)


def test_dup_agrees_with_zip_of_the_same_stream():
    spec = load_spec("zip_dup")
    for word in ("(0)", "1(01)", "0110(100)"):
        x = EpWord.parse(word)
        assert prefix_equal(spec, spec.constant("M"), spec, spec.constant("N"), 20, 1000, {"X": x}) == Equal(20)


def test_non_ground_terms_are_rejected(zip_alt):
    with pytest.raises(NonGroundTermError):
        RewriteEngine(zip_alt).stream_prefix(zip_alt.equations[3].rhs, 1, 10)


def test_overlapping_rules_are_rejected():
    spec = parse_spec("sym f : S -> S\neq f(0 : s) = s\neq f(x : s) = s\n")
    with pytest.raises(OrthogonalityError):
        RewriteEngine(spec)


def test_external_streams_of_naturals():
    spec = parse_spec("sort N\nsym X : S\nsym nhd : S -> N\nsym unary : N -> S\nsym zeros : S\n"
                      "eq zeros = 0 : zeros\neq nhd(ncons(n, s)) = n\n"
                      "eq unary(zero) = zeros\neq unary(succ(n)) = 1 : unary(n)\n")
    x = ExternalStream("X", EpWord.parse("(110)"), naturals=True)
    t = parse_term("unary(nhd(X))", spec)
    assert bits(stream_prefix(spec, t, 4, 1000, {"X": x})) == [1, 1, 0, 0]


def test_trial_interpretations_answer_for_undefined_functions():
    spec = parse_spec("sym g : S -> S\nsym zeros : S\neq zeros = 0 : zeros\n")
    t = parse_term("g(zeros)", spec)
    inverted = ExternalFunction.pointwise("g", lambda b: 1 - b)
    assert bits(stream_prefix(spec, t, 3, 100, functions={"g": inverted})) == [1, 1, 1]
    constant = ExternalFunction.constant("g", BLINK)
    assert bits(stream_prefix(spec, t, 3, 100, functions={"g": constant})) == [0, 1, 0]


def test_rule_counts_are_recorded(zip_alt):
    engine = RewriteEngine(zip_alt)
    engine.stream_prefix(zip_alt.constant("blink"), 4, 100)
    assert sum(engine.rule_counts.values()) == 2


# Randomized ground terms over productive stream functions, checked against the ω-word semantics.

SEMANTICS = {
    "zeros": ZEROS, "ones": ONES, "blink": BLINK,
    "dup": dup_sem, "even": even_sem, "odd": odd_sem, "inv": inv_sem, "nxor": nxor_sem,
    "tl": lambda w: w.tail(), "zip2": zip2,
}

terms = st.recursive(
    st.sampled_from([("zeros",), ("ones",), ("blink",)]),
    lambda inner: st.one_of(
        st.tuples(st.sampled_from(["dup", "even", "odd", "inv", "nxor", "tl"]), inner),
        st.tuples(st.just("zip2"), inner, inner),
        st.tuples(st.just("cons"), st.sampled_from([0, 1]), inner),
    ),
    max_leaves=5,
)


def render(node) -> str:
    if node[0] == "cons":
        return f"{node[1]} : {render(node[2])}"
    if len(node) == 1:
        return node[0]
    return f"{node[0]}({', '.join(render(a) for a in node[1:])})"


def meaning(node) -> EpWord:
    if node[0] == "cons":
        return meaning(node[2]).cons(node[1])
    if len(node) == 1:
        return SEMANTICS[node[0]]
    return SEMANTICS[node[0]](*(meaning(a) for a in node[1:]))


@given(terms, st.integers(min_value=0, max_value=400), st.integers(min_value=1, max_value=12))
@settings(max_examples=1000, deadline=None)
def test_engine_invariants(functions_spec, node, budget, n):
    t = parse_term(render(node), functions_spec)
    first = stream_prefix(functions_spec, t, n, budget)
    # determinism
    assert stream_prefix(functions_spec, t, n, budget) == first
    # budget monotonicity
    larger = stream_prefix(functions_spec, t, n, budget + 200)
    for small, big in zip(first, larger):
        if isinstance(small, Got):
            assert isinstance(big, Got) and big.value == small.value
    # prefix coherence
    assert stream_prefix(functions_spec, t, n + 3, budget)[:n] == first
    # resolved elements agree with the ω-word semantics
    expected = meaning(node).take(n)
    assert all(r.value == b for r, b in zip(first, expected) if isinstance(r, Got))


# Stream functions applied to external ω-words agree with their semantics on 64-bit prefixes.

EXTERNAL_NAMES = ["sigma", "tau", "rho", "upsilon"]

ORACLES = [
    ("zip2(sigma, tau)", lambda ws: zip_k(ws[:2])),
    ("zip3(sigma, tau, rho)", lambda ws: zip_k(ws[:3])),
    ("zip4(sigma, tau, rho, upsilon)", lambda ws: zip_k(ws)),
    ("dup(sigma)", lambda ws: dup_sem(ws[0])),
    ("even(sigma)", lambda ws: even_sem(ws[0])),
    ("inv(sigma)", lambda ws: inv_sem(ws[0])),
]


@pytest.fixture(scope="module")
def oracle_spec():
    externals = "".join(f"sym {name} : S\n" for name in EXTERNAL_NAMES)
    return load_spec("standard").union(load_spec("stream_functions")).union(parse_spec(externals))


@given(st.lists(epwords(), min_size=4, max_size=4))
@settings(max_examples=200, deadline=None)
def test_stream_functions_match_word_semantics(oracle_spec, words):
    externals = dict(zip(EXTERNAL_NAMES, words))
    for text, oracle in ORACLES:
        t = parse_term(text, oracle_spec)
        results = stream_prefix(oracle_spec, t, 64, 10000, externals)
        assert all(isinstance(r, Got) for r in results), text
        assert bits(results) == oracle(words).take(64), text
