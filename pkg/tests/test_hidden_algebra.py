import pytest

from src.models.ep_word import BLINK, EpWord, ONES, ZEROS
from src.models.errors import CongruenceViolationError
from src.models.hidden_algebra import (W, Z, behavioral_equiv, behaviorally_satisfies, confusion_grid,
                                       confusion_model, counterexample_grid, counterexample_model, emb,
                                       find_congruence_violation, join, ones_f_grid, ones_f_model,
                                       quotient_by_equiv, remark_case)
from src.models.spec_parser import load_spec, parse_term
from src.models.stream_algebra import AllHold, canonical_model, check_spec, default_pools
from src.models.term import Sort


@pytest.fixture(scope="module")
def model():
    return counterexample_model()


def test_join_on_finite_and_infinite_words():
    assert join((0, 0), (1,)) == (0, 1, 0)
    assert join((), (1, 1)) == (1, 1)
    assert join((0,), ZEROS) == EpWord.parse("(0)")
    assert join(ZEROS, ONES) == BLINK


def test_elements_embed_as_their_observations(model):
    for e in counterexample_grid(3)[Sort.S]:
        assert model.observation(e) == emb(e)


def test_zip_alt_holds_behaviorally(model, zip_alt):
    report = behaviorally_satisfies(model, zip_alt, counterexample_grid(4))
    assert report.behavioral
    assert report.holds, [str(v) for _, v in report.rows]


def test_goal_fails_in_the_counterexample(model, zip_alt):
    lhs = model.evaluate(parse_term("zip2(zeros, ones)", zip_alt), {})
    rhs = model.evaluate(parse_term("blink", zip_alt), {})
    assert lhs == W(ZEROS)
    assert model.observation(rhs) == BLINK
    assert not behavioral_equiv(model, lhs, rhs)


def test_zeros_is_not_a_cons(model):
    assert model.interp["zeros"]() == Z()
    assert model.interp[":"](0, Z()) == Z((0,))
    assert behavioral_equiv(model, Z(), Z((0,)))
    assert Z() != Z((0,))


def test_behavioral_equivalence_is_not_a_congruence(model):
    pools = counterexample_grid(2)
    witness = find_congruence_violation(model, pools)
    assert witness is not None
    assert witness.symbol == "zip2"
    with pytest.raises(CongruenceViolationError) as info:
        quotient_by_equiv(model, pools)
    assert info.value.witness.symbol == "zip2"


def test_every_case_family_is_covered():
    stream_elements = counterexample_grid(1)[Sort.S]
    cases = {remark_case(s, t) for s in stream_elements for t in stream_elements}
    assert cases == {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix"}


def test_ones_f_model():
    alg = ones_f_model()
    spec = load_spec("ones_f")
    assert behaviorally_satisfies(alg, spec, ones_f_grid()).holds
    lhs = alg.evaluate(parse_term("f(ones)", spec), {})
    rhs = alg.evaluate(parse_term("ones", spec), {})
    assert alg.observation(lhs) == ZEROS
    assert alg.observation(rhs) == ONES
    assert not behavioral_equiv(alg, lhs, rhs)
    assert find_congruence_violation(alg, ones_f_grid()).symbol == "f"


def test_confusion_model_is_congruent():
    spec = load_spec("nstream_unary")
    alg = confusion_model(spec)
    pools = confusion_grid()
    assert behaviorally_satisfies(alg, spec, pools).holds
    assert find_congruence_violation(alg, pools) is None
    quotient = quotient_by_equiv(alg, pools)
    assert not quotient.hidden
    assert check_spec(quotient, spec.equations, default_pools(1, 2)).holds


def test_quotient_of_a_visible_algebra_is_itself(zip_alt):
    alg = canonical_model(zip_alt)
    assert quotient_by_equiv(alg, default_pools(1, 1)) is alg


def test_behavioral_check_counts_assignments(model, zip_alt):
    pools = counterexample_grid(1)
    report = behaviorally_satisfies(model, zip_alt, pools)
    n = len(pools[Sort.S])
    assert report.verdict_for(zip_alt.equations[3]) == AllHold(2 * n * n)
    assert n == 2 * 3 + 8
