import pytest

from src.models.errors import LambdaSyntaxError
from src.models.lambda_gadgets import I, K, OMEGA, SUCC, build_M, build_N, build_T_table, build_T_for_machine, church, \
    halting_times, load_lambda
from src.models.lambda_term import (FINDERS, Abs, App, Diverges, Found, FreeVar, Unknown, Var, apps, find_hnf,
                                    find_nf, find_whnf, parse_lambda, plug, print_lambda)
from src.models.lambda_tree import (Bottom, Node, TreeDiff, TreeEqual, bohm_tree, levy_longo_tree, lt_spine_depth,
                                    print_tree, tree_equal)
from src.models.observational import Distinguishing, NoneFound, enumerate_contexts, obs_refute
from src.models.turing_machine import load_machine

BUDGET = 10_000


@pytest.fixture(scope="module")
def m_term():
    return load_lambda("M")


@pytest.fixture(scope="module")
def n_below3():
    return load_lambda("N(T3)")


def test_parse_and_print():
    t = parse_lambda(r"\x y. x (y y)")
    assert t == Abs(Abs(App(Var(1), App(Var(0), Var(0)))))
    assert print_lambda(t) == r"\x y. x (y y)"
    assert parse_lambda("λx. x") == I
    assert parse_lambda("K") == K
    assert print_lambda(parse_lambda("f x")) == "f x"
    assert parse_lambda("f") == FreeVar("f")


@pytest.mark.parametrize("text", [r"\. x", "(x", "x )", "", r"\x y z", "Ttable[nonexistent"])
def test_lambda_syntax_errors(text):
    with pytest.raises(LambdaSyntaxError):
        parse_lambda(text)


def test_church_numerals():
    assert parse_lambda("2") == church(2)
    assert print_lambda(church(2)) == r"\f x. f (f x)"
    assert find_nf(apps(SUCC, church(1)), 100).term == church(2)
    applied = find_nf(apps(church(3), FreeVar("f"), FreeVar("x")), 100).term
    assert print_lambda(applied) == "f (f (f x))"
    with pytest.raises(ValueError):
        church(-1)


def test_normal_form_searches():
    assert find_whnf(OMEGA, 50) == Unknown(50)
    assert isinstance(find_whnf(OMEGA, 50, detect_loops=True), Diverges)
    assert find_whnf(App(I, K), 5) == Found(K, 1)
    # whnf stops at the outer abstraction, hnf does not reduce argument positions
    t = parse_lambda(r"\x. x ((\y. y) x)")
    assert find_whnf(t, 5).steps == 0
    assert find_hnf(t, 5).steps == 0
    assert find_nf(t, 5) == Found(parse_lambda(r"\x. x x"), 1)


def test_plugging_captures_free_names():
    context = parse_lambda(r"\x. ☐")
    assert plug(context, FreeVar("x")) == I
    assert plug(parse_lambda("☐ I"), K) == App(K, I)
    with pytest.raises(ValueError):
        plug(parse_lambda("☐ ☐"), I)


def test_bohm_trees_tell_eta_expansions_apart():
    a = bohm_tree(parse_lambda(r"\x. x x"), 2, BUDGET)
    b = bohm_tree(parse_lambda(r"\x. x (\z. x z)"), 2, BUDGET)
    assert a == Node(1, 0, (Node(0, 0, ()),))
    assert tree_equal(a, b, 2) == TreeDiff((0,))
    assert tree_equal(a, b, 1) == TreeEqual()
    assert print_tree(b) == "λx.x [λz.x [?]]"
    assert print_tree(bohm_tree(parse_lambda(r"\x. x (\z. x z)"), 3, BUDGET)) == "λx.x [λz.x [z]]"


def test_unsolvable_terms():
    assert bohm_tree(OMEGA, 3, 100) == Unknown(100)
    assert bohm_tree(OMEGA, 3, 100, detect_loops=True) == Bottom()
    assert levy_longo_tree(OMEGA, 3, 100, detect_loops=True) == Bottom()


def test_levy_longo_tree_of_m(m_term):
    tree = levy_longo_tree(m_term, 8, BUDGET)
    assert lt_spine_depth(tree) == 8
    assert m_term == build_M()


def test_levy_longo_trees_agree_when_every_input_halts(m_term):
    n_all = load_lambda("N(Tall)")
    assert tree_equal(levy_longo_tree(m_term, 6, BUDGET), levy_longo_tree(n_all, 6, BUDGET), 6) == TreeEqual()


def test_halting_table_of_a_machine():
    assert halting_times(load_machine("halts_below3"), max_n=4) == [3, 5, 7, None, None]
    assert load_lambda("N(T3)") == build_N(build_T_table(halting_times(load_machine("halts_below3"))))


def test_table_lookup():
    table = build_T_table([2, None])
    false = find_nf(App(K, I), 10).term
    assert find_nf(apps(table, church(0), church(2)), BUDGET).term == K
    assert find_nf(apps(table, church(0), church(1)), BUDGET).term == false
    assert find_nf(apps(table, church(1), church(5)), BUDGET).term == false
    # inputs past the end of the table never halt
    assert find_nf(apps(table, church(3), church(0)), BUDGET).term == false


def test_contexts_are_enumerated_by_size():
    contexts = list(enumerate_contexts(2))
    assert [c.label for c in contexts[:3]] == ["☐", "☐ I", "☐ K"]
    assert len(contexts) == 1 + 5 + 5
    assert contexts[-1].label == "2 (☐)"


def test_m_and_n_are_observably_different(m_term, n_below3):
    verdict = obs_refute(m_term, n_below3, kind="whnf", context_bound=4, budget=BUDGET)
    assert isinstance(verdict, Distinguishing)
    assert verdict.context.label == "☐ I I I"
    assert verdict.converging == "M"


def test_eta_pair_has_no_distinguishing_context():
    verdict = obs_refute(FreeVar("x"), parse_lambda(r"\y. x y"), kind="nf", context_bound=2, budget=BUDGET)
    assert verdict == NoneFound(2, BUDGET)
    closed = obs_refute(parse_lambda(r"\x. x"), parse_lambda(r"\x y. x y"), context_bound=3, budget=200)
    assert closed == NoneFound(3, 200)


def test_obs_refute_rejects_unknown_kinds():
    with pytest.raises(ValueError):
        obs_refute(I, K, kind="nf2")


@pytest.mark.parametrize("a", range(9))
@pytest.mark.parametrize("b", range(9))
def test_successor_adds_to_church_numerals(a, b):
    t = church(a)
    for _ in range(b):
        t = App(SUCC, t)
    assert find_nf(t, BUDGET).term == church(a + b)


SAMPLE_TERMS = [
    r"(\x. x) K", r"\x. x ((\y. y) x)", r"(\x. x x) (\y. y)", r"(\x y. y) ((\x. x x) (\x. x x))",
    r"\f. (\x. f (x x)) (\x. f (x x))", "2 2", "K I Omega",
]


@pytest.mark.parametrize("text", SAMPLE_TERMS)
@pytest.mark.parametrize("kind", sorted(FINDERS))
def test_found_results_survive_larger_budgets(text, kind):
    t = parse_lambda(text)
    find = FINDERS[kind]
    for budget in range(12):
        result = find(t, budget)
        if isinstance(result, Found):
            assert find(t, budget + 1) == result
            assert find(t, budget + 50) == result


def tree_prefix_of(small, big) -> bool:
    """small agrees with big wherever small is resolved."""
    if isinstance(small, Unknown):
        return True
    if isinstance(small, Node) and isinstance(big, Node):
        return (small.binders, small.head, len(small.children)) == (big.binders, big.head, len(big.children)) \
            and all(tree_prefix_of(x, y) for x, y in zip(small.children, big.children))
    return small == big


@pytest.mark.parametrize("t", [
    parse_lambda(r"\x. x x"), parse_lambda(r"\x. x (\z. x z)"), church(2), K, SUCC, build_M(),
    parse_lambda(r"\f. (\x. f (x x)) (\x. f (x x))"),
])
@pytest.mark.parametrize("depth", range(5))
def test_bohm_tree_grows_by_extension(t, depth):
    assert tree_prefix_of(bohm_tree(t, depth, BUDGET), bohm_tree(t, depth + 1, BUDGET))


@pytest.mark.parametrize("name", ["halts_below3", "parity", "empty"])
def test_levy_longo_trees_agree_exactly_while_inputs_halt(m_term, name):
    machine = load_machine(name)
    times = halting_times(machine)
    n_term = build_N(build_T_for_machine(machine))
    for depth in range(1, 7):
        verdict = tree_equal(levy_longo_tree(m_term, depth, BUDGET), levy_longo_tree(n_term, depth, BUDGET), depth)
        assert (verdict == TreeEqual()) == all(h is not None for h in times[:depth]), depth
