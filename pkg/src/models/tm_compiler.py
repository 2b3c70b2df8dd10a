import logging
from functools import lru_cache
from typing import List, Sequence, Union

from src.models.ep_word import EpWord
from src.models.errors import TemplateError
from src.models.rewrite_engine import RewriteEngine, Unknown
from src.models.spec_template import (CompiledSpec, SpecTemplate, args, check_free_names, natstr_equations,
                                      standard_equations)
from src.models.specification import Specification
from src.models.term import App, Bit, Term, unary_term
from src.models.turing_machine import Halt, Move, NTM, TuringMachine

logger = logging.getLogger(__name__)

VERBOSE = False

_LIBRARY_NAMES = ("zeros", "ones", "natstr", "X", "N", "P")


def oracle_names(count: int) -> List[str]:
    return [f"xi{j}" for j in range(1, count + 1)]


def transition_equations(m: TuringMachine) -> SpecTemplate:
    """The three rule families of a deterministic machine, states typed S x S -> B."""
    check_free_names(m.states, _LIBRARY_NAMES)
    t = SpecTemplate(f"tmes_{m.name}")
    for q in m.states:
        t.declare(q, ["S", "S"], "B")
    for q in m.states:
        for b in (0, 1):
            transition = m.delta.get((q, b))
            if transition is None:
                t.eq(f"{q}(x, {b} : y)", f"{b}")
                continue
            q2, b2, move = transition
            if move is Move.R:
                t.eq(f"{q}(x, {b} : y)", f"{q2}({b2} : x, y)")
            else:
                t.eq(f"{q}(a : x, {b} : y)", f"{q2}(x, a : {b2} : y)")
    return t


@lru_cache(maxsize=64)
def compile_tmes(m: TuringMachine, inputs: int = 1, oracles: int = 0) -> Specification:
    """tmes(m) with the standard equations needed to start it on `inputs` naturals and `oracles` oracles."""
    if inputs < 0 or oracles < 0:
        raise TemplateError(f"input and oracle counts must be >= 0, got {inputs} and {oracles}")
    t = SpecTemplate(f"tmes_{m.name}")
    t.extend(standard_equations(max(inputs + 1, oracles)))
    for name in oracle_names(oracles):
        t.declare(name, [], "S")
    t.extend(transition_equations(m))
    spec = t.build()
    if VERBOSE:
        logger.info(f"Compiled {m.name}: {len(spec.equations)} equations")
    return spec


def _zip(spec: Specification, terms: Sequence[Term]) -> Term:
    return App(spec.symbol(f"zip{len(terms)}"), tuple(terms))


def init_term(m: TuringMachine, spec: Specification, inputs: Sequence[Union[int, Term]],
              oracles: Sequence[Term] = ()) -> Term:
    """q0(zip_m(oracles), zip_{k+1}(k, n1, ..., nk)); the left tape is zeros without oracles."""
    zeros = spec.constant("zeros")
    input_terms = [unary_term(n, zeros) if isinstance(n, int) else n for n in inputs]
    left = _zip(spec, list(oracles)) if oracles else zeros
    right = _zip(spec, [unary_term(len(input_terms), zeros)] + input_terms)
    return App(spec.symbol(m.initial), (left, right))


def transition_steps(engine: RewriteEngine, m: Union[TuringMachine, NTM]) -> int:
    """Applications of state rules other than halting rules; zeros/zip unfoldings are excluded."""
    states = set(m.states)
    return sum(count for rule, count in engine.rule_counts.items()
               if rule.lhs.symbol.name in states and not isinstance(rule.rhs, Bit))


def run_via_rewriting(m: TuringMachine, inputs: Sequence[int], oracles: Sequence[EpWord],
                      budget: int) -> Union[Halt, Unknown]:
    spec = compile_tmes(m, len(inputs), len(oracles))
    names = oracle_names(len(oracles))
    engine = RewriteEngine(spec, externals=dict(zip(names, oracles)))
    term = init_term(m, spec, list(inputs), [spec.constant(n) for n in names])
    result = engine.eval_bit(term, budget)
    if isinstance(result, Unknown):
        return result
    return Halt(result.value, transition_steps(engine, m))


def _check_total(m: NTM):
    if not m.is_total():
        missing = [(i, q, b) for i, d in enumerate((m.delta0, m.delta1)) for q in m.states for b in (0, 1)
                   if (q, b) not in d]
        raise TemplateError(f"nondeterministic machine {m.name} has undefined transitions: {missing}")


def compile_tmesn(m: NTM) -> Specification:
    """Choice stream third, unary position fourth; a left move needs 1 : p, so position 0 blocks it."""
    _check_total(m)
    check_free_names(m.states, _LIBRARY_NAMES)
    t = SpecTemplate(f"tmesn_{m.name}")
    t.extend(standard_equations(0))
    t.declare("X", [], "S").declare("N", [], "S")
    for q in m.states:
        t.declare(q, ["S"] * 4, "B")
    for i, delta in enumerate((m.delta0, m.delta1)):
        for (q, b), (q2, b2, move) in delta.items():
            if move is Move.R:
                t.eq(f"{q}(x, {b} : y, {i} : z, p)", f"{q2}({b2} : x, y, z, 1 : p)")
            else:
                t.eq(f"{q}(a : x, {b} : y, {i} : z, 1 : p)", f"{q2}(x, a : {b2} : y, z, p)")
    return t.build()


def ntm_start_term(m: NTM, spec: Specification) -> Term:
    zeros = spec.constant("zeros")
    return App(spec.symbol(m.initial), (zeros, spec.constant("X"), spec.constant("N"), zeros))


def solutions_template(m: NTM) -> CompiledSpec:
    """Progress-instrumented encoding: the fifth argument P schedules steps (1) and progress checks (0)."""
    _check_total(m)
    check_free_names(m.states, _LIBRARY_NAMES)
    t = SpecTemplate(f"solutions_{m.name}")
    t.declare("X", [], "S").declare("N", [], "S").declare("P", [], "S")
    t.declare("zeros", [], "S").declare("ones", [], "S").declare("natstr", ["S"], "S")
    for q in m.states:
        t.declare(q, ["S"] * 5, "S")
    t.constraint(f"{m.initial}({args('zeros', 'X', 'N', 'zeros', 'P')})", "zeros")
    t.constraint("natstr(P)", "ones")
    left_moves = []
    for i, delta in enumerate((m.delta0, m.delta1)):
        for (q, b), (q2, b2, move) in delta.items():
            if move is Move.R:
                t.eq(f"{q}(x, {b} : y, {i} : z, p, 1 : v)", f"{q2}({b2} : x, y, z, 1 : p, v)")
            else:
                t.eq(f"{q}(a : x, {b} : y, {i} : z, 1 : p, 1 : v)", f"{q2}(x, a : {b2} : y, z, p, v)")
                left_moves.append((q, b, i))
    for q in m.states:
        t.eq(f"{q}(x, y, z, 1 : p, 0 : v)", f"0 : {q}(x, y, z, p, v)")
    for q in m.states:
        t.eq(f"{q}(x, y, z, 0 : p, 0 : v)", "ones")
    for q, b, i in left_moves:
        t.eq(f"{q}(a : x, {b} : y, {i} : z, 0 : p, 1 : v)", "ones")
    library = SpecTemplate("library").extend(standard_equations(0)).extend(natstr_equations())
    return CompiledSpec(t, library)


def compile_solutions_spec(m: NTM) -> Specification:
    return solutions_template(m).spec


def solutions_start_term(m: NTM, spec: Specification) -> Term:
    zeros = spec.constant("zeros")
    return App(spec.symbol(m.initial),
               (zeros, spec.constant("X"), spec.constant("N"), zeros, spec.constant("P")))
