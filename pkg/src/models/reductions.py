import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from src.models.ep_word import EpWord, ZEROS, decode_naturals
from src.models.errors import TemplateError
from src.models.rewrite_engine import EvalResult, ExternalFunction, ExternalStream, RewriteEngine, Unknown
from src.models.spec_parser import parse_term
from src.models.spec_template import (CompiledSpec, SpecTemplate, args, check_free_names, is_zeros_equations,
                                      leq_equations, nat_equations, natstr_equations, standard_equations, unary,
                                      unary_stream_equations, zip_term)
from src.models.specification import Specification
from src.models.term import Sort, Symbol
from src.models.tm_compiler import solutions_start_term, solutions_template, transition_equations
from src.models.turing_machine import Halt, NTM, TuringMachine, run_direct

logger = logging.getLogger(__name__)

VERBOSE = False

_RESERVED = ("S", "X", "A", "run", "zeros", "ones", "natstr", "nat", "leq", "is_zeros", "uhd", "utl", "h2",
             "nhead", "ntail", "unary", "M", "N", "inv", "nxor", "blink")
WF_VARIANTS = ("at_least_one", "at_most_full")
# Inputs the full-model run hands to the machine: A, the step counter and h2.
FULL_MODEL_INPUTS = 3


# Verdicts

@dataclass(frozen=True)
class AllZerosSoFar:
    length: int

    def __str__(self):
        return f"{type(self).__name__}({self.length})"


@dataclass(frozen=True)
class OneAt:
    position: int

    def __str__(self):
        return f"{type(self).__name__}({self.position})"


@dataclass(frozen=True)
class ProbeUnknown:
    index: int

    def __str__(self):
        return f"Unknown({self.index})"


class WitnessOfChain(AllZerosSoFar):
    """run accepted `length` consecutive encoded pairs."""


class ConsistentWithWellFounded(OneAt):
    """The encoded sequence stops being a chain at `position`."""


@dataclass
class ProbeResult:
    prefix: List[EvalResult] = field(repr=False)
    verdict: Union[AllZerosSoFar, OneAt, ProbeUnknown]

    def bits(self) -> str:
        return "".join(str(r) for r in self.prefix)


def _classify(prefix: Sequence[EvalResult], zeros_verdict, one_verdict, offset: int = 0):
    for i, r in enumerate(prefix):
        if isinstance(r, Unknown):
            return ProbeUnknown(i)
        if r.value == 1:
            return one_verdict(i)
    return zeros_verdict(len(prefix) - offset)


def _check_machine(m: TuringMachine, what: str):
    if not isinstance(m, TuringMachine):
        raise TemplateError(f"the {what} specification needs a deterministic machine, got {type(m).__name__}")
    check_free_names(m.states, _RESERVED)


# Well-foundedness

def _run_equations(t: SpecTemplate, m: TuringMachine) -> SpecTemplate:
    t.declare("run", ["B", "S"], "S")
    t.eq("run(0, s)", "ones")
    tape = zip_term(["1 : 1 : zeros", "uhd(s)", "uhd(utl(s))"])
    t.eq("run(1, s)", f"0 : run({m.initial}(zip1(zeros), {tape}), utl(s))")
    return t


def _wf_library(m: TuringMachine) -> SpecTemplate:
    return (SpecTemplate("library").extend(standard_equations(3)).extend(transition_equations(m))
            .extend(is_zeros_equations()).extend(unary_stream_equations()).extend(natstr_equations()))


def wf_template(m: TuringMachine) -> CompiledSpec:
    """S is ones iff the sequence encoded by X is an infinite chain of the relation m decides."""
    _check_machine(m, "well-foundedness")
    t = SpecTemplate(f"wf_{m.name}")
    t.declare("S", [], "S").declare("X", [], "S")
    t.eq("S", "is_zeros(run(1, X))")
    t.constraint("natstr(X)", "ones")
    _run_equations(t, m)
    return CompiledSpec(t, _wf_library(m))


def compile_wf_spec(m: TuringMachine) -> Specification:
    return wf_template(m).spec


def wf_variant_template(m: TuringMachine, variant: str) -> CompiledSpec:
    if variant not in WF_VARIANTS:
        raise TemplateError(f"variant must be one of {WF_VARIANTS}, got '{variant}'")
    _check_machine(m, "well-foundedness")
    t = SpecTemplate(f"wf_{variant}_{m.name}")
    t.declare("S", [], "S").declare("X", [], "S")
    library = _wf_library(m)
    if variant == "at_least_one":
        t.eq("S", "run(1, X)")
        t.constraint("S", "zeros")
    else:
        t.constraint("ones", "leq(S, is_zeros(run(1, X)))")
        library.extend(leq_equations())
    t.constraint("natstr(X)", "ones")
    _run_equations(t, m)
    return CompiledSpec(t, library)


def compile_wf_variant(m: TuringMachine, variant: str) -> Specification:
    return wf_variant_template(m, variant).spec


def probe_run(spec: Specification, x: EpWord, prefix_len: int = 8, budget: int = 10000) -> ProbeResult:
    """Evaluates run(1, X); element 0 is the initial 0, element i the verdict on the i-th encoded pair."""
    if prefix_len < 0:
        raise ValueError(f"prefix length must be >= 0, got {prefix_len}")
    engine = RewriteEngine(spec, externals={"X": x})
    prefix = engine.stream_prefix(parse_term("run(1, X)", spec), prefix_len + 1, budget)
    verdict = _classify(prefix, WitnessOfChain, ConsistentWithWellFounded, offset=1)
    if VERBOSE:
        logger.info(f"probe_run X={x}: {format_bits(prefix)} -> {verdict}")
    return ProbeResult(prefix, verdict)


def chain_pairs_accepted(m: TuringMachine, x: EpWord, pairs: int, max_steps: int = 10000) -> List[Optional[bool]]:
    """Direct-simulation verdicts on the first `pairs` consecutive pairs encoded by x; None when m did not halt."""
    naturals = decode_naturals(x, pairs + 1)
    if len(naturals) < pairs + 1 or naturals[-1] is None:
        raise ValueError(f"{x} does not encode {pairs + 1} naturals")
    verdicts: List[Optional[bool]] = []
    for n, k in zip(naturals, naturals[1:]):
        result = run_direct(m, [n, k], [], max_steps)
        verdicts.append(result.bit == 1 if isinstance(result, Halt) else None)
    return verdicts


def format_bits(prefix: Sequence[EvalResult]) -> str:
    return "".join(str(r) for r in prefix)


# Full models

def _tau_names(n: int) -> List[str]:
    return [f"t{2 * j - 1}" for j in range(1, n // 2 + 1)]


def _skolem_tape(taus: Sequence[str]) -> List[str]:
    tape: List[str] = []
    for i, tau in enumerate(taus, start=1):
        tape.append(tau)
        tape.append(f"g{2 * i}({args(*taus[:i])})")
    return tape


def full_template(m: TuringMachine, n: int, a: int) -> CompiledSpec:
    """Universal quantifiers become the arguments of S, existential ones the Skolem symbols g2, g4, …"""
    if n < 2 or n % 2:
        raise TemplateError(f"quantifier count must be even and >= 2, got {n}")
    if a < 0:
        raise TemplateError(f"a must be >= 0, got {a}")
    _check_machine(m, "full-model")
    taus = _tau_names(n)
    t = SpecTemplate(f"full_{m.name}_{n}_{a}")
    t.declare("S", ["S"] * (n // 2), "S")
    for i in range(1, n // 2 + 1):
        t.declare(f"g{2 * i}", ["S"] * i, "S")
    t.declare("h2", ["S", "S"], "S").declare("A", [], "S").declare("run", ["B", "S", "S"], "S")
    head = f"S({args(*taus)})"
    t.eq(head, f"run(1, {zip_term(_skolem_tape(taus))}, zeros)")
    t.constraint(head, "zeros")
    t.eq("run(0, t, v)", "ones")
    tape = zip_term([unary(FULL_MODEL_INPUTS), "A", "v", "h2(t, v)"])
    t.eq("run(1, t, v)", f"0 : run({m.initial}(zip1(t), {tape}), t, 1 : v)")
    t.eq("A", unary(a))
    t.constraint("nat(h2(t, v))", "ones")
    library = (SpecTemplate("library").extend(standard_equations(max(n, FULL_MODEL_INPUTS + 1)))
               .extend(transition_equations(m)).extend(nat_equations()))
    return CompiledSpec(t, library)


def compile_full_spec(m: TuringMachine, n: int, a: int) -> Specification:
    return full_template(m, n, a).spec


def default_trials(spec: Specification) -> Dict[str, ExternalFunction]:
    """Every Skolem symbol and h2 read as the constant 0^ω."""
    names = [s.name for s in spec.symbols if re.match(r"^g\d+$", s.name)] + ["h2"]
    return {name: ExternalFunction.constant(name, ZEROS) for name in names}


def probe_full(spec: Specification, taus: Sequence[EpWord], trials: Optional[Dict[str, ExternalFunction]] = None,
               prefix_len: int = 8, budget: int = 10000) -> ProbeResult:
    """Evaluates run(1, zip_n(τ1, g2(τ1), …), zeros) with τ values fixed and trial Skolem functions."""
    count = len(spec.symbol("S").arg_sorts)
    if len(taus) != count:
        raise ValueError(f"{spec.name} quantifies over {count} streams, got {len(taus)} values")
    tau_names = [f"tau{2 * j - 1}" for j in range(1, count + 1)]
    constants = Specification(name="taus", symbols=tuple(Symbol(name, (), Sort.S) for name in tau_names),
                              equations=())
    extended = spec.union(constants, name=spec.name)
    functions = default_trials(spec)
    functions.update(trials or {})
    term = parse_term(f"run(1, {zip_term(_skolem_tape(tau_names))}, zeros)", extended)
    engine = RewriteEngine(extended, externals=dict(zip(tau_names, taus)), functions=functions)
    prefix = engine.stream_prefix(term, prefix_len + 1, budget)
    return ProbeResult(prefix, _classify(prefix, AllZerosSoFar, OneAt, offset=1))


# Unions

@dataclass
class UnionDemo:
    """Two pairs of specifications, each satisfiable alone, whose unions have no model."""
    ones_m: CompiledSpec
    inv_n: CompiledSpec
    nxor: CompiledSpec
    blink: CompiledSpec

    @property
    def inv_example(self) -> Specification:
        return self.ones_m.spec.union(self.inv_n.spec, name="inv_union")

    @property
    def nxor_example(self) -> Specification:
        return self.nxor.spec.union(self.blink.spec, name="nxor_union")

    def display_text(self) -> str:
        return "".join(part.display_text() for part in (self.ones_m, self.inv_n, self.nxor, self.blink))


def compile_union_demo() -> UnionDemo:
    ones_m = SpecTemplate("E_M").declare("M", [], "S").eq("M", "1 : M")
    inv_n = SpecTemplate("E_N").declare("N", [], "S").declare("inv", ["S"], "S")
    inv_n.eq("N", "inv(N)").eq("inv(0 : s)", "1 : inv(s)").eq("inv(1 : s)", "0 : inv(s)")
    nxor = SpecTemplate("E_nxor").declare("nxor", ["S"], "S")
    nxor.constraint("is_zeros(nxor(s))", "zeros")
    for b1 in (0, 1):
        for b2 in (0, 1):
            nxor.eq(f"nxor({b1} : {b2} : s)", f"{int(b1 == b2)} : nxor(s)")
    blink = SpecTemplate("E_blink").declare("blink", [], "S").eq("blink", "0 : 1 : blink")
    empty = SpecTemplate("library")
    return UnionDemo(CompiledSpec(ones_m, empty), CompiledSpec(inv_n, empty),
                     CompiledSpec(nxor, is_zeros_equations()), CompiledSpec(blink, empty))


# N-streams

def confusion_template(m: TuringMachine) -> CompiledSpec:
    """run over a stream of naturals; only hidden models can tell the encodings of X apart."""
    _check_machine(m, "confusion")
    t = SpecTemplate(f"confusion_{m.name}").enable_nat_sort()
    t.declare("X", [], "S").declare("run", ["B", "S"], "S")
    t.declare("nhead", ["S"], "N").declare("ntail", ["S"], "S").declare("unary", ["N"], "S")
    t.eq("nhead(ncons(x, s))", "x").eq("ntail(ncons(x, s))", "s")
    t.eq("unary(zero)", "zeros").eq("unary(succ(x))", "1 : unary(x)")
    t.constraint("zeros", "run(1, X)")
    t.eq("run(0, s)", "ones")
    tape = zip_term(["1 : 1 : zeros", "unary(nhead(s))", "unary(nhead(ntail(s)))"])
    t.eq("run(1, s)", f"0 : run({m.initial}(zeros, {tape}), ntail(s))")
    library = SpecTemplate("library").extend(standard_equations(3)).extend(transition_equations(m))
    return CompiledSpec(t, library)


def compile_confusion_spec(m: TuringMachine) -> Specification:
    return confusion_template(m).spec


def probe_confusion(spec: Specification, naturals: Union[EpWord, ExternalStream], prefix_len: int = 8,
                    budget: int = 10000) -> ProbeResult:
    """run(1, X) for X the N-stream given by a run-length encoded word (or an explicit stream)."""
    x = naturals if isinstance(naturals, ExternalStream) else ExternalStream("X", naturals, naturals=True)
    engine = RewriteEngine(spec, externals={"X": x})
    prefix = engine.stream_prefix(parse_term("run(1, X)", spec), prefix_len + 1, budget)
    return ProbeResult(prefix, _classify(prefix, WitnessOfChain, ConsistentWithWellFounded, offset=1))


# Solutions of a nondeterministic machine

def probe_solutions(m: NTM, x: EpWord, choices: EpWord, progress: EpWord, prefix_len: int = 8,
                    budget: int = 10000) -> ProbeResult:
    """The solutions stream for input x, choice stream N and progress schedule P; 0s while the run keeps going."""
    spec = solutions_template(m).spec
    engine = RewriteEngine(spec, externals={"X": x, "N": choices, "P": progress})
    prefix = engine.stream_prefix(solutions_start_term(m, spec), prefix_len, budget)
    return ProbeResult(prefix, _classify(prefix, AllZerosSoFar, OneAt))


# Golden comparison

def normalize_spec_text(text: str) -> List[str]:
    """Non-comment lines with whitespace removed, for comparing generated and transcribed specifications."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        line = re.sub(r"\s+", "", line)
        if line:
            lines.append(line)
    return lines


def golden_diff(generated: str, golden: str) -> List[str]:
    """Lines present on one side only, prefixed with '-' (golden) or '+' (generated)."""
    produced, expected = normalize_spec_text(generated), normalize_spec_text(golden)
    if produced == expected:
        return []
    missing = [f"-{line}" for line in expected if line not in produced]
    extra = [f"+{line}" for line in produced if line not in expected]
    return missing + extra or ["~order"]
