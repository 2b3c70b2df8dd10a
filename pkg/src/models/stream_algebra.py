import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.ep_word import (BLINK, EpWord, ONES, ZEROS, coiterate, dup_sem, even_sem, exhaustive_epwords,
                                inv_sem, is_zeros_sem, leq_sem, nat_sem, natstr_sem, ncons_sem, nhead_sem,
                                nxor_sem, odd_sem, unary_sem, uhd_sem, utl_sem, zip_k)
from src.models.errors import UnsupportedSymbolError
from src.models.rewrite_engine import Got, RewriteEngine
from src.models.specification import Equation, Specification, evaluable_equations
from src.models.term import App, Bit, Cons, Sort, Symbol, Term, Var, variables

logger = logging.getLogger(__name__)

VERBOSE = False


class UnknownValue:
    """Value of a budgeted interpretation that did not finish."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    def __str__(self):
        return "?"

    def __reduce__(self):
        return (UnknownValue, ())


UNKNOWN = UnknownValue()

Signature = Dict[str, Tuple[Tuple[Sort, ...], Sort]]


@dataclass
class StreamAlgebra:
    """Interpretation of a bitstream signature.

    `observe` maps a stream element to its head/tail observation stream; `represent` picks the
    element standing for an ω-word when a hidden algebra is quotiented.
    """
    name: str
    interp: Dict[str, Callable[..., Any]]
    sorts: Signature
    domain: str = "eventually periodic ω-words"
    hidden: bool = False
    full: bool = False
    observe: Optional[Callable[[Any], EpWord]] = None
    represent: Optional[Callable[[EpWord], Any]] = None

    def supports(self, name: str) -> bool:
        return name in self.interp

    def evaluate(self, t: Term, assignment: Dict[str, Any]) -> Any:
        if isinstance(t, Var):
            return assignment[t.name]
        if isinstance(t, Bit):
            return t.value
        if isinstance(t, Cons):
            head = self.evaluate(t.head, assignment)
            tail = self.evaluate(t.tail, assignment)
            if head is UNKNOWN or tail is UNKNOWN:
                return UNKNOWN
            return self.interp[":"](head, tail)
        fn = self.interp.get(t.symbol.name)
        if fn is None:
            raise UnsupportedSymbolError([t.symbol.name])
        values = [self.evaluate(a, assignment) for a in t.args]
        if any(v is UNKNOWN for v in values):
            return UNKNOWN
        return fn(*values)

    def observation(self, value: Any) -> Any:
        if self.observe is None or not self.hidden:
            return value
        return self.observe(value)

    def equivalent(self, a: Any, b: Any) -> bool:
        """Behavioral equivalence: equal observations; bits and naturals compare directly."""
        if isinstance(a, int) or isinstance(b, int):
            return a == b
        return self.observation(a) == self.observation(b)


def observation_by_coiteration(head: Callable[[Any], int], tail: Callable[[Any], Any]) -> Callable[[Any], EpWord]:
    """Observation stream of elements whose tail orbit is finite."""
    return lambda e: coiterate(e, lambda s: (head(s), tail(s)))


# Canonical interpretations

def _stream_ops() -> Dict[str, Tuple[Tuple[Sort, ...], Sort, Callable[..., Any]]]:
    S, B, N = Sort.S, Sort.B, Sort.N
    return {
        "zeros": ((), S, lambda: ZEROS),
        "ones": ((), S, lambda: ONES),
        "blink": ((), S, lambda: BLINK),
        "is_zeros": ((S,), S, is_zeros_sem),
        "uhd": ((S,), S, uhd_sem),
        "utl": ((S,), S, utl_sem),
        "natstr": ((S,), S, natstr_sem),
        "nat": ((S,), S, nat_sem),
        "leq": ((S, S), S, leq_sem),
        "hd": ((S,), B, lambda w: w.head()),
        "head": ((S,), B, lambda w: w.head()),
        "tl": ((S,), S, lambda w: w.tail()),
        "tail": ((S,), S, lambda w: w.tail()),
        "dup": ((S,), S, dup_sem),
        "even": ((S,), S, even_sem),
        "odd": ((S,), S, odd_sem),
        "inv": ((S,), S, inv_sem),
        "nxor": ((S,), S, nxor_sem),
        "zero": ((), N, lambda: 0),
        "succ": ((N,), N, lambda n: n + 1),
        "ncons": ((N, S), S, ncons_sem),
        "nhead": ((S,), N, _nhead),
        "ntail": ((S,), S, _ntail),
        "unary": ((N,), S, unary_sem),
    }


def _nhead(w: EpWord):
    n = nhead_sem(w)
    return UNKNOWN if n is None else n


def _ntail(w: EpWord):
    n = nhead_sem(w)
    return UNKNOWN if n is None else w.drop(n + 1)


_ZIP = re.compile(r"^zip(\d+)$")


def _zip_interpretation(arity: int) -> Callable[..., EpWord]:
    return lambda *words: zip_k(list(words))


def _rewriting_interpretation(spec: Specification, symbol: Symbol, budget: int) -> Callable[..., Any]:
    """A B-valued symbol evaluated by rewriting, its stream arguments bound as external streams."""
    tapes = tuple(Symbol(f"{symbol.name}#arg{j}", (), Sort.S) for j in range(symbol.arity))
    extended = spec.union(Specification(name="arguments", symbols=tapes, equations=()), name=spec.name)
    engine = RewriteEngine(extended)
    term = App(symbol, tuple(App(s, ()) for s in tapes))

    def interpretation(*words: EpWord):
        engine.bind({s.name: w for s, w in zip(tapes, words)})
        result = engine.eval_bit(term, budget)
        if isinstance(result, Got):
            return result.value
        if VERBOSE:
            logger.info(f"{symbol.name}({', '.join(map(str, words))}) unresolved after {result.steps} steps")
        return UNKNOWN

    return interpretation


def canonical_model(spec: Specification, budget: int = 10000,
                    constants: Optional[Dict[str, EpWord]] = None) -> StreamAlgebra:
    """The canonical model over ω-words.

    Auxiliary symbols get their fixed interpretations; B-valued symbols over streams that have
    evaluable rules (machine states) are evaluated by rewriting within `budget`. Unspecified
    stream constants can be given values through `constants`.
    """
    table = _stream_ops()
    interp: Dict[str, Callable[..., Any]] = {":": lambda b, w: w.cons(b)}
    sorts: Signature = {":": ((Sort.B, Sort.S), Sort.S)}
    defined = {e.lhs.symbol.name for e in evaluable_equations(spec)}
    missing: List[str] = []
    for symbol in spec.symbols:
        name = symbol.name
        sorts[name] = (symbol.arg_sorts, symbol.res_sort)
        known = table.get(name)
        zip_match = _ZIP.match(name)
        if constants and name in constants and symbol.arity == 0:
            word = constants[name]
            interp[name] = lambda word=word: word
        elif known is not None and known[0] == symbol.arg_sorts and known[1] == symbol.res_sort:
            interp[name] = known[2]
        elif zip_match and int(zip_match.group(1)) == symbol.arity and all(s == Sort.S for s in symbol.arg_sorts) \
                and symbol.res_sort == Sort.S and symbol.arity >= 1:
            interp[name] = _zip_interpretation(symbol.arity)
        elif name in defined and symbol.res_sort == Sort.B and all(s == Sort.S for s in symbol.arg_sorts):
            interp[name] = _rewriting_interpretation(spec, symbol, budget)
        else:
            missing.append(name)
    if spec.nat_sort:
        for name in ("zero", "succ", "ncons"):
            interp[name] = table[name][2]
            sorts[name] = table[name][:2]
    if missing:
        raise UnsupportedSymbolError(missing)
    return StreamAlgebra(name=f"canonical({spec.name})", interp=interp, sorts=sorts)


# Equation checks

@dataclass(frozen=True)
class AllHold:
    count: int

    def __str__(self):
        return f"AllHold({self.count})"


@dataclass(frozen=True)
class Fails:
    assignment: Dict[str, Any] = field(hash=False)
    lhs_value: Any = None
    rhs_value: Any = None

    def __str__(self):
        return f"Fails({format_assignment(self.assignment)}: {self.lhs_value} ≠ {self.rhs_value})"


@dataclass(frozen=True)
class CheckUnknown:
    assignment: Dict[str, Any] = field(hash=False)

    def __str__(self):
        return f"Unknown({format_assignment(self.assignment)})"


def format_assignment(assignment: Dict[str, Any]) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in assignment.items()) + "}"


def equation_variables(e: Equation) -> List[Var]:
    found: Dict[str, Var] = {}
    for v in variables(e.lhs) + variables(e.rhs):
        found.setdefault(v.name, v)
    return list(found.values())


def check_equation(alg: StreamAlgebra, e: Equation, assignments: Sequence[Dict[str, Any]],
                   behavioral: bool = False):
    """Exact comparison of both sides per assignment; a failure outranks an unknown."""
    first_unknown = None
    for assignment in assignments:
        lhs = alg.evaluate(e.lhs, assignment)
        rhs = alg.evaluate(e.rhs, assignment)
        if lhs is UNKNOWN or rhs is UNKNOWN:
            if first_unknown is None:
                first_unknown = CheckUnknown(dict(assignment))
            continue
        same = alg.equivalent(lhs, rhs) if behavioral else lhs == rhs
        if not same:
            return Fails(dict(assignment), lhs, rhs)
    if first_unknown is not None:
        return first_unknown
    return AllHold(len(assignments))


def assignment_grid(variables_: Sequence[Var], pools: Dict[Sort, Sequence[Any]],
                    rng: Optional[np.random.Generator] = None, limit: Optional[int] = None) -> List[Dict[str, Any]]:
    """All sort-respecting assignments, or `limit` of them drawn with rng when there are more."""
    names = [v.name for v in variables_]
    choices = [list(pools[v.sort]) for v in variables_]
    total = int(np.prod([len(c) for c in choices])) if choices else 1
    if limit is None or total <= limit:
        return [dict(zip(names, combo)) for combo in itertools.product(*choices)]
    if rng is None:
        rng = np.random.default_rng(0)
    picks = [rng.integers(0, len(c), size=limit) for c in choices]
    return [{name: choices[j][int(picks[j][row])] for j, name in enumerate(names)} for row in range(limit)]


def default_pools(max_prefix: int = 2, max_period: int = 2, naturals: int = 4) -> Dict[Sort, List[Any]]:
    return {
        Sort.B: [0, 1],
        Sort.S: exhaustive_epwords(max_prefix, max_period),
        Sort.N: list(range(naturals)),
    }


@dataclass
class SatisfactionReport:
    algebra: str
    behavioral: bool
    rows: List[Tuple[Equation, Any]]

    @property
    def holds(self) -> bool:
        return all(isinstance(v, AllHold) for _, v in self.rows)

    def verdict_for(self, e: Equation):
        for eq, v in self.rows:
            if eq == e:
                return v
        raise KeyError(str(e))


def check_spec(alg: StreamAlgebra, equations: Sequence[Equation], pools: Dict[Sort, Sequence[Any]],
               rng: Optional[np.random.Generator] = None, limit: Optional[int] = None,
               behavioral: bool = False) -> SatisfactionReport:
    rows = []
    for e in equations:
        grid = assignment_grid(equation_variables(e), pools, rng, limit)
        rows.append((e, check_equation(alg, e, grid, behavioral=behavioral)))
    return SatisfactionReport(alg.name, behavioral, rows)
