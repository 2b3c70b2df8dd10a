import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

from src.models.ep_word import EpWord
from src.models.errors import NonGroundTermError, OrthogonalityError, UndeclaredSymbolError
from src.models.specification import Equation, Specification, evaluable_equations
from src.models.term import (App, Bit, Cons, NAT_CONS, NAT_SUCC, NAT_ZERO, Sort, Term, Var,
                             apply_substitution, is_ground)

logger = logging.getLogger(__name__)

BitReader = Callable[[int], int]


@dataclass(frozen=True)
class EvalBudget:
    max_steps: int

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError(f"budget must be >= 0, got {self.max_steps}")


@dataclass(frozen=True)
class Got:
    value: int
    steps: int = 0

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Unknown:
    steps: int
    reason: str = "budget"

    def __str__(self):
        return "?"


EvalResult = Union[Got, Unknown]


@dataclass(frozen=True)
class Equal:
    length: int

    def __str__(self):
        return "Equal"


@dataclass(frozen=True)
class Diff:
    index: int
    bit1: int
    bit2: int

    def __str__(self):
        return f"Diff({self.index}, {self.bit1}, {self.bit2})"


@dataclass(frozen=True)
class PrefixUnknown:
    index: int

    def __str__(self):
        return f"Unknown({self.index})"


PrefixVerdict = Union[Equal, Diff, PrefixUnknown]


@dataclass(eq=False)
class ExternalStream:
    """A stream constant whose observations come from source, never from rules.

    Bit streams read source as index -> bit. Streams of naturals read it as index -> natural,
    or, when source is an EpWord, as the run-length encoding 1^{n0} 0 1^{n1} 0 ...
    """
    name: str
    source: Union[EpWord, Callable[[int], int]]
    naturals: bool = False
    _cache: Dict[int, int] = field(default_factory=dict, repr=False)
    _offsets: List[int] = field(default_factory=lambda: [0], repr=False)

    def bit(self, i: int) -> int:
        if i not in self._cache:
            if isinstance(self.source, EpWord):
                self._cache[i] = self.source.index(i)
            else:
                self._cache[i] = int(self.source(i))
        return self._cache[i]

    def natural(self, j: int) -> int:
        if not isinstance(self.source, EpWord):
            return int(self.source(j))
        # _offsets[k] is where the k-th run starts in the encoding
        while len(self._offsets) <= j + 1:
            start = self._offsets[-1]
            rest = self.source.drop(start)
            n = rest.first_index(0)
            if n is None:
                raise ValueError(f"external stream {self.name} encodes no natural at element {len(self._offsets) - 1}")
            self._offsets.append(start + n + 1)
        return self._offsets[j + 1] - self._offsets[j] - 1


@dataclass(frozen=True)
class StreamCursor:
    """Position `offset` of an external stream, standing for its remaining suffix."""
    stream: ExternalStream
    offset: int = 0

    def __str__(self):
        return self.stream.name if self.offset == 0 else f"{self.stream.name}@{self.offset}"

    def unfold(self) -> Term:
        rest = StreamCursor(self.stream, self.offset + 1)
        if self.stream.naturals:
            return App(NAT_CONS, (natural_term(self.stream.natural(self.offset)), rest))
        return Cons(Bit(self.stream.bit(self.offset)), rest)


@dataclass(frozen=True)
class ExternalFunction:
    """Trial interpretation of a declared-but-undefined stream function.

    fn receives one bit reader per argument and returns the reader of the result.
    """
    name: str
    fn: Callable[[Sequence[BitReader]], BitReader]

    @classmethod
    def constant(cls, name: str, word: EpWord) -> "ExternalFunction":
        return cls(name, lambda readers: word.index)

    @classmethod
    def pointwise(cls, name: str, op: Callable[..., int]) -> "ExternalFunction":
        return cls(name, lambda readers: (lambda i: int(op(*(r(i) for r in readers)))))


def natural_term(n: int) -> Term:
    t: Term = App(NAT_ZERO, ())
    for _ in range(n):
        t = App(NAT_SUCC, (t,))
    return t


class _OutOfFuel(Exception):
    pass


class _Stuck(Exception):
    def __init__(self, term):
        super().__init__(str(term))
        self.term = term


class _Fuel:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self):
        if self.used >= self.limit:
            raise _OutOfFuel()
        self.used += 1


def _limit(budget: Union[int, EvalBudget]) -> int:
    return budget.max_steps if isinstance(budget, EvalBudget) else EvalBudget(int(budget)).max_steps


def _overlap(p: Term, q: Term) -> bool:
    if isinstance(p, Var) or isinstance(q, Var):
        return True
    if isinstance(p, Bit) and isinstance(q, Bit):
        return p.value == q.value
    if isinstance(p, Cons) and isinstance(q, Cons):
        return _overlap(p.head, q.head) and _overlap(p.tail, q.tail)
    if isinstance(p, App) and isinstance(q, App):
        return p.symbol == q.symbol and all(_overlap(a, b) for a, b in zip(p.args, q.args))
    return False


class _TermReader:
    """Bit reader over a stream term, evaluated on demand with the engine's current fuel."""

    def __init__(self, engine: "RewriteEngine", term: Term):
        self.engine = engine
        self.cursor = term
        self.cells: List[int] = []

    def __call__(self, i: int) -> int:
        while len(self.cells) <= i:
            fuel = self.engine._fuel
            cell = self.engine._whnf(self.cursor, fuel)
            if not isinstance(cell, Cons):
                raise _Stuck(cell)
            head = self.engine._whnf(cell.head, fuel)
            if not isinstance(head, Bit):
                raise _Stuck(head)
            self.cells.append(head.value)
            self.cursor = cell.tail
        return self.cells[i]


class RewriteEngine:
    """Lazy leftmost-outermost evaluation with the Evaluable rules of a specification.

    Arguments are evaluated only when a rule needs a constructor at that position, and the
    evaluated argument replaces the original for the remaining rule attempts.
    """

    def __init__(self, spec: Specification,
                 externals: Optional[Dict[str, Union[ExternalStream, EpWord]]] = None,
                 functions: Optional[Dict[str, ExternalFunction]] = None):
        self.spec = spec
        self.rules: Dict[str, List[Equation]] = {}
        for e in evaluable_equations(spec):
            self.rules.setdefault(e.lhs.symbol.name, []).append(e)
        self._check_orthogonality()

        self.externals: Dict[str, ExternalStream] = {}
        self.functions: Dict[str, ExternalFunction] = {}
        self.bind(externals, functions)
        self._fuel = _Fuel(0)

    def bind(self, externals: Optional[Dict[str, Union[ExternalStream, EpWord]]] = None,
             functions: Optional[Dict[str, ExternalFunction]] = None):
        """Replaces the external streams and trial interpretations; resets the rule counts."""
        self.externals = {}
        for name, source in (externals or {}).items():
            symbol = self.spec.symbol(name)
            if symbol.arity != 0 or symbol.res_sort != Sort.S:
                raise UndeclaredSymbolError(f"external stream '{name}' must be declared as 'sym {name} : S'")
            if name in self.rules:
                raise ValueError(f"external stream '{name}' also has evaluable rules")
            if isinstance(source, ExternalStream):
                self.externals[name] = source
            else:
                self.externals[name] = ExternalStream(name, source)
        self.functions = {}
        for name, fn in (functions or {}).items():
            self.spec.symbol(name)
            if name in self.rules:
                raise ValueError(f"trial interpretation '{name}' also has evaluable rules")
            self.functions[name] = fn
        self.rule_counts: Counter = Counter()
        return self

    def _check_orthogonality(self):
        for name, rules in self.rules.items():
            for i, first in enumerate(rules):
                for second in rules[i + 1:]:
                    if _overlap(first.lhs, second.lhs):
                        raise OrthogonalityError(first, second)

    # evaluation entry points

    def eval_bit(self, t: Term, budget: Union[int, EvalBudget]) -> EvalResult:
        self._require_ground(t)
        fuel = self._fuel = _Fuel(_limit(budget))
        try:
            value = self._whnf(t, fuel)
        except _OutOfFuel:
            return Unknown(fuel.used, "budget")
        except _Stuck:
            return Unknown(fuel.used, "stuck")
        except RecursionError:
            # demand chains nest one Python frame per pending argument
            return Unknown(fuel.used, "depth")
        if isinstance(value, Bit):
            return Got(value.value, fuel.used)
        return Unknown(fuel.used, "stuck")

    def stream_prefix(self, t: Term, n: int, budget: Union[int, EvalBudget]) -> List[EvalResult]:
        self._require_ground(t)
        limit = _limit(budget)
        results: List[EvalResult] = []
        current = t
        for _ in range(n):
            if results and isinstance(results[-1], Unknown):
                results.append(Unknown(0, results[-1].reason))
                continue
            fuel = self._fuel = _Fuel(limit)
            try:
                value, current = self._next_element(current, fuel)
                results.append(Got(value, fuel.used))
            except _OutOfFuel:
                results.append(Unknown(fuel.used, "budget"))
            except _Stuck:
                results.append(Unknown(fuel.used, "stuck"))
            except RecursionError:
                results.append(Unknown(fuel.used, "depth"))
        return results

    def _next_element(self, current: Term, fuel: _Fuel):
        cell = self._whnf(current, fuel)
        if isinstance(cell, Cons):
            head = self._whnf(cell.head, fuel)
            if not isinstance(head, Bit):
                raise _Stuck(head)
            return head.value, cell.tail
        if isinstance(cell, App) and cell.symbol == NAT_CONS:
            return self._natural_value(cell.args[0], fuel), cell.args[1]
        raise _Stuck(cell)

    def _natural_value(self, t: Term, fuel: _Fuel) -> int:
        n = 0
        while True:
            t = self._whnf(t, fuel)
            if isinstance(t, App) and t.symbol == NAT_ZERO:
                return n
            if isinstance(t, App) and t.symbol == NAT_SUCC:
                n += 1
                t = t.args[0]
                continue
            raise _Stuck(t)

    def _require_ground(self, t: Term):
        if not is_ground(t):
            raise NonGroundTermError(f"term '{t}' contains variables")

    # reduction

    def _whnf(self, t: Term, fuel: _Fuel) -> Term:
        while True:
            if isinstance(t, (Bit, Cons)):
                return t
            if isinstance(t, StreamCursor):
                return t.unfold()
            if isinstance(t, Var):
                raise NonGroundTermError(f"variable '{t}' reached during evaluation")
            symbol = t.symbol
            if symbol.constructor:
                return t
            external = self.externals.get(symbol.name)
            if external is not None:
                t = StreamCursor(external, 0)
                continue
            function = self.functions.get(symbol.name)
            if function is not None:
                readers = [_TermReader(self, a) for a in t.args]
                result = ExternalStream(str(t), function.fn(readers))
                t = StreamCursor(result, 0)
                continue
            rules = self.rules.get(symbol.name)
            if not rules:
                raise _Stuck(t)
            t = self._rewrite_root(t, rules, fuel)

    def _rewrite_root(self, t: App, rules: List[Equation], fuel: _Fuel) -> Term:
        args = list(t.args)
        for rule in rules:
            subst: Dict[str, Term] = {}
            if self._match_args(rule.lhs.args, args, subst, fuel):
                fuel.spend()
                self.rule_counts[rule] += 1
                return apply_substitution(subst, rule.rhs)
        raise _Stuck(App(t.symbol, tuple(args)))

    def _match_args(self, patterns, args: List[Term], subst: Dict[str, Term], fuel: _Fuel) -> bool:
        for i, p in enumerate(patterns):
            ok, args[i] = self._match(p, args[i], subst, fuel)
            if not ok:
                return False
        return True

    def _match(self, p: Term, s: Term, subst: Dict[str, Term], fuel: _Fuel):
        if isinstance(p, Var):
            subst[p.name] = s
            return True, s
        s = self._whnf(s, fuel)
        if isinstance(p, Bit):
            return isinstance(s, Bit) and s.value == p.value, s
        if isinstance(p, Cons):
            if not isinstance(s, Cons):
                return False, s
            ok, head = self._match(p.head, s.head, subst, fuel)
            if not ok:
                return False, Cons(head, s.tail)
            ok, tail = self._match(p.tail, s.tail, subst, fuel)
            return ok, Cons(head, tail)
        if not (isinstance(s, App) and s.symbol == p.symbol):
            return False, s
        new_args = list(s.args)
        ok = self._match_args(p.args, new_args, subst, fuel)
        return ok, App(s.symbol, tuple(new_args))


def eval_bit(spec: Specification, t: Term, budget: Union[int, EvalBudget],
             externals: Optional[Dict[str, Union[ExternalStream, EpWord]]] = None,
             functions: Optional[Dict[str, ExternalFunction]] = None) -> EvalResult:
    return RewriteEngine(spec, externals, functions).eval_bit(t, budget)


def stream_prefix(spec: Specification, t: Term, n: int, budget: Union[int, EvalBudget],
                  externals: Optional[Dict[str, Union[ExternalStream, EpWord]]] = None,
                  functions: Optional[Dict[str, ExternalFunction]] = None) -> List[EvalResult]:
    return RewriteEngine(spec, externals, functions).stream_prefix(t, n, budget)


def prefix_equal(spec1: Specification, t1: Term, spec2: Specification, t2: Term, n: int,
                 budget: Union[int, EvalBudget],
                 externals: Optional[Dict[str, Union[ExternalStream, EpWord]]] = None) -> PrefixVerdict:
    first = stream_prefix(spec1, t1, n, budget, _for_spec(spec1, externals))
    second = stream_prefix(spec2, t2, n, budget, _for_spec(spec2, externals))
    for i, (a, b) in enumerate(zip(first, second)):
        if isinstance(a, Unknown) or isinstance(b, Unknown):
            return PrefixUnknown(i)
        if a.value != b.value:
            return Diff(i, a.value, b.value)
    return Equal(n)


def _for_spec(spec: Specification, externals):
    if not externals:
        return None
    return {name: source for name, source in externals.items() if spec.has_symbol(name)}


def format_prefix(results: Sequence[EvalResult]) -> str:
    return "".join(str(r) for r in results)
