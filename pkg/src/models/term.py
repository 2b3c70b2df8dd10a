from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union


class Sort(Enum):
    B = "B"
    S = "S"
    N = "N"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Symbol:
    name: str
    arg_sorts: Tuple[Sort, ...]
    res_sort: Sort
    constructor: bool = False

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def declaration(self) -> str:
        if not self.arg_sorts:
            return f"sym {self.name} : {self.res_sort}"
        args = " x ".join(str(s) for s in self.arg_sorts)
        return f"sym {self.name} : {args} -> {self.res_sort}"


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Bit:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Cons:
    head: "Term"
    tail: "Term"

    def __str__(self):
        return f"{self.head} : {self.tail}"


@dataclass(frozen=True)
class App:
    symbol: Symbol
    args: Tuple["Term", ...] = ()

    def __str__(self):
        if not self.args:
            return self.symbol.name
        return f"{self.symbol.name}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Bit, Cons, App]
Substitution = Dict[str, Term]

ZERO = Bit(0)
ONE = Bit(1)

# Builtins of every signature; 0, 1 and ':' have dedicated term variants.
BIT_SYMBOLS = (
    Symbol("0", (), Sort.B, constructor=True),
    Symbol("1", (), Sort.B, constructor=True),
)
CONS_SYMBOL = Symbol(":", (Sort.B, Sort.S), Sort.S, constructor=True)

# Constructors added by the natural-number extension.
NAT_ZERO = Symbol("zero", (), Sort.N, constructor=True)
NAT_SUCC = Symbol("succ", (Sort.N,), Sort.N, constructor=True)
NAT_CONS = Symbol("ncons", (Sort.N, Sort.S), Sort.S, constructor=True)
NAT_SYMBOLS = (NAT_ZERO, NAT_SUCC, NAT_CONS)


def print_term(t: Term) -> str:
    return str(t)


def sort_of(t: Term) -> Sort:
    if isinstance(t, Var):
        return t.sort
    if isinstance(t, Bit):
        return Sort.B
    if isinstance(t, Cons):
        return Sort.S
    if isinstance(t, App):
        return t.symbol.res_sort
    # Engine-internal stream cursors behave as stream constants.
    return Sort.S


def variables(t: Term) -> List[Var]:
    """Variables of t in order of first occurrence, with repetitions."""
    found: List[Var] = []
    stack = [t]
    while stack:
        current = stack.pop()
        if isinstance(current, Var):
            found.append(current)
        elif isinstance(current, Cons):
            stack.append(current.tail)
            stack.append(current.head)
        elif isinstance(current, App):
            stack.extend(reversed(current.args))
    return found


def variable_names(t: Term) -> List[str]:
    names: List[str] = []
    for v in variables(t):
        if v.name not in names:
            names.append(v.name)
    return names


def is_ground(t: Term) -> bool:
    return not variables(t)


def is_left_linear(t: Term) -> bool:
    names = [v.name for v in variables(t)]
    return len(names) == len(set(names))


def is_constructor_pattern(t: Term) -> bool:
    """Built from bits, cons, constructor symbols and variables only."""
    if isinstance(t, (Var, Bit)):
        return True
    if isinstance(t, Cons):
        return is_constructor_pattern(t.head) and is_constructor_pattern(t.tail)
    if isinstance(t, App):
        return t.symbol.constructor and all(is_constructor_pattern(a) for a in t.args)
    return False


def bits_to_term(bits, tail: Term) -> Term:
    result = tail
    for b in reversed(list(bits)):
        result = Cons(Bit(int(b)), result)
    return result


def unary_term(n: int, zeros: Term) -> Term:
    """(1:)^n zeros"""
    return bits_to_term([1] * n, zeros)


def match_and_substitute(pattern: Term, subject: Term) -> Optional[Substitution]:
    """Syntactic first-order matching of a left-linear pattern; None on mismatch."""
    subst: Substitution = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            if p.name in subst and subst[p.name] != s:
                return None
            subst[p.name] = s
        elif isinstance(p, Bit):
            if not (isinstance(s, Bit) and s.value == p.value):
                return None
        elif isinstance(p, Cons):
            if not isinstance(s, Cons):
                return None
            stack.append((p.tail, s.tail))
            stack.append((p.head, s.head))
        elif isinstance(p, App):
            if not (isinstance(s, App) and s.symbol == p.symbol and len(s.args) == len(p.args)):
                return None
            stack.extend(zip(p.args, s.args))
        else:
            return None
    return subst


def apply_substitution(subst: Substitution, t: Term) -> Term:
    if isinstance(t, Var):
        return subst.get(t.name, t)
    if isinstance(t, Cons):
        return Cons(apply_substitution(subst, t.head), apply_substitution(subst, t.tail))
    if isinstance(t, App):
        if not t.args:
            return t
        return App(t.symbol, tuple(apply_substitution(subst, a) for a in t.args))
    return t


apply = apply_substitution
