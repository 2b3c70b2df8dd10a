import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Tuple

from src.models.errors import DuplicateSymbolError, UndeclaredSymbolError
from src.models.term import (App, BIT_SYMBOLS, CONS_SYMBOL, NAT_SYMBOLS, Symbol, Term, Var,
                             is_constructor_pattern, is_left_linear, variable_names)

logger = logging.getLogger(__name__)


class RuleClass(Enum):
    EVALUABLE = "Evaluable"
    CONSTRAINT = "Constraint"
    NON_ORIENTABLE = "NonOrientable"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    declared_constraint: bool = False

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"

    def source_line(self) -> str:
        keyword = "constraint" if self.declared_constraint else "eq"
        return f"{keyword} {self}"


@dataclass(frozen=True)
class Specification:
    name: str
    symbols: Tuple[Symbol, ...]
    equations: Tuple[Equation, ...]
    nat_sort: bool = False
    comments: Tuple[str, ...] = field(default=(), compare=False)

    @cached_property
    def signature(self) -> Dict[str, Symbol]:
        table = {s.name: s for s in BIT_SYMBOLS}
        table[CONS_SYMBOL.name] = CONS_SYMBOL
        if self.nat_sort:
            table.update({s.name: s for s in NAT_SYMBOLS})
        table.update({s.name: s for s in self.symbols})
        return table

    def symbol(self, name: str) -> Symbol:
        try:
            return self.signature[name]
        except KeyError:
            raise UndeclaredSymbolError(f"symbol '{name}' is not declared in specification {self.name}")

    def has_symbol(self, name: str) -> bool:
        return name in self.signature

    def constant(self, name: str) -> App:
        return App(self.symbol(name), ())

    def union(self, other: "Specification", name: str = None) -> "Specification":
        declared = {s.name: s for s in self.symbols}
        merged_symbols = list(self.symbols)
        for s in other.symbols:
            if s.name in declared:
                if declared[s.name] != s:
                    raise DuplicateSymbolError(
                        f"symbol '{s.name}' declared as '{declared[s.name].declaration()}' "
                        f"and '{s.declaration()}'")
                continue
            declared[s.name] = s
            merged_symbols.append(s)
        merged_equations = list(self.equations)
        for e in other.equations:
            if e not in merged_equations:
                merged_equations.append(e)
        return Specification(
            name=name or f"{self.name}+{other.name}",
            symbols=tuple(merged_symbols),
            equations=tuple(merged_equations),
            nat_sort=self.nat_sort or other.nat_sort,
        )

    def equations_for(self, symbol_name: str) -> List[Equation]:
        return [e for e in self.equations if isinstance(e.lhs, App) and e.lhs.symbol.name == symbol_name]


def classify_equation(e: Equation) -> RuleClass:
    if isinstance(e.lhs, Var):
        return RuleClass.NON_ORIENTABLE
    if not set(variable_names(e.rhs)) <= set(variable_names(e.lhs)):
        return RuleClass.NON_ORIENTABLE
    if e.declared_constraint:
        return RuleClass.CONSTRAINT
    if not isinstance(e.lhs, App) or e.lhs.symbol.constructor:
        return RuleClass.CONSTRAINT
    if not all(is_constructor_pattern(p) for p in e.lhs.args):
        return RuleClass.CONSTRAINT
    if not is_left_linear(e.lhs):
        return RuleClass.CONSTRAINT
    return RuleClass.EVALUABLE


def classify_rules(spec: Specification) -> Dict[Equation, RuleClass]:
    return {e: classify_equation(e) for e in spec.equations}


def evaluable_equations(spec: Specification) -> List[Equation]:
    return [e for e in spec.equations if classify_equation(e) is RuleClass.EVALUABLE]


def print_spec(spec: Specification) -> str:
    lines = [f"# {c}" for c in spec.comments]
    if spec.nat_sort:
        lines.append("sort N")
    lines.extend(s.declaration() for s in spec.symbols)
    lines.extend(e.source_line() for e in spec.equations)
    return "\n".join(lines) + "\n"
