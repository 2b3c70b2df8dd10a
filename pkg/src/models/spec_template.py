import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Sequence

from src.models.errors import DuplicateSymbolError, TemplateError
from src.models.spec_parser import parse_spec
from src.models.specification import Specification

logger = logging.getLogger(__name__)

# Variable names used by generated equations; machine states may not shadow them.
TEMPLATE_VARIABLES = frozenset({"a", "b", "i", "p", "s", "t", "v", "x", "y", "z"})
_GENERATED_NAME = re.compile(r"^(t|g|zip|tau|xi)\d+$")


class SpecTemplate:
    """Specification source assembled line by line, parsed and sort-checked on build()."""

    def __init__(self, name: str = "template"):
        self.name = name
        self.nat_sort = False
        self.comments: List[str] = []
        self.declarations: Dict[str, str] = {}
        self.equations: List[str] = []

    def comment(self, text: str) -> "SpecTemplate":
        self.comments.append(text)
        return self

    def enable_nat_sort(self) -> "SpecTemplate":
        self.nat_sort = True
        return self

    def declare(self, name: str, arg_sorts: Sequence[str], res_sort: str) -> "SpecTemplate":
        line = f"sym {name} : {' x '.join(arg_sorts)} -> {res_sort}" if arg_sorts else f"sym {name} : {res_sort}"
        known = self.declarations.get(name)
        if known is not None and known != line:
            raise DuplicateSymbolError(f"symbol '{name}' declared as '{known}' and '{line}'")
        self.declarations[name] = line
        return self

    def eq(self, lhs: str, rhs: str) -> "SpecTemplate":
        return self._add(f"eq {lhs} = {rhs}")

    def constraint(self, lhs: str, rhs: str) -> "SpecTemplate":
        return self._add(f"constraint {lhs} = {rhs}")

    def _add(self, line: str) -> "SpecTemplate":
        if line not in self.equations:
            self.equations.append(line)
        return self

    def extend(self, other: "SpecTemplate") -> "SpecTemplate":
        self.nat_sort = self.nat_sort or other.nat_sort
        for name, line in other.declarations.items():
            known = self.declarations.get(name)
            if known is not None and known != line:
                raise DuplicateSymbolError(f"symbol '{name}' declared as '{known}' and '{line}'")
            self.declarations[name] = line
        for line in other.equations:
            self._add(line)
        return self

    def symbol_names(self) -> List[str]:
        return list(self.declarations)

    def text(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        if self.nat_sort:
            lines.append("sort N")
        lines.extend(self.declarations.values())
        lines.extend(self.equations)
        return "\n".join(lines) + "\n"

    def build(self) -> Specification:
        spec = parse_spec(self.text(), name=self.name)
        logger.debug(f"Built template {self.name}: {len(spec.symbols)} symbols, {len(spec.equations)} equations")
        return spec


@dataclass
class CompiledSpec:
    """A generated specification: the displayed template plus the library equations it relies on."""
    display: SpecTemplate
    library: SpecTemplate

    @cached_property
    def spec(self) -> Specification:
        combined = SpecTemplate(self.display.name)
        combined.comments = list(self.display.comments)
        return combined.extend(self.display).extend(self.library).build()

    def display_text(self) -> str:
        return self.display.text()


def check_free_names(names: Iterable[str], reserved: Iterable[str], what: str = "state"):
    """Rejects names that would be read as a template variable or clash with a template symbol."""
    reserved = set(reserved)
    for name in names:
        if name in TEMPLATE_VARIABLES or name in reserved or _GENERATED_NAME.match(name):
            raise TemplateError(f"{what} name '{name}' clashes with a name used by the generated specification")


def args(*terms: str) -> str:
    return ", ".join(terms)


def cons(*bits_then_tail: str) -> str:
    """cons("1", "0", "zeros") -> '1 : 0 : zeros'"""
    return " : ".join(bits_then_tail)


def unary(n: int, zeros: str = "zeros") -> str:
    return cons(*(["1"] * n + [zeros]))


def zip_term(terms: Sequence[str]) -> str:
    if not terms:
        raise TemplateError("zip needs at least one argument")
    return f"zip{len(terms)}({args(*terms)})"


# Standard equation families

def standard_equations(max_zip: int) -> SpecTemplate:
    """zeros, ones and zip1..zip{max_zip}."""
    t = SpecTemplate("standard")
    t.declare("zeros", [], "S").declare("ones", [], "S")
    t.eq("zeros", "0 : zeros").eq("ones", "1 : ones")
    for n in range(1, max_zip + 1):
        t.declare(f"zip{n}", ["S"] * n, "S")
        if n == 1:
            t.eq("zip1(t1)", "t1")
        elif n == 2:
            t.eq("zip2(x : t1, t2)", "x : zip2(t2, t1)")
        else:
            ts = [f"t{j}" for j in range(1, n + 1)]
            t.eq(zip_term(ts), f"zip2(t1, {zip_term(ts[1:])})")
    return t


def is_zeros_equations() -> SpecTemplate:
    t = SpecTemplate("is_zeros").extend(standard_equations(0))
    t.declare("is_zeros", ["S"], "S")
    t.eq("is_zeros(zeros)", "ones")
    t.eq("is_zeros(0 : s)", "is_zeros(s)")
    t.eq("is_zeros(1 : s)", "zeros")
    return t


def unary_stream_equations() -> SpecTemplate:
    t = SpecTemplate("unary").extend(standard_equations(0))
    t.declare("uhd", ["S"], "S").declare("utl", ["S"], "S")
    t.eq("uhd(0 : s)", "zeros")
    t.eq("uhd(1 : s)", "1 : uhd(s)")
    t.eq("utl(0 : s)", "s")
    t.eq("utl(1 : s)", "utl(s)")
    return t


def natstr_equations() -> SpecTemplate:
    t = SpecTemplate("natstr").extend(standard_equations(0))
    t.declare("natstr", ["S"], "S")
    t.eq("natstr(ones)", "zeros")
    t.eq("natstr(0 : s)", "1 : natstr(s)")
    t.eq("natstr(1 : s)", "natstr(s)")
    return t


def nat_equations() -> SpecTemplate:
    t = SpecTemplate("nat").extend(standard_equations(0))
    t.declare("nat", ["S"], "S")
    t.eq("nat(0 : 1 : s)", "zeros")
    t.eq("nat(0 : 0 : s)", "nat(0 : s)")
    t.eq("nat(1 : s)", "nat(s)")
    t.eq("nat(ones)", "zeros")
    return t


def leq_equations() -> SpecTemplate:
    t = SpecTemplate("leq").extend(standard_equations(0))
    t.declare("leq", ["S", "S"], "S")
    t.eq("leq(0 : s, x : t)", "leq(s, t)")
    t.eq("leq(1 : s, 1 : t)", "leq(s, t)")
    t.eq("leq(1 : s, 0 : t)", "zeros")
    return t
