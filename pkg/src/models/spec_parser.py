import logging
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from src.models.errors import DuplicateSymbolError, SortError, SpecSyntaxError
from src.models.specification import Equation, Specification
from src.models.term import (App, BIT_SYMBOLS, Bit, CONS_SYMBOL, Cons, NAT_SYMBOLS, Sort, Symbol, Term,
                             Var)
from src.utils.content import resolve_resource

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"(?P<space>\s+)|(?P<ident>[^\W\d][\w']*)|(?P<bit>[01](?![\w']))|(?P<punct>[(),:=])")
_SORTS = {"B": Sort.B, "S": Sort.S, "N": Sort.N}


@dataclass
class _Node:
    """Untyped parse tree of a term; elaborated against the signature afterwards."""
    kind: str  # "bit" | "ident" | "cons"
    text: str
    children: List["_Node"]
    line: int
    column: int
    applied: bool = False

    def __str__(self):
        if self.kind == "bit":
            return self.text
        if self.kind == "cons":
            return f"{self.children[0]} : {self.children[1]}"
        if self.applied:
            return f"{self.text}({', '.join(str(c) for c in self.children)})"
        return self.text


def _tokenize(text: str, line: int, column_offset: int) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SpecSyntaxError(f"unexpected character '{text[pos]}'", line, column_offset + pos + 1)
        kind = m.lastgroup
        if kind != "space":
            tokens.append((kind, m.group(kind), column_offset + pos + 1))
        pos = m.end()
    return tokens


class _TermParser:
    def __init__(self, tokens, line: int, end_column: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.end_column = end_column

    def peek(self, offset: int = 0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def expect(self, value: str):
        tok = self.peek()
        if tok is None or tok[1] != value:
            found = "end of line" if tok is None else f"'{tok[1]}'"
            column = self.end_column if tok is None else tok[2]
            raise SpecSyntaxError(f"expected '{value}', found {found}", self.line, column)
        self.pos += 1

    def term(self) -> _Node:
        left = self.atom()
        tok = self.peek()
        if tok is not None and tok[1] == ":":
            self.pos += 1
            right = self.term()
            return _Node("cons", ":", [left, right], left.line, left.column)
        return left

    def atom(self) -> _Node:
        tok = self.peek()
        if tok is None:
            raise SpecSyntaxError("unexpected end of term", self.line, self.end_column)
        kind, value, column = tok
        if kind == "bit":
            self.pos += 1
            return _Node("bit", value, [], self.line, column)
        if kind == "ident":
            self.pos += 1
            nxt = self.peek()
            if nxt is not None and nxt[1] == "(":
                self.pos += 1
                args = [self.term()]
                while self.peek() is not None and self.peek()[1] == ",":
                    self.pos += 1
                    args.append(self.term())
                self.expect(")")
                return _Node("ident", value, args, self.line, column, applied=True)
            return _Node("ident", value, [], self.line, column)
        if value == "(":
            self.pos += 1
            inner = self.term()
            self.expect(")")
            return inner
        raise SpecSyntaxError(f"unexpected '{value}'", self.line, column)

    def done(self) -> bool:
        return self.pos >= len(self.tokens)


class _Elaborator:
    """Sort-checks parse trees against a signature, inferring variable sorts from position."""

    def __init__(self, signature: Dict[str, Symbol], line: int):
        self.signature = signature
        self.line = line
        self.var_sorts: Dict[str, Sort] = {}

    def elaborate(self, node: _Node, expected: Optional[Sort]) -> Term:
        if node.kind == "bit":
            self._check(Sort.B, expected, node)
            return Bit(int(node.text))
        if node.kind == "cons":
            self._check(Sort.S, expected, node)
            head = self.elaborate(node.children[0], Sort.B)
            tail = self.elaborate(node.children[1], Sort.S)
            return Cons(head, tail)
        symbol = self.signature.get(node.text)
        if symbol is None:
            if node.applied:
                raise SortError(f"undeclared symbol '{node.text}' applied to arguments", str(node), self.line)
            return self._variable(node, expected)
        if node.applied and symbol.arity == 0:
            raise SortError(f"constant '{symbol.name} : {symbol.res_sort}' applied to arguments",
                            str(node), self.line)
        if len(node.children) != symbol.arity:
            raise SortError(f"'{symbol.name}' expects {symbol.arity} argument(s), got {len(node.children)}",
                            str(node), self.line)
        self._check(symbol.res_sort, expected, node)
        args = tuple(self.elaborate(c, s) for c, s in zip(node.children, symbol.arg_sorts))
        return App(symbol, args)

    def _variable(self, node: _Node, expected: Optional[Sort]) -> Var:
        known = self.var_sorts.get(node.text)
        if expected is None and known is None:
            raise SortError(f"cannot infer the sort of variable '{node.text}'", str(node), self.line)
        if known is not None and expected is not None and known != expected:
            raise SortError(f"variable '{node.text}' used with sorts {known} and {expected}", str(node), self.line)
        sort = known or expected
        self.var_sorts[node.text] = sort
        return Var(node.text, sort)

    def _check(self, actual: Sort, expected: Optional[Sort], node: _Node):
        if expected is not None and actual != expected:
            raise SortError(f"expected sort {expected}, found {actual}", str(node), self.line)

    def result_sort(self, node: _Node) -> Optional[Sort]:
        if node.kind == "bit":
            return Sort.B
        if node.kind == "cons":
            return Sort.S
        symbol = self.signature.get(node.text)
        if symbol is not None:
            return symbol.res_sort
        return self.var_sorts.get(node.text)


def _parse_sorts(text: str, line: int, column: int) -> Tuple[Tuple[Sort, ...], Sort]:
    text = text.replace("×", " x ").replace("→", "->")
    if "->" in text:
        args_text, res_text = text.split("->", 1)
        arg_names = [a for a in re.split(r"\s+x\s+|\s+", args_text.strip()) if a]
    else:
        arg_names, res_text = [], text
    res_name = res_text.strip()
    names = arg_names + [res_name]
    for name in names:
        if name not in _SORTS:
            raise SpecSyntaxError(f"unknown sort '{name}'", line, column)
    if "->" in text and not arg_names:
        raise SpecSyntaxError("function type without argument sorts", line, column)
    return tuple(_SORTS[a] for a in arg_names), _SORTS[res_name]


def _builtin_names(nat_sort: bool) -> List[str]:
    names = [s.name for s in BIT_SYMBOLS] + [CONS_SYMBOL.name]
    if nat_sort:
        names += [s.name for s in NAT_SYMBOLS]
    return names


def _strip_comment(raw: str) -> Tuple[str, Optional[str]]:
    if "#" in raw:
        idx = raw.index("#")
        return raw[:idx], raw[idx + 1:].strip()
    return raw, None


def parse_spec(text: str, name: str = "spec") -> Specification:
    """Parses a specification source; see README for the grammar."""
    nat_sort = False
    symbols: List[Symbol] = []
    pending_equations: List[Tuple[int, str, int, bool]] = []
    comments: List[str] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        body, comment = _strip_comment(raw)
        if comment is not None and not body.strip() and not symbols and not pending_equations:
            comments.append(comment)
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        keyword, _, rest = stripped.partition(" ")
        rest_offset = indent + len(keyword) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if keyword == "sort":
            if rest != "N":
                raise SpecSyntaxError(f"only 'sort N' may be declared, got 'sort {rest}'", line_no, indent + 6)
            if symbols:
                raise SpecSyntaxError("'sort N' must precede symbol declarations", line_no, indent + 1)
            nat_sort = True
        elif keyword == "sym":
            m = re.match(r"([^\W\d][\w']*)\s*:\s*(.+)$", rest)
            if m is None:
                raise SpecSyntaxError("expected 'sym NAME : SORTS'", line_no, rest_offset + 1)
            sym_name = m.group(1)
            arg_sorts, res_sort = _parse_sorts(m.group(2), line_no, rest_offset + m.start(2) + 1)
            if sym_name in _builtin_names(nat_sort) or any(s.name == sym_name for s in symbols):
                raise DuplicateSymbolError(f"line {line_no}: symbol '{sym_name}' declared twice")
            if (Sort.N in arg_sorts or res_sort == Sort.N) and not nat_sort:
                raise SpecSyntaxError(f"sort N used by '{sym_name}' without 'sort N'", line_no, rest_offset + 1)
            symbols.append(Symbol(sym_name, arg_sorts, res_sort))
        elif keyword in ("eq", "constraint"):
            pending_equations.append((line_no, rest, rest_offset, keyword == "constraint"))
        else:
            raise SpecSyntaxError(f"unknown item '{keyword}'", line_no, indent + 1)

    spec = Specification(name=name, symbols=tuple(symbols), equations=(), nat_sort=nat_sort,
                         comments=tuple(comments))
    equations = tuple(_parse_equation(spec.signature, line_no, rest, offset, constraint)
                      for line_no, rest, offset, constraint in pending_equations)
    logger.debug(f"Parsed specification {name}: {len(symbols)} symbols, {len(equations)} equations")
    return Specification(name=name, symbols=tuple(symbols), equations=equations, nat_sort=nat_sort,
                         comments=tuple(comments))


def _parse_equation(signature: Dict[str, Symbol], line_no: int, text: str, offset: int,
                    constraint: bool) -> Equation:
    tokens = _tokenize(text, line_no, offset)
    parser = _TermParser(tokens, line_no, offset + len(text) + 1)
    lhs_node = parser.term()
    parser.expect("=")
    rhs_node = parser.term()
    if not parser.done():
        tok = parser.peek()
        raise SpecSyntaxError(f"unexpected '{tok[1]}' after equation", line_no, tok[2])

    elaborator = _Elaborator(signature, line_no)
    lhs_sort = elaborator.result_sort(lhs_node)
    if lhs_sort is None:
        rhs = elaborator.elaborate(rhs_node, None)
        lhs = elaborator.elaborate(lhs_node, elaborator.result_sort(rhs_node))
    else:
        lhs = elaborator.elaborate(lhs_node, None)
        rhs = elaborator.elaborate(rhs_node, lhs_sort)
    return Equation(lhs, rhs, declared_constraint=constraint)


def parse_term(text: str, spec: Specification, variable_sorts: Optional[Dict[str, Sort]] = None,
               expected: Optional[Sort] = None) -> Term:
    """Parses a single term against the signature of spec (used for --term and goals)."""
    tokens = _tokenize(text, 1, 0)
    parser = _TermParser(tokens, 1, len(text) + 1)
    node = parser.term()
    if not parser.done():
        tok = parser.peek()
        raise SpecSyntaxError(f"unexpected '{tok[1]}' after term", 1, tok[2])
    elaborator = _Elaborator(spec.signature, 1)
    if variable_sorts:
        elaborator.var_sorts.update(variable_sorts)
    return elaborator.elaborate(node, expected)


def parse_equation(text: str, spec: Specification) -> Equation:
    return _parse_equation(spec.signature, 1, text, 0, False)


def load_spec(name: str) -> Specification:
    """Loads a specification from a path or from the bundled corpus."""
    path = resolve_resource(name, "specs", ".spec")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    spec_name = os.path.splitext(os.path.basename(path))[0]
    return parse_spec(text, name=spec_name)


load_corpus_spec = load_spec
