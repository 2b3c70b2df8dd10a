import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

from src.models.errors import LambdaSyntaxError

logger = logging.getLogger(__name__)


# Terms are nameless; Abs keeps the binder name of the surface syntax for printing only.

@dataclass(frozen=True)
class Var:
    index: int
    free_bound: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"de Bruijn index must be >= 0, got {self.index}")
        object.__setattr__(self, "free_bound", self.index + 1)
        object.__setattr__(self, "_hash", hash(("var", self.index)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class FreeVar:
    name: str
    free_bound: int = field(default=0, init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("free", self.name)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Hole:
    free_bound: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self):
        return hash("hole")


@dataclass(frozen=True)
class Abs:
    body: "LambdaTerm"
    name: str = field(default="x", compare=False)
    free_bound: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "free_bound", max(0, self.body.free_bound - 1))
        object.__setattr__(self, "_hash", hash(("abs", hash(self.body))))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class App:
    fn: "LambdaTerm"
    arg: "LambdaTerm"
    free_bound: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "free_bound", max(self.fn.free_bound, self.arg.free_bound))
        object.__setattr__(self, "_hash", hash(("app", hash(self.fn), hash(self.arg))))

    def __hash__(self):
        return self._hash


LambdaTerm = Union[Var, FreeVar, Hole, Abs, App]


def apps(head: LambdaTerm, *args: LambdaTerm) -> LambdaTerm:
    for a in args:
        head = App(head, a)
    return head


def lams(names: str, body: LambdaTerm) -> LambdaTerm:
    for name in reversed(names.split()):
        body = Abs(body, name)
    return body


def shift(t: LambdaTerm, d: int, cutoff: int = 0) -> LambdaTerm:
    """Adds d to every index >= cutoff."""
    if d == 0 or t.free_bound <= cutoff:
        return t
    if isinstance(t, Var):
        return Var(t.index + d)
    if isinstance(t, Abs):
        return Abs(shift(t.body, d, cutoff + 1), t.name)
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    return t


def _instantiate(t: LambdaTerm, depth: int, arg: LambdaTerm) -> LambdaTerm:
    if t.free_bound <= depth:
        return t
    if isinstance(t, Var):
        if t.index == depth:
            return shift(arg, depth)
        return Var(t.index - 1)
    if isinstance(t, Abs):
        return Abs(_instantiate(t.body, depth + 1, arg), t.name)
    if isinstance(t, App):
        return App(_instantiate(t.fn, depth, arg), _instantiate(t.arg, depth, arg))
    return t


def beta(redex: App) -> LambdaTerm:
    """(λ.body) arg → body[0 := arg]."""
    return _instantiate(redex.fn.body, 0, redex.arg)


def is_redex(t: LambdaTerm) -> bool:
    return isinstance(t, App) and isinstance(t.fn, Abs)


def spine(t: LambdaTerm) -> Tuple[LambdaTerm, List[LambdaTerm]]:
    args: List[LambdaTerm] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def peel(t: LambdaTerm) -> Tuple[List[str], LambdaTerm]:
    names: List[str] = []
    while isinstance(t, Abs):
        names.append(t.name)
        t = t.body
    return names, t


def wrap(names: List[str], body: LambdaTerm) -> LambdaTerm:
    for name in reversed(names):
        body = Abs(body, name)
    return body


# Strategies

def weak_head_step(t: LambdaTerm) -> Optional[LambdaTerm]:
    """Contracts the redex at the head of the application spine; None on whnf or a variable head."""
    head, args = spine(t)
    if isinstance(head, Abs) and args:
        return apps(beta(App(head, args[0])), *args[1:])
    return None


def head_step(t: LambdaTerm) -> Optional[LambdaTerm]:
    names, body = peel(t)
    reduced = weak_head_step(body)
    return None if reduced is None else wrap(names, reduced)


def lo_step(t: LambdaTerm) -> Optional[LambdaTerm]:
    """Contracts the leftmost-outermost redex."""
    if is_redex(t):
        return beta(t)
    if isinstance(t, Abs):
        body = lo_step(t.body)
        return None if body is None else Abs(body, t.name)
    if isinstance(t, App):
        fn = lo_step(t.fn)
        if fn is not None:
            return App(fn, t.arg)
        arg = lo_step(t.arg)
        return None if arg is None else App(t.fn, arg)
    return None


def is_whnf(t: LambdaTerm) -> bool:
    return isinstance(t, Abs) or weak_head_step(t) is None


def is_hnf(t: LambdaTerm) -> bool:
    return head_step(t) is None


def is_nf(t: LambdaTerm) -> bool:
    return lo_step(t) is None


@dataclass(frozen=True)
class Found:
    term: LambdaTerm
    steps: int


@dataclass(frozen=True)
class Unknown:
    steps: int = 0

    def __str__(self):
        return "?"


@dataclass(frozen=True)
class Diverges:
    """The deterministic reduction sequence revisited a term."""
    steps: int


SearchResult = Union[Found, Unknown, Diverges]


def _search(t: LambdaTerm, budget: int, step: Callable[[LambdaTerm], Optional[LambdaTerm]],
            detect_loops: bool) -> SearchResult:
    """Follows `step` until it has nothing left to contract."""
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    seen = {t} if detect_loops else None
    steps = 0
    while True:
        nxt = step(t)
        if nxt is None:
            return Found(t, steps)
        if steps >= budget:
            return Unknown(steps)
        steps += 1
        t = nxt
        if seen is not None:
            if t in seen:
                return Diverges(steps)
            seen.add(t)


def _whnf_step(t: LambdaTerm) -> Optional[LambdaTerm]:
    return None if isinstance(t, Abs) else weak_head_step(t)


def find_whnf(t: LambdaTerm, budget: int, detect_loops: bool = False) -> SearchResult:
    return _search(t, budget, _whnf_step, detect_loops)


def find_hnf(t: LambdaTerm, budget: int, detect_loops: bool = False) -> SearchResult:
    return _search(t, budget, head_step, detect_loops)


def find_nf(t: LambdaTerm, budget: int, detect_loops: bool = False) -> SearchResult:
    return _search(t, budget, lo_step, detect_loops)


FINDERS = {"whnf": find_whnf, "hnf": find_hnf, "nf": find_nf}


# Contexts

def plug(context: LambdaTerm, t: LambdaTerm) -> LambdaTerm:
    """Replaces the hole literally: free names of t bound by a binder of the same name are captured."""
    holes = count_holes(context)
    if holes != 1:
        raise ValueError(f"a context has exactly one hole, got {holes}")
    return _plug(context, t, [])


def _plug(c: LambdaTerm, t: LambdaTerm, binders: List[str]) -> LambdaTerm:
    if isinstance(c, Hole):
        return _capture(shift(t, len(binders)), binders, 0)
    if isinstance(c, Abs):
        return Abs(_plug(c.body, t, binders + [c.name]), c.name)
    if isinstance(c, App):
        return App(_plug(c.fn, t, binders), _plug(c.arg, t, binders))
    return c


def _capture(t: LambdaTerm, binders: List[str], depth: int) -> LambdaTerm:
    if isinstance(t, FreeVar):
        for k, name in enumerate(reversed(binders)):
            if name == t.name:
                return Var(depth + k)
        return t
    if isinstance(t, Abs):
        return Abs(_capture(t.body, binders, depth + 1), t.name)
    if isinstance(t, App):
        return App(_capture(t.fn, binders, depth), _capture(t.arg, binders, depth))
    return t


def count_holes(t: LambdaTerm) -> int:
    if isinstance(t, Hole):
        return 1
    if isinstance(t, Abs):
        return count_holes(t.body)
    if isinstance(t, App):
        return count_holes(t.fn) + count_holes(t.arg)
    return 0


# Surface syntax

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<open>\()|(?P<close>\))|(?P<hole>☐)"
                    r"|(?P<num>\d+)(?![\w'])|(?P<ident>[^\W\d][\w']*(?:\[[^\]]*\])?))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise LambdaSyntaxError(f"unexpected character '{text[pos:].lstrip()[:1]}'", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _LambdaParser:
    def __init__(self, text: str, env: Dict[str, LambdaTerm],
                 resolve: Optional[Callable[[str], Optional[LambdaTerm]]] = None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.env = env
        self.resolve = resolve

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, kind: str):
        tok = self.peek()
        if tok is None or tok[0] != kind:
            where = tok[2] if tok else len(self.text)
            found = f"'{tok[1]}'" if tok else "end of input"
            raise LambdaSyntaxError(f"expected {kind}, found {found}", where)
        self.i += 1
        return tok

    def term(self, scope: List[str]) -> LambdaTerm:
        tok = self.peek()
        if tok is not None and tok[0] == "lam":
            self.i += 1
            names = []
            while self.peek() is not None and self.peek()[0] == "ident":
                names.append(self.take("ident")[1])
            if not names:
                raise LambdaSyntaxError("abstraction without a variable", tok[2])
            self.take("dot")
            body = self.term(scope + names)
            return wrap(names, body)
        result = None
        while True:
            tok = self.peek()
            if tok is None or tok[0] in ("close",):
                break
            if tok[0] == "lam":
                atom = self.term(scope)
            else:
                atom = self.atom(scope)
            result = atom if result is None else App(result, atom)
        if result is None:
            where = tok[2] if tok else len(self.text)
            raise LambdaSyntaxError("expected a term", where)
        return result

    def atom(self, scope: List[str]) -> LambdaTerm:
        kind, text, pos = self.peek()
        self.i += 1
        if kind == "open":
            inner = self.term(scope)
            self.take("close")
            return inner
        if kind == "hole":
            return Hole()
        if kind == "num":
            from src.models.lambda_gadgets import church
            return shift(church(int(text)), len(scope))
        if kind == "ident":
            if text in scope:
                return Var(len(scope) - 1 - max(j for j, n in enumerate(scope) if n == text))
            if text in self.env:
                return shift(self.env[text], len(scope))
            if self.resolve is not None:
                resolved = self.resolve(text)
                if resolved is not None:
                    return shift(resolved, len(scope))
            if "[" in text:
                raise LambdaSyntaxError(f"unknown form '{text}'", pos)
            return FreeVar(text)
        raise LambdaSyntaxError(f"unexpected '{text}'", pos)


def parse_lambda(text: str, env: Optional[Dict[str, LambdaTerm]] = None,
                 resolve: Optional[Callable[[str], Optional[LambdaTerm]]] = None) -> LambdaTerm:
    """Parses `\\x y. body` / `λx. body` with application by juxtaposition.

    Digits denote Church numerals; names in `env` are replaced by their (closed) terms and
    remaining unbound names become free variables.
    """
    if env is None:
        from src.models.lambda_gadgets import default_environment
        env = default_environment()
    parser = _LambdaParser(text, env, resolve)
    t = parser.term([])
    if parser.peek() is not None:
        kind, found, pos = parser.peek()
        raise LambdaSyntaxError(f"unexpected '{found}'", pos)
    return t


def print_lambda(t: LambdaTerm) -> str:
    return _print(t, [], top=True)


def _fresh(name: str, used: List[str]) -> str:
    candidate = name
    k = 1
    while candidate in used:
        candidate = f"{name}{k}"
        k += 1
    return candidate


def _print(t: LambdaTerm, names: List[str], top: bool = False) -> str:
    if isinstance(t, Var):
        return names[len(names) - 1 - t.index] if t.index < len(names) else f"#{t.index}"
    if isinstance(t, FreeVar):
        return t.name
    if isinstance(t, Hole):
        return "☐"
    if isinstance(t, Abs):
        binders, body = peel(t)
        scope = list(names)
        fresh = []
        for b in binders:
            n = _fresh(b, scope + _free_names(t))
            fresh.append(n)
            scope.append(n)
        text = "\\" + " ".join(fresh) + ". " + _print(body, scope, top=True)
        return text if top else f"({text})"
    head, args = spine(t)
    parts = [_print(head, names)] + [_print_arg(a, names) for a in args]
    text = " ".join(parts)
    return text if top else f"({text})"


def _print_arg(t: LambdaTerm, names: List[str]) -> str:
    if isinstance(t, (Var, FreeVar, Hole)):
        return _print(t, names)
    return _print(t, names, top=False)


def _free_names(t: LambdaTerm) -> List[str]:
    if isinstance(t, FreeVar):
        return [t.name]
    if isinstance(t, Abs):
        return _free_names(t.body)
    if isinstance(t, App):
        return _free_names(t.fn) + _free_names(t.arg)
    return []
