import logging
import re
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from src.models.errors import LambdaSyntaxError
from src.models.lambda_term import (Abs, App, LambdaTerm, Var, apps, lams, parse_lambda)
from src.models.turing_machine import Halt, TuringMachine, load_machine, run_direct
from src.utils.content import resolve_resource

logger = logging.getLogger(__name__)

VERBOSE = False

I = lams("x", Var(0))
K = lams("x y", Var(1))
KI = App(K, I)
OMEGA = App(lams("x", App(Var(0), Var(0))), lams("x", App(Var(0), Var(0))))
ZER = lams("f x", Var(0))
SUCC = lams("z f x", App(Var(1), apps(Var(2), Var(1), Var(0))))

TABLE_LIMIT = 32


def church(k: int) -> LambdaTerm:
    if k < 0:
        raise ValueError(f"Church numerals are defined for k >= 0, got {k}")
    body: LambdaTerm = Var(0)
    for _ in range(k):
        body = App(Var(1), body)
    return lams("f x", body)


def default_environment() -> Dict[str, LambdaTerm]:
    return {"I": I, "K": K, "Omega": OMEGA, "zer": ZER, "succ": SUCC}


def build_M() -> LambdaTerm:
    half = lams("x a", App(Var(0), App(Var(1), Var(1))))
    return App(half, half)


def build_Tpp(T: LambdaTerm) -> LambdaTerm:
    env = dict(default_environment(), T=T)
    return parse_lambda(r"\x n m. T n m I (x x n (succ m))", env)


def build_Tprime(T: LambdaTerm) -> LambdaTerm:
    tpp = build_Tpp(T)
    return App(tpp, tpp)


def build_Nprime(T: LambdaTerm) -> LambdaTerm:
    env = dict(default_environment(), Tp=build_Tprime(T))
    return parse_lambda(r"\x n. Tp n zer (\a. a (x x (succ n)))", env)


def build_N(T: LambdaTerm) -> LambdaTerm:
    np_ = build_Nprime(T)
    return apps(np_, np_, ZER)


# Tabulated halting predicate

def _pair(head: LambdaTerm, tail: LambdaTerm) -> LambdaTerm:
    # λf. f head tail; indices in head and tail already count the f binder
    return Abs(apps(Var(0), head, tail), "f")


HD = lams("l", App(Var(0), K))
TL = lams("l", App(Var(0), KI))


def _constant_stream(element: LambdaTerm) -> LambdaTerm:
    """Lazy infinite list element, element, ... as a self-application."""
    half = lams("x", _pair(element, App(Var(1), Var(1))))
    return App(half, half)


def _threshold(h: Optional[int]) -> LambdaTerm:
    """λm. true iff m >= h; constantly false when h is None."""
    if h is None:
        return lams("m", KI)
    flags = _constant_stream(K)
    for _ in range(h):
        flags = _pair(KI, flags)
    return lams("m", App(HD, apps(Var(0), TL, flags)))


def build_T_table(halting_times: Sequence[Optional[int]]) -> LambdaTerm:
    """T n m →* K when halting_times[n] <= m, otherwise →* K I; inputs past the table never halt."""
    rows = _constant_stream(_threshold(None))
    for h in reversed(list(halting_times)):
        rows = _pair(_threshold(h), rows)
    return lams("n m", App(App(HD, apps(Var(1), TL, rows)), Var(0)))


def halting_times(m: TuringMachine, max_n: int = TABLE_LIMIT, max_steps: int = TABLE_LIMIT) -> List[Optional[int]]:
    times: List[Optional[int]] = []
    for n in range(max_n + 1):
        result = run_direct(m, [n], [], max_steps)
        times.append(result.steps if isinstance(result, Halt) else None)
    if VERBOSE:
        logger.info(f"Halting times of {m.name}: {times}")
    return times


def build_T_for_machine(m: TuringMachine, max_n: int = TABLE_LIMIT, max_steps: int = TABLE_LIMIT) -> LambdaTerm:
    return build_T_table(halting_times(m, max_n, max_steps))


@lru_cache(maxsize=16)
def _machine_table(name: str) -> LambdaTerm:
    return build_T_for_machine(load_machine(name))


_TABLE_FORM = re.compile(r"^Ttable\[(?P<machine>[^\]]+)\]$")


def resolve_form(name: str) -> Optional[LambdaTerm]:
    m = _TABLE_FORM.match(name)
    if m is None:
        return None
    return _machine_table(m.group("machine"))


def parse_gadget(text: str) -> LambdaTerm:
    """`let NAME = TERM` lines followed by the term itself; `#` starts a comment."""
    env = default_environment()
    body: List[str] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("let "):
            name, sep, definition = line[4:].partition("=")
            name = name.strip()
            if not sep or not re.match(r"^[^\W\d][\w']*$", name):
                raise LambdaSyntaxError(f"line {line_no}: expected 'let NAME = TERM'", 0)
            env[name] = parse_lambda(definition.strip(), env, resolve_form)
        else:
            body.append(line)
    if not body:
        raise LambdaSyntaxError("gadget defines no term", len(text))
    return parse_lambda(" ".join(body), env, resolve_form)


def load_lambda(name_or_text: str) -> LambdaTerm:
    """A gadget file (path or bundled name) or an inline term."""
    try:
        path = resolve_resource(name_or_text, "gadgets", ".lam")
    except FileNotFoundError:
        if name_or_text.endswith(".lam"):
            raise
        return parse_lambda(name_or_text, resolve=resolve_form)
    with open(path, "r", encoding="utf-8") as f:
        return parse_gadget(f.read())
