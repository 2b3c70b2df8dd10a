import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from src.models.lambda_gadgets import I, K, church
from src.models.lambda_term import (FINDERS, Abs, App, Found, FreeVar, Hole, LambdaTerm, SearchResult,
                                    apps, plug)

logger = logging.getLogger(__name__)

VERBOSE = False

SEEDS: Tuple[Tuple[str, LambdaTerm], ...] = (("I", I), ("K", K), ("0", church(0)), ("1", church(1)),
                                             ("2", church(2)))


@dataclass(frozen=True)
class Context:
    term: LambdaTerm
    label: str
    size: int

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Distinguishing:
    context: Context
    converging: str  # "M" or "N"
    steps: int

    def __str__(self):
        return f"Distinguishing({self.context.label})"


@dataclass(frozen=True)
class NoneFound:
    context_bound: int
    budget: int

    def __str__(self):
        return f"NoneFound({self.context_bound}, {self.budget})"


def _free_names(t: LambdaTerm) -> List[str]:
    if isinstance(t, FreeVar):
        return [t.name]
    if isinstance(t, Abs):
        return _free_names(t.body)
    if isinstance(t, App):
        return _free_names(t.fn) + _free_names(t.arg)
    return []


def enumerate_contexts(context_bound: int, seeds: Sequence[Tuple[str, LambdaTerm]] = SEEDS,
                       binder_names: Sequence[str] = ()) -> Iterator[Context]:
    """Contexts of size <= context_bound, the hole counting as one.

    All applicative contexts ☐ P1…Pk come first, then P (☐ Q1…Qj), then λv. ☐ Q1…Qj for the
    given binder names (plugging captures free occurrences of v).
    """
    for k in range(context_bound):
        for combo in itertools.product(seeds, repeat=k):
            yield Context(apps(Hole(), *(t for _, t in combo)),
                          " ".join(["☐"] + [label for label, _ in combo]), k + 1)
    for j in range(context_bound - 1):
        for (p_label, p), combo in itertools.product(seeds, itertools.product(seeds, repeat=j)):
            inner = " ".join(["☐"] + [label for label, _ in combo])
            yield Context(App(p, apps(Hole(), *(t for _, t in combo))), f"{p_label} ({inner})", j + 2)
    for name in binder_names:
        for j in range(context_bound - 1):
            for combo in itertools.product(seeds, repeat=j):
                inner = " ".join(["☐"] + [label for label, _ in combo])
                yield Context(Abs(apps(Hole(), *(t for _, t in combo)), name), f"λ{name}. {inner}", j + 2)


def _converges_fast(result: SearchResult, margin: int) -> bool:
    return isinstance(result, Found) and result.steps <= margin


def obs_refute(m: LambdaTerm, n: LambdaTerm, kind: str = "whnf", context_bound: int = 4,
               budget: int = 10_000):
    """Searches for a context in which exactly one of m, n reaches a `kind` normal form.

    The converging side has to get there within budget // 4 steps while the other side runs
    out of the whole budget or revisits a term. NoneFound says nothing about equivalence.
    """
    if context_bound < 0 or budget < 0:
        raise ValueError(f"bounds must be >= 0, got context bound {context_bound} and budget {budget}")
    if kind not in FINDERS:
        raise ValueError(f"kind must be one of {sorted(FINDERS)}, got '{kind}'")
    find = FINDERS[kind]
    margin = budget // 4
    binder_names = list(dict.fromkeys(_free_names(m) + _free_names(n)))
    tried = 0
    for context in enumerate_contexts(context_bound, SEEDS, binder_names):
        tried += 1
        cm, cn = plug(context.term, m), plug(context.term, n)
        quick_m = find(cm, margin, True)
        quick_n = find(cn, margin, True)
        fast_m, fast_n = _converges_fast(quick_m, margin), _converges_fast(quick_n, margin)
        if fast_m == fast_n:
            continue
        slow_side = cn if fast_m else cm
        slow = find(slow_side, budget, True)
        if isinstance(slow, Found):
            continue
        converging, found = ("M", quick_m) if fast_m else ("N", quick_n)
        if VERBOSE:
            logger.info(f"Context {context.label} distinguishes after {tried} candidates")
        return Distinguishing(context, converging, found.steps)
    if VERBOSE:
        logger.info(f"No distinguishing context among {tried} candidates")
    return NoneFound(context_bound, budget)

