import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from src.models.ep_word import BLINK, Bits, EpWord, ONES, ZEROS, all_words, zip2
from src.models.errors import CongruenceViolationError, CongruenceWitness
from src.models.specification import Specification
from src.models.stream_algebra import (StreamAlgebra, UNKNOWN, canonical_model, observation_by_coiteration)
from src.models.term import Sort

logger = logging.getLogger(__name__)


def _word(w: Bits) -> str:
    return "".join(map(str, w)) or "ε"


@dataclass(frozen=True)
class Z:
    """z_w: w followed by zeros, not built by the stream constructor when w is empty."""
    word: Bits = ()

    def __str__(self):
        return f"z_{_word(self.word)}"


@dataclass(frozen=True)
class O:
    word: Bits = ()

    def __str__(self):
        return f"o_{_word(self.word)}"


@dataclass(frozen=True)
class W:
    stream: EpWord

    def __str__(self):
        return str(self.stream)


@dataclass(frozen=True)
class Tagged:
    """One of two copies of an ω-word."""
    stream: EpWord
    tag: int

    def __str__(self):
        return f"{self.stream}#{self.tag}"


HiddenElem = Union[Z, O, W]
FiniteOrInfinite = Union[Bits, EpWord]


def emb(e: HiddenElem) -> EpWord:
    if isinstance(e, Z):
        return EpWord.finite_then(e.word, ZEROS)
    if isinstance(e, O):
        return EpWord.finite_then(e.word, ONES)
    return e.stream


def _split(u: FiniteOrInfinite) -> Tuple[int, FiniteOrInfinite]:
    if isinstance(u, EpWord):
        return u.head(), u.tail()
    return u[0], u[1:]


def _concat(prefix: List[int], u: FiniteOrInfinite) -> FiniteOrInfinite:
    if isinstance(u, EpWord):
        return EpWord.finite_then(prefix, u)
    return tuple(prefix) + tuple(u)


def join(u1: FiniteOrInfinite, u2: FiniteOrInfinite) -> FiniteOrInfinite:
    """a u1 ⋈ u2 = a (u2 ⋈ u1) and ε ⋈ u2 = u2, over finite words and ω-words."""
    out: List[int] = []
    a, b = (tuple(u1) if not isinstance(u1, EpWord) else u1), (tuple(u2) if not isinstance(u2, EpWord) else u2)
    while True:
        if not isinstance(a, EpWord) and not a:
            return _concat(out, b)
        if isinstance(a, EpWord) and isinstance(b, EpWord):
            return EpWord.finite_then(out, zip2(a, b))
        if not isinstance(b, EpWord) and not b:
            return _concat(out, a)
        head, rest = _split(a)
        out.append(head)
        a, b = b, rest


# The zip counterexample

def _head(e: HiddenElem) -> int:
    if isinstance(e, W):
        return e.stream.head()
    if e.word:
        return e.word[0]
    return 0 if isinstance(e, Z) else 1


def _tail(e: HiddenElem) -> HiddenElem:
    if isinstance(e, W):
        return W(e.stream.tail())
    return type(e)(e.word[1:])


def _cons(a: int, e: HiddenElem) -> HiddenElem:
    if isinstance(e, W):
        return W(e.stream.cons(a))
    return type(e)((a,) + e.word)


def _zip(x: HiddenElem, y: HiddenElem) -> HiddenElem:
    if isinstance(x, Z) and isinstance(y, O):
        if len(x.word) == len(y.word):
            return W(EpWord.finite_then(join(x.word, y.word), ZEROS))
        return W(join(EpWord.finite_then(x.word, ZEROS), EpWord.finite_then(y.word, ONES)))
    if isinstance(x, O) and isinstance(y, Z):
        if len(x.word) == len(y.word) + 1:
            return W(EpWord.finite_then(join(x.word, y.word), ZEROS))
        return W(join(EpWord.finite_then(x.word, ONES), EpWord.finite_then(y.word, ZEROS)))
    return W(join(emb(x), emb(y)))


_COUNTEREXAMPLE_SORTS = {
    ":": ((Sort.B, Sort.S), Sort.S),
    "zeros": ((), Sort.S),
    "ones": ((), Sort.S),
    "blink": ((), Sort.S),
    "zip2": ((Sort.S, Sort.S), Sort.S),
    "head": ((Sort.S,), Sort.B),
    "tail": ((Sort.S,), Sort.S),
}


def counterexample_model() -> StreamAlgebra:
    """Hidden model of the zip/blink specification where zip(zeros, ones) = blink fails behaviorally."""
    interp = {
        ":": _cons,
        "zeros": lambda: Z(),
        "ones": lambda: O(),
        "blink": lambda: W(BLINK),
        "zip2": _zip,
        "head": _head,
        "tail": _tail,
    }
    return StreamAlgebra(
        name="counterexample",
        interp=interp,
        sorts=dict(_COUNTEREXAMPLE_SORTS),
        domain="z_w, o_w for finite w, and ω-words",
        hidden=True,
        observe=observation_by_coiteration(_head, _tail),
        represent=W,
    )


FIXED_WORDS = ("(0)", "(1)", "(01)", "(10)", "1(0)", "0(1)", "(001)", "11(01)")


def counterexample_grid(max_word: int = 4, words: Sequence[str] = FIXED_WORDS) -> Dict[Sort, List[Any]]:
    """z_w and o_w for |w| <= max_word, a fixed sample of ω-words, both bits."""
    finite = all_words(max_word)
    elements: List[Any] = [Z(w) for w in finite] + [O(w) for w in finite]
    elements += [W(EpWord.parse(text)) for text in words]
    return {Sort.B: [0, 1], Sort.S: elements}


def remark_case(s: HiddenElem, t: HiddenElem) -> str:
    """Case family of the zip equation check for σ = s, τ = t."""
    kind = (type(s).__name__, type(t).__name__)
    labels = {
        ("Z", "O"): "i", ("O", "Z"): "ii", ("W", "W"): "iii",
        ("Z", "W"): "iv", ("O", "W"): "v", ("W", "Z"): "vi", ("W", "O"): "vii",
        ("Z", "Z"): "viii", ("O", "O"): "ix",
    }
    label = labels.get(kind)
    if label is None:
        raise ValueError(f"assignment ({s}, {t}) falls outside the listed cases")
    return label


# The f/ones model

def _of_head(e) -> int:
    return 1 if isinstance(e, O) else e.stream.head()


def _of_tail(e):
    return e if isinstance(e, O) else W(e.stream.tail())


def _of_cons(a: int, e):
    if isinstance(e, O):
        return W(ONES.cons(a))
    return W(e.stream.cons(a))


def _of_f(e):
    if isinstance(e, O):
        return W(ZEROS)
    return W(e.stream.tail())


def ones_f_model() -> StreamAlgebra:
    """Element o observes as 1^ω but is no cons image, so f(o) is unconstrained and set to 0^ω."""
    interp = {":": _of_cons, "ones": lambda: O(), "f": _of_f, "head": _of_head, "tail": _of_tail}
    sorts = {":": ((Sort.B, Sort.S), Sort.S), "ones": ((), Sort.S), "f": ((Sort.S,), Sort.S),
             "head": ((Sort.S,), Sort.B), "tail": ((Sort.S,), Sort.S)}
    return StreamAlgebra(name="ones_f", interp=interp, sorts=sorts, domain="o and ω-words", hidden=True,
                         observe=observation_by_coiteration(_of_head, _of_tail), represent=W)


def ones_f_grid(words: Sequence[str] = FIXED_WORDS) -> Dict[Sort, List[Any]]:
    return {Sort.B: [0, 1], Sort.S: [O()] + [W(EpWord.parse(text)) for text in words]}


# The confusion model

def _lift(fn: Callable[..., Any], res_sort: Sort, arg_sorts: Tuple[Sort, ...]) -> Callable[..., Any]:
    def lifted(*args):
        plain = [a.stream if s == Sort.S else a for a, s in zip(args, arg_sorts)]
        value = fn(*plain)
        if res_sort != Sort.S or value is UNKNOWN:
            return value
        tag = max((a.tag for a, s in zip(args, arg_sorts) if s == Sort.S), default=1)
        return Tagged(value, tag)
    return lifted


def confusion_model(spec: Specification, budget: int = 10000) -> StreamAlgebra:
    """Two tagged copies of every ω-word; every operation ignores the tags of its arguments."""
    base = canonical_model(spec, budget)
    interp: Dict[str, Callable[..., Any]] = {}
    for name, fn in base.interp.items():
        arg_sorts, res_sort = base.sorts[name]
        interp[name] = _lift(fn, res_sort, arg_sorts)
    interp[":"] = lambda b, e: Tagged(e.stream.cons(b), e.tag)
    interp["head"] = lambda e: e.stream.head()
    interp["tail"] = lambda e: Tagged(e.stream.tail(), e.tag)
    sorts = dict(base.sorts)
    sorts["head"] = ((Sort.S,), Sort.B)
    sorts["tail"] = ((Sort.S,), Sort.S)
    return StreamAlgebra(name=f"confusion({spec.name})", interp=interp, sorts=sorts,
                         domain="ω-words tagged 0 or 1", hidden=True,
                         observe=lambda e: e.stream, represent=lambda w: Tagged(w, 0))


def confusion_grid(words: Sequence[str] = FIXED_WORDS, naturals: int = 4) -> Dict[Sort, List[Any]]:
    streams = [EpWord.parse(text) for text in words]
    return {Sort.B: [0, 1], Sort.S: [Tagged(w, tag) for w in streams for tag in (0, 1)],
            Sort.N: list(range(naturals))}


# Behavioral notions

def behavioral_equiv(alg: StreamAlgebra, e1: Any, e2: Any) -> bool:
    return alg.equivalent(e1, e2)


def behaviorally_satisfies(alg: StreamAlgebra, spec: Specification, pools: Dict[Sort, Sequence[Any]],
                           rng=None, limit: Optional[int] = None):
    from src.models.stream_algebra import check_spec
    return check_spec(alg, spec.equations, pools, rng=rng, limit=limit, behavioral=True)


def find_congruence_violation(alg: StreamAlgebra, pools: Dict[Sort, Sequence[Any]],
                              symbols: Optional[Sequence[str]] = None) -> Optional[CongruenceWitness]:
    """First (symbol, position, element) where replacing an element by its representative changes the result."""
    names = symbols if symbols is not None else [n for n in alg.sorts if n in alg.interp]
    for name in names:
        arg_sorts, _ = alg.sorts[name]
        for position, sort in enumerate(arg_sorts):
            if sort != Sort.S:
                continue
            others = [pools[s] for j, s in enumerate(arg_sorts) if j != position]
            for element in pools[Sort.S]:
                rep = alg.represent(alg.observation(element))
                if rep == element:
                    continue
                for rest in itertools.product(*others):
                    args = list(rest[:position]) + [element] + list(rest[position:])
                    swapped = list(rest[:position]) + [rep] + list(rest[position:])
                    value = alg.interp[name](*args)
                    equivalent_value = alg.interp[name](*swapped)
                    if value is UNKNOWN or equivalent_value is UNKNOWN:
                        continue
                    if not alg.equivalent(value, equivalent_value):
                        return CongruenceWitness(name, position, element, rep, tuple(args), value,
                                                 equivalent_value)
    return None


def quotient_by_equiv(alg: StreamAlgebra, pools: Dict[Sort, Sequence[Any]]) -> StreamAlgebra:
    """Stream algebra on observation streams; raises CongruenceViolationError when ≡ is not a congruence."""
    if not alg.hidden:
        return alg
    witness = find_congruence_violation(alg, pools)
    if witness is not None:
        logger.warning(f"Quotient of {alg.name} refused: {witness}")
        raise CongruenceViolationError(witness)

    def induced(name: str):
        fn = alg.interp[name]
        arg_sorts, res_sort = alg.sorts[name]

        def quotient_fn(*args):
            lifted = [alg.represent(a) if s == Sort.S else a for a, s in zip(args, arg_sorts)]
            value = fn(*lifted)
            if res_sort != Sort.S or value is UNKNOWN:
                return value
            return alg.observation(value)
        return quotient_fn

    interp = {name: induced(name) for name in alg.interp if name in alg.sorts}
    interp[":"] = lambda b, w: w.cons(b)
    return StreamAlgebra(name=f"{alg.name}/≡", interp=interp, sorts=dict(alg.sorts))
