import re
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

Bits = Tuple[int, ...]

_TEXT_FORM = re.compile(r"^\s*([01]*)\s*\(\s*([01]+)\s*\)\s*$")


def _primitive_root(v: Bits) -> Bits:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


@dataclass(frozen=True)
class EpWord:
    """Eventually periodic ω-word prefix·period^ω, always kept in canonical form."""
    prefix: Bits
    period: Bits

    @classmethod
    def of(cls, prefix: Iterable[int], period: Iterable[int]) -> "EpWord":
        u = tuple(int(b) for b in prefix)
        v = tuple(int(b) for b in period)
        if not v:
            raise ValueError("EpWord period must be nonempty")
        if any(b not in (0, 1) for b in u + v):
            raise ValueError(f"EpWord letters must be bits, got {u}({v})")
        v = _primitive_root(v)
        # u·v^ω = u'·(rot v)^ω whenever u = u'·last(v)
        while u and u[-1] == v[-1]:
            u = u[:-1]
            v = (v[-1],) + v[:-1]
        return cls(u, v)

    @classmethod
    def parse(cls, text: str) -> "EpWord":
        m = _TEXT_FORM.match(text)
        if m is None:
            raise ValueError(f"'{text}' is not an eventually periodic word of the form u(v)")
        return cls.of(m.group(1), m.group(2))

    @classmethod
    def constant(cls, bit: int) -> "EpWord":
        return cls.of((), (bit,))

    @classmethod
    def finite_then(cls, word: Sequence[int], tail: "EpWord") -> "EpWord":
        return cls.of(tuple(word) + tail.prefix, tail.period)

    def __str__(self):
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"

    def head(self) -> int:
        return self.index(0)

    def tail(self) -> "EpWord":
        return self.drop(1)

    def cons(self, bit: int) -> "EpWord":
        return EpWord.of((int(bit),) + self.prefix, self.period)

    def index(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def drop(self, n: int) -> "EpWord":
        if n <= len(self.prefix):
            return EpWord.of(self.prefix[n:], self.period)
        r = (n - len(self.prefix)) % len(self.period)
        return EpWord((), self.period[r:] + self.period[:r])

    def take(self, n: int) -> List[int]:
        return [self.index(i) for i in range(n)]

    def horizon(self) -> int:
        """Positions after which the word only repeats its period."""
        return len(self.prefix) + len(self.period)

    def first_index(self, bit: int) -> Optional[int]:
        for i in range(self.horizon()):
            if self.index(i) == bit:
                return i
        return None


ZEROS = EpWord.constant(0)
ONES = EpWord.constant(1)
BLINK = EpWord.of((), (0, 1))


def coiterate(state: Hashable, step: Callable[[Hashable], Tuple[int, Hashable]]) -> EpWord:
    """The ω-word emitted by a finite-state unfolding, cut at the first repeated state."""
    seen: Dict[Hashable, int] = {}
    out: List[int] = []
    while state not in seen:
        seen[state] = len(out)
        bit, state = step(state)
        out.append(bit)
    start = seen[state]
    return EpWord.of(out[:start], out[start:])


def agree_horizon(words: Sequence[EpWord]) -> int:
    """Number of positions that decides index-wise equality of the given words."""
    prefix = max(len(w.prefix) for w in words)
    period = int(np.lcm.reduce([len(w.period) for w in words]))
    return prefix + period


def equal_by_index(a: EpWord, b: EpWord) -> bool:
    return all(a.index(i) == b.index(i) for i in range(agree_horizon([a, b])))


def zip2(a: EpWord, b: EpWord) -> EpWord:
    return coiterate((a, b), lambda s: (s[0].head(), (s[1], s[0].tail())))


def zip_k(words: Sequence[EpWord]) -> EpWord:
    if not words:
        raise ValueError("zip_k needs k >= 1 arguments")
    if len(words) == 1:
        return words[0]
    return zip2(words[0], zip_k(words[1:]))


def is_zeros_sem(w: EpWord) -> EpWord:
    return ONES if w == ZEROS else ZEROS


def uhd_sem(w: EpWord) -> EpWord:
    n = w.first_index(0)
    if n is None:
        return ONES
    return EpWord.of((1,) * n, (0,))


def utl_sem(w: EpWord) -> EpWord:
    n = w.first_index(0)
    if n is None:
        return ONES
    return w.drop(n + 1)


def natstr_sem(w: EpWord) -> EpWord:
    if 0 in w.period:
        return ONES
    return EpWord.of((1,) * w.prefix.count(0), (0,))


def nat_sem(w: EpWord) -> EpWord:
    if w.period == (0,) and all(b == 1 for b in w.prefix):
        return ONES
    return ZEROS


def leq_sem(a: EpWord, b: EpWord) -> EpWord:
    for i in range(agree_horizon([a, b])):
        if a.index(i) > b.index(i):
            return ZEROS
    return ONES


def dup_sem(w: EpWord) -> EpWord:
    return coiterate((w, 0), lambda s: (s[0].head(), (s[0], 1) if s[1] == 0 else (s[0].tail(), 0)))


def even_sem(w: EpWord) -> EpWord:
    return coiterate(w, lambda s: (s.head(), s.drop(2)))


def odd_sem(w: EpWord) -> EpWord:
    return even_sem(w.tail())


def inv_sem(w: EpWord) -> EpWord:
    return EpWord.of((1 - b for b in w.prefix), (1 - b for b in w.period))


def nxor_sem(w: EpWord) -> EpWord:
    return coiterate(w, lambda s: (1 if s.index(0) == s.index(1) else 0, s.drop(2)))


def unary_sem(n: int) -> EpWord:
    return EpWord.of((1,) * n, (0,))


def ncons_sem(n: int, w: EpWord) -> EpWord:
    return EpWord.finite_then((1,) * n + (0,), w)


def nhead_sem(w: EpWord) -> Optional[int]:
    """Leading run length of an N-stream encoding; None on 1^ω which encodes nothing."""
    return w.first_index(0)


def encode_naturals(prefix: Sequence[int], cycle: Sequence[int]) -> EpWord:
    """Run-length encoding 1^{n0} 0 1^{n1} 0 … of the naturals prefix·cycle^ω."""
    if not cycle:
        raise ValueError("encoding an infinite sequence of naturals needs a nonempty cycle")

    def block(ns):
        out: List[int] = []
        for n in ns:
            out.extend([1] * int(n) + [0])
        return out

    return EpWord.of(block(prefix), block(cycle))


def decode_naturals(w: EpWord, count: int) -> List[Optional[int]]:
    result: List[Optional[int]] = []
    for _ in range(count):
        n = w.first_index(0)
        result.append(n)
        if n is None:
            break
        w = w.drop(n + 1)
    return result


def all_words(max_length: int, min_length: int = 0) -> List[Bits]:
    words: List[Bits] = []
    for length in range(min_length, max_length + 1):
        for code in range(2 ** length):
            words.append(tuple((code >> (length - 1 - i)) & 1 for i in range(length)))
    return words


def exhaustive_epwords(max_prefix: int, max_period: int) -> List[EpWord]:
    """All canonical words with |u| <= max_prefix and |v| <= max_period, in a fixed order."""
    found: Dict[EpWord, None] = {}
    for u in all_words(max_prefix):
        for v in all_words(max_period, min_length=1):
            found.setdefault(EpWord.of(u, v), None)
    return list(found)


def sample_epwords(rng: np.random.Generator, count: int, max_prefix: int = 6,
                   max_period: int = 5) -> List[EpWord]:
    words = []
    for _ in range(count):
        u_len = int(rng.integers(0, max_prefix + 1))
        v_len = int(rng.integers(1, max_period + 1))
        u = rng.integers(0, 2, size=u_len)
        v = rng.integers(0, 2, size=v_len)
        words.append(EpWord.of(u.tolist(), v.tolist()))
    return words
