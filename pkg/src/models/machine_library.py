import logging
from collections import deque
from typing import Callable, Dict, List, Tuple

from src.models.turing_machine import Move, Transition, TuringMachine

logger = logging.getLogger(__name__)

Status = Tuple[str, int]  # ("c", count) while reading ones, ("d", value) once the closing 0 was read


def cell_owner(position: int, streams: int) -> Tuple[int, int]:
    """(stream index, element index) of a position of zip_streams(w0, ..., w_{streams-1})."""
    stream = 0
    while streams > 1 and position % 2 == 1:
        stream += 1
        streams -= 1
        position //= 2
    if streams > 1:
        position //= 2
    return stream, position


def _state_name(phase: int, statuses: Tuple[Status, ...]) -> str:
    return f"s{phase}_" + "_".join(f"{kind}{n}" for kind, n in statuses)


def _output_states(delta: Dict[Tuple[str, int], Transition]):
    for b in (0, 1):
        delta[("ret", b)] = ("out", b, Move.L)


def build_decider(predicate: Callable[..., bool], arity: int, bound: int, name: str = "decider") -> TuringMachine:
    """A machine reading zip_{k+1}(k, n1, ..., nk) left to right, counting every unary input.

    Counts saturate at `bound`, so the predicate sees min(n, bound). Once every input has been
    read the machine writes the verdict under the head, steps right, steps back and halts on it.
    """
    if arity < 1:
        raise ValueError(f"decider arity must be >= 1, got {arity}")
    if bound < 0:
        raise ValueError(f"decider bound must be >= 0, got {bound}")
    period = 2 ** arity
    reads = {}
    for phase in range(period):
        stream, _ = cell_owner(phase, arity + 1)
        if stream > 0:
            reads[phase] = stream - 1

    delta: Dict[Tuple[str, int], Transition] = {}
    start = (0, tuple(("c", 0) for _ in range(arity)))
    states: List[str] = [_state_name(*start)]
    queue = deque([start])
    seen = {start}
    while queue:
        phase, statuses = queue.popleft()
        here = _state_name(phase, statuses)
        for b in (0, 1):
            updated = list(statuses)
            j = reads.get(phase)
            if j is not None and updated[j][0] == "c":
                count = updated[j][1]
                updated[j] = ("c", min(count + 1, bound)) if b == 1 else ("d", count)
            if all(kind == "d" for kind, _ in updated):
                verdict = int(bool(predicate(*(n for _, n in updated))))
                delta[(here, b)] = ("ret", verdict, Move.R)
                continue
            nxt = ((phase + 1) % period, tuple(updated))
            delta[(here, b)] = (_state_name(*nxt), b, Move.R)
            if nxt not in seen:
                seen.add(nxt)
                states.append(_state_name(*nxt))
                queue.append(nxt)
    _output_states(delta)
    states += ["ret", "out"]
    logger.debug(f"Built decider {name} with {len(states)} states")
    return TuringMachine(tuple(states), states[0], delta, name=name)


def build_relation_decider(relation: Callable[[int, int], bool], bound: int,
                           name: str = "relation") -> TuringMachine:
    return build_decider(relation, 2, bound, name=name)


def build_predicate_decider(predicate: Callable[[int], bool], bound: int,
                            name: str = "predicate") -> TuringMachine:
    return build_decider(predicate, 1, bound, name=name)


def constant_decider(bit: int, name: str = None) -> TuringMachine:
    """Halts with `bit` after two steps, whatever the tape holds."""
    delta: Dict[Tuple[str, int], Transition] = {("q0", b): ("ret", int(bit), Move.R) for b in (0, 1)}
    _output_states(delta)
    return TuringMachine(("q0", "ret", "out"), "q0", delta, name=name or f"constant{int(bit)}")


def finite_relation_decider(pairs, bound: int, name: str = "finite_relation") -> TuringMachine:
    members = {(int(n), int(m)) for n, m in pairs}
    if any(n >= bound or m >= bound for n, m in members):
        raise ValueError(f"relation members must be below the bound {bound}")
    return build_relation_decider(lambda n, m: (n, m) in members, bound, name=name)
