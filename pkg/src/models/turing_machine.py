import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.models.ep_word import EpWord, ZEROS, unary_sem, zip_k
from src.models.errors import MachineFormatError
from src.utils.content import resolve_resource

logger = logging.getLogger(__name__)

VERBOSE = False

_STATE_NAME = re.compile(r"^[^\W\d][\w']*$")


class Move(Enum):
    L = "L"
    R = "R"

    def __str__(self):
        return self.value


Transition = Tuple[str, int, Move]
Delta = Mapping[Tuple[str, int], Transition]


@dataclass(frozen=True)
class TuringMachine:
    states: Tuple[str, ...]
    initial: str
    delta: Delta = field(hash=False)
    name: str = "machine"

    def __post_init__(self):
        _validate(self.states, self.initial, [self.delta])

    def halting_pairs(self) -> List[Tuple[str, int]]:
        return [(q, b) for q in self.states for b in (0, 1) if (q, b) not in self.delta]


@dataclass(frozen=True)
class NTM:
    states: Tuple[str, ...]
    initial: str
    delta0: Delta = field(hash=False)
    delta1: Delta = field(hash=False)
    name: str = "ntm"

    def __post_init__(self):
        _validate(self.states, self.initial, [self.delta0, self.delta1])

    def is_total(self) -> bool:
        return all((q, b) in d for d in (self.delta0, self.delta1) for q in self.states for b in (0, 1))

    def delta(self, choice: int) -> Delta:
        return self.delta1 if choice else self.delta0


def _validate(states: Sequence[str], initial: str, deltas: Sequence[Delta]):
    if initial not in states:
        raise MachineFormatError(f"initial state '{initial}' is not among the states")
    for s in states:
        if not _STATE_NAME.match(s):
            raise MachineFormatError(f"state name '{s}' is not an identifier")
    for d in deltas:
        for (q, b), (q2, b2, _) in d.items():
            if q not in states or q2 not in states:
                raise MachineFormatError(f"transition {q} {b} -> {q2} {b2} uses an undeclared state")
            if b not in (0, 1) or b2 not in (0, 1):
                raise MachineFormatError(f"transition {q} {b} -> {q2} {b2} uses a non-bit symbol")


_DELTA_LINE = re.compile(r"^(\S+)\s+([01])\s*->\s*(\S+)\s+([01])\s+([LR])$")


def parse_machine(text: str, name: str = "machine") -> Union[TuringMachine, NTM]:
    """Parses a machine description.

    states: q0 q1 ...
    initial: q0
    delta: q b -> q' b' R|L        (deterministic machines)
    delta0: ... / delta1: ...      (nondeterministic machines)
    """
    states: List[str] = []
    initial: Optional[str] = None
    deltas: Dict[str, Dict[Tuple[str, int], Transition]] = {"delta": {}, "delta0": {}, "delta1": {}}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise MachineFormatError(f"expected 'key: value', got '{line}'", line_no)
        rest = rest.strip()
        if key == "states":
            states.extend(rest.split())
        elif key == "initial":
            initial = rest
        elif key in deltas:
            m = _DELTA_LINE.match(rest)
            if m is None:
                raise MachineFormatError(f"malformed transition '{rest}'", line_no)
            q, b, q2, b2, mv = m.groups()
            if (q, int(b)) in deltas[key]:
                raise MachineFormatError(f"{key} defined twice for ({q}, {b})", line_no)
            deltas[key][(q, int(b))] = (q2, int(b2), Move(mv))
        else:
            raise MachineFormatError(f"unknown key '{key}'", line_no)
    if not states:
        raise MachineFormatError("no states declared")
    if initial is None:
        initial = states[0]
    if deltas["delta0"] or deltas["delta1"]:
        if deltas["delta"]:
            raise MachineFormatError("a machine has either 'delta' or 'delta0'/'delta1' lines")
        return NTM(tuple(states), initial, deltas["delta0"], deltas["delta1"], name=name)
    return TuringMachine(tuple(states), initial, deltas["delta"], name=name)


def load_machine(name: str) -> Union[TuringMachine, NTM]:
    path = resolve_resource(name, "machines", ".tm")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    machine_name = re.sub(r"\.tm$", "", path.replace("\\", "/").rsplit("/", 1)[-1])
    return parse_machine(text, name=machine_name)


def format_machine(m: Union[TuringMachine, NTM]) -> str:
    lines = [f"states: {' '.join(m.states)}", f"initial: {m.initial}"]
    tables = [("delta", m.delta)] if isinstance(m, TuringMachine) else [("delta0", m.delta0), ("delta1", m.delta1)]
    for key, table in tables:
        for (q, b), (q2, b2, mv) in table.items():
            lines.append(f"{key}: {q} {b} -> {q2} {b2} {mv}")
    return "\n".join(lines) + "\n"


class HalfTape:
    """One half of the tape: cells written by the machine stacked over an ω-word."""

    def __init__(self, base: EpWord):
        self.base = base
        self.offset = 0
        self.written: List[int] = []

    def read(self) -> int:
        if self.written:
            return self.written[-1]
        return self.base.index(self.offset)

    def pop(self) -> int:
        if self.written:
            return self.written.pop()
        bit = self.base.index(self.offset)
        self.offset += 1
        return bit

    def push(self, bit: int):
        self.written.append(bit)

    def peek(self, n: int) -> List[int]:
        cells = list(reversed(self.written))[:n]
        i = self.offset
        while len(cells) < n:
            cells.append(self.base.index(i))
            i += 1
        return cells


@dataclass
class MachineConfig:
    state: str
    left: HalfTape
    right: HalfTape
    position: int = 0

    def read(self) -> int:
        return self.right.read()

    def step(self, transition: Transition):
        q2, b2, move = transition
        self.right.pop()
        if move is Move.R:
            self.left.push(b2)
            self.position += 1
        else:
            a = self.left.pop()
            self.right.push(b2)
            self.right.push(a)
            self.position -= 1
        self.state = q2


@dataclass(frozen=True)
class Halt:
    bit: int
    steps: int

    def __str__(self):
        return f"Halt({self.bit}, {self.steps})"


@dataclass(frozen=True)
class Running:
    steps: int

    def __str__(self):
        return f"Running({self.steps})"


def input_tape(inputs: Sequence[int]) -> EpWord:
    """zip_{k+1}(k, n1, ..., nk) with every natural in unary 1^n 0^ω."""
    return zip_k([unary_sem(len(inputs))] + [unary_sem(n) for n in inputs])


def oracle_tape(oracles: Sequence[EpWord]) -> EpWord:
    return zip_k(list(oracles)) if oracles else ZEROS


def start_config(m: TuringMachine, inputs: Sequence[int], oracles: Sequence[EpWord]) -> MachineConfig:
    return MachineConfig(m.initial, HalfTape(oracle_tape(oracles)), HalfTape(input_tape(inputs)))


def run_direct(m: TuringMachine, inputs: Sequence[int], oracles: Sequence[EpWord],
               max_steps: int) -> Union[Halt, Running]:
    config = start_config(m, inputs, oracles)
    for steps in range(max_steps + 1):
        b = config.read()
        transition = m.delta.get((config.state, b))
        if transition is None:
            if VERBOSE:
                logger.info(f"{m.name} halted with {b} after {steps} steps on {list(inputs)}")
            return Halt(b, steps)
        if steps == max_steps:
            break
        config.step(transition)
    return Running(max_steps)


@dataclass
class RunReport:
    steps_taken: int
    halted_with: Optional[int]
    visit_counts: Dict[int, int]
    min_position_after: Dict[int, int]
    trace: List[Tuple[str, int]]
    stuck_at: Optional[int] = None
    threshold: int = 10

    @property
    def max_position(self) -> int:
        return max(p for _, p in self.trace) if self.trace else 0

    def complete_so_far(self) -> bool:
        """Every position from 0 up to the rightmost reached one has been visited."""
        return all(self.visit_counts.get(p, 0) > 0 for p in range(self.max_position + 1))

    def oscillation_witnesses(self) -> List[int]:
        return sorted(p for p, c in self.visit_counts.items() if c > self.threshold)


def run_ntm(m: NTM, w: EpWord, choices: EpWord, max_steps: int, threshold: int = 10) -> RunReport:
    """Simulates m on ω-word w, taking transition function choices(i) at step i.

    Visit counts are taken over the configurations a transition was executed from.
    """
    config = MachineConfig(m.initial, HalfTape(ZEROS), HalfTape(w))
    trace: List[Tuple[str, int]] = [(config.state, 0)]
    visits: Dict[int, int] = {}
    halted_with = None
    stuck_at = None
    steps = 0
    while steps < max_steps:
        b = config.read()
        transition = m.delta(choices.index(steps)).get((config.state, b))
        if transition is None:
            halted_with = b
            break
        if transition[2] is Move.L and config.position == 0:
            stuck_at = steps
            break
        visits[config.position] = visits.get(config.position, 0) + 1
        config.step(transition)
        steps += 1
        trace.append((config.state, config.position))

    min_after: Dict[int, int] = {}
    running_min = None
    for i in range(len(trace) - 1, -1, -1):
        p = trace[i][1]
        running_min = p if running_min is None else min(running_min, p)
        min_after[i] = running_min
    return RunReport(steps_taken=steps, halted_with=halted_with, visit_counts=visits,
                     min_position_after=min_after, trace=trace, stuck_at=stuck_at, threshold=threshold)
