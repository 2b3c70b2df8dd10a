import re
from typing import List, Optional, Sequence, Tuple, Union

from src.models.ep_word import EpWord
from src.models.errors import UsageError
from src.models.machine_library import constant_decider, finite_relation_decider
from src.models.turing_machine import NTM, TuringMachine, load_machine

_PAIR = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*$")


def parse_word(text: str, flag: str) -> EpWord:
    try:
        return EpWord.parse(text)
    except ValueError as e:
        raise UsageError(f"{flag}: {e}")


def parse_words(texts: Optional[Sequence[str]], flag: str) -> List[EpWord]:
    return [parse_word(t, flag) for t in texts or ()]


def parse_relation(text: str) -> TuringMachine:
    """'empty', 'total', or pairs 'n,m;n,m;…' of a finite relation."""
    if text == "empty":
        return constant_decider(0, name="empty_relation")
    if text == "total":
        return constant_decider(1, name="total_relation")
    pairs: List[Tuple[int, int]] = []
    for item in text.split(";"):
        m = _PAIR.match(item)
        if m is None:
            raise UsageError(f"--relation: expected 'empty', 'total' or 'n,m;n,m;…', got '{text}'")
        pairs.append((int(m.group(1)), int(m.group(2))))
    bound = max(max(n, k) for n, k in pairs) + 1
    return finite_relation_decider(pairs, bound)


def machine_from_args(args, deterministic: Optional[bool] = True) -> Union[TuringMachine, NTM]:
    """--relation builds a decider, --machine loads a file; deterministic=None accepts both kinds."""
    relation = getattr(args, "relation", None)
    if relation:
        m = parse_relation(relation)
    elif getattr(args, "machine", None):
        m = load_machine(args.machine)
    else:
        raise UsageError("a machine is required (--machine FILE or --relation)")
    if deterministic is True and not isinstance(m, TuringMachine):
        raise UsageError(f"{m.name} is nondeterministic; this command needs a deterministic machine")
    if deterministic is False and not isinstance(m, NTM):
        raise UsageError(f"{m.name} is deterministic; this command needs delta0/delta1 tables")
    return m
