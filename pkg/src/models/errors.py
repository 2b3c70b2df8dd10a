from dataclasses import dataclass
from typing import Any, Optional, Sequence


class SpecSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SortError(ValueError):
    def __init__(self, message: str, subterm: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message} in '{subterm}'")
        self.subterm = subterm
        self.line = line


class DuplicateSymbolError(ValueError):
    pass


class UndeclaredSymbolError(ValueError):
    pass


class NonGroundTermError(ValueError):
    pass


class OrthogonalityError(ValueError):
    def __init__(self, first: Any, second: Any):
        super().__init__(f"overlapping evaluable rules: '{first}' and '{second}'")
        self.first = first
        self.second = second


class UnsupportedSymbolError(ValueError):
    def __init__(self, symbols: Sequence[str]):
        super().__init__(f"no interpretation for symbol(s): {', '.join(symbols)}")
        self.symbols = list(symbols)


class MachineFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


class LambdaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class CongruenceWitness:
    symbol: str
    position: int
    element: Any
    equivalent: Any
    arguments: tuple
    value: Any
    equivalent_value: Any

    def __str__(self):
        return (f"{self.symbol} at argument {self.position}: {self.element} ≡ {self.equivalent} "
                f"but results {self.value} ≢ {self.equivalent_value}")


class CongruenceViolationError(ValueError):
    def __init__(self, witness: CongruenceWitness):
        super().__init__(f"behavioral equivalence is not a congruence: {witness}")
        self.witness = witness


class UsageError(ValueError):
    """Bad command-line input such as an unknown flag or a malformed ω-word."""


# Errors in a specification, machine or λ source; the command line exits with status 2 on these.
INPUT_ERRORS = (SpecSyntaxError, SortError, DuplicateSymbolError, UndeclaredSymbolError, NonGroundTermError,
                OrthogonalityError, UnsupportedSymbolError, MachineFormatError, LambdaSyntaxError, TemplateError)
