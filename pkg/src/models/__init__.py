from .errors import INPUT_ERRORS, UsageError
from .ep_word import EpWord
from .specification import Equation, Specification
from .rewrite_engine import RewriteEngine
from .turing_machine import NTM, TuringMachine
from .stream_algebra import StreamAlgebra
from .grid_check_manager import GridCheckManager
from .report import Report
