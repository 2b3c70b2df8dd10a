import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Tuple

from src.models.hidden_algebra import confusion_model, counterexample_model, ones_f_model
from src.models.spec_parser import parse_spec
from src.models.specification import Equation
from src.models.stream_algebra import StreamAlgebra, canonical_model, check_equation

logger = logging.getLogger(__name__)

ALGEBRA_KINDS = ("canonical", "counterexample", "ones_f", "confusion")


@dataclass(frozen=True)
class AlgebraRecipe:
    """Everything a worker process needs to rebuild an algebra; algebras hold closures and do not pickle."""
    kind: str
    spec_text: str = ""
    spec_name: str = "spec"
    budget: int = 10000

    def __post_init__(self):
        if self.kind not in ALGEBRA_KINDS:
            raise ValueError(f"algebra kind must be one of {ALGEBRA_KINDS}, got '{self.kind}'")


@dataclass(frozen=True)
class GridTask:
    recipe: AlgebraRecipe
    equation: Equation
    equation_index: int
    chunk_index: int
    assignments: Tuple[Dict[str, Any], ...] = field(hash=False)
    behavioral: bool = False


@lru_cache(maxsize=8)
def build_algebra(recipe: AlgebraRecipe) -> StreamAlgebra:
    if recipe.kind == "counterexample":
        return counterexample_model()
    if recipe.kind == "ones_f":
        return ones_f_model()
    spec = parse_spec(recipe.spec_text, recipe.spec_name)
    if recipe.kind == "confusion":
        return confusion_model(spec, recipe.budget)
    return canonical_model(spec, recipe.budget)


def grid_check_worker(task: GridTask, progress_callback=None):
    """Checks one chunk of assignments against one equation; runs in a pool process."""
    alg = build_algebra(task.recipe)
    verdict = check_equation(alg, task.equation, task.assignments, behavioral=task.behavioral)
    if progress_callback is not None:
        progress_callback(task.equation_index, task.chunk_index, len(task.assignments))
    return task.equation_index, task.chunk_index, verdict
