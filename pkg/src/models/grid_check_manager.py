import uuid
import logging
import multiprocessing as mp
import threading
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from src.models.grid_check_worker import AlgebraRecipe, GridTask, grid_check_worker
from src.models.specification import Equation
from src.models.stream_algebra import (AllHold, CheckUnknown, Fails, SatisfactionReport, assignment_grid,
                                       equation_variables)
from src.models.term import Sort

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s"
)
logger = logging.getLogger(__name__)

VERBOSE = False


def wrapped_progress_callback(progress_queue, equation_index, chunk_index, checked):
    progress_queue.put({
        "equation": equation_index,
        "chunk": chunk_index,
        "checked": checked,
    })


def listen_for_progress(progress_queue, progress_callback):
    while True:
        progress_data = progress_queue.get()
        if progress_data is None:
            break
        progress_callback(progress_data)


def merge_verdicts(verdicts: Sequence[Any]):
    """Chunk verdicts of one equation, in chunk order, combined as a single serial scan would report them."""
    for v in verdicts:
        if isinstance(v, Fails):
            return v
    for v in verdicts:
        if isinstance(v, CheckUnknown):
            return v
    return AllHold(sum(v.count for v in verdicts))


class GridCheckManager:
    """Checks the equations of a specification in an algebra over an assignment grid.

    With jobs > 1 the grid is split into chunks handed to a process pool; the merged result is
    the one a serial run gives.
    """

    def __init__(self, recipe: AlgebraRecipe):
        self.id = str(uuid.uuid4())
        self.recipe = recipe
        self.equations: List[Equation] = []
        self.pools: Dict[Sort, Sequence[Any]] = {}
        self.behavioral = False
        self.jobs = 1
        self.chunk_size = 64
        self.seed = None
        self.limit = None

        self.user_progress_callback = None
        self.manager = None
        self.progress_queue = None
        self.listener_thread = None
        self.report: Optional[SatisfactionReport] = None

    def cleanup(self):
        """Cleanup resources and threads."""
        if VERBOSE:
            logger.info(f"Cleaning up GridCheckManager - ID: {self.id}")
        if self.listener_thread and self.listener_thread.is_alive():
            self.progress_queue.put(None)
            self.listener_thread.join(timeout=5)
        self.listener_thread = None
        if self.manager is not None:
            self.manager.shutdown()
            self.manager = None

    def setup(self, equations: Sequence[Equation], pools: Dict[Sort, Sequence[Any]], behavioral: bool = False,
              jobs: int = 1, seed: Optional[int] = None, limit: Optional[int] = None, chunk_size: int = 64,
              progress_callback: Optional[Callable[[dict], None]] = None):
        if jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {jobs}")
        if chunk_size < 1:
            raise ValueError(f"chunk size must be >= 1, got {chunk_size}")
        self.equations = list(equations)
        self.pools = pools
        self.behavioral = behavioral
        self.jobs = jobs
        self.seed = seed
        self.limit = limit
        self.chunk_size = chunk_size
        self.user_progress_callback = progress_callback
        if VERBOSE:
            logger.info(f"GridCheckManager setup complete - ID: {self.id}")

    def _tasks(self) -> List[GridTask]:
        rng = np.random.default_rng(self.seed)
        tasks = []
        for index, e in enumerate(self.equations):
            grid = assignment_grid(equation_variables(e), self.pools, rng, self.limit)
            chunks = [grid[i:i + self.chunk_size] for i in range(0, len(grid), self.chunk_size)] or [[]]
            for chunk_index, chunk in enumerate(chunks):
                tasks.append(GridTask(self.recipe, e, index, chunk_index, tuple(chunk), self.behavioral))
        return tasks

    def run(self) -> SatisfactionReport:
        tasks = self._tasks()
        if VERBOSE:
            logger.info(f"Starting grid check {self.id}: {len(self.equations)} equations, {len(tasks)} chunks")
        progress_cb = None
        if self.user_progress_callback is not None:
            self.manager = mp.Manager()
            self.progress_queue = self.manager.Queue()
            self.listener_thread = threading.Thread(
                target=listen_for_progress,
                args=(self.progress_queue, self.user_progress_callback),
                daemon=True
            )
            self.listener_thread.start()
            progress_cb = partial(wrapped_progress_callback, self.progress_queue)
        try:
            if self.jobs == 1:
                results = [grid_check_worker(task, progress_cb) for task in tasks]
            else:
                with mp.Pool(processes=self.jobs) as pool:
                    results = pool.map(partial(grid_check_worker, progress_callback=progress_cb), tasks)
        except Exception as e:
            logger.error(f"Grid check {self.id} failed: {e}", exc_info=True)
            raise
        finally:
            self.cleanup()
        per_equation: Dict[int, List[Any]] = {i: [] for i in range(len(self.equations))}
        for index, chunk_index, verdict in sorted(results, key=lambda r: (r[0], r[1])):
            per_equation[index].append(verdict)
        rows = [(e, merge_verdicts(per_equation[i])) for i, e in enumerate(self.equations)]
        self.report = SatisfactionReport(self.recipe.kind, self.behavioral, rows)
        if VERBOSE:
            logger.info(f"Grid check {self.id} completed: holds={self.report.holds}")
        return self.report
