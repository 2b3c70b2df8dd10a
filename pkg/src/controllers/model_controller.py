import logging
from typing import Any, Dict, List

import numpy as np

from src.models.ep_word import sample_epwords
from src.models.errors import CongruenceViolationError
from src.models.grid_check_manager import GridCheckManager
from src.models.grid_check_worker import AlgebraRecipe, build_algebra
from src.models.hidden_algebra import (confusion_grid, counterexample_grid, find_congruence_violation, ones_f_grid,
                                       quotient_by_equiv, remark_case)
from src.models.report import Report
from src.models.spec_parser import load_spec, parse_term
from src.models.specification import print_spec
from src.models.stream_algebra import AllHold, default_pools
from src.models.term import Sort

logger = logging.getLogger(__name__)

# Specification checked by each demo and the goal equation it cannot prove.
DEMOS = {
    "zip": ("zip_alt", "zip2(zeros, ones)", "blink"),
    "ones_f": ("ones_f", "f(ones)", "ones"),
    "confusion": ("nstream_unary", None, None),
}


def _pools(kind: str, args) -> Dict[Sort, List[Any]]:
    if kind == "counterexample":
        return counterexample_grid(args.max_word)
    if kind == "ones_f":
        return ones_f_grid()
    if kind == "confusion":
        return confusion_grid()
    pools = default_pools(args.max_prefix, args.max_period)
    if args.samples:
        pools[Sort.S] = pools[Sort.S] + sample_epwords(np.random.default_rng(args.seed), args.samples)
    return pools


def _rows(report) -> List[Dict[str, Any]]:
    return [{"equation": e.source_line(), "verdict": str(v)} for e, v in report.rows]


class ModelController:
    """model-check and hidden-demo."""

    def __init__(self, progress_callback=None):
        self.progress_callback = progress_callback

    def _check(self, recipe: AlgebraRecipe, spec, pools, behavioral: bool, args):
        manager = GridCheckManager(recipe)
        manager.setup(spec.equations, pools, behavioral=behavioral, jobs=args.jobs, seed=args.seed,
                      limit=args.limit, progress_callback=self.progress_callback)
        return manager.run()

    def check(self, args) -> Report:
        spec = load_spec(args.spec)
        recipe = AlgebraRecipe(args.model, print_spec(spec), spec.name, args.budget)
        alg = build_algebra(recipe)
        behavioral = alg.hidden
        satisfaction = self._check(recipe, spec, _pools(args.model, args), behavioral, args)
        relation = "behaviorally satisfies" if behavioral else "satisfies"
        verdict = f"{alg.name} {relation} {spec.name}" if satisfaction.holds else "Not satisfied on the grid"
        report = Report(title=f"model-check {spec.name} in {alg.name}", verdict=verdict)
        report.add("domain", alg.domain).add("hidden", alg.hidden)
        report.add_rows(_rows(satisfaction))
        if args.quotient:
            try:
                quotient_by_equiv(alg, _pools(args.model, args))
                report.add("quotient", "≡ is a congruence on the grid")
            except CongruenceViolationError as e:
                report.add("quotient", f"refused: {e.witness}")
        return report

    def hidden_demo(self, args) -> Report:
        """A hidden model satisfying a specification behaviorally while refuting its goal equation."""
        spec_name, goal_lhs, goal_rhs = DEMOS[args.demo]
        spec = load_spec(spec_name)
        kind = {"zip": "counterexample", "ones_f": "ones_f", "confusion": "confusion"}[args.demo]
        recipe = AlgebraRecipe(kind, print_spec(spec), spec.name, args.budget)
        alg = build_algebra(recipe)
        pools = _pools(kind, args)
        satisfaction = self._check(recipe, spec, pools, True, args)
        report = Report(title=f"hidden-demo {args.demo}: {alg.name} model of {spec.name}", verdict="")
        report.add("grid", f"{len(pools[Sort.S])} stream elements, bits 0 and 1")
        report.add("spec satisfied behaviorally", satisfaction.holds)
        report.add_rows(_rows(satisfaction))
        refuted = False
        if goal_lhs is not None:
            lhs = alg.evaluate(parse_term(goal_lhs, spec), {})
            rhs = alg.evaluate(parse_term(goal_rhs, spec), {})
            refuted = not alg.equivalent(lhs, rhs)
            report.add("goal", f"{goal_lhs} = {goal_rhs}")
            report.add("goal values", f"{lhs} observes as {alg.observation(lhs)}, "
                                      f"{rhs} observes as {alg.observation(rhs)}")
            report.add("goal refuted", refuted)
        witness = find_congruence_violation(alg, pools)
        report.add("congruence witness", witness if witness is not None else "none on the grid")
        if args.demo == "zip":
            cases = sorted({remark_case(s, t) for s in pools[Sort.S] for t in pools[Sort.S]})
            report.add("assignment cases covered", ", ".join(cases))
        if goal_lhs is None:
            report.verdict = "Congruent hidden model" if witness is None else "Congruence violated"
        elif satisfaction.holds and refuted:
            report.verdict = "Counterexample confirmed"
        else:
            report.verdict = "Counterexample not confirmed"
        if not all(isinstance(v, AllHold) for _, v in satisfaction.rows):
            logger.warning(f"{alg.name} fails {spec.name} on the grid")
        return report
