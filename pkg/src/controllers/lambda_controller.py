import logging

from src.models.lambda_gadgets import load_lambda
from src.models.lambda_tree import bohm_tree, levy_longo_tree, lt_spine_depth, print_tree
from src.models.observational import Distinguishing, obs_refute
from src.models.report import Report

logger = logging.getLogger(__name__)


class LambdaController:
    """bohm, lt and obs-refute over terms given inline or as gadget files."""

    def bohm(self, args) -> Report:
        t = load_lambda(args.term)
        tree = bohm_tree(t, args.depth, args.budget, detect_loops=args.loops)
        report = Report(title=f"Böhm tree of {args.term} to depth {args.depth}", verdict=print_tree(tree))
        report.add("budget per node", args.budget)
        return report

    def levy_longo(self, args) -> Report:
        t = load_lambda(args.term)
        tree = levy_longo_tree(t, args.depth, args.budget, detect_loops=args.loops)
        report = Report(title=f"Lévy–Longo tree of {args.term} to depth {args.depth}", verdict=print_tree(tree))
        report.add("λa.a spine length", lt_spine_depth(tree))
        report.add("budget per node", args.budget)
        return report

    def refute(self, args) -> Report:
        m = load_lambda(args.m)
        n = load_lambda(args.n)
        result = obs_refute(m, n, args.kind, args.context_bound, args.budget)
        report = Report(title=f"obs-refute ({args.kind}) M={args.m} N={args.n}", verdict=str(result))
        if isinstance(result, Distinguishing):
            report.add("context", result.context.label)
            report.add("converges", f"{result.converging} within {result.steps} steps")
            report.add("other side", f"no {args.kind} within {args.budget} steps")
        else:
            report.add("context bound", result.context_bound).add("budget", result.budget)
            report.add("note", "no context found; this does not prove equivalence")
        return report
