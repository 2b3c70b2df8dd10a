import logging
from typing import Dict

from src.controllers.common import parse_word
from src.models.ep_word import EpWord
from src.models.errors import UsageError
from src.models.report import Report
from src.models.rewrite_engine import Diff, Equal, RewriteEngine, Unknown, format_prefix, prefix_equal
from src.models.spec_parser import load_spec, parse_term
from src.models.term import Sort, sort_of

logger = logging.getLogger(__name__)


def _bindings(items) -> Dict[str, EpWord]:
    bound: Dict[str, EpWord] = {}
    for item in items or ():
        name, sep, word = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--bind: expected NAME=WORD, got '{item}'")
        bound[name.strip()] = parse_word(word.strip(), "--bind")
    return bound


class StreamController:
    """eval and compare: lazy evaluation of ground terms of a specification."""

    def evaluate(self, args) -> Report:
        spec = load_spec(args.spec)
        term = parse_term(args.term, spec)
        engine = RewriteEngine(spec, externals=_bindings(args.bind))
        report = Report(title=f"eval {args.term} in {spec.name}", verdict="")
        if sort_of(term) == Sort.B:
            result = engine.eval_bit(term, args.budget)
            report.verdict = str(result)
            report.add("steps", result.steps)
        else:
            prefix = engine.stream_prefix(term, args.prefix, args.budget)
            report.verdict = format_prefix(prefix)
            report.add("elements", len(prefix)).add("steps", sum(r.steps for r in prefix))
            unknown = [r for r in prefix if isinstance(r, Unknown)]
            if unknown:
                report.add("unresolved", f"{len(unknown)} ({unknown[0].reason})")
        logger.debug(f"eval {args.term}: {report.verdict}")
        return report

    def compare(self, args) -> Report:
        spec = load_spec(args.spec)
        other = load_spec(args.spec2) if args.spec2 else spec
        t1 = parse_term(args.left, spec)
        t2 = parse_term(args.right, other)
        for t, text in ((t1, args.left), (t2, args.right)):
            if sort_of(t) != Sort.S:
                raise UsageError(f"compare needs stream terms, '{text}' has sort {sort_of(t).name}")
        verdict = prefix_equal(spec, t1, other, t2, args.prefix, args.budget, externals=_bindings(args.bind))
        report = Report(title=f"compare {args.left} with {args.right}", verdict=str(verdict))
        report.add("prefix length", args.prefix)
        if isinstance(verdict, Diff):
            report.add("first difference", f"index {verdict.index}: {verdict.bit1} vs {verdict.bit2}")
        elif not isinstance(verdict, Equal):
            report.add("unresolved at", verdict.index)
        return report
