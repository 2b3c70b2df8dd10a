import logging

from src.controllers.common import machine_from_args, parse_word, parse_words
from src.models.ep_word import ZEROS
from src.models.report import Report
from src.models.rewrite_engine import Unknown
from src.models.specification import print_spec
from src.models.tm_compiler import compile_tmes, compile_tmesn, run_via_rewriting
from src.models.turing_machine import Halt, NTM, run_direct, run_ntm

logger = logging.getLogger(__name__)


class TuringController:
    """tm-compile, tm-run and ntm-run."""

    def compile(self, args) -> Report:
        m = machine_from_args(args, deterministic=None)
        if isinstance(m, NTM):
            spec = compile_tmesn(m)
        else:
            spec = compile_tmes(m, args.inputs, args.oracles)
        report = Report(title=f"tm-compile {m.name}", verdict=f"{len(spec.equations)} equations")
        report.lines.append(print_spec(spec).rstrip("\n"))
        return report

    def run(self, args) -> Report:
        """Direct simulation next to evaluation of the encoding; both must halt alike within the budgets."""
        m = machine_from_args(args)
        inputs = list(args.input or [])
        oracles = parse_words(args.oracle, "--oracle")
        direct = run_direct(m, inputs, oracles, args.steps)
        rewritten = run_via_rewriting(m, inputs, oracles, args.budget)
        if isinstance(direct, Halt) and isinstance(rewritten, Halt):
            agree = direct == rewritten
            verdict = "Agree" if agree else "Disagree"
        elif not isinstance(direct, Halt) and isinstance(rewritten, Unknown):
            verdict = "Agree (no halt within budgets)"
        else:
            verdict = "Unknown"
        report = Report(title=f"tm-run {m.name} on {inputs}", verdict=verdict)
        report.add("direct", direct).add("rewriting", rewritten)
        report.add("oracles", ", ".join(map(str, oracles)) or str(ZEROS))
        return report

    def run_nondeterministic(self, args) -> Report:
        m = machine_from_args(args, deterministic=False)
        word = parse_word(args.word, "--word")
        choices = parse_word(args.choices, "--choices")
        run = run_ntm(m, word, choices, args.steps, args.threshold)
        if run.halted_with is not None:
            verdict = f"Halted({run.halted_with})"
        elif run.stuck_at is not None:
            verdict = f"Stuck({run.stuck_at})"
        else:
            verdict = f"Running({run.steps_taken})"
        report = Report(title=f"ntm-run {m.name} on {word} with choices {choices}", verdict=verdict)
        report.add("rightmost position", run.max_position)
        report.add("complete so far", run.complete_so_far())
        report.add("oscillating positions", run.oscillation_witnesses())
        report.add_rows([{"position": p, "visits": c, "min position afterwards": _min_after(run, p)}
                         for p, c in sorted(run.visit_counts.items())])
        return report


def _min_after(run, position: int) -> int:
    """Leftmost position reached after the last visit of `position`."""
    last = max(i for i, (_, p) in enumerate(run.trace) if p == position)
    return run.min_position_after[last]
