import logging

from src.controllers.common import machine_from_args, parse_word, parse_words
from src.models.ep_word import decode_naturals
from src.models.errors import UsageError
from src.models.reductions import (WitnessOfChain, chain_pairs_accepted, compile_union_demo, confusion_template,
                                   format_bits, full_template, golden_diff, probe_confusion, probe_full, probe_run,
                                   probe_solutions, wf_template, wf_variant_template)
from src.models.report import Report
from src.models.rewrite_engine import Got, stream_prefix
from src.models.tm_compiler import solutions_template

logger = logging.getLogger(__name__)

TEMPLATES = ("wf", "wf-variant", "full", "union", "confusion", "solutions")


class ReductionController:
    """reduce prints a generated specification; probe evaluates one at desk scale."""

    def _compiled(self, args):
        if args.template == "union":
            return compile_union_demo()
        if args.template == "solutions":
            return solutions_template(machine_from_args(args, deterministic=False))
        m = machine_from_args(args)
        if args.template == "wf":
            return wf_template(m)
        if args.template == "wf-variant":
            return wf_variant_template(m, args.variant)
        if args.template == "full":
            return full_template(m, args.quantifiers, args.a)
        return confusion_template(m)

    def reduce(self, args) -> Report:
        compiled = self._compiled(args)
        text = compiled.display_text()
        report = Report(title=f"reduce {args.template}", verdict="Compiled")
        if args.golden:
            with open(args.golden, "r", encoding="utf-8") as f:
                diff = golden_diff(text, f.read())
            report.verdict = "Matches golden" if not diff else "Differs from golden"
            report.lines.extend(diff)
        report.lines.append(text.rstrip("\n"))
        if args.with_library and args.template != "union":
            report.lines.append(compiled.library.text().rstrip("\n"))
        return report

    def probe(self, args) -> Report:
        if args.template == "union":
            return self._probe_union(args)
        if args.template == "solutions":
            m = machine_from_args(args, deterministic=False)
            result = probe_solutions(m, parse_word(args.x, "--x"), parse_word(args.choices, "--choices"),
                                     parse_word(args.progress, "--progress"), args.prefix, args.budget)
        elif args.template == "full":
            compiled = self._compiled(args)
            taus = parse_words(args.tau, "--tau")
            result = probe_full(compiled.spec, taus, None, args.prefix, args.budget)
        elif args.template == "confusion":
            result = probe_confusion(self._compiled(args).spec, parse_word(args.x, "--x"), args.prefix, args.budget)
        elif args.template in ("wf", "wf-variant"):
            result = probe_run(self._compiled(args).spec, parse_word(args.x, "--x"), args.prefix, args.budget)
        else:
            raise UsageError(f"no probe for template '{args.template}'")
        report = Report(title=f"probe {args.template}", verdict=str(result.verdict))
        report.add("prefix", format_bits(result.prefix))
        if args.template in ("wf", "wf-variant") and isinstance(result.verdict, WitnessOfChain) and args.cross_check:
            m = machine_from_args(args)
            x = parse_word(args.x, "--x")
            accepted = chain_pairs_accepted(m, x, result.verdict.length)
            report.add("encoded naturals", decode_naturals(x, result.verdict.length + 1))
            report.add("direct simulation accepts every pair", all(v is True for v in accepted))
        report.add("scope", f"first {args.prefix} elements only; not a decision")
        return report

    def _probe_union(self, args) -> Report:
        demo = compile_union_demo()
        inv = demo.inv_example
        n_prefix = stream_prefix(inv, inv.constant("N"), args.prefix, args.budget)
        m_prefix = stream_prefix(inv, inv.constant("M"), args.prefix, args.budget)
        nxor = demo.nxor_example
        blink_prefix = stream_prefix(nxor, nxor.constant("blink"), args.prefix, args.budget)
        solvable = all(isinstance(r, Got) for r in n_prefix)
        report = Report(title="probe union", verdict="N = inv(N) has no constructor" if not solvable else "N unfolds")
        report.add("M", format_bits(m_prefix)).add("N", format_bits(n_prefix)).add("blink", format_bits(blink_prefix))
        return report
