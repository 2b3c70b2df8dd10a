import argparse
import logging
import sys
from typing import List, Optional, TextIO

from src.controllers.lambda_controller import LambdaController
from src.controllers.model_controller import DEMOS, ModelController
from src.controllers.reduction_controller import TEMPLATES, ReductionController
from src.controllers.stream_controller import StreamController
from src.controllers.turing_controller import TuringController
from src.models.errors import INPUT_ERRORS, UsageError
from src.models.grid_check_worker import ALGEBRA_KINDS
from src.models.lambda_term import FINDERS
from src.models.reductions import WF_VARIANTS
from src.utils.content import load_content, load_defaults
from src.views.report_view import ReportView

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s"
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2

# Modules whose VERBOSE flag follows --verbose.
_VERBOSE_MODULES = ("src.models.stream_algebra", "src.models.tm_compiler", "src.models.turing_machine",
                    "src.models.lambda_gadgets", "src.models.observational", "src.models.reductions",
                    "src.models.grid_check_manager")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a value >= 0, got {value}")
    return value


class MainController:
    """Builds the command line and dispatches each command to its controller."""

    def __init__(self, stdout: Optional[TextIO] = None):
        self.stdout = stdout if stdout is not None else sys.stdout
        self.defaults = load_defaults()
        self.content = load_content()
        self.stream_controller = StreamController()
        self.turing_controller = TuringController()
        self.model_controller = ModelController()
        self.lambda_controller = LambdaController()
        self.reduction_controller = ReductionController()
        self.parser = self.build_parser()

    def build_parser(self) -> argparse.ArgumentParser:
        d = self.defaults
        help_text = self.content["commands"]

        common = _Parser(add_help=False)
        common.add_argument("--budget", type=_positive, default=d["budget"], help="rewrite or β-step budget")
        common.add_argument("--seed", type=int, default=d["seed"], help="RNG seed for sampled grids")
        common.add_argument("--jobs", type=int, default=d["jobs"], help="worker processes for grid checks")
        common.add_argument("--json", action="store_true", help="print the report as JSON")
        common.add_argument("--verbose", action="store_true", help="log progress to stderr")

        parser = _Parser(prog="streamwork", description=self.content["description"])
        sub = parser.add_subparsers(dest="command", metavar="COMMAND")

        def command(name: str, handler):
            p = sub.add_parser(name, parents=[common], help=help_text[name], description=help_text[name])
            p.set_defaults(handler=handler)
            return p

        def prefix(p):
            p.add_argument("-n", "--prefix", type=_positive, default=d["prefix"], help="stream prefix length")

        def machine(p):
            p.add_argument("--machine", help="machine file or bundled machine name")
            p.add_argument("--relation", help="'empty', 'total' or 'n,m;n,m;…' (builds a relation decider)")

        p = command("eval", self.stream_controller.evaluate)
        p.add_argument("--spec", required=True)
        p.add_argument("--term", required=True)
        p.add_argument("--bind", action="append", metavar="NAME=WORD", help="external stream constant")
        prefix(p)

        p = command("compare", self.stream_controller.compare)
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("--spec", default=d["compare_spec"])
        p.add_argument("--spec2", help="specification of the right-hand term")
        p.add_argument("--bind", action="append", metavar="NAME=WORD")
        prefix(p)

        p = command("tm-compile", self.turing_controller.compile)
        machine(p)
        p.add_argument("--inputs", type=_positive, default=1)
        p.add_argument("--oracles", type=_positive, default=0)

        p = command("tm-run", self.turing_controller.run)
        machine(p)
        p.add_argument("--input", type=_positive, nargs="*", default=[])
        p.add_argument("--oracle", nargs="*", default=[], metavar="WORD")
        p.add_argument("--steps", type=_positive, default=d["max_steps"])

        p = command("ntm-run", self.turing_controller.run_nondeterministic)
        machine(p)
        p.add_argument("--word", required=True)
        p.add_argument("--choices", default="(0)")
        p.add_argument("--steps", type=_positive, default=d["max_steps"])
        p.add_argument("--threshold", type=_positive, default=d["visit_threshold"])

        p = command("model-check", self.model_controller.check)
        p.add_argument("--spec", required=True)
        p.add_argument("--model", choices=ALGEBRA_KINDS, default="canonical")
        p.add_argument("--max-prefix", type=_positive, default=d["grid"]["max_prefix"])
        p.add_argument("--max-period", type=_positive, default=d["grid"]["max_period"])
        p.add_argument("--max-word", type=_positive, default=d["grid"]["max_word"])
        p.add_argument("--samples", type=_positive, default=d["grid"]["samples"])
        p.add_argument("--limit", type=_positive, default=None, help="sample at most this many assignments")
        p.add_argument("--quotient", action="store_true", help="also try to quotient by ≡")

        p = command("hidden-demo", self.model_controller.hidden_demo)
        p.add_argument("--demo", choices=sorted(DEMOS), default="zip")
        p.add_argument("--max-word", type=_positive, default=d["grid"]["max_word"])
        p.add_argument("--limit", type=_positive, default=None)

        for name, handler in (("bohm", self.lambda_controller.bohm), ("lt", self.lambda_controller.levy_longo)):
            p = command(name, handler)
            p.add_argument("--term", required=True, help="inline term or .lam file")
            p.add_argument("--depth", type=_positive, default=d["depth"])
            p.add_argument("--loops", action="store_true", help="report ⊥ when reduction revisits a term")

        p = command("obs-refute", self.lambda_controller.refute)
        p.add_argument("--m", required=True)
        p.add_argument("--n", required=True)
        p.add_argument("--kind", choices=sorted(FINDERS), default="whnf")
        p.add_argument("--context-bound", type=_positive, default=d["context_bound"])

        for name, handler in (("reduce", self.reduction_controller.reduce),
                              ("probe", self.reduction_controller.probe)):
            p = command(name, handler)
            p.add_argument("--template", choices=TEMPLATES, default="wf")
            machine(p)
            p.add_argument("--variant", choices=WF_VARIANTS, default=WF_VARIANTS[0])
            p.add_argument("--quantifiers", type=_positive, default=2)
            p.add_argument("--a", type=_positive, default=0)
            if name == "reduce":
                p.add_argument("--golden", help="compare with a transcription (whitespace-insensitive)")
                p.add_argument("--with-library", action="store_true")
            else:
                prefix(p)
                p.add_argument("--x", default="(0)", help="ω-word bound to X")
                p.add_argument("--tau", nargs="*", default=[], metavar="WORD")
                p.add_argument("--choices", default="(0)")
                p.add_argument("--progress", default="(1)")
                p.add_argument("--cross-check", action="store_true", help="rerun accepted pairs directly")
        return parser

    def _configure_logging(self, verbose: bool):
        logging.getLogger().setLevel(logging.INFO if verbose else logging.WARNING)
        for name in _VERBOSE_MODULES:
            module = sys.modules.get(name)
            if module is not None:
                module.VERBOSE = verbose

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except UsageError as e:
            print(f"usage error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except SystemExit as e:
            # --help
            return int(e.code or 0)
        if not getattr(args, "command", None):
            self.parser.print_usage(sys.stderr)
            return EXIT_USAGE
        self._configure_logging(args.verbose)
        try:
            report = args.handler(args)
        except INPUT_ERRORS as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
        except (ValueError, FileNotFoundError) as e:
            print(f"usage error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except Exception as e:
            logger.error(f"{args.command} failed: {e}", exc_info=True)
            return EXIT_USAGE
        ReportView(self.stdout, as_json=args.json).render(report)
        return EXIT_OK
