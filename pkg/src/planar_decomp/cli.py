"""Command-line interface: check, decompose, verify, color, audit, oracle, gen, batch."""

import argparse
import logging
import sys
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Callable, Sequence, TextIO

import networkx as nx

from . import __version__
from .batch import run_batch
from .certify import greedy_color, oracle_nice, validate_coloring, verify_decomposition, verify_nice
from .class_gate import CaseTag, classify_report
from .config import CASES, MODES, RunConfig, load_config
from .decomposer import Decomposer
from .discharge_audit import audit
from .errors import (
    ArgumentError,
    ClassError,
    CyclicOrientationError,
    GraphValidationError,
    ParseError,
    StepVerificationError,
    TheoremViolation,
)
from .formats import (
    EDGELIST,
    EMBEDDED,
    dumps,
    emit_cert,
    emit_dot,
    emit_graph,
    looks_embedded,
    parse_cert,
    parse_edge_list,
    parse_graph,
    parse_lists,
    read_text,
    write_atomic,
)
from .generator import generate
from .graph_core import PlaneGraph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_THEOREM = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
_HANDLER_TAG = "_planar_decomp"


def setup_logging(log_dir: str | None, level: str = "INFO") -> None:
    """
    Configure the root logger: console plus a midnight-rotated log file.

    Calling it again replaces the handlers installed by a previous call.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            root.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_dir:
        directory = Path(log_dir)
        directory.mkdir(parents=True, exist_ok=True)
        handlers.append(
            TimedRotatingFileHandler(directory / "planar_decomp.log", when="midnight", backupCount=7)
        )
    for handler in handlers:
        handler.setFormatter(formatter)
        handler.setLevel(level)
        setattr(handler, _HANDLER_TAG, True)
        root.addHandler(handler)
    root.setLevel(level)
    # Suppress verbose logs from external libraries
    logging.getLogger("networkx").setLevel(logging.WARNING)


class UsageError(Exception):
    """Command-line input that does not fit the command."""


def parse_edge(text: str) -> tuple[int, int]:
    """Parse an ``x,y`` edge argument."""
    try:
        x, y = (int(t) for t in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected x,y got {text!r}") from e
    return x, y


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planar-decomp",
        description="(2,1)-decompositions of plane graphs with certificates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="debug logging")
    parser.add_argument("--no-log-file", action="store_true", help="log to the console only")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="graph file")
        p.add_argument("--format", choices=(EMBEDDED, EDGELIST), help="input format (default: detect)")
        return p

    p = graph_command("check", "report the cases a graph satisfies")
    p.add_argument("--witness", action="store_true", help="show a violation for every failed case")
    p.add_argument("--case", choices=CASES)

    p = graph_command("decompose", "compute a certificate")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--edge", type=parse_edge, help="boundary edge x,y (nice mode)")
    p.add_argument("--case", choices=CASES)
    p.add_argument("--out", help="certificate file (default: stdout)")
    p.add_argument("--dot", help="also write Graphviz DOT text here")
    p.add_argument("--verify-steps", action="store_true", default=None)
    p.add_argument("--no-class-check", dest="check_class", action="store_false", default=None)

    p = graph_command("verify", "check a certificate")
    p.add_argument("cert", help="certificate file")
    p.add_argument("--mode", choices=MODES)

    p = graph_command("color", "1-defective 3-colouring from a certificate")
    p.add_argument("cert", help="certificate file")
    p.add_argument("--lists", help='colour lists file {"v": [c1, c2, c3]}')
    p.add_argument("--out")

    p = graph_command("audit", "discharging ledger")
    p.add_argument("--edge", type=parse_edge)
    p.add_argument("--case", choices=CASES)
    p.add_argument("--out", help="write the JSON ledger here")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")

    p = graph_command("oracle", "exhaustive nice decomposition for small graphs")
    p.add_argument("--edge", type=parse_edge)
    p.add_argument("--out")

    p = sub.add_parser("gen", help="random in-class plane graphs")
    p.add_argument("--seed", type=int)
    p.add_argument("-n", "--vertices", type=int, default=30)
    p.add_argument("--case", choices=CASES)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--budget", type=int, dest="generator_budget")
    p.add_argument("--chords", type=int, help="chord attempts after growth (default: one per vertex)")
    p.add_argument("--out", help="file (count 1) or directory")

    p = sub.add_parser("batch", help="decompose and verify many graphs")
    p.add_argument("inputs", nargs="*", help="graph files or directories")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--case", choices=CASES)
    p.add_argument("--out", help="directory for certificates and summary.json")
    p.add_argument("--workers", type=int)
    p.add_argument("--fail-fast", action="store_true", default=None)
    p.add_argument("--verify-steps", action="store_true", default=None)
    return parser


class DecompCommandLine:
    """Dispatches parsed arguments to the command handlers."""

    def __init__(self, config: RunConfig, stdout: TextIO | None = None):
        """
        Initialize the command line.

        Args:
            config: Merged configuration (file values plus flags)
            stdout: Stream for command output
        """
        self.config = config
        self.stdout = stdout or sys.stdout
        self.handlers: dict[str, Callable[[argparse.Namespace], int]] = {}
        self._setup_handlers()

    def _setup_handlers(self) -> None:
        self.handlers = {
            "check": self.check_command,
            "decompose": self.decompose_command,
            "verify": self.verify_command,
            "color": self.color_command,
            "audit": self.audit_command,
            "oracle": self.oracle_command,
            "gen": self.gen_command,
            "batch": self.batch_command,
        }

    def run(self, args: argparse.Namespace) -> int:
        handler = self.handlers[args.command]
        logger.info(f"Running {args.command}")
        try:
            code = handler(args)
        except ClassError as e:
            logger.error(str(e))
            self._print(dumps(e.report.to_dict(witness=True)))
            code = EXIT_FAILED
        except TheoremViolation as e:
            logger.error(str(e))
            if e.audit is not None:
                print(e.audit.describe(), file=sys.stderr)
            code = EXIT_THEOREM
        except StepVerificationError as e:
            logger.error(str(e))
            code = EXIT_FAILED
        except (UsageError, ParseError, GraphValidationError, ArgumentError, CyclicOrientationError) as e:
            logger.error(f"{args.command}: {e}")
            print(f"error: {e}", file=sys.stderr)
            code = EXIT_USAGE
        logger.info(f"{args.command} finished with exit code {code}")
        return code

    # -- helpers ---------------------------------------------------------------

    def _print(self, text: str) -> None:
        self.stdout.write(text if text.endswith("\n") else text + "\n")

    def _emit(self, text: str, path: str | None) -> None:
        if path:
            write_atomic(path, text)
            logger.info(f"Wrote {path}")
        else:
            self._print(text)

    def _read_any(self, args: argparse.Namespace) -> PlaneGraph | nx.Graph:
        text = read_text(args.graph)
        fmt = args.format or (EMBEDDED if looks_embedded(text) else EDGELIST)
        return parse_graph(text) if fmt == EMBEDDED else parse_edge_list(text)

    def _read_plane(self, args: argparse.Namespace) -> PlaneGraph:
        graph = self._read_any(args)
        if not isinstance(graph, PlaneGraph):
            raise UsageError(f"{args.command} needs an embedded graph, not an edge list")
        return graph

    def _case(self) -> CaseTag | None:
        return None if self.config.case == "auto" else CaseTag.parse(self.config.case)

    def _decomposer(self) -> Decomposer:
        return Decomposer.from_config(self.config)

    # -- commands ----------------------------------------------------------------

    def check_command(self, args: argparse.Namespace) -> int:
        graph = self._read_any(args)
        report = classify_report(graph)
        self._print(dumps(report.to_dict(witness=args.witness)))
        case = self._case()
        if case is not None:
            return EXIT_OK if case in report.cases else EXIT_FAILED
        return EXIT_OK if report.cases else EXIT_FAILED

    def decompose_command(self, args: argparse.Namespace) -> int:
        g = self._read_plane(args)
        decomposer = self._decomposer()
        if self.config.mode == "nice":
            cert = decomposer.decompose_nice(g, args.edge)
            verdict = verify_nice(g if args.edge is None else g.with_boundary_edge(args.edge), cert)
        else:
            cert = decomposer.decompose_21(g)
            verdict = verify_decomposition(g, cert)
        if not verdict.ok:
            logger.error(f"Certificate rejected: {verdict.describe()}")
            self._print(dumps(verdict.to_dict()))
            return EXIT_FAILED
        self._emit(emit_cert(cert), self.config.out)
        if args.dot:
            write_atomic(args.dot, emit_dot(g, cert))
        return EXIT_OK

    def verify_command(self, args: argparse.Namespace) -> int:
        g = self._read_plane(args)
        cert = parse_cert(read_text(args.cert), g)
        nice = args.mode == "nice" or (args.mode is None and cert.boundary_edge is not None)
        verdict = verify_nice(g, cert) if nice else verify_decomposition(g, cert)
        self._print(dumps(verdict.to_dict()))
        return EXIT_OK if verdict.ok else EXIT_FAILED

    def color_command(self, args: argparse.Namespace) -> int:
        g = self._read_plane(args)
        cert = parse_cert(read_text(args.cert), g)
        lists = parse_lists(read_text(args.lists)) if args.lists else None
        coloring = greedy_color(g, cert, lists)
        verdict = validate_coloring(g, cert, coloring, lists)
        if not verdict.ok:
            self._print(dumps(verdict.to_dict()))
            return EXIT_FAILED
        self._emit(dumps(coloring.to_dict()), self.config.out)
        return EXIT_OK

    def audit_command(self, args: argparse.Namespace) -> int:
        g = self._read_plane(args)
        case = self._case()
        if case is None:
            cases = classify_report(g, cross_check=False).cases
            case = min(cases) if cases else CaseTag.CASE1
        report = audit(g, args.edge, case)
        if self.config.out:
            write_atomic(self.config.out, dumps(report.to_dict()))
        self._print(dumps(report.to_dict()) if args.json else report.describe())
        return EXIT_OK if report.total == 0 else EXIT_FAILED

    def oracle_command(self, args: argparse.Namespace) -> int:
        g = self._read_plane(args)
        cert = oracle_nice(g, args.edge)
        if cert is None:
            self._print("null")
            return EXIT_FAILED
        self._emit(emit_cert(cert), self.config.out)
        return EXIT_OK

    def gen_command(self, args: argparse.Namespace) -> int:
        case = self._case() or CaseTag.CASE3
        for i in range(args.count):
            seed = self.config.seed + i
            result = generate(seed, args.vertices, case, self.config.generator_budget, args.chords)
            text = emit_graph(result.graph)
            logger.info(
                f"Generated seed {seed}: {len(result.graph.vertices)} vertices, "
                f"{result.graph.number_of_edges()} edges, {result.chords} chords, {case.value}"
            )
            if self.config.out and args.count > 1:
                write_atomic(Path(self.config.out) / f"graph-{seed}.json", text)
            else:
                self._emit(text, self.config.out)
        return EXIT_OK

    def batch_command(self, args: argparse.Namespace) -> int:
        summary = run_batch(self.config)
        self._print(dumps(summary.to_dict()))
        return summary.exit_code


def make_config(args: argparse.Namespace) -> RunConfig:
    """File configuration merged with the flags that were given."""
    config = load_config(args.config)
    return config.with_overrides(
        command=args.command,
        inputs=getattr(args, "inputs", None) or ([args.graph] if hasattr(args, "graph") else None),
        mode=getattr(args, "mode", None),
        case=getattr(args, "case", None),
        seed=getattr(args, "seed", None),
        out=getattr(args, "out", None),
        verbosity=args.verbose,
        workers=getattr(args, "workers", None),
        fail_fast=getattr(args, "fail_fast", None),
        verify_steps=getattr(args, "verify_steps", None),
        check_class=getattr(args, "check_class", None),
        generator_budget=getattr(args, "generator_budget", None),
    )


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Parse arguments and run one command with logging set up."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        config = make_config(args)
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    setup_logging(None if args.no_log_file else config.log_dir, config.effective_log_level)
    return DecompCommandLine(config, stdout).run(args)


def run() -> None:
    sys.exit(main())
