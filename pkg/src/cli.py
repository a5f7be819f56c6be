import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel

from src.constants import PARTITION_METHOD_NOTE, RANK_PROVENANCE
from src.fixture import CurveFixture, FixtureCatalog
from src.helpers import print_h_bar
from src.helpers.cubic.curve import ProjPoint
from src.helpers.cubic.errors import CubicError, CurveError
from src.toolkit_manager import ToolkitManager
from src.toolkits.base_toolkit import ToolkitError

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(message)s')
logger = logging.getLogger("cli")

BOUNDS_OPERATIONS = ("theorem1", "optimal-m", "params", "mertens", "lemma8", "lemma8-sweep", "theorem9",
                     "diagnostics", "compare")
GROUP_OPERATIONS = ("add", "neg", "mul", "relation")
# flags each bounds operation cannot run without; r and m may still come from the curve
BOUNDS_REQUIRED_FLAGS = {
    "theorem1": ("B",),
    "optimal-m": ("B",),
    "params": ("B", "m", "A"),
    "mertens": ("s",),
    "lemma8": ("pi",),
    "lemma8-sweep": ("limit",),
    "theorem9": ("r",),
    "diagnostics": ("B",),
    "compare": ("B",),
}


@dataclass
class Argument:
    flags: Tuple[str, ...]
    options: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Command:
    """Dataclass to represent a CLI command"""
    name: str
    description: str
    tips: List[str]
    handler: Callable
    aliases: List[str] = None
    arguments: List[Argument] = None
    needs_curve: bool = True

    def __post_init__(self):
        if self.aliases is None:
            self.aliases = []
        if self.arguments is None:
            self.arguments = []


def _coords(point: ProjPoint) -> List[str]:
    return [str(c) for c in point.coords]


class CubiPyCLI:
    def __init__(self, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.fixture: Optional[CurveFixture] = None
        self._initialize_commands()
        self.parser = self._build_parser()

    def _initialize_commands(self) -> None:
        """Initialize all CLI commands"""
        self.commands: Dict[str, Command] = {}
        B = Argument(("--B",), {"type": int, "required": True, "help": "Height bound"})
        m = Argument(("--m",), {"type": int, "required": True, "help": "Descent level m"})

        ################## CURVE ##################
        self._register_command(
            Command(
                name="check",
                description="Certifies a curve smooth (by a good prime) or singular (by a rational singular point).",
                tips=["Format: check --curve {fixture name or path}",
                      "Exit code 1 when the curve is singular or undetermined"],
                handler=self.check,
                aliases=["smooth"],
            )
        )
        self._register_command(
            Command(
                name="points",
                description="Enumerates the rational points of height at most B.",
                tips=["Format: points --curve fermat --B 100", "Use --format json for a JSON document"],
                handler=self.points,
                arguments=[B, Argument(("--format",), {"choices": ["csv", "json"], "default": "csv"})],
            )
        )
        self._register_command(
            Command(
                name="fp-count",
                description="Counts the points of the curve over F_p for a good prime p.",
                tips=["Format: fp-count --curve fermat --p 7"],
                handler=self.fp_count,
                arguments=[Argument(("--p",), {"type": int, "required": True, "help": "Good prime"})],
            )
        )
        self._register_command(
            Command(
                name="badprimes",
                description="Scans primes up to a bound for bad reduction.",
                tips=["Format: badprimes --curve f6 --bound 1000",
                      "The product is a certified factor of the true product, limited by the scan"],
                handler=self.badprimes,
                arguments=[Argument(("--bound",), {"type": int, "help": "Scan bound (default from config)"})],
            )
        )

        ################## GROUP ##################
        self._register_command(
            Command(
                name="group",
                description="Chord-tangent group law: add, neg, mul and the divisor relation test.",
                tips=["Format: group add --curve fermat --P 1:0:-1 --Q 0:1:-1",
                      "Format: group relation --curve fermat --m 2 --P 0:1:-1 --Q 1:0:-1 --R 1:-1:0",
                      "--origin overrides the fixture base point, --p works over F_p"],
                handler=self.group,
                arguments=[
                    Argument(("operation",), {"choices": GROUP_OPERATIONS}),
                    Argument(("--P",)), Argument(("--Q",)), Argument(("--R",)),
                    Argument(("--m",), {"type": int}),
                    Argument(("--origin",)),
                    Argument(("--p",), {"type": int}),
                ],
            )
        )

        ################## DESCENT ##################
        self._register_command(
            Command(
                name="classes",
                description="Partitions the points of height at most B into m-descent classes.",
                tips=["The partition is heuristic: it may be finer than the true one",
                      "Format: classes --curve fermat --m 2 --B 10"],
                handler=self.classes,
                arguments=[m, B, Argument(("--rank",), {"type": int}), Argument(("--search-radius",), {"type": int})],
            )
        )
        self._register_command(
            Command(
                name="xpoints",
                description="Builds pairs (P, Q) on X_R from seed points and prints them as CSV.",
                tips=["Format: xpoints --curve f6 --m 2 --generator 17:37:21",
                      "Without --generator the seeds are multiples of the points of height <= B"],
                handler=self.xpoints,
                arguments=[m, Argument(("--B",), {"type": int}), Argument(("--generator",)),
                           Argument(("--cap",), {"type": int}), Argument(("--R",))],
            )
        )

        ################## DETERMINANT METHOD ##################
        self._register_command(
            Command(
                name="detmethod",
                description="Runs the determinant method pipeline and prints the full report.",
                tips=["Format: detmethod --curve f6 --m 1 --B 1000",
                      "--chosen-params uses the bidegree a of the parameter choice (guarded by max_basis_size)"],
                handler=self.detmethod,
                arguments=[
                    m, B,
                    Argument(("--A",), {"type": float}),
                    Argument(("--u",), {"type": float}),
                    Argument(("--q",), {"type": int}),
                    Argument(("--prime-limit",), {"type": int}),
                    Argument(("--a",), {"type": int}),
                    Argument(("--chosen-params",), {"action": "store_true"}),
                    Argument(("--all-minors",), {"action": "store_true"}),
                    Argument(("--R",)),
                ],
            )
        )

        ################## BOUNDS ##################
        self._register_command(
            Command(
                name="bounds",
                description="Evaluates the closed-form bounds and their diagnostics.",
                tips=["Format: bounds theorem9 --r 16", "Format: bounds params --B 1000 --m 1 --A 6",
                      "diagnostics needs --curve"],
                handler=self.bounds,
                arguments=[
                    Argument(("operation",), {"choices": BOUNDS_OPERATIONS}),
                    Argument(("--B",), {"type": int}),
                    Argument(("--r",), {"type": int}),
                    Argument(("--m",), {"type": int}),
                    Argument(("--A",), {"type": float}),
                    Argument(("--u",), {"type": float}),
                    Argument(("--s",), {"type": int}),
                    Argument(("--pi",), {"type": int}),
                    Argument(("--limit",), {"type": int}),
                    Argument(("--N",), {"type": int}),
                    Argument(("--bound",), {"type": int}),
                ],
                needs_curve=False,
            )
        )
        self._register_command(
            Command(
                name="growth",
                description="Prints N(B) next to the Theorem 1 bound over a grid of B as CSV.",
                tips=["Format: growth --curve f6 --B-grid 10,100,1000"],
                handler=self.growth,
                arguments=[Argument(("--B-grid",), {"dest": "B_grid", "required": True}),
                           Argument(("--r",), {"type": int})],
            )
        )

        ################## FIXTURES ##################
        self._register_command(
            Command(
                name="fixtures",
                description="Lists the curve fixtures with their smoothness verdicts.",
                tips=["The directory defaults to $CUBIPY_FIXTURE_DIR or ./curves"],
                handler=self.fixtures,
                aliases=["ls-fixtures"],
                needs_curve=False,
            )
        )

    def _register_command(self, command: Command) -> None:
        """Register a command and its aliases"""
        self.commands[command.name] = command
        for alias in command.aliases:
            self.commands[alias] = command

    def _build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--curve", help="Fixture name or path to a curve JSON file")
        common.add_argument("--fixtures-dir", help="Fixture directory (default: $CUBIPY_FIXTURE_DIR or curves)")
        common.add_argument("--force", action="store_true", help="Proceed on an undetermined smoothness verdict")
        common.add_argument("--seed", type=int, help="Seed for randomized choices (default 0)")
        common.add_argument("--workers", type=int, help="Worker threads for scans")
        common.add_argument("--verbose", action="store_true", help="Debug logging")

        parser = argparse.ArgumentParser(prog="cubipy", description="CubiPy - point counts on smooth plane cubics")
        subparsers = parser.add_subparsers(dest="command", required=True)
        self.subparsers = {}
        for name, command in self.commands.items():
            if name != command.name:
                continue
            sub = subparsers.add_parser(name, parents=[common], aliases=command.aliases,
                                        help=command.description, description=command.description,
                                        epilog="\n".join(command.tips))
            self.subparsers[name] = sub
            for argument in command.arguments:
                sub.add_argument(*argument.flags, **argument.options)
        return parser

    def main(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else 2
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)

        command = self.commands[args.command]
        try:
            if command.needs_curve or args.curve:
                self._load_curve(args, command)
            return command.handler(args) or 0
        except (CubicError, ToolkitError) as e:
            logger.error(f"❌ {e}")
            self.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
            return 1

    def _load_curve(self, args: argparse.Namespace, command: Command) -> None:
        if not args.curve:
            raise CurveError(f"'{command.name}' needs --curve")
        self.fixture = CurveFixture(args.curve, Path(args.fixtures_dir) if args.fixtures_dir else None)
        overrides = {}
        if args.workers is not None:
            overrides["curve"] = {"workers": args.workers}
            overrides["detmethod"] = {"workers": args.workers}
        if args.seed is not None:
            overrides.setdefault("detmethod", {})["seed"] = args.seed
        if overrides:
            self.fixture.toolkit_manager.configure(overrides=overrides)
        logger.info(f"✅ Loaded curve {self.fixture.name}: {self.fixture.form}")
        if command.name == "check":
            return

        verdict = self.fixture.verdict()
        if verdict.kind == "SingularCertified":
            raise CurveError(f"{self.fixture.name} is singular at {list(verdict.singular_point)}")
        if verdict.kind == "Undetermined":
            if not args.force:
                raise CurveError(f"Smoothness of {self.fixture.name} is undetermined; rerun with --force")
            logger.warning(f"⚠️ Smoothness of {self.fixture.name} undetermined, continuing because of --force")

    def _perform(self, toolkit: str, action: str, **params) -> Any:
        return self.fixture.toolkit_manager.perform_action(toolkit, action, params)

    def _emit_json(self, payload: Any) -> None:
        if isinstance(payload, BaseModel):
            self.stdout.write(payload.model_dump_json(indent=2) + "\n")
        else:
            self.stdout.write(json.dumps(payload, indent=2) + "\n")

    def _emit_csv(self, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        writer = csv.writer(self.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    ###################
    # Command functions
    ###################
    def check(self, args: argparse.Namespace) -> int:
        verdict = self.fixture.verdict()
        self._emit_json(verdict)
        if verdict.kind == "SmoothCertified":
            logger.info(f"✅ Smooth: good reduction at {verdict.witness_prime}")
            return 0
        if verdict.kind == "SingularCertified":
            logger.error(f"❌ Singular at {list(verdict.singular_point)}")
        else:
            logger.warning(f"⚠️ Undetermined after primes {verdict.primes_tried}")
        return 1

    def points(self, args: argparse.Namespace) -> int:
        points = self._perform("curve", "enumerate-points", B=args.B)
        if args.format == "json":
            self._emit_json({"curve": self.fixture.name, "B": args.B, "N": len(points),
                             "points": [_coords(P) for P in points]})
        else:
            self._emit_csv(["x0", "x1", "x2"], [P.coords for P in points])
            self.stdout.write(f"# N={len(points)}\n")
        return 0

    def fp_count(self, args: argparse.Namespace) -> int:
        n_p = self._perform("curve", "count-points", p=args.p)
        self._emit_json({"curve": self.fixture.name, "p": args.p, "n_p": n_p, "trace": args.p + 1 - n_p})
        return 0

    def badprimes(self, args: argparse.Namespace) -> int:
        self._emit_json(self._perform("curve", "reduction-profile", bound=args.bound))
        return 0

    def group(self, args: argparse.Namespace) -> int:
        common = {"origin": args.origin, "p": args.p}
        if args.operation == "relation":
            verdict = self._perform("group", "relation", m=args.m, P=args.P, Q=args.Q, R=args.R, **common)
            self._emit_json({"operation": "relation", "m": args.m, "holds": verdict})
            return 0
        if args.operation == "add":
            result = self._perform("group", "add", P=args.P, Q=args.Q, **common)
        elif args.operation == "neg":
            result = self._perform("group", "negate", P=args.P, **common)
        else:
            result = self._perform("group", "multiply", m=args.m, P=args.P, **common)
        self._emit_json({"operation": args.operation, "result": _coords(result), "p": result.p})
        return 0

    def classes(self, args: argparse.Namespace) -> int:
        partition = self._perform("descent", "partition-classes", m=args.m, B=args.B, rank=args.rank,
                                  radius=args.search_radius)
        self._emit_json({
            "curve": self.fixture.name,
            "m": partition.m,
            "B": args.B,
            "method": PARTITION_METHOD_NOTE,
            "search_size": partition.search_size,
            "class_count": len(partition.classes),
            "classes": [[_coords(P) for P in points] for points in partition.classes],
            "rank": partition.rank,
            "rank_provenance": RANK_PROVENANCE if partition.rank is not None else None,
            "class_bound": partition.class_bound,
            "within_bound": partition.within_bound,
        })
        return 0

    def xpoints(self, args: argparse.Namespace) -> int:
        pairs = self._perform("descent", "build-x-points", m=args.m, B=args.B, generator=args.generator,
                              cap=args.cap, R=args.R)
        R = pairs[0].R if pairs else None
        header = {"curve": self.fixture.name, "m": args.m, "R": _coords(R) if R else args.R, "count": len(pairs)}
        self.stdout.write(f"# {json.dumps(header)}\n")
        self._emit_csv(["P.x0", "P.x1", "P.x2", "Q.x0", "Q.x1", "Q.x2"],
                       [pair.P.coords + pair.Q.coords for pair in pairs])
        return 0

    def detmethod(self, args: argparse.Namespace) -> int:
        report = self._perform(
            "detmethod", "run-experiment", m=args.m, B=args.B, R=args.R, A=args.A, u=args.u, q=args.q,
            prime_limit=args.prime_limit, a=args.a,
            use_chosen_parameters=args.chosen_params or None, all_minors=args.all_minors or None,
        )
        self._emit_json(report)
        return 1 if report.errors else 0

    def bounds(self, args: argparse.Namespace) -> int:
        operation = args.operation
        missing = [f"--{flag}" for flag in BOUNDS_REQUIRED_FLAGS[operation] if getattr(args, flag) is None]
        if missing:
            usage = self.subparsers["bounds"].format_usage()
            self.stderr.write(f"{usage}cubipy bounds: error: {operation} requires {', '.join(missing)}\n")
            return 2
        manager = self.fixture.toolkit_manager if self.fixture else ToolkitManager([])
        if operation == "theorem1":
            result = manager.perform_action("bounds", "theorem1", {"B": args.B, "r": args.r, "m": args.m})
        elif operation == "optimal-m":
            m = manager.perform_action("bounds", "optimal-m", {"B": args.B})
            result = {"B": args.B, "m": m}
        elif operation == "params":
            result = manager.perform_action("bounds", "parameter-choice",
                                            {"B": args.B, "m": args.m, "A": args.A, "u": args.u})
        elif operation == "mertens":
            result = manager.perform_action("bounds", "mertens", {"s": args.s})
        elif operation == "lemma8":
            result = manager.perform_action("bounds", "lemma8", {"pi": args.pi})
        elif operation == "lemma8-sweep":
            result = manager.perform_action("bounds", "lemma8-sweep", {"limit": args.limit})
        elif operation == "theorem9":
            result = manager.perform_action("bounds", "theorem9", {"r": args.r})
        elif operation == "diagnostics":
            if self.fixture is None:
                raise CurveError("'bounds diagnostics' needs --curve")
            result = manager.perform_action("bounds", "diagnostics", {"B": args.B, "N": args.N, "bound": args.bound})
        else:
            result = manager.perform_action("bounds", "comparison", {"B": args.B, "r": args.r, "m": args.m})
        self._emit_json(result)
        return 0

    def growth(self, args: argparse.Namespace) -> int:
        rows = self._perform("bounds", "growth", grid=args.B_grid, r=args.r)
        self._emit_csv(["B", "N", "m", "theorem1_bound", "log_power"],
                       [(row.B, row.N, row.m, row.theorem1_bound, row.log_power) for row in rows])
        return 0

    def fixtures(self, args: argparse.Namespace) -> int:
        catalog = FixtureCatalog(args.fixtures_dir)
        entries = catalog.load()
        print_h_bar()
        for fixture, verdict in entries:
            section = " (negative)" if fixture.is_negative else ""
            logger.info(f"- {fixture.name}{section}: {verdict.kind}")
        print_h_bar()
        self._emit_json([{**fixture.summary(), "verdict": verdict.model_dump(mode="json")}
                         for fixture, verdict in entries])
        return 0


def run() -> None:
    sys.exit(CubiPyCLI().main(sys.argv[1:]))
