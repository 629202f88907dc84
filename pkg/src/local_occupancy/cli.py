"""`locc` command line: every module as a reproducible subcommand with JSON output."""

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic.alias_generators import to_camel

from local_occupancy import __version__
from local_occupancy.bounds import BoundResult, chromatic_budget, occupancy_lower_bound
from local_occupancy.colouring import (
    ColouringCertificate,
    CoverDocument,
    FractionalColouring,
    FractionalOutcome,
    SplitAudit,
    SplitResult,
    colour,
    cover_from_json,
    cover_from_lists,
    fractional_greedy,
    iterated_split,
    parse_lists,
    random_cover,
)
from local_occupancy.errors import (
    AlgorithmFailure,
    FailureReport,
    GraphError,
    LocalOccupancyError,
)
from local_occupancy.graph import Graph, dump_graph, generate, load_graph
from local_occupancy.hardcore import independence_polynomial
from local_occupancy.observability import (
    configure_logging,
    enrich_context,
    get_tracer,
    set_run_context,
    setup_tracing,
)
from local_occupancy.occupancy import (
    OccupancyParams,
    OccupancyReport,
    ParamChoice,
    fractional_budgets,
    numeric_param_search,
    params_for_setting,
    params_from_local_mad,
    verify_local_occupancy,
)
from local_occupancy.settings import SETTINGS
from local_occupancy.sparsity import parse_setting
from local_occupancy.sweep_runner import SweepRunner

tracer = get_tracer(__name__)


class _CamelModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)


class RunConfig(_CamelModel):
    seed: int = Field(SETTINGS.DEFAULT_SEED, ge=0, lt=2**64)
    lam: float = Field(SETTINGS.DEFAULT_LAMBDA, gt=0)
    cap: Optional[int] = Field(None, ge=0)
    rounds: int = Field(SETTINGS.DEFAULT_ROUNDS, ge=0)
    jobs: int = Field(1, ge=1)
    format: Literal["json", "tsv"] = "json"
    out: Optional[Path] = None


class PolynomialReport(_CamelModel):
    coefficients: List[int]
    lam: str
    z: float
    z_prime: float
    occupancy_fraction: float
    z_exact: Optional[str] = None
    z_prime_exact: Optional[str] = None


class CommandOutput(_CamelModel):
    command: str
    version: str
    seed: int
    lam: Optional[float] = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    result: Any


SCHEMAS: Dict[str, type] = {
    "CommandOutput": CommandOutput,
    "PolynomialReport": PolynomialReport,
    "OccupancyReport": OccupancyReport,
    "OccupancyParams": OccupancyParams,
    "ParamChoice": ParamChoice,
    "BoundResult": BoundResult,
    "ColouringCertificate": ColouringCertificate,
    "CoverDocument": CoverDocument,
    "FailureReport": FailureReport,
    "FractionalColouring": FractionalColouring,
    "FractionalOutcome": FractionalOutcome,
    "SplitAudit": SplitAudit,
    "SplitResult": SplitResult,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _Run:
    """One invocation: resolved config plus hashes of every input file read."""

    def __init__(self, command: str, config: RunConfig, exact_lam: Fraction):
        self.command = command
        self.config = config
        self.exact_lam = exact_lam
        self.inputs: Dict[str, str] = {}

    def read(self, path: str) -> bytes:
        data = Path(path).read_bytes()
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return data

    def graph(self, path: str) -> Graph:
        g = load_graph(self.read(path))
        if g.n == 0:
            raise GraphError("empty graph")
        return g

    def envelope(self, result: Any, with_lambda: bool = True) -> CommandOutput:
        return CommandOutput(
            command=self.command, version=__version__, seed=self.config.seed,
            lam=self.config.lam if with_lambda else None, inputs=self.inputs, result=result,
        )


def _fugacity(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("lambda must be positive")
    return value


def _dump(model: Any) -> Any:
    if isinstance(model, BaseModel):
        return model.model_dump(mode="json", by_alias=True)
    return model


def _emit(run: _Run, output: CommandOutput) -> None:
    payload = _dump(output)
    if run.config.format == "tsv":
        lines = [f"{key}\t{json.dumps(value) if not isinstance(value, str) else value}"
                 for key, value in payload.items() if key != "result"]
        result = payload["result"]
        items = result.items() if isinstance(result, dict) else [("result", result)]
        lines.extend(f"{key}\t{json.dumps(value)}" for key, value in items)
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, indent=2) + "\n"
    _write(run.config.out, text)


def _write(out: Optional[Path], text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# -- commands -----------------------------------------------------------------


def cmd_ipoly(run: _Run, args: argparse.Namespace) -> int:
    g = run.graph(args.graph)
    poly = independence_polynomial(g, run.config.cap)
    lam = run.exact_lam
    z, z_prime = poly.evaluate(lam), poly.evaluate_prime(lam)
    report = PolynomialReport(
        coefficients=list(poly.coeffs), lam=str(lam), z=float(z), z_prime=float(z_prime),
        occupancy_fraction=float(lam * z_prime / (z * g.n)),
        z_exact=str(z), z_prime_exact=str(z_prime),
    )
    _emit(run, run.envelope(report))
    return 0


def _params(run: _Run, args: argparse.Namespace, g: Graph) -> OccupancyParams:
    lam = run.config.lam
    strong = getattr(args, "strong", False)
    if args.beta is not None or args.gamma is not None:
        if args.beta is None or args.gamma is None:
            raise LocalOccupancyError("--beta and --gamma go together")
        return OccupancyParams.uniform(g.n, lam, args.beta, args.gamma, strong)
    if args.setting == "mad":
        return params_from_local_mad(g, lam, local=args.local).model_copy(
            update={"strong": strong})
    return params_for_setting(g, parse_setting(args.setting), lam, local=args.local,
                              strong=strong, xi=args.xi)


def cmd_occupancy(run: _Run, args: argparse.Namespace) -> int:
    g = run.graph(args.graph)
    params = _params(run, args, g)
    cap = run.config.cap
    report = verify_local_occupancy(
        g, params,
        induced_cap=None if args.strong else cap,
        edge_cap=cap if args.strong else None,
        jobs=run.config.jobs,
    )
    _emit(run, run.envelope({"params": _dump(params), "report": _dump(report)}))
    return 0


def cmd_search(run: _Run, args: argparse.Namespace) -> int:
    g = run.graph(args.graph)
    params = numeric_param_search(g, run.config.lam, args.degree, strong=args.strong)
    budgets = [params.budget(u, args.degree if args.degree is not None else max(g.degree(u), 1))
               for u in range(g.n)]
    _emit(run, run.envelope({"params": _dump(params), "maxBudget": max(budgets)}))
    return 0


def cmd_bounds(run: _Run, args: argparse.Namespace) -> int:
    setting = parse_setting(args.setting)
    result: Dict[str, Any] = {
        "occupancy": _dump(occupancy_lower_bound(setting, args.delta, run.config.lam)),
    }
    if args.delta0 is not None:
        budget = chromatic_budget(setting, args.deg if args.deg is not None else args.delta,
                                  delta0=args.delta0, delta=args.delta, eps=args.eps,
                                  mode=args.mode)
        result["budget"] = _dump(budget)
    _emit(run, run.envelope(result))
    return 0


def cmd_colour(run: _Run, args: argparse.Namespace) -> int:
    g = run.graph(args.graph)
    if args.lists:
        cover = cover_from_lists(g, parse_lists(run.read(args.lists), g.n))
    elif args.cover:
        cover = cover_from_json(run.read(args.cover), g)
    else:
        cover = random_cover(g, args.random_cover, run.config.seed, args.density)
    with tracer.start_as_current_span("cli.colour"):
        certificate = colour(cover, run.config.lam, args.ell, max_rounds=run.config.rounds,
                             seed=run.config.seed, factor=args.factor, sampler=args.sampler)
    _emit(run, run.envelope(certificate))
    return 0 if certificate.verified else AlgorithmFailure.exit_code


def cmd_fractional(run: _Run, args: argparse.Namespace) -> int:
    g = run.graph(args.graph)
    params = _params(run, args, g)
    outcome = fractional_greedy(g, run.config.lam, fractional_budgets(g, params),
                                step=args.step, seed=run.config.seed)
    _emit(run, run.envelope(outcome))
    return 0 if outcome.colouring is not None else AlgorithmFailure.exit_code


def cmd_gen(run: _Run, args: argparse.Namespace) -> int:
    g = generate(args.spec, run.config.seed)
    _write(run.config.out, dump_graph(g))
    return 0


def cmd_split(run: _Run, args: argparse.Namespace) -> int:
    g = run.graph(args.graph)
    result = iterated_split(g, args.f, args.delta, args.zeta, seed=run.config.seed,
                            max_tries=args.tries)
    _emit(run, run.envelope(result, with_lambda=False))
    return 0


def cmd_sweep(run: _Run, args: argparse.Namespace) -> int:
    runner = SweepRunner(Path(args.config_dir) if args.config_dir else None)
    if args.list:
        _emit(run, run.envelope({"sweeps": runner.list_sweeps()}, with_lambda=False))
        return 0
    if not args.name:
        raise LocalOccupancyError("sweep name required (or --list)")
    try:
        summary = runner.run_sweep(args.name, jobs=run.config.jobs)
    except FileNotFoundError as e:
        raise LocalOccupancyError(str(e)) from e
    _emit(run, run.envelope(summary, with_lambda=False))
    return 0


def cmd_schema(run: _Run, args: argparse.Namespace) -> int:
    names = [args.model] if args.model else sorted(SCHEMAS)
    unknown = [n for n in names if n not in SCHEMAS]
    if unknown:
        raise LocalOccupancyError(f"unknown model {unknown[0]!r}; known: {sorted(SCHEMAS)}")
    schemas = {n: SCHEMAS[n].model_json_schema(by_alias=True) for n in names}  # type: ignore[attr-defined]
    _write(run.config.out, json.dumps(schemas, indent=2) + "\n")
    return 0


COMMANDS: Dict[str, Callable[[_Run, argparse.Namespace], int]] = {
    "ipoly": cmd_ipoly,
    "occupancy": cmd_occupancy,
    "search": cmd_search,
    "bounds": cmd_bounds,
    "colour": cmd_colour,
    "fractional": cmd_fractional,
    "gen": cmd_gen,
    "split": cmd_split,
    "sweep": cmd_sweep,
    "schema": cmd_schema,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=SETTINGS.DEFAULT_SEED)
    common.add_argument("--lambda", dest="lam", type=_fugacity,
                        default=Fraction(str(SETTINGS.DEFAULT_LAMBDA)))
    common.add_argument("--cap", type=int, default=None, help="override the enumeration cap")
    common.add_argument("--rounds", type=int, default=SETTINGS.DEFAULT_ROUNDS)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=["json", "tsv"], default="json")
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--log-level", default=None)

    parser = _Parser(prog="locc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"locc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ipoly", parents=[common], help="independence polynomial and Z(lambda)")
    p.add_argument("graph")

    def certificate_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("graph")
        p.add_argument("--setting", default="triangle-free",
                       help="sparsity setting, e.g. ck-free:5, hall:1.5, or 'mad'")
        p.add_argument("--beta", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--local", action="store_true", help="use deg(u) instead of Delta")
        p.add_argument("--xi", type=float, default=0.5)

    p = sub.add_parser("occupancy", parents=[common], help="verify a local occupancy certificate")
    certificate_args(p)
    p.add_argument("--strong", action="store_true")

    p = sub.add_parser("search", parents=[common], help="numeric certificate search")
    p.add_argument("graph")
    p.add_argument("--degree", type=float, default=None)
    p.add_argument("--strong", action="store_true")

    p = sub.add_parser("bounds", parents=[common], help="evaluate occupancy and colouring bounds")
    p.add_argument("setting")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--deg", type=float, default=None)
    p.add_argument("--delta0", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--mode", choices=["fractional", "list"], default="fractional")

    p = sub.add_parser("colour", parents=[common], help="two-phase cover colouring")
    p.add_argument("graph")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--lists")
    source.add_argument("--cover")
    source.add_argument("--random-cover", type=int)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--factor", type=float, default=None)
    p.add_argument("--sampler", choices=["auto", "exact", "glauber"], default="auto")

    p = sub.add_parser("fractional", parents=[common], help="greedy fractional colouring")
    certificate_args(p)
    p.add_argument("--step", type=float, default=None)

    p = sub.add_parser("gen", parents=[common], help="generate a graph")
    p.add_argument("spec")

    p = sub.add_parser("split", parents=[common], help="iterated random splitting")
    p.add_argument("graph")
    p.add_argument("--f", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.005)
    p.add_argument("--zeta", type=float, default=0.04)
    p.add_argument("--tries", type=int, default=None)

    p = sub.add_parser("sweep", parents=[common], help="run a YAML sweep")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--config-dir", default=None)

    p = sub.add_parser("schema", parents=[common], help="print JSON schemas of the outputs")
    p.add_argument("model", nargs="?")
    return parser


def _fail(exc: Exception, code: int) -> int:
    error: Dict[str, Any] = {"error": type(exc).__name__, "message": str(exc), "exitCode": code}
    if isinstance(exc, AlgorithmFailure):
        error["report"] = exc.report.model_dump(mode="json", by_alias=True)
    sys.stderr.write(json.dumps(error) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    setup_tracing()
    try:
        config = RunConfig(seed=args.seed, lam=float(args.lam), cap=args.cap, rounds=args.rounds,
                           jobs=args.jobs, format=args.format, out=args.out)
    except ValidationError as e:
        return _fail(e, 1)
    set_run_context(command=args.command, seed=config.seed)
    run = _Run(args.command, config, args.lam)
    log = enrich_context(event="command", command=args.command)
    try:
        with tracer.start_as_current_span(f"cli.{args.command}"):
            code = COMMANDS[args.command](run, args)
    except LocalOccupancyError as e:
        log.bind(error=str(e)).warning("Command failed")
        return _fail(e, e.exit_code)
    except (OSError, ValidationError, ValueError) as e:
        log.bind(error=str(e)).warning("Command failed")
        return _fail(e, 1)
    log.bind(exit_code=code).info("Command finished")
    return code


if __name__ == "__main__":
    sys.exit(main())
