"""Command-line interface.

    irrigopt validate SCENARIO
    irrigopt solve-nb SCENARIO [--with-target-flow] [--out PLAN.csv]
    irrigopt solve-efd SCENARIO [--with-target-flow] [--out PLAN.csv]
    irrigopt front SCENARIO --grid-points N --out FRONT.csv
    irrigopt baseline SCENARIO [--pop P] [--gens G] [--seed S] --out FRONT.csv
    irrigopt report FRONT.csv [--scenario SCENARIO]

SCENARIO is a YAML file or a bundled name (representative, toy-linear,
toy-kinked; ``toy`` means toy-linear). Global options (accepted before or
after the subcommand): --tolerance, --threads, --verbose / --quiet, --dump-lp.

Exit codes:

    0  success
    2  usage error (unknown flag, bad value, conflicting flags)
    3  file error (missing input, unwritable output)
    4  parse or validation error (scenario or front file)
    5  solver fault (infeasible or unbounded model, stall, numerical trouble,
       GA without a feasible individual)
    6  report found problems in a front file

Failures print one line ``irrigopt: error=<class> exit=<code> detail=<text>``
to stderr, optionally followed by indented detail lines.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import formats
from .datasets import BUNDLED, bundled_path
from .ga import GaConfig, NoFeasibleSolutionError, run_ga
from .lp import NumericalError, SolverStallError, lp_to_text
from .models import ModelInfeasibleError, build_model1, build_model2, solve_model
from .pareto import EndpointError, FrontResult, run_front, solve_endpoints
from .scenario import Scenario, ScenarioValidationError

EXIT_OK, EXIT_USAGE, EXIT_FILE, EXIT_PARSE, EXIT_SOLVER, EXIT_REPORT = 0, 2, 3, 4, 5, 6
ALIASES = {"toy": "toy-linear"}


class CliError(Exception):
    def __init__(self, kind: str, code: int, detail: str, extra: list[str] | None = None):
        super().__init__(detail)
        self.kind, self.code, self.detail, self.extra = kind, code, detail, extra or []


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one machine-parsable line instead of argparse's usage dump
        raise CliError("usage", EXIT_USAGE, message)


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tolerance", type=float, default=d(1e-9), help="LP feasibility/optimality tolerance")
    p.add_argument("--threads", type=int, default=d(os.cpu_count() or 1),
                   help="parallel width of the weight sweep (1 = sequential)")
    loud = p.add_mutually_exclusive_group()
    loud.add_argument("--verbose", action="store_true", default=d(False))
    loud.add_argument("--quiet", action="store_true", default=d(False))
    p.add_argument("--dump-lp", type=Path, default=d(None), metavar="PATH",
                   help="write the LP of solve-nb/solve-efd as text")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    parser = _Parser(prog="irrigopt", description="Irrigation water allocation: net benefit vs environmental flow deficiency")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check a scenario file")
    p.add_argument("scenario")

    for name, what in (("solve-nb", "maximise net benefit"), ("solve-efd", "minimise flow deficiency")):
        p = sub.add_parser(name, parents=[common], help=what)
        p.add_argument("scenario")
        p.add_argument("--with-target-flow", action="store_true", help="require flows to meet monthly targets")
        p.add_argument("--out", type=Path, help="plan table to write")

    p = sub.add_parser("front", parents=[common], help="weighted-constraint Pareto front")
    p.add_argument("scenario")
    p.add_argument("--grid-points", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("baseline", parents=[common], help="NSGA-II baseline front")
    p.add_argument("scenario")
    p.add_argument("--pop", type=int, default=100)
    p.add_argument("--gens", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("report", parents=[common], help="verify a front file")
    p.add_argument("front", type=Path)
    p.add_argument("--scenario", help="also check endpoints against recomputed optima")
    return parser


def resolve_scenario(ref: str) -> tuple[Scenario, Path]:
    name = ALIASES.get(ref, ref)
    path = Path(ref)
    if not path.exists():
        if name not in BUNDLED:
            raise CliError("file", EXIT_FILE, f"no such scenario file or bundled name: {ref}")
        path = bundled_path(name)
    try:
        return formats.load_scenario(path), path
    except OSError as exc:
        raise CliError("file", EXIT_FILE, f"{path}: {exc.strerror or exc}") from exc
    except formats.ScenarioParseError as exc:
        raise CliError("parse", EXIT_PARSE, f"{path}: {exc}") from exc
    except ScenarioValidationError as exc:
        lines = [f"{v.path}: {v.message}" for v in exc.report.violations]
        raise CliError("validation", EXIT_PARSE,
                       f"{path}: {len(lines)} violation(s): " + "; ".join(lines), lines) from exc


def _manifest(scenario_path: Path, method: str, params: dict, started: str) -> formats.RunManifest:
    return formats.RunManifest(formats.file_digest(scenario_path), method, params,
                               timestamps={"started": started})


def _write(fn, *args, **kw) -> None:
    try:
        fn(*args, **kw)
    except OSError as exc:
        raise CliError("file", EXIT_FILE, f"cannot write output: {exc}") from exc


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text)


def cmd_validate(args) -> int:
    s, path = resolve_scenario(args.scenario)
    _say(args, f"ok {path}: {s.n_crops} crops x {s.n_months} months")
    return EXIT_OK


def cmd_solve(args) -> int:
    s, path = resolve_scenario(args.scenario)
    started = formats.now_iso()
    builder = build_model1 if args.command == "solve-nb" else build_model2
    built = builder(s, with_target_constraint=args.with_target_flow)
    if args.dump_lp is not None:
        _write(args.dump_lp.write_text, lp_to_text(built[0]))
    t0 = time.perf_counter()
    sol = solve_model(s, built, args.tolerance)
    elapsed = time.perf_counter() - t0
    _say(args, f"net_benefit={sol.objectives.net_benefit:.9g} efd={sol.objectives.efd:.9g} "
               f"iterations={sol.lp_solution.iterations} time={elapsed:.3f}s")
    if args.verbose:
        print(formats.plan_to_csv(sol.plan, s), end="")
    if args.out is not None:
        params = {"with_target_flow": args.with_target_flow, "tolerance": args.tolerance}
        method = "model1" if args.command == "solve-nb" else "model2"
        _write(formats.export_plan, sol.plan, s, args.out, _manifest(path, method, params, started))
        _say(args, f"plan written to {args.out}")
    return EXIT_OK


def _summary(args, fr: FrontResult) -> None:
    pairs = fr.pairs()
    st = fr.stats
    _say(args, f"points={len(fr)} subproblems={st.subproblems_solved} time={st.wall_time:.2f}s "
               f"net_benefit=[{pairs[:, 0].min():.9g}, {pairs[:, 0].max():.9g}] "
               f"efd=[{pairs[:, 1].min():.9g}, {pairs[:, 1].max():.9g}]")
    if args.verbose:
        print(f"discarded={st.discarded_count} merged={st.duplicates_merged} failures={st.solver_failures}")


def cmd_front(args) -> int:
    if args.grid_points < 1:
        raise CliError("usage", EXIT_USAGE, "--grid-points must be at least 1")
    if args.threads < 1:
        raise CliError("usage", EXIT_USAGE, "--threads must be at least 1")
    s, path = resolve_scenario(args.scenario)
    started = formats.now_iso()
    fr = run_front(s, args.grid_points, threads=args.threads, tol=args.tolerance)
    _summary(args, fr)
    params = {"grid_points": args.grid_points, "tolerance": args.tolerance}
    _write(formats.export_front, fr, args.out, _manifest(path, fr.method, params, started))
    return EXIT_OK


def cmd_baseline(args) -> int:
    try:
        cfg = GaConfig(population_size=args.pop, generations=args.gens, seed=args.seed)
    except ValueError as exc:
        raise CliError("usage", EXIT_USAGE, str(exc)) from exc
    s, path = resolve_scenario(args.scenario)
    started = formats.now_iso()
    fr = run_ga(s, cfg)
    _summary(args, fr)
    params = {"population_size": cfg.population_size, "generations": cfg.generations, "seed": cfg.seed,
              "crossover_rate": cfg.crossover_rate, "mutation_rate": cfg.mutation_rate,
              "mutation_scale": cfg.mutation_scale}
    _write(formats.export_front, fr, args.out, _manifest(path, fr.method, params, started))
    return EXIT_OK


def endpoint_problems(rows: list[formats.FrontRow], s: Scenario, tol: float = 1e-9) -> list[str]:
    """Compare a front file's extremes with freshly solved single-objective optima."""
    best_nb, best_efd, _ = solve_endpoints(s, tol)
    nb_star, efd_star = best_nb.net_benefit, best_efd.efd
    rel = 1e-6 * max(1.0, abs(nb_star))
    problems = []
    for r in rows:
        if r.net_benefit > nb_star + rel:
            problems.append(f"line {r.line}: net benefit {r.net_benefit:.9g} exceeds the optimum {nb_star:.9g}")
        if r.efd < efd_star - 1e-6:
            problems.append(f"line {r.line}: efd {r.efd:.9g} is below the optimum {efd_star:.9g}")
    exact = any(r.source != "ga" for r in rows)
    if exact and rows:
        top = max(rows, key=lambda r: r.net_benefit)
        low = min(rows, key=lambda r: r.efd)
        if abs(top.net_benefit - nb_star) > rel:
            problems.append(f"line {top.line}: best net benefit {top.net_benefit:.9g} "
                            f"does not reach the optimum {nb_star:.9g}")
        if abs(low.efd - efd_star) > 1e-6:
            problems.append(f"line {low.line}: least efd {low.efd:.9g} does not reach the optimum {efd_star:.9g}")
    return problems


def cmd_report(args) -> int:
    if not args.front.exists():
        raise CliError("file", EXIT_FILE, f"no such front file: {args.front}")
    try:
        rows = formats.read_front(args.front)
    except formats.FrontFormatError as exc:
        raise CliError("parse", EXIT_PARSE, f"{args.front}: {exc}") from exc
    problems = formats.verify_front_rows(rows)
    if args.scenario is not None:
        s, _ = resolve_scenario(args.scenario)
        problems += endpoint_problems(rows, s, args.tolerance)
    if problems:
        raise CliError("report", EXIT_REPORT, f"{args.front}: {len(problems)} problem(s): {problems[0]}", problems)
    if rows:
        nb = [r.net_benefit for r in rows]
        e = [r.efd for r in rows]
        _say(args, f"ok {args.front}: {len(rows)} points, net_benefit=[{min(nb):.9g}, {max(nb):.9g}] "
                   f"efd=[{min(e):.9g}, {max(e):.9g}]")
    else:
        _say(args, f"ok {args.front}: 0 points")
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "solve-nb": cmd_solve, "solve-efd": cmd_solve,
            "front": cmd_front, "baseline": cmd_baseline, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except CliError as exc:
        err = exc
    except (ModelInfeasibleError, EndpointError, SolverStallError, NumericalError,
            NoFeasibleSolutionError) as exc:
        err = CliError("solver", EXIT_SOLVER, f"{type(exc).__name__}: {exc}")
    detail = " ".join(err.detail.split())
    print(f"irrigopt: error={err.kind} exit={err.code} detail={detail}", file=sys.stderr)
    for line in err.extra:
        print(f"  {line}", file=sys.stderr)
    return err.code


if __name__ == "__main__":
    sys.exit(main())
