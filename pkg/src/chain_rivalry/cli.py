"""Command-line interface.

Exit codes are part of the contract: 0 success, 1 config/IO/usage error,
2 blockaded (corner) equilibrium, 3 verification tolerance breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import closed_form, sweep as sweep_mod, verify as verify_mod
from .closed_form import BracketError, CornerEquilibriumError
from .model import InvalidParamsError, ModelParams, Scenario, require_valid

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CORNER = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; remap to the config/usage code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="chain-rivalry",
                     description="Two-period price competition between a "
                                 "dominant and an entrant firm under three "
                                 "platform-choice scenarios.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def add_config(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", required=True,
                        help="path to a JSON parameter file")

    sp = sub.add_parser("equilibrium", help="prices, cutoffs, and profits "
                                            "for one scenario")
    add_config(sp)
    sp.add_argument("--scenario", required=True,
                    choices=[sc.value for sc in Scenario])

    sp = sub.add_parser("compare", help="entrant payoffs across the three "
                                        "platform choices")
    add_config(sp)

    sp = sub.add_parser("thresholds", help="subsidy and quality levels that "
                                           "flip the platform choice")
    add_config(sp)

    sp = sub.add_parser("sweep", help="vary one parameter and tabulate "
                                      "outcomes as CSV (optional SVG chart)")
    add_config(sp)
    sp.add_argument("--param", required=True, choices=sweep_mod.SWEEPABLE)
    sp.add_argument("--lo", required=True, type=float)
    sp.add_argument("--hi", required=True, type=float)
    sp.add_argument("--steps", required=True, type=int)
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.add_argument("--svg", help="optional SVG chart path")

    sp = sub.add_parser("verify", help="closed forms vs brute-force solver "
                                       "and user simulator")
    add_config(sp)
    sp.add_argument("--oracle", action="store_true",
                    help="check against the best-response solver only")
    sp.add_argument("--sim", action="store_true",
                    help="check against the user simulator only")
    sp.add_argument("--trials", type=int, default=20,
                    help="number of random parameter draws (default 20)")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--pop", type=int, default=10000,
                    help="simulated population size (default 10000)")
    return parser


def _load_config(path: str) -> ModelParams:
    params = ModelParams.from_json_file(path)
    require_valid(params)
    return params


def _cmd_equilibrium(params: ModelParams, scenario_name: str) -> int:
    scenario = Scenario.from_name(scenario_name)
    out = closed_form.equilibrium(params, scenario)
    print(f"scenario: {scenario.value}")
    print(f"period-1 prices    pA1 = {out.pA1:.6f}   pB1 = {out.pB1:.6f}")
    print(f"period-2 prices    pA2 = {out.pA2:.6f}   pB2 = {out.pB2:.6f}")
    print(f"cutoffs            period 1 = {out.cutoff1:.6f}   period 2 = {out.cutoff2:.6f}")
    print(f"adoption           nA = {out.nA1:.6f}   nB = {out.nB1:.6f}")
    print(f"profit firm A      period 1 = {out.profitA1:.6f}   "
          f"period 2 = {out.profitA2:.6f}   total = {out.profitA:.6f}")
    print(f"profit firm B      period 1 = {out.profitB1:.6f}   "
          f"period 2 = {out.profitB2:.6f}   total = {out.profitB:.6f}")
    print(f"firm B with subsidy = {out.profitB_with_subsidy:.6f}")
    return EXIT_OK


_PLATFORM_LABELS = {
    "P1": "P1 (same chain)",
    "P2": "P2 (compatible chain)",
    "P3": "P3 (incompatible chain)",
}


def _cmd_compare(params: ModelParams) -> int:
    decision = closed_form.adoption_decision(params)
    print("firm B payoff by platform:")
    for name in ("P1", "P2", "P3"):
        print(f"  {_PLATFORM_LABELS[name]:<24} {decision.payoffs[name]:.6f}")
    ordered = decision.rationale
    pieces = [ordered[0][0]]
    for (_, prev), (name, val) in zip(ordered, ordered[1:]):
        pieces.append(">" if prev > val else "=")
        pieces.append(name)
    print("ordering: " + " ".join(pieces))
    print(f"chosen: {decision.chosen}")
    return EXIT_OK


def _cmd_thresholds(params: ModelParams) -> int:
    rep = closed_form.subsidy_threshold(params)
    print(f"subsidy thresholds   c2_star = {rep.c2_star:.6f}   "
          f"c3_star = {rep.c3_star:.6f}")
    print(f"quality thresholds   d2_star = {rep.d2_star:.6f}   "
          f"d3_star = {rep.d3_star:.6f}")
    if rep.c3_star > rep.c2_star:
        print("c3_star > c2_star: ok")
        return EXIT_OK
    print("c3_star > c2_star: VIOLATED")
    return EXIT_VERIFY


def _cmd_sweep(params: ModelParams, args: argparse.Namespace) -> int:
    spec = sweep_mod.SweepSpec(param=args.param, lo=args.lo, hi=args.hi,
                               steps=args.steps)
    records = sweep_mod.run_sweep(params, spec)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        rows = sweep_mod.write_sweep_csv(records, fh)
    print(f"wrote {rows} rows ({spec.steps} grid points) to {args.out}")
    if args.svg:
        chart = sweep_mod.render_profit_svg(records, spec.param)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(chart)
        print(f"wrote chart to {args.svg}")
    return EXIT_OK


def _cmd_verify(params: ModelParams, args: argparse.Namespace) -> int:
    use_oracle = args.oracle or not (args.oracle or args.sim)
    use_sim = args.sim or not (args.oracle or args.sim)
    report = verify_mod.run_verification(params, trials=args.trials,
                                         seed=args.seed,
                                         use_oracle=use_oracle,
                                         use_sim=use_sim, m=args.pop)
    print(f"verification: config + {report.trials} draws (seed {report.seed})")
    routes = []
    if report.oracle_used:
        routes.append("oracle")
    if report.sim_used:
        routes.append(f"sim (m={report.m})")
    print("routes: " + ", ".join(routes))
    print(f"{'route':<8}{'scenario':<14}{'quantity':<11}"
          f"{'max_abs':<12}{'max_rel':<12}status")
    for check in report.checks:
        status = "ok" if check.ok else "FAIL"
        print(f"{check.kind:<8}{check.scenario.value:<14}{check.quantity:<11}"
              f"{check.max_abs:<12.3e}{check.max_rel:<12.3e}{status}")
    if report.ok:
        print("PASS: all checks within tolerance")
        return EXIT_OK
    print("breaches:")
    for line in report.failures:
        print(f"  {line}")
    print(f"FAIL: {sum(1 for c in report.checks if not c.ok)} "
          f"check(s) outside tolerance")
    return EXIT_VERIFY


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        params = _load_config(args.config)
        if args.command == "equilibrium":
            return _cmd_equilibrium(params, args.scenario)
        if args.command == "compare":
            return _cmd_compare(params)
        if args.command == "thresholds":
            return _cmd_thresholds(params)
        if args.command == "sweep":
            return _cmd_sweep(params, args)
        return _cmd_verify(params, args)
    except CornerEquilibriumError as exc:
        print(f"error: blockaded equilibrium: {exc}", file=sys.stderr)
        return EXIT_CORNER
    except BracketError as exc:
        print(f"error: threshold search failed: {exc}", file=sys.stderr)
        return EXIT_CORNER
    except InvalidParamsError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
