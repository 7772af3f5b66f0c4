"""Command-line entry point.

Subcommands either run a scenario file as-is (`run`) or synthesize a
single-task scenario from flags (`hardy check`, `gamow evolve`, `expand`,
`golden-rule`, `verify-all`).  Every invocation goes through the same
runner, so artifacts and reports are identical whether a task came from a
file or from the command line.  The special config name `reference`
resolves to the scenario bundled with the package.

Exit codes: 0 every task passed, 1 at least one task failed, 2 the config
was rejected before any task ran.
"""
from __future__ import annotations

import argparse
import sys

from . import runner
from .config import (
    ScenarioConfig,
    config_digest,
    load_raw,
    parse_config,
    reference_scenario_path,
)
from .errors import GamowLabError, ParseError


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tol",
        type=float,
        default=None,
        help="quadrature tolerance for report tasks (pass thresholds stay pinned)",
    )
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--out", default=None, help="output root directory")

    parser = argparse.ArgumentParser(
        prog="gamowlab",
        description="Resonance toolkit: Hardy-class tests, Gamow semigroups, "
        "pole expansions, and the exact decay law.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[common], help="run every task in a scenario file")
    p_run.add_argument("--config", required=True, help="scenario file, or 'reference'")

    p_hardy = sub.add_parser("hardy", help="Hardy-class analysis")
    hardy_sub = p_hardy.add_subparsers(dest="subcommand", required=True)
    p_check = hardy_sub.add_parser(
        "check", parents=[common], help="classify a declared wavefunction"
    )
    p_check.add_argument("--config", required=True, help="scenario file, or 'reference'")
    p_check.add_argument("--wavefunction", default="psi", help="name declared in the config")

    p_gamow = sub.add_parser("gamow", help="Gamow-state evolution")
    gamow_sub = p_gamow.add_subparsers(dest="subcommand", required=True)
    p_evolve = gamow_sub.add_parser(
        "evolve", parents=[common], help="semigroup factors over a time grid"
    )
    p_evolve.add_argument("--pole", required=True, metavar="E_R,GAMMA")
    p_evolve.add_argument("--variant", choices=("decaying", "growing"), default="decaying")
    p_evolve.add_argument("--t-grid", default="0:10:101", metavar="START:STOP:COUNT")

    p_expand = sub.add_parser(
        "expand", parents=[common], help="pole + background decomposition"
    )
    p_expand.add_argument("--config", required=True, help="scenario file, or 'reference'")
    p_expand.add_argument("--psi", default="psi")
    p_expand.add_argument("--phi", default="phi")
    p_expand.add_argument("--mode", choices=("oracle", "physical"), default="oracle")

    p_golden = sub.add_parser(
        "golden-rule", parents=[common], help="exact decay law curves"
    )
    p_golden.add_argument("--config", required=True, help="scenario file, or 'reference'")
    p_golden.add_argument("--t-grid", default="0:50:500", metavar="START:STOP:COUNT")

    p_verify = sub.add_parser(
        "verify-all", parents=[common], help="run the full acceptance checklist"
    )
    p_verify.add_argument("--config", default="reference", help="scenario file, or 'reference'")

    return parser


def _load(path_arg: str | None) -> dict:
    if path_arg is None:
        return {"seed": 0}
    if path_arg == "reference":
        return load_raw(reference_scenario_path())
    return load_raw(path_arg)


def _synthesized_task(args) -> dict | None:
    """The single task a non-`run` subcommand stands for."""
    command = args.command
    if command == "hardy":
        return {"kind": "hardy-check", "wavefunction": args.wavefunction}
    if command == "gamow":
        parts = args.pole.split(",")
        if len(parts) != 2:
            raise ParseError("--pole must look like E_R,GAMMA")
        try:
            e_r, gamma = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ParseError(f"--pole: {exc}") from None
        return {
            "kind": "gamow-evolve",
            "pole": {"E_R": e_r, "Gamma": gamma},
            "variant": args.variant,
            "t_grid": args.t_grid,
        }
    if command == "expand":
        return {"kind": "expand", "psi": args.psi, "phi": args.phi, "mode": args.mode}
    if command == "golden-rule":
        return {"kind": "golden-rule", "t_grid": args.t_grid}
    if command == "verify-all":
        return {"kind": "verify-all"}
    return None


def _effective_config(args) -> ScenarioConfig:
    raw = _load(getattr(args, "config", None))
    task = _synthesized_task(args)
    if task is not None:
        raw["tasks"] = [task]
    if args.seed is not None:
        raw["seed"] = args.seed
    return parse_config(raw, config_digest(raw))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _effective_config(args)
    except GamowLabError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    report, run_dir = runner.run(config, out_root=args.out, quad_tol=args.tol)
    for task in report.tasks:
        print(f"task {task.index} {task.kind}: {task.status}")
        if task.error:
            print(f"  error: {task.error}")
        for line in task.detail.get("lines", ()):
            print(f"  {line}")
    print(f"report: {run_dir / 'report.json'}")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
