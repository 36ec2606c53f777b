"""Command line: ``fuzzyprio solve|validate|replay``.

Exit codes: 0 success, 1 invalid input, 2 solver did not converge.
Defaults can be set in a YAML/JSON file named by ``$FUZZYPRIO_CONFIG``
(keys: lambda_tol, epsilon_w, spread, floor, renormalize, format,
parallel); command-line flags override it.
"""
from __future__ import annotations

import argparse
import os
import sys

import yaml

from .fuzzy_core import FuzzyNumberError
from .hierarchy import HierarchyError
from .judgments import JudgmentError, SpreadPolicy, validate
from .report import render, replay, run_solve
from .simplex import NumericalFailure
from .solver import NotConverged, SolverConfig
from .study import StudyError, parse_localweights, parse_study, read_source

CONFIG_ENV = "FUZZYPRIO_CONFIG"
CONFIG_KEYS = {"lambda_tol", "epsilon_w", "spread", "floor", "renormalize", "format", "parallel"}

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 1, 2


def load_config(env=None) -> dict:
    env = os.environ if env is None else env
    path = env.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        cfg = yaml.safe_load(fh) or {}
    if not isinstance(cfg, dict) or set(cfg) - CONFIG_KEYS:
        raise ValueError(f"{path}: config must be a mapping with keys {sorted(CONFIG_KEYS)}")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzyprio", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve every group of a study and rank the leaves")
    p.add_argument("study", help="study file path or bundled dataset name")
    p.add_argument("--lambda-tol", type=float, help="bisection stop width (default 1e-9)")
    p.add_argument("--epsilon-w", type=float, help="lower bound on every weight (default 1e-6)")
    p.add_argument("--spread", type=float, help="half-width given to crisp judgments (default 1.0)")
    p.add_argument("--floor", type=float, help="lowest allowed lower bound for crisp judgments (default 1/9)")
    p.add_argument("--renormalize", action=argparse.BooleanOptionalAction, default=None,
                   help="scale sibling weights to sum 1 before composing")
    p.add_argument("--format", choices=["table", "machine", "csv"])
    p.add_argument("--oracle-check", action="store_true",
                   help="cross-check groups of up to 3 items against a grid search")
    p.add_argument("--parallel", action=argparse.BooleanOptionalAction, default=None,
                   help="solve independent groups concurrently")

    p = sub.add_parser("validate", help="check a study file and print matrix diagnostics")
    p.add_argument("study")

    p = sub.add_parser("replay", help="compose and rank published local weights")
    p.add_argument("localweights", help="local-weights file path or bundled dataset name")
    p.add_argument("--renormalize", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--format", choices=["table", "machine", "csv"])
    return parser


def _pick(flag, cfg, key, default):
    if flag is not None:
        return flag
    return cfg.get(key, default)


def _policy(args, cfg, study):
    base = study.policy or SpreadPolicy()
    spread = _pick(args.spread, cfg, "spread", base.spread)
    floor = _pick(args.floor, cfg, "floor", base.floor)
    return SpreadPolicy(float(spread), float(floor))


def cmd_solve(args, cfg, out) -> int:
    study = parse_study(read_source(args.study))
    config = SolverConfig(
        lambda_tolerance=float(_pick(args.lambda_tol, cfg, "lambda_tol", 1e-9)),
        epsilon_w=float(_pick(args.epsilon_w, cfg, "epsilon_w", 1e-6)),
    )
    report = run_solve(study, config,
                       renormalize=bool(_pick(args.renormalize, cfg, "renormalize", False)),
                       policy=_policy(args, cfg, study),
                       oracle_check=args.oracle_check,
                       parallel=bool(_pick(args.parallel, cfg, "parallel", False)))
    out.write(render(report, _pick(args.format, cfg, "format", "table")))
    return EXIT_OK


def cmd_validate(args, cfg, out) -> int:
    study = parse_study(read_source(args.study))
    lines = [f"ok: {sum(1 for n in study.hierarchy.walk()) - 1} nodes below the root"]
    for pid, mat in study.fuzzy_matrices().items():
        rep = validate(mat)
        widths = rep.band_widths.values()
        lines.append(f"{pid}: n={rep.n} complete={rep.complete} "
                     f"band width {min(widths):.4g}..{max(widths):.4g}; {'; '.join(rep.messages)}")
    out.write(("\n".join(lines) + "\n").encode("utf-8"))
    return EXIT_OK


def cmd_replay(args, cfg, out) -> int:
    data = parse_localweights(read_source(args.localweights))
    report = replay(data, renormalize=bool(_pick(args.renormalize, cfg, "renormalize", False)))
    out.write(render(report, _pick(args.format, cfg, "format", "table")))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "validate": cmd_validate, "replay": cmd_replay}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config()
        return COMMANDS[args.command](args, cfg, stdout)
    except (NotConverged, NumericalFailure) as exc:
        print(f"error: solver did not converge: {exc}", file=stderr)
        return EXIT_NOT_CONVERGED
    except StudyError as exc:
        print(f"error: invalid study ({type(exc).__name__}):", file=stderr)
        for issue in exc.issues:
            print(f"  {issue}", file=stderr)
        return EXIT_INVALID
    except (FileNotFoundError, JudgmentError, FuzzyNumberError, HierarchyError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
