"""Command-line front end: ``entgap {verify,reproduce,sweep,figure1,overlap}``.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments, model
from .measures import WITNESS_TOL, ec_lower_bound_from_overlap
from .overlap import DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL, grid_oracle_overlap, seesaw_max_overlap, two_copy_overlap


def _vec(v: np.ndarray) -> str:
    return "[" + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in v) + "]"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entgap", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed for seesaw restarts (default 42)")
    parser.add_argument("--tol-eig", type=float, default=DEFAULT_TOL,
                        help="seesaw stopping tolerance on eigenvalue improvement (default 1e-12)")
    parser.add_argument("--witness-tol", type=float, default=WITNESS_TOL,
                        help="negativity threshold for the distillability certificate (default 1e-10)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", help="run the invariant suite")
    sub.add_parser("reproduce", help="check every published value, print a PASS/FAIL table")

    sw = sub.add_parser("sweep", help="witness eigenvalue and log-negativity of sigma(p) on a grid, as CSV")
    sw.add_argument("--p-min", type=float, required=True)
    sw.add_argument("--p-max", type=float, required=True)
    sw.add_argument("--steps", type=int, required=True)
    sw.add_argument("--log", action="store_true", help="logarithmic spacing")
    sw.add_argument("--out", help="write CSV here instead of stdout")

    fig = sub.add_parser("figure1", help="write the figure data as CSV")
    fig.add_argument("--out", required=True)
    fig.add_argument("--svg", action="store_true", help="also write an SVG plot next to the CSV")

    ov = sub.add_parser("overlap", help="maximal product overlap with the UPB complement projector")
    ov.add_argument("--copies", type=int, choices=(1, 2), default=1)
    ov.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    ov.add_argument("--seed", dest="overlap_seed", type=int, default=None)
    ov.add_argument("--grid-resolution", type=int, default=None)
    return parser


def _run_overlap(args, parser) -> int:
    if args.restarts < 1:
        parser.error("--restarts must be at least 1")
    if args.grid_resolution is not None and args.grid_resolution < 8:
        parser.error("--grid-resolution must be at least 8")
    seed = args.seed if args.overlap_seed is None else args.overlap_seed
    pi_b = model.upb_projector()
    if args.copies == 1:
        res = seesaw_max_overlap(pi_b, restarts=args.restarts, seed=seed, tol=args.tol_eig)
    else:
        res = two_copy_overlap(pi_b, restarts=args.restarts, seed=seed, tol=args.tol_eig)
    print(f"copies          {args.copies}")
    print(f"alpha           {res.alpha:.12f}")
    print(f"per_copy        {res.alpha ** (1.0 / args.copies):.12f}")
    print(f"ec_bound_ebits  {ec_lower_bound_from_overlap(res.alpha) / args.copies:.12f}")
    print(f"restarts        {res.restarts_used}")
    print(f"iterations      {res.iterations_total}")
    print(f"converged       {res.converged}")
    print(f"a_opt           {_vec(res.a_opt)}")
    print(f"b_opt           {_vec(res.b_opt)}")
    if args.grid_resolution is not None:
        if args.copies != 1:
            parser.error("--grid-resolution applies to --copies 1 only")
        oracle = grid_oracle_overlap(pi_b, args.grid_resolution, tol=args.tol_eig)
        print(f"grid_oracle     {oracle:.12f}")
    print(f"below_0.99      {res.alpha < 0.99 ** args.copies}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            checks = experiments.verify_checks(seed=args.seed, witness_tol=args.witness_tol)
            sys.stdout.write(experiments.render(checks))
            return 0 if all(c.passed for c in checks) else 1
        if args.command == "reproduce":
            text, code = experiments.reproduce_report(seed=args.seed, witness_tol=args.witness_tol, tol=args.tol_eig)
            sys.stdout.write(text)
            return code
        if args.command == "sweep":
            records = experiments.sweep(args.p_min, args.p_max, args.steps, args.log, args.witness_tol)
            if args.out:
                with open(args.out, "w", newline="") as fh:
                    experiments.write_sweep_csv(records, fh)
            else:
                experiments.write_sweep_csv(records, sys.stdout)
            return 0
        if args.command == "figure1":
            path = experiments.figure1(args.out, svg=args.svg)
            print(path)
            return 0
        if args.command == "overlap":
            return _run_overlap(args, parser)
    except ValueError as exc:
        parser.error(str(exc))
    return 2


if __name__ == "__main__":
    sys.exit(main())
