"""``bench`` command line.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from ..errors import EstimationError, InvalidArgumentError, NumericalFailureError
from ..objectives import available_functions, make_objective
from .config import KEYS, PROFILES, load_config_file, resolve_settings
from .experiment import METHODS, ExperimentSpec, run_experiment

EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 2, 3, 4


def _parser():
    ap = argparse.ArgumentParser(prog="bench", description="HJ-MAD benchmark harness")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered functions with domains and optima")

    run = sub.add_parser("run", help="run one function/method pair over several seeds")
    run.add_argument("--function", required=True)
    run.add_argument("--dim", type=int, default=None)
    run.add_argument("--method", choices=METHODS, default="hj-mad")
    run.add_argument("--seeds", type=int, default=1, help="number of seeds")
    run.add_argument("--seed0", type=int, default=0, help="first seed")
    run.add_argument("--start", default="uniform", help="uniform | shell:R0:R1 | comma-separated point")
    run.add_argument("--config", default=None, help="flat key = value file")
    run.add_argument("--profile", choices=sorted(PROFILES), default="paper-defaults")
    run.add_argument("--out", required=True, help="output directory")
    over = run.add_argument_group("overrides (win over --config)")
    for key in KEYS:
        flags = {f"--{key}", f"--{key.replace('_', '-')}"}
        over.add_argument(*sorted(flags), dest=key, default=None, metavar="VALUE")
    return ap


def _list():
    for name in available_functions():
        obj = make_objective(name)
        x_star, f_star = obj.optimum
        lo, hi = obj.domain
        print(f"{name:12s} dim={obj.dim}  domain=[{lo[0]:g}, {hi[0]:g}]^n  "
              f"x*={x_star.tolist()}  f*={f_star:g}")


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.command == "list":
        _list()
        return 0
    try:
        file_values = load_config_file(args.config) if args.config else None
    except OSError as err:
        print(f"bench: cannot read config: {err}", file=sys.stderr)
        return EXIT_IO
    overrides = {k: getattr(args, k) for k in KEYS}
    try:
        settings = resolve_settings(args.profile, file_values, overrides)
        spec = ExperimentSpec(function=args.function, dim=args.dim, method=args.method, start=args.start,
                              n_seeds=args.seeds, seed0=args.seed0, out=args.out, settings=settings)
        row = run_experiment(spec)
    except (KeyError, InvalidArgumentError) as err:
        print(f"bench: {err.args[0] if err.args else err}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailureError, EstimationError) as err:
        print(f"bench: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as err:
        print(f"bench: I/O error: {err}", file=sys.stderr)
        return EXIT_IO
    print(f"{row.function} {row.method} dim={row.dim}: {row.successes}/{row.n_seeds} converged, "
          f"mean evals {row.evals_display}, mean best f {row.mean_final_f:.6g}"
          + (f" (published {row.published_evals})" if row.published_evals else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
