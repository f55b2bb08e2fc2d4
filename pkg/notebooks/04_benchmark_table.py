# Benchmark table
# ===============
#
# Ten seeds per function with the paper-defaults profile and uniform starts in
# each function's default box. Published HJ-MAD counts are shown for scale;
# start points and parameters of the published runs are unknown, so these are
# in-repo results, not reproductions. The same runs are available from the
# command line, e.g.
#
#     bench run --function rastrigin --seeds 10 --out runs/rastrigin

import tempfile

from hjmad.bench import ExperimentSpec, run_experiment
from hjmad.objectives import BENCHMARKS

with tempfile.TemporaryDirectory() as out:
    print(f"{'function':10s} {'HJ-MAD':>8s} {'PRS':>8s} {'published HJ-MAD':>17s}")
    for name in BENCHMARKS:
        rows = {m: run_experiment(ExperimentSpec(name, method=m, n_seeds=10 if m == "hj-mad" else 3,
                                                 out=f"{out}/{name}-{m}"))
                for m in ("hj-mad", "prs")}
        pub = rows["hj-mad"].published_evals
        print(f"{name:10s} {rows['hj-mad'].evals_display:>8s} {rows['prs'].evals_display:>8s} {pub / 1000:>16.1f}K"
              f"   ({rows['hj-mad'].successes}/10 converged)")
