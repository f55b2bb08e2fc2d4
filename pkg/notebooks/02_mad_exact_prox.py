# MAD with an exact (grid) proximal step
# ======================================
#
# On the double well f = (x^2 - 1)^2 a start at x=0.2 sits on the central bump.
# With t large enough the envelope only sees the two wells, so one prox step
# jumps into a global minimizer. The recorded envelope values never increase.

import numpy as np

from hjmad import GridSpec, SolverConfig, TimeStepParams, make_objective, run_mad

obj = make_objective("double_well")
grid = GridSpec((-3.0,), (3.0,), 4001)
cfg = SolverConfig(t1=2.0, params=TimeStepParams(tau=0.1, T=2.0), target_tolerance=None, grad_tolerance=1e-12)
trace = run_mad(obj, [0.2], cfg, grid)

for r in trace.records[:6]:
    print(f"k={r.k}  x={r.x[0]: .4f}  f={r.f_x:.2e}  u={r.u_est:.2e}  |g|={r.g_norm:.2e}")
print("stop:", trace.stop_reason.value, " evaluations:", trace.final.cum_evals)

# Same experiment on 1-D Griewank with a modest T: descent on the envelope
# still holds, but the run can settle in a local minimum because T is too
# small to smooth out the barriers between the start and the origin.
g1 = make_objective("griewank", 1)
grid = GridSpec((-60.0,), (60.0,), 24001)
for T in (20.0, 2000.0):
    cfg = SolverConfig(t1=1.0, params=TimeStepParams(tau=0.05, T=T), target_tolerance=None, max_iters=300)
    tr = run_mad(g1, [27.5], cfg, grid)
    u = np.array([r.u_est for r in tr.records])
    print(f"T={T:6.0f}: final x={tr.final.x[0]:7.3f}  f={tr.final.f_x:.4f}  "
          f"u nonincreasing: {bool(np.all(np.diff(u) <= 0))}")
