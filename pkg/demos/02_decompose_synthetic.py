"""Decompose a synthetic low-core-rank tensor under three divergences and
watch the loss fall. Also shows the planted-recovery behavior when the
solver starts near the true factors."""

import numpy as np

from beta_ntd import FactorSet, SolverConfig, init_factors, solve

dims, core_dims = (20, 18, 15), (4, 3, 3)
planted = init_factors(dims, SolverConfig(core_dims=core_dims, seed=7))
x = planted.approximation()

print(f"data {dims}, core {core_dims}")
for beta in (0.0, 1.0, 2.0):
    cfg = SolverConfig(beta=beta, core_dims=core_dims, max_iters=200,
                       rel_tol=1e-10, seed=0)
    factors, trace = solve(x, cfg)
    print(f"beta={beta}: loss {trace.losses[0]:.4e} -> {trace.losses[-1]:.4e} "
          f"in {len(trace.iter_times)} iterations "
          f"({np.mean(trace.iter_times) * 1e3:.2f} ms/iter)")

# Starting from a 1%-perturbed copy of the planted factors, the Euclidean
# solver drives the loss several orders of magnitude down.
rng = np.random.default_rng(1)
near = FactorSet(
    w=planted.w * (1 + 0.01 * rng.random(planted.w.shape)),
    h=planted.h * (1 + 0.01 * rng.random(planted.h.shape)),
    q=planted.q * (1 + 0.01 * rng.random(planted.q.shape)),
    core=planted.core * (1 + 0.01 * rng.random(planted.core.shape)),
)
cfg = SolverConfig(beta=2.0, core_dims=core_dims, max_iters=500, rel_tol=0.0)
factors, trace = solve(x, cfg, init=near)
print(f"\nplanted init, beta=2: loss ratio final/initial = "
      f"{trace.losses[-1] / trace.losses[0]:.3e}")
