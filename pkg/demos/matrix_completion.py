"""Recover a low-rank matrix from a fraction of its entries.

Three levels of difficulty: clean undersampling (classic completion),
undersampling plus corrupted observations (robust completion), and an
under-determined control where no method could succeed.
"""

import numpy as np

from pcpursuit import (
    ProblemSpec,
    RngState,
    gen_completion_problem,
    proj_support,
    solve_nuclear_completion,
    solve_pcp_completion,
)

n, r = 120, 3


def error(sol, l0):
    return np.linalg.norm(sol.l_hat - l0) / np.linalg.norm(l0)


# --- clean completion: half the entries, no corruption ---------------------
spec = ProblemSpec(n, n, r, 0.0, "random", RngState(1))
inst, obs = gen_completion_problem(spec, p_obs=0.5, tau=0.0, rng=RngState(1))
y = proj_support(inst.m, obs)
sol = solve_nuclear_completion(y, obs)
print(f"clean completion, {100 * obs.density:.0f}% observed: "
      f"error {error(sol, inst.l0):.1e} in {sol.iterations} iterations")

# --- robust completion: 80% observed, 5% of those corrupted ----------------
inst, obs = gen_completion_problem(spec, p_obs=0.8, tau=0.05, rng=RngState(2))
y = proj_support(inst.m, obs)
sol = solve_pcp_completion(y, obs)
print(f"robust completion, {100 * obs.density:.0f}% observed, "
      f"{len(inst.omega)} corrupted: error {error(sol, inst.l0):.1e} "
      f"in {sol.iterations} iterations")

# the sparse estimate localizes the corruptions
hits = proj_support(sol.s_hat, obs)
found = np.argwhere(np.abs(hits) > 0.5)
true = set(map(tuple, inst.omega.entries))
print(f"  corruption support: {len(found)} flagged, "
      f"{sum(tuple(ij) in true for ij in found)} of {len(true)} true hits")

# --- negative control: rank too high for the sample budget -----------------
spec_hard = ProblemSpec(n, n, 60, 0.0, "random", RngState(3))
inst, obs = gen_completion_problem(spec_hard, p_obs=0.2, tau=0.0, rng=RngState(3))
sol = solve_nuclear_completion(proj_support(inst.m, obs), obs)
print(f"under-determined control (rank 60, 20% observed): "
      f"error {error(sol, inst.l0):.2f}, converged={sol.converged}")
