"""Probe the optimality certificate behind exact recovery.

A recovered pair is provably the unique optimum when a dual matrix built
from the instance satisfies three norm conditions.  This script constructs
that matrix on random instances and prints the measured margin on each
condition, then shows the two diagnostics the construction rests on: the
sampling-concentration deviation and the support/tangent-space angle.

Expect the sup-norm condition to fail at these sizes.  The certificate
corrections are entrywise inflated by the inverse batch density 1/q, so
their sup-norm sits near (1/q) * ||uv'||_inf, which stays above the
lambda/2 threshold until n reaches the tens of thousands; the Frobenius
condition, by contrast, is satisfied with orders of magnitude to spare.
The bound is what is asymptotic here, not the construction.
"""

from pcpursuit import (
    ProblemSpec,
    RngState,
    TangentSpace,
    certify_instance,
    gen_problem,
    measure_concentration,
    op_norm_composed,
)

print("certificate margins at n=50 (r=1, rho=0.01), five seeds:")
print(f"{'seed':>4} {'||w||<0.5':>12} {'frob<=lam/4':>14} {'sup<lam/2':>12} pass")
for seed in range(5):
    rep = certify_instance(50, 1, 0.01, seed)
    print(f"{seed:>4} {rep.norm_w:>12.3f} "
          f"{rep.frob_on_omega:>8.1e}/{rep.lam / 4:.1e} "
          f"{rep.linf_off_omega:>6.3f}/{rep.lam / 2:.3f} {rep.passed}")

print("\nsup-norm margin vs dimension (r=1, rho=0.01, seed 0):")
for n in (50, 100, 200, 400):
    rep = certify_instance(n, 1, 0.01, 0)
    print(f"  n={n:>3}: linf_off/(lambda/2) = {rep.linf_off_omega / (rep.lam / 2):5.2f}, "
          f"||w|| = {rep.norm_w:.3f}, frob margin x{(rep.lam / 4) / rep.frob_on_omega:.0f}")

print("\nfar outside the recovery regime the construction itself breaks down:")
rep = certify_instance(50, 25, 0.4, 0)
print(f"  r=25, rho=0.4: pass={rep.passed} "
      f"(support intersects the tangent space; the sparse component diverges)")

# the two underlying diagnostics, at an easy size
inst = gen_problem(ProblemSpec(100, 100, 2, 0.0, "random", RngState(7)))
t = TangentSpace.from_low_rank(inst.l0)
stats = measure_concentration(t, rho0=0.5, rng=RngState(7), trials=5)
print(f"\nsampling concentration at rho0=0.5 (5 trials): "
      f"max deviation {stats.max_deviation:.3f} (< 1 keeps the scheme contractive)")

from pcpursuit import gen_bernoulli_mask

omega = gen_bernoulli_mask(RngState(8), 100, 100, 0.05)
angle = op_norm_composed(omega, t)
print(f"support/tangent angle ||P_omega P_T|| = {angle:.3f} "
      f"(< 1 makes the sparse component well-defined)")
