"""
Total-positivity minors of the logarithmic kernel
=================================================

Order-one and order-two minors are provably nonnegative; higher orders are
sampled and reported, not asserted.
"""

from thetatrace.params import KernelParams
from thetatrace.totalpos import BuildingBlock, PhiKernel, sum_expansion_probe, tp_random_audit

k = PhiKernel(KernelParams.self_dual())
for n in (1, 2, 3, 4):
    rep = tp_random_audit(k, n, 2000, seed=42 + n)
    worst = next(c.actual for c in rep.checks if c.name == "min_normalized_det")
    print(f"Phi, order {n}: min normalized minor {worst:+.3e}  status {rep.status}")

rep = tp_random_audit(BuildingBlock(1.0), 2, 2000, seed=1)
print("phi_1, order 2:", rep.status)

# a positive mixture of two PF kernels: the mixed terms of a minor can be negative
rep = sum_expansion_probe((1.0, 4.0), (1.0, 1.0), 2, 2000, seed=42)
for c in rep.checks:
    print(f"  {c.name:28s} {c.actual}")
