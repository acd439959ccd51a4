"""
Theta inversion and the self-dual scale
=======================================

The rescaled cycle trace converges to a theta series.  Jacobi inversion
turns it into its own dual exactly when L^2 = 4 pi D.
"""

import math

import numpy as np

from thetatrace.cycle import trace_scaled
from thetatrace.params import KernelParams
from thetatrace.theta import jacobi_theta, kernel_trace

# Jacobi inversion: theta(u) = u^-1/2 theta(1/u)
u = np.array([0.1, 0.5, 1.0, 3.0, 10.0])
print("theta(u)        ", jacobi_theta(u).value)
print("u^-1/2 theta(1/u)", u ** -0.5 * jacobi_theta(1 / u).value)

# the discrete trace approaches K_L at rate 1/N^2 here
sd = KernelParams.self_dual()
for n in (32, 64, 128):
    print(f"N={n:4d}  |N p - K_L| at t=1: {abs(trace_scaled(n, sd, 1.0) - kernel_trace(sd, 1.0).value):.3e}")

# self-duality K(t) = t^-1/2 K(1/t) holds only at the self-dual scale
for p in (sd, KernelParams(math.sqrt(8 * math.pi), 1.0)):
    r = abs(kernel_trace(p, 4.0).value - 0.5 * kernel_trace(p, 0.25).value)
    print(f"L^2/(pi D) = {p.L ** 2 / (math.pi * p.D):.0f}: residual at t=4 {r:.3e}")
