"""
Mellin transform of Theta and the completed zeta function
=========================================================

Applying the completion operator to K_L - 1 gives Theta, whose Mellin
transform is xi(2s - 1).  On the line Re s = 3/4 this is Xi(2z).
"""

from thetatrace import specfun
from thetatrace.archimedean import f_arch, mellin_theta
from thetatrace.zeros import find_real_zero

for s in (0.5, 1.0 + 2j, 1.7 - 4j):
    m = mellin_theta(s)
    print(f"s={s!s:10}  M(s)={m.value:.12f}  xi(2s-1)={complex(specfun.xi_completed(2 * s - 1)):.12f}")

# the reflection of M is about s = 3/4, not 1/2
print("M(1/4) - M(5/4):", abs(mellin_theta(0.25).value - mellin_theta(1.25).value))
print("M(1/4) - M(3/4):", abs(mellin_theta(0.25).value - mellin_theta(0.75).value))

print("F(0) =", f_arch(0.0).value.real)
z1 = find_real_zero(lambda z: f_arch(z).value.real, 6.5, 7.5, 1e-10)
print("first real zero of F:", z1, " (half the first zeta ordinate)")
