"""
Counting zeros with the argument principle
==========================================

Phase unwrapping along a rectangle counts zeros minus poles.
"""

from thetatrace import specfun
from thetatrace.errors import BoundaryTooClose
from thetatrace.zeros import Rectangle, argument_count, symmetry_probe

for rect in (Rectangle(-1, 2, 0.5, 10), Rectangle(-1, 2, 10, 20), Rectangle(-1, 2, 10, 26)):
    print(rect, "xi:", argument_count(specfun.xi_completed, rect))
# |xi| decays like exp(-pi |Im w| / 4), so tall boxes trip the absolute boundary guard
try:
    argument_count(specfun.xi_completed, Rectangle(-1, 2, 10, 33))
except BoundaryTooClose as exc:
    print("tall box:", exc)
print("Gamma near -1:", argument_count(specfun.gamma, Rectangle(-1.4, -0.6, -0.4, 0.4)))

# zeros of the Laplace transform of Phi sit on Re s = -1/2
rep = symmetry_probe(Rectangle(-0.9, 0.2, 4, 9))
for row in rep.tables["counts"]:
    print(f"center {row['center']:+.2f}: count {row['count']}, reflected {row['reflected_count']}")
