import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetatrace import specfun
from thetatrace.errors import BoundaryTooClose, NoBracket, PreconditionError, UnwrapFailure
from thetatrace.params import KernelParams
from thetatrace.zeros import (Rectangle, argument_count, find_real_zero, laplace_closed_fn, symmetry_probe,
                              winding, xi_count_check)

# zeta zero ordinates from mpmath.zetazero, halved
FIRST = 7.0673625708673469
SECOND = 10.511019819385777


def test_xi_counts():
    assert argument_count(specfun.xi_completed, Rectangle(-1, 2, 10, 20)) == 1
    assert argument_count(specfun.xi_completed, Rectangle(-1, 2, 0.5, 10)) == 0
    assert argument_count(specfun.xi_completed, Rectangle(-1, 2, 10, 26)) == 3


def test_gamma_pole():
    assert argument_count(specfun.gamma, Rectangle(-1.4, -0.6, -0.4, 0.4)) == -1
    assert argument_count(specfun.gamma, Rectangle(-3.5, -0.5, -0.4, 0.4)) == -3


@given(st.integers(1, 4), st.floats(0.05, 0.45))
def test_polynomial_counts(k, r):
    rect = Rectangle(-1.1, 1.1, -1.1, 1.1)
    roots = np.linspace(-0.8, 0.8, k) + 1j * r
    assert argument_count(lambda z: np.prod([z - a for a in roots], axis=0), rect) == k


def test_winding_is_near_integer():
    w = winding(specfun.xi_completed, Rectangle(-1, 2, 10, 20))
    assert abs(w - 1) <= 1e-3


def test_boundary_too_close():
    with pytest.raises(BoundaryTooClose):
        argument_count(lambda z: z - 0.5j, Rectangle(-1, 1, 0.5, 1))


def test_refinement_cap():
    # an essential singularity on the boundary spins the phase without bound
    with pytest.raises((UnwrapFailure, BoundaryTooClose)), np.errstate(over="ignore"):
        argument_count(lambda z: np.exp(1.0 / (z - 1.0 + 1e-12)), Rectangle(-1, 1, -1, 1), 16)


def test_rectangle_validation_and_reflection():
    with pytest.raises(PreconditionError):
        Rectangle(1, 0, 0, 1)
    r = Rectangle(-0.9, 0.2, 4, 9).reflected(-0.5)
    assert (r.re_min, r.re_max, r.im_min, r.im_max) == pytest.approx((-1.2, -0.1, -9, -4))


def test_find_real_zero_examples():
    f = lambda z: specfun.Xi(2 * z).real
    assert abs(find_real_zero(f, 6.5, 7.5, 1e-9) - FIRST) <= 1e-9
    assert abs(find_real_zero(f, 10.0, 11.0, 1e-9) - SECOND) <= 1e-9
    with pytest.raises(NoBracket):
        find_real_zero(f, 1.0, 2.0)


@given(st.floats(6.0, 7.0), st.floats(7.1, 8.0))
def test_find_real_zero_bracket_independent(lo, hi):
    f = lambda z: specfun.Xi(2 * z).real
    assert abs(find_real_zero(f, lo, hi, 1e-10) - FIRST) <= 1e-9


@given(st.floats(-5, 5), st.floats(0.1, 3), st.floats(0.1, 3))
def test_find_real_zero_cubic(root, a, b):
    f = lambda x: (x - root) * (1 + (x - root) ** 2)
    assert abs(find_real_zero(f, root - a, root + b, 1e-12) - root) <= 1e-11


def test_xi_count_check_report():
    rep = xi_count_check()
    assert rep.status == "pass"


def test_laplace_zero_sits_on_the_line_minus_half():
    # B(s) vanishes where 2s + 3/2 = 1/2 + i gamma, i.e. s = -1/2 + i gamma / 2
    g = laplace_closed_fn(KernelParams.self_dual())
    s0 = -0.5 + 1j * FIRST
    assert abs(g(s0)) <= 1e-9
    assert argument_count(g, Rectangle(-0.9, 0.2, 4, 9)) == 1


def test_symmetry_probe_records_both_centers():
    rep = symmetry_probe(Rectangle(-0.9, 0.2, 4, 9))
    assert rep.status == "audit"
    rows = {row["center"]: row for row in rep.tables["counts"]}
    assert rows[0.25]["count"] == 1
    assert rows[0.25]["reflected_count"] == 0
    assert rows[-0.5]["reflected_count"] == 1
    assert all(not c.asserted for c in rep.checks)
