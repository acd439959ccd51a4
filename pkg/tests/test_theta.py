import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from thetatrace import specfun
from thetatrace.errors import BudgetExceeded, PreconditionError
from thetatrace.numerics import TruncationBudget
from thetatrace.params import KernelParams
from thetatrace.theta import (completed_trace, jacobi_theta, kernel_trace, sym_kernel, theta_capital,
                              trace_limit, trace_limit_dual)

# mpmath references (jtheta and nsum at 40 digits)
THETA_REF = [(0.1, 3.162277660168523), (0.5, 1.419495488083766), (1.0, 1.086434811213308),
             (2.5, 1.000776406407899)]
TRACE_REF = [(1.0, 1.0, 0.01, 2.820947917817136), (3.0, 0.5, 0.2, 2.6761861751347236),
             (7.0, 2.0, 3.0, 1.0159078231651681), (2 * math.pi, math.pi, 4.0, 1.0000069746847124)]
CAPITAL_REF = [(0.3, 0.017737984007314155), (1.0, 0.44669690046712346), (2.0, 0.07937055566492658),
               (10.0, 1.3499534340917212e-11)]

params_st = st.builds(KernelParams, st.floats(0.3, 12.0), st.floats(0.1, 6.0))


@pytest.mark.parametrize("u, want", THETA_REF)
def test_jacobi_theta_reference(u, want):
    assert jacobi_theta(u).value == pytest.approx(want, rel=1e-14)


def test_jacobi_theta_closed_form_at_one():
    assert jacobi_theta(1.0).value == pytest.approx(math.pi ** 0.25 / specfun.gamma(0.75), rel=1e-15)


def test_jacobi_theta_examples():
    assert abs(jacobi_theta(100.0).value - 1.0) <= 1e-15
    assert jacobi_theta(0.25).value == pytest.approx(2 * jacobi_theta(4.0).value, rel=1e-14)


@pytest.mark.parametrize("L, D, t, want", TRACE_REF)
def test_trace_reference(L, D, t, want):
    p = KernelParams(L, D)
    assert kernel_trace(p, t).value == pytest.approx(want, rel=1e-14)


def test_trace_examples(self_dual):
    assert kernel_trace(self_dual, 1.0).value == pytest.approx(1.0864348112133080, rel=1e-15)
    assert kernel_trace(self_dual, 0.01).value == pytest.approx(10.0, abs=1e-12)
    p = KernelParams(1.0, 1.0)
    assert trace_limit(p, 0.01).value == pytest.approx(trace_limit_dual(p, 0.01).value, rel=1e-12)
    assert trace_limit(p, 1e3).value == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("u", [0.0, -1.0])
def test_positive_time_required(u):
    with pytest.raises(PreconditionError):
        jacobi_theta(u)


def test_budget_exceeded_for_tiny_time():
    with pytest.raises(BudgetExceeded):
        trace_limit(KernelParams.self_dual(), 1e-6, TruncationBudget(1e-15, max_terms=50))


def test_inversion_table():
    u = np.linspace(0.1, 10.0, 100)
    a = jacobi_theta(u).value
    b = u ** -0.5 * jacobi_theta(1 / u).value
    assert np.max(np.abs(a - b) / a) <= 1e-12


@given(params_st, st.floats(0.05, 20.0))
def test_dual_representation(p, t):
    a = trace_limit(p, t).value
    b = trace_limit_dual(p, t).value
    assert abs(a - b) <= 1e-12 * kernel_trace(p, t).value


@given(st.floats(0.05, 20.0))
def test_self_dual_inversion(t):
    p = KernelParams.self_dual()
    assert abs(kernel_trace(p, t).value - t ** -0.5 * kernel_trace(p, 1 / t).value) <= 1e-11


def test_inversion_fails_off_the_self_dual_scale():
    p = KernelParams(math.sqrt(8 * math.pi), 1.0)
    assert abs(kernel_trace(p, 4.0).value - 0.5 * kernel_trace(p, 0.25).value) >= 1e-3


@given(params_st, st.floats(0.1, 10.0))
def test_jacobi_time_algebra(p, t):
    prod = p.jacobi_time(1 / t) * p.jacobi_time(t)
    assert (abs(prod - 1) <= 1e-12) == (abs(p.L ** 2 - 4 * math.pi * p.D) <= 1e-12 * p.L ** 2) \
        or abs(p.L ** 2 / (4 * math.pi * p.D) - 1) < 1e-9


@given(params_st, st.floats(0.01, 50.0))
def test_completed_trace_positive_and_consistent(p, t):
    assume(p.alpha / t < 700)  # beyond this the leading term exp(-alpha/t) underflows
    k = completed_trace(p, t).value
    assert k > 0
    full = kernel_trace(p, t).value
    assert abs(k + p.singular_coeff / math.sqrt(t) - full) <= 1e-12 * full


def test_completed_and_symmetric_kernel(self_dual):
    assert completed_trace(self_dual, 1.0).value == pytest.approx(0.0864348112133080, rel=1e-13)
    assert completed_trace(self_dual, 4.0).value == pytest.approx(0.5000069746847124, rel=1e-14)
    assert sym_kernel(self_dual, 4.0).value == pytest.approx(0.2500034873423562, rel=1e-14)
    assert sym_kernel(self_dual, 1.0).value == completed_trace(self_dual, 1.0).value
    assert sym_kernel(self_dual, 0.25).value == pytest.approx(2 * completed_trace(self_dual, 0.25).value,
                                                             rel=1e-15)


def test_sensitivity_to_mismatched_parameters(self_dual):
    pert = KernelParams(self_dual.L * math.sqrt(1 + 1e-6), self_dual.D)
    assert abs(trace_limit(self_dual, 1.0).value - trace_limit_dual(pert, 1.0).value) >= 1e-7


@pytest.mark.parametrize("t, want", CAPITAL_REF)
def test_theta_capital_reference(t, want):
    assert theta_capital(t).value == pytest.approx(want, rel=1e-13)


def test_theta_capital_examples():
    assert abs(theta_capital(1.0).value - 0.4466962) <= 1e-6
    want = (2 * math.pi ** 2 * 10 ** 1.5 - 3 * math.pi * 10 ** 0.5) * math.exp(-10 * math.pi)
    assert theta_capital(10.0).value == pytest.approx(want, rel=1e-12)


def test_theta_capital_small_time_sign():
    # the inversion gives 1000 Theta(100) ~ 7.17e-130 at t = 0.01
    v = theta_capital(0.01, TruncationBudget(1e-300)).value
    assert v == pytest.approx(7.171595520556784e-130, rel=1e-12)
    assert theta_capital(0.01).value == 0.0


@given(st.floats(0.05, 20.0))
def test_theta_capital_inversion(t):
    fine = TruncationBudget(1e-300)
    a = theta_capital(t, fine).value
    b = t ** -1.5 * theta_capital(1 / t, fine).value
    assert abs(a - b) <= 1e-12 * abs(a)


@given(st.floats(1.0, 40.0))
def test_theta_capital_decay_bound(t):
    assert abs(theta_capital(t).value) <= 2 * math.pi ** 2 * t ** 1.5 * math.exp(-math.pi * t) * 1.01


def test_tail_certificate_reported(self_dual):
    v = kernel_trace(self_dual, np.array([0.01, 1.0, 30.0]))
    assert v.tail_bound <= 1e-16
    assert v.terms_used >= 1
