import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetatrace.cycle import CycleSpec, generator, heat_kernel_cycle, trace_scaled, ulclt_audit
from thetatrace.errors import FitError, PreconditionError
from thetatrace.params import KernelParams
from thetatrace.theta import jacobi_theta, kernel_trace

# rows of exp(tQ) from mpmath's matrix exponential at 40 digits
EXPM_REF = {
    (8, 1.0, 0.3): [0.5993272048839257, 0.17216444365531852, 0.025446367465518652, 0.002537003366630961,
                    0.0003771661411381319, 0.002537003366630961, 0.025446367465518652,
                    0.17216444365531852],
    (5, 0.7, 2.0): [0.260308951318412, 0.21581352308270144, 0.15403200125809258, 0.15403200125809258,
                    0.21581352308270144],
    (12, 2.0, 0.05): [0.8269385516343293, 0.08228312352881215, 0.004107316346207921,
                      0.00013679660465644043, 3.4182067857230494e-06, 6.83576215931403e-08,
                      2.2775030547775973e-09, 6.83576215931403e-08, 3.4182067857230494e-06,
                      0.00013679660465644043, 0.004107316346207921, 0.08228312352881215],
}


@pytest.mark.parametrize("key", list(EXPM_REF))
def test_against_matrix_exponential_reference(key):
    n, a, t = key
    got = heat_kernel_cycle(CycleSpec(n, a), t, np.arange(n))
    assert np.max(np.abs(got - EXPM_REF[key])) <= 1e-15


def test_examples():
    assert heat_kernel_cycle(CycleSpec(1, 3.0), 2.0, 0) == 1.0
    assert heat_kernel_cycle(CycleSpec(2, 1.0), 0.5, 0) == pytest.approx(0.5676676416183064, abs=1e-15)


def test_generator_rows_sum_to_zero():
    q = generator(CycleSpec(7, 1.5))
    assert np.allclose(q.sum(axis=1), 0.0, atol=1e-15)
    assert np.allclose(q, q.T)


def test_invalid_spec():
    with pytest.raises(PreconditionError):
        CycleSpec(0, 1.0)
    with pytest.raises(PreconditionError):
        CycleSpec(4, -1.0)
    with pytest.raises(PreconditionError):
        heat_kernel_cycle(CycleSpec(4, 1.0), -1.0, 0)


specs = st.builds(CycleSpec, st.integers(1, 64), st.floats(0.05, 5.0))


@given(specs, st.floats(0.0, 20.0))
def test_stochastic(spec, t):
    p = heat_kernel_cycle(spec, t, np.arange(spec.N))
    assert abs(p.sum() - 1.0) <= 1e-12
    assert np.all(p >= -1e-15)


@given(specs, st.floats(0.0, 20.0))
def test_reversible(spec, t):
    p = heat_kernel_cycle(spec, t, np.arange(spec.N))
    assert np.max(np.abs(p[1:] - p[1:][::-1]), initial=0.0) <= 1e-15


@given(specs, st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_semigroup(spec, t, s):
    js = np.arange(spec.N)
    lhs = heat_kernel_cycle(spec, t + s, 0)
    rhs = np.sum(heat_kernel_cycle(spec, t, js) * heat_kernel_cycle(spec, s, js))
    assert abs(lhs - rhs) <= 1e-11


@given(st.integers(2, 16), st.floats(0.1, 3.0), st.floats(0.0, 4.0))
def test_matches_eigendecomposition(n, a, t):
    spec = CycleSpec(n, a)
    w, v = np.linalg.eigh(generator(spec))
    ref = ((v * np.exp(t * w)) @ v.T)[0]
    assert np.max(np.abs(ref - heat_kernel_cycle(spec, t, np.arange(n)))) <= 1e-10


def test_large_site_index_reduced_exactly():
    spec = CycleSpec(10, 1.0)
    assert heat_kernel_cycle(spec, 0.7, 3) == heat_kernel_cycle(spec, 0.7, 3 + 10 ** 9)


def test_scaled_trace_converges(self_dual):
    ref = jacobi_theta(1.0).value
    e256 = abs(trace_scaled(256, self_dual, 1.0) - ref)
    e512 = abs(trace_scaled(512, self_dual, 1.0) - ref)
    assert e256 < 2e-3
    assert e512 < e256


def test_scaled_trace_long_time(self_dual):
    assert trace_scaled(16, self_dual, 50.0) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.5, 8.0), st.floats(0.3, 4.0))
def test_scaled_trace_second_order(L, D):
    p = KernelParams(L, D)
    ts = np.array([0.5, 1.0, 2.0])
    e1 = np.max(np.abs(trace_scaled(128, p, ts) - kernel_trace(p, ts).value))
    e2 = np.max(np.abs(trace_scaled(256, p, ts) - kernel_trace(p, ts).value))
    assert e2 <= 0.3 * e1 + 1e-13


def test_ulclt_rate(self_dual):
    rep = ulclt_audit((64, 128, 256), np.linspace(0.5, 2.0, 16), self_dual)
    assert rep.passed
    assert rep.metadata["rho"] >= 0.75
    errs = [r["e"] for r in rep.tables["errors"]]
    assert errs[2] < errs[1] < errs[0]


def test_ulclt_errors(self_dual):
    with pytest.raises(FitError):
        ulclt_audit((64, 64), [1.0], self_dual)
    with pytest.raises(PreconditionError):
        ulclt_audit((64, 128), [0.0, 1.0], self_dual)
    with pytest.raises(PreconditionError):
        ulclt_audit((128, 64), [1.0], self_dual)
    with pytest.raises(PreconditionError):
        ulclt_audit((8, 64), [1.0], self_dual)
