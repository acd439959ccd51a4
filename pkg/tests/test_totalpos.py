import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetatrace import specfun
from thetatrace.errors import DomainError, MonotonicityError, PreconditionError, SizeError
from thetatrace.params import KernelParams
from thetatrace.totalpos import (BuildingBlock, PhiKernel, building_block_laplace, det_qr, gauge_check,
                                 minor_det, sum_expansion_probe, tp_random_audit)


def _cofactor(m):
    if m.shape[0] == 1:
        return m[0, 0]
    return sum((-1) ** j * m[0, j] * _cofactor(np.delete(m[1:], j, axis=1)) for j in range(m.shape[0]))


def test_two_by_two_example():
    d = minor_det(BuildingBlock(1.0), [0.0, 1.0], [0.0, 1.0]).det
    phi = lambda v: math.exp(-math.exp(-v))
    assert d == pytest.approx(phi(0) ** 2 - phi(1) * phi(-1), rel=1e-14)
    assert d == pytest.approx(0.08965832341334264, rel=1e-14)
    assert d > 0


def test_order_one_is_pointwise(self_dual):
    k = PhiKernel(self_dual)
    s = minor_det(k, [0.3], [-0.2])
    assert s.det == pytest.approx(k(0.5), rel=1e-14)
    assert s.det > 0


def test_sequence_checks():
    k = BuildingBlock(1.0)
    with pytest.raises(MonotonicityError):
        minor_det(k, [0.0, 0.0], [0.0, 1.0])
    with pytest.raises(SizeError):
        minor_det(k, np.arange(9.0), np.arange(9.0))
    with pytest.raises(PreconditionError):
        minor_det(k, [0.0, 1.0], [0.0])
    with pytest.raises(PreconditionError):
        BuildingBlock(0.0)


@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_lu_matches_cofactor(n, seed):
    m = np.random.default_rng(seed).normal(size=(n, n))
    c = _cofactor(m)
    assert abs(np.linalg.det(m) - c) <= 1e-12 * max(1.0, abs(c))
    assert abs(det_qr(m) - c) <= 1e-12 * max(1.0, abs(c))


def test_det_qr_batched():
    m = np.random.default_rng(1).normal(size=(20, 3, 3))
    assert np.allclose(det_qr(m), np.linalg.det(m), rtol=1e-12, atol=1e-14)


def test_gauge_examples():
    rng = np.random.default_rng(5)
    M = rng.normal(size=(4, 4))
    xs, ys = np.sort(rng.uniform(-2, 2, 4)), np.sort(rng.uniform(-2, 2, 4))
    assert gauge_check(M, 0.0, xs, ys) == 0.0
    assert gauge_check(M, 0.7, xs, ys) <= 1e-12
    rank1 = np.outer(rng.normal(size=4), rng.normal(size=4))
    assert gauge_check(rank1, 0.7, xs, ys) <= 1e-14


@given(st.integers(1, 5), st.floats(-3, 3), st.integers(0, 2 ** 32 - 1))
def test_gauge_property(n, a, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    xs, ys = np.sort(rng.uniform(-3, 3, n)), np.sort(rng.uniform(-3, 3, n))
    assert gauge_check(M, a, xs, ys) <= 1e-12


@pytest.mark.parametrize("u, s, want", [(1.0, 1.0, 1.0), (2.0, 0.5, 1.2533141373155001),
                                        (math.pi, 1.75, 0.123974618820853)])
def test_building_block_laplace_examples(u, s, want):
    # the last value is pi^(-7/4) Gamma(7/4) from mpmath
    assert abs(building_block_laplace(u, s).value - want) <= 1e-12


@given(st.floats(0.1, 10.0), st.floats(0.2, 6.0), st.floats(-8.0, 8.0))
def test_building_block_laplace_closed_form(u, x, y):
    s = complex(x, y)
    want = np.exp(-s * math.log(u)) * specfun.gamma(s)
    got = building_block_laplace(u, s).value
    assert abs(got - want) <= 1e-10 * abs(want)


def test_building_block_domain():
    with pytest.raises(DomainError):
        building_block_laplace(1.0, 0.0)


@given(st.floats(0.05, 20.0), st.floats(-30.0, 30.0), st.floats(1e-6, 5.0))
def test_building_block_bounds(u, x, dx):
    # in log form: -u e^-x is negative and strictly increasing
    b = BuildingBlock(u)
    lo, hi = b.log(x), b.log(x + dx)
    assert lo < 0 and hi < 0
    assert lo < hi
    v = b(x)
    assert 0 <= v <= 1


def test_building_block_values_in_open_interval():
    b = BuildingBlock(1.0)
    x = np.linspace(-6.0, 35.0, 200)
    v = b(x)
    assert np.all((v > 0) & (v < 1))
    assert np.all(np.diff(v) > 0)


def test_phi_order_one_audit(self_dual):
    rep = tp_random_audit(PhiKernel(self_dual), 1, 1000, seed=42)
    assert rep.status == "pass"
    assert rep.checks[0].actual >= 0


def test_building_block_order_two_audit():
    rep = tp_random_audit(BuildingBlock(1.0), 2, 10_000, window=3.0, seed=7)
    assert rep.status == "pass"
    worst = next(c for c in rep.checks if c.name == "min_normalized_det")
    assert worst.actual >= -1e-12


def test_phi_order_four_is_audit_only(self_dual):
    rep = tp_random_audit(PhiKernel(self_dual), 4, 10_000, window=3.0, seed=7)
    assert rep.status == "audit"
    assert len(rep.tables["witnesses"]) == 5
    lu_qr = next(c for c in rep.checks if c.name == "lu_vs_qr")
    assert lu_qr.residual <= 1e-8


def test_audit_is_deterministic_and_job_independent(self_dual):
    k = PhiKernel(self_dual)
    a = tp_random_audit(k, 3, 2500, seed=11).to_json()
    b = tp_random_audit(k, 3, 2500, seed=11, jobs=3).to_json()
    c = tp_random_audit(k, 3, 2500, seed=12).to_json()
    assert a == b
    assert a != c


def test_audit_argument_checks(self_dual):
    with pytest.raises(PreconditionError):
        tp_random_audit(BuildingBlock(1.0), 2, 10)
    with pytest.raises(SizeError):
        tp_random_audit(BuildingBlock(1.0), 7, 10, seed=1)


def test_sum_expansion_probe():
    rep = sum_expansion_probe((1.0, 4.0), (1.0, 1.0), 2, 10_000, seed=42)
    assert rep.status == "audit"
    names = {c.name for c in rep.checks}
    assert {"min_sum_minor", "min_mixed_minor", "expansion_identity"} <= names
    ident = next(c for c in rep.checks if c.name == "expansion_identity")
    assert ident.residual <= 1e-8


def test_sum_expansion_single_kernel():
    rep = sum_expansion_probe((1.0, 4.0), (1.0, 0.0), 2, 5000, seed=3)
    assert not rep.failed
    pure = next(c for c in rep.checks if c.name == "min_pure_minor")
    assert pure.actual >= -1e-12


def test_sum_expansion_order_one():
    rep = sum_expansion_probe((0.5, 2.0), (1.0, 2.0), 1, 2000, seed=3)
    assert not rep.failed
    assert next(c for c in rep.checks if c.name == "min_sum_minor").actual >= 0


def test_sum_expansion_deterministic():
    a = sum_expansion_probe((1.0, 4.0), (1.0, 1.0), 2, 3000, seed=9).to_json()
    b = sum_expansion_probe((1.0, 4.0), (1.0, 1.0), 2, 3000, seed=9, jobs=2).to_json()
    assert a == b


def test_kernel_log_matches_value():
    p = KernelParams(3.0, 0.7)
    k = PhiKernel(p)
    x = np.linspace(-2.0, 5.0, 15)
    assert np.allclose(np.exp(k.log(x)), k(x), rtol=1e-15)
