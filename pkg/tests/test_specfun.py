import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from thetatrace import specfun
from thetatrace.errors import PoleError

# reference values from mpmath at 40 digits
GAMMA_REF = [
    (0.75, 1.2254167024651776),
    (3.3 + 2.1j, -0.9070406040662633 + 0.9374767645324198j),
    (-2.5 + 0.5j, -0.33387520352243233 - 0.20645730796360842j),
    (0.1 - 7j, 1.847258471388663e-05 + 5.625609535565905e-06j),
    (25 + 30j, 8.494583959888405e16 + 1.0214362322850312e17j),
    (-10.3, -5.26236323953561e-07),
]
ZETA_REF = [
    (0.5, -1.4603545088095868),
    (3 + 4j, 0.8905549069650732 - 0.00807594542432726j),
    (0.5 + 14j, 0.02224114260999359 - 0.10325812326645006j),
    (-3.5 + 1j, 0.004550671483806785 + 0.012344456932855458j),
    (1.0001, 10000.577222947539),
    (0.999, -999.4228571557879),
    (-7.0, 0.004166666666666667),
    (2 + 30j, 0.8258798243158264 - 0.2690338274973063j),
]
XI_REF = [
    (0.5 + 3j, 0.403165207257074),
    (2 - 5j, 0.2735939440500619 - 0.103070574649728j),
    (-1.5 + 20j, 7.018659744276138e-05 + 7.309788652278974e-05j),
    (0.3, 0.4975804146511269),
]


@pytest.mark.parametrize("z, want", GAMMA_REF)
def test_gamma_against_reference(z, want):
    assert abs(specfun.gamma(z) - want) <= 1e-13 * abs(want)


@pytest.mark.parametrize("z, want", [(0.5, 1.7724538509055160), (5, 24.0), (0.75, 1.2254167024651777)])
def test_gamma_examples(z, want):
    assert specfun.gamma(z) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7, -30])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        specfun.gamma(z)


@pytest.mark.parametrize("s, want", ZETA_REF)
def test_zeta_against_reference(s, want):
    assert abs(specfun.zeta(s) - want) <= 1e-12 * abs(want)


def test_zeta_examples():
    assert specfun.zeta(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert specfun.zeta(4) == pytest.approx(1.0823232337111382, rel=1e-15)
    assert specfun.zeta(0.5) == pytest.approx(-1.4603545088095868, rel=1e-14)


def test_zeta_pole():
    with pytest.raises(PoleError):
        specfun.zeta(1.0)


def test_zeta_trivial_zeros():
    for k in (1, 2, 5):
        assert abs(specfun.zeta(-2.0 * k)) < 1e-14


@pytest.mark.parametrize("w, want", XI_REF)
def test_xi_against_reference(w, want):
    assert abs(specfun.xi_completed(w) - want) <= 1e-12 * (1 + abs(want))


def test_xi_examples():
    assert specfun.xi_completed(0.5) == pytest.approx(0.4971207781883157, rel=1e-13)
    assert specfun.xi_completed(1.0) == pytest.approx(0.5, rel=1e-15)
    assert specfun.xi_completed(0.0) == pytest.approx(0.5, rel=1e-15)


def test_Xi_examples():
    assert specfun.Xi(0.0) == pytest.approx(0.4971207781883157, rel=1e-13)
    assert abs(specfun.Xi(14.134725141734693)) < 1e-9
    assert specfun.Xi(3.0) == pytest.approx(specfun.Xi(-3.0), rel=1e-13)


def test_vectorized_matches_scalar():
    z = np.array([0.3 + 1j, 2.5, -3.2 - 4j])
    vec = specfun.gamma(z)
    assert np.allclose(vec, [specfun.gamma(v) for v in z], rtol=0, atol=0)


# the domain of the recurrence property: |z| <= 50 keeps Gamma(z+1) finite
complex_disc = st.builds(lambda r, th: r * complex(math.cos(th), math.sin(th)),
                         st.floats(0.0, 49.0), st.floats(0.0, 2 * math.pi))


@given(complex_disc)
def test_gamma_recurrence(z):
    if abs(z - round(z.real)) < 1e-6 and round(z.real) <= 0:
        return
    g1 = specfun.gamma(z + 1)
    assert abs(g1 - z * specfun.gamma(z)) <= 1e-13 * abs(g1)


@given(st.floats(-20, 20), st.floats(-25, 25))
def test_gamma_reflection(x, y):
    z = complex(x, y)
    s = complex(np.sin(np.pi * z))
    if abs(s) < 1e-3:
        return
    lhs = specfun.gamma(z) * specfun.gamma(1 - z)
    assert abs(lhs - np.pi / s) <= 1e-11 * abs(np.pi / s)


@given(st.floats(-2, 3), st.floats(-30, 30))
def test_xi_functional_equation(x, y):
    w = complex(x, y)
    a = specfun.xi_completed(w)
    assert abs(a - specfun.xi_completed(1 - w)) <= 1e-11 * (1 + abs(a))


@given(st.floats(-6, 0.4), st.floats(-20, 20))
def test_xi_left_half_plane_matches_definition(x, y):
    # the left half-plane goes through the reflection; check it against the raw product
    w = complex(x, y)
    assume(abs(w) > 0.1 and min(abs(w + 2 * k) for k in range(1, 4)) > 0.1)
    raw = 0.5 * w * (w - 1) * np.pi ** (-w / 2) * specfun.gamma(w / 2) * specfun.zeta(w)
    assert abs(specfun.xi_completed(w) - raw) <= 1e-11 * abs(raw)


@given(st.floats(-30, 30))
def test_Xi_even_and_real(z):
    a = specfun.Xi(z)
    assert abs(a - specfun.Xi(-z)) <= 1e-11 * max(abs(a), 1e-300)
    assert abs(complex(a).imag) <= 1e-11 * max(abs(a), 1e-30)


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_complex_expm1_accurate_near_zero(x, y):
    z = complex(x, y) * 1e-9
    got = specfun.complex_expm1(z)
    want = z + z * z / 2 + z ** 3 / 6
    assert abs(got - want) <= 1e-15 * max(abs(want), 1e-300)


# mpmath at 40 digits, next to the trivial zeros and Gamma poles
NEAR_SINGULAR = [
    (specfun.xi_completed, -1.999999999, 0.5739398939811021),
    (specfun.xi_completed, -3.9999999999, 0.7879706062544983),
    (specfun.xi_completed, -1.5 + 3j, 0.426688174705314 - 0.12243998424255394j),
    (specfun.gamma, -2.999999999, -166666653.08595893),
    (specfun.gamma, -0.499999999999, -3.5449077018111614),
    (specfun.zeta, -2 + 1e-9, -3.0448459610591665e-11),
]


@pytest.mark.parametrize("f, z, want", NEAR_SINGULAR)
def test_near_trivial_zeros_and_poles(f, z, want):
    assert abs(f(z) - want) <= 1e-13 * abs(want)
