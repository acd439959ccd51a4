"""Double-precision complex Gamma, zeta and the completed xi / Xi functions.

These routines are deliberately independent of the theta-series machinery so
that they can serve as the reference side of every Mellin identity checked
elsewhere in the package.  All functions accept Python scalars or numpy
arrays and broadcast; scalar input gives a Python ``complex`` back.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PoleError

__all__ = ["gamma", "zeta", "zeta_times_wm1", "xi_completed", "Xi", "complex_expm1"]

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Stirling series B_2k / (2k (2k-1)), k = 1..12; used for |z| >= _STIRLING_RADIUS
# where the nine-term Lanczos fit loses accuracy off the real axis.
_STIRLING = (
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0,
    -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0, 43867.0 / 244188.0,
    -174611.0 / 125400.0, 77683.0 / 5796.0, -236364091.0 / 1506960.0,
)
_STIRLING_RADIUS = 6.0

# Stieltjes constants gamma_0 .. gamma_10 for the Laurent series of zeta at 1.
_STIELTJES = (
    0.5772156649015328606,
    -0.0728158454836767249,
    -0.0096903631928723185,
    0.0020538344203033459,
    0.0023253700654673000,
    0.0007933238173010627,
    -0.0002387693454301996,
    -0.0005272895670577510,
    -0.0003521233538030395,
    -0.0000343947744180880,
    0.0002053328149090648,
)
_SERIES_RADIUS = 0.1
_LN2 = math.log(2.0)
_BORWEIN_RATE = math.log(3.0 + math.sqrt(8.0))


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    if scalar:
        return complex(arr)
    return arr


def complex_expm1(z):
    """``exp(z) - 1`` without cancellation for small complex ``z``."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    re = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


def _sinpi(z):
    # sin(pi z) reduced by the nearest integer, so it keeps relative accuracy near integers
    k = np.round(z.real)
    return np.where(k % 2 == 0, 1.0, -1.0) * np.sin(math.pi * (z - k))


def _lanczos(z):
    # valid for Re z >= 1/2
    zm = z - 1.0
    acc = np.full_like(zm, _LANCZOS_P[0])
    for i in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _SQRT_2PI * np.exp((zm + 0.5) * np.log(t) - t) * acc


def _stirling(z):
    # valid for Re z >= 1/2, |z| >= _STIRLING_RADIUS
    inv = 1.0 / z
    inv2 = inv * inv
    corr = np.zeros_like(z)
    for c in reversed(_STIRLING):
        corr = corr * inv2 + c
    return np.exp((z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + corr * inv)


def _gamma_right(z):
    out = np.empty_like(z)
    big = np.abs(z) >= _STIRLING_RADIUS
    if np.any(big):
        out[big] = _stirling(z[big])
    if np.any(~big):
        out[~big] = _lanczos(z[~big])
    return out


def _check_gamma_poles(z):
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(bad):
        raise PoleError(f"Gamma has a pole at {z[bad].ravel()[0].real:g}")


def gamma(z):
    """Complex Gamma function.

    Lanczos approximation (Stirling series once ``|z| >= 6``) for
    ``Re z >= 1/2``, reflection
    ``Gamma(z) Gamma(1-z) = pi / sin(pi z)`` otherwise.

    Raises
    ------
    PoleError
        At ``z = 0, -1, -2, ...``.
    OverflowError
        If the result does not fit in double precision.
    """
    z, scalar = _as_complex(z)
    _check_gamma_poles(z)
    out = np.empty_like(z)
    right = z.real >= 0.5
    with np.errstate(over="ignore", invalid="ignore"):
        if np.any(right):
            out[right] = _gamma_right(z[right])
        left = ~right
        if np.any(left):
            zl = z[left]
            out[left] = math.pi / (_sinpi(zl) * _gamma_right(1.0 - zl))
    if not np.all(np.isfinite(out)):
        raise OverflowError("|Gamma(z)| exceeds double range")
    return _ret(out, scalar)


def _borwein_terms(s):
    t = np.max(np.abs(s.imag)) if s.size else 0.0
    n = int(math.ceil((0.5 * math.pi * t + math.log1p(2.0 * t) + 40.0) / _BORWEIN_RATE)) + 2
    return min(max(n, 24), 160)


def _borwein_d(n):
    term = 1.0 / n
    acc = term
    d = np.empty(n + 1)
    d[0] = n * acc
    for i in range(n):
        term *= 4.0 * (n + i) * (n - i) / ((2 * i + 1) * (2 * i + 2))
        acc += term
        d[i + 1] = n * acc
    return d


def _eta(s):
    """Dirichlet eta by Borwein's accelerated alternating series (Re s >= 1/2)."""
    n = _borwein_terms(s)
    d = _borwein_d(n)
    k = np.arange(n)
    coef = ((-1.0) ** k) * (d[:n] - d[n]) / d[n]
    logs = np.log(k + 1.0)
    # compensated accumulation over the term index, vectorized over s
    total = np.zeros_like(s)
    comp = np.zeros_like(s)
    for j in range(n):
        y = coef[j] * np.exp(-s * logs[j]) - comp
        tmp = total + y
        comp = (tmp - total) - y
        total = tmp
    return -total


def _wm1_zeta_right(w):
    """(w - 1) zeta(w) for Re w >= 1/2; entire there."""
    out = np.empty_like(w)
    dw = w - 1.0
    near = np.abs(dw) < _SERIES_RADIUS
    if np.any(near):
        d = dw[near]
        acc = np.ones_like(d)
        power = d.copy()
        fact = 1.0
        for n, g in enumerate(_STIELTJES):
            if n:
                fact *= n
            acc = acc + ((-1.0) ** n) * g * power / fact
            power = power * d
        out[near] = acc
    far = ~near
    if np.any(far):
        wf = w[far]
        out[far] = (wf - 1.0) * _eta(wf) / (-complex_expm1((1.0 - wf) * _LN2))
    return out


def _sin_half_pi_over_s(s):
    # sin(pi s / 2) / s, regular at s = 0
    small = np.abs(s) < 1e-6
    safe = np.where(small, 1.0, s)
    u = 0.5 * math.pi * s
    return np.where(small, 0.5 * math.pi * (1.0 - u * u / 6.0), _sinpi(0.5 * s) / safe)


def zeta_times_wm1(w):
    """The entire function ``(w - 1) zeta(w)``, equal to 1 at ``w = 1``."""
    w, scalar = _as_complex(w)
    out = np.empty_like(w)
    right = w.real >= 0.5
    if np.any(right):
        out[right] = _wm1_zeta_right(w[right])
    left = ~right
    if np.any(left):
        out[left] = (w[left] - 1.0) * _zeta_left(w[left])
    return _ret(out, scalar)


def _zeta_left(s):
    # functional equation; sin(pi s/2) zeta(1-s) = [sin(pi s/2)/(-s)] * [(1-s-1) zeta(1-s)]
    r = 1.0 - s
    return (np.exp(s * _LN2 + (s - 1.0) * math.log(math.pi))
            * gamma(r) * _sin_half_pi_over_s(s) * (-1.0) * _wm1_zeta_right(r))


def zeta(s):
    """Riemann zeta function in double precision.

    Borwein's algorithm on ``Re s >= 1/2``; the functional equation
    supplies the left half-plane.

    Raises
    ------
    PoleError
        At ``s = 1``.
    """
    s, scalar = _as_complex(s)
    if np.any(s == 1.0):
        raise PoleError("zeta has a pole at s = 1")
    out = np.empty_like(s)
    right = s.real >= 0.5
    if np.any(right):
        sr = s[right]
        out[right] = _wm1_zeta_right(sr) / (sr - 1.0)
    left = ~right
    if np.any(left):
        out[left] = _zeta_left(s[left])
    return _ret(out, scalar)


def xi_completed(w):
    """Completed zeta ``xi(w) = w(w-1)/2 * pi^(-w/2) Gamma(w/2) zeta(w)``.

    Evaluated as ``pi^(-w/2) Gamma(1 + w/2) (w-1) zeta(w)`` on ``Re w >= 1/2``,
    where no factor is singular; the left half-plane uses ``xi(w) = xi(1 - w)``,
    which keeps the Gamma poles at ``w = -2, -4, ...`` out of the arithmetic.
    """
    w, scalar = _as_complex(w)
    w = np.where(w.real >= 0.5, w, 1.0 - w)
    out = np.exp(-0.5 * w * math.log(math.pi)) * gamma(1.0 + 0.5 * w) * zeta_times_wm1(w)
    return _ret(out, scalar)


def Xi(z):
    """Riemann Xi function ``Xi(z) = xi(1/2 + i z)``; even and entire."""
    z, scalar = _as_complex(z)
    return _ret(xi_completed(0.5 + 1j * z), scalar)
