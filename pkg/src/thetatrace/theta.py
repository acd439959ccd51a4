"""Theta-series kernels with certified truncation.

Every kernel has a frequency-side series (fast for large time) and a
space-side, Poisson-summed series (fast for small time).  The split point is
Jacobi time ``t' = 1``, where both converge at the same geometric rate.
The two pure representations are exposed for cross-checking; the remaining
kernels switch internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .numerics import DEFAULT_BUDGET, TruncationBudget, tail_bound, theta_terms_needed
from .params import KernelParams

__all__ = [
    "ThetaValue",
    "gauss_sum",
    "jacobi_theta",
    "trace_limit",
    "trace_limit_dual",
    "kernel_trace",
    "completed_trace",
    "sym_kernel",
    "theta_capital",
]

_PI = math.pi


@dataclass(frozen=True)
class ThetaValue:
    """Series value with the number of leading terms used and its tail certificate.

    ``value`` is a float for scalar input and an array otherwise; in the
    array case ``terms_used`` and ``tail_bound`` are the worst entries.
    """

    value: float | np.ndarray
    terms_used: int
    tail_bound: float

    def __float__(self):
        return float(self.value)


def _positive(t, what="t"):
    arr = np.asarray(t, dtype=float)
    if not np.all(arr > 0):
        raise PreconditionError(f"{what} must be positive")
    return arr


def _out(arr, scalar_like):
    return float(arr) if np.ndim(scalar_like) == 0 else arr


def gauss_sum(a, budget: TruncationBudget = DEFAULT_BUDGET, weight=None, *,
              log_w0=0.0, degree=0, multiplicity=2.0):
    """``sum_{n=1}^{M-1} weight(n) exp(-a n^2)`` with ``M`` certified by the budget.

    ``weight(n)`` may return an array broadcasting against ``a``; its modulus
    must be bounded by ``exp(log_w0) n^degree``.  The certificate covers
    ``multiplicity`` copies of the omitted tail (2 for sums over ``n != 0``).

    Returns ``(partial_sum, M, tail)``.
    """
    a = np.asarray(a, dtype=float)
    m = theta_terms_needed(1.0, a, budget, log_w0=log_w0, degree=degree,
                           multiplicity=multiplicity)
    total = np.zeros(np.broadcast(a, np.asarray(log_w0)).shape)
    comp = np.zeros_like(total)
    for n in range(1, m):
        term = np.exp(-a * (n * n))
        if weight is not None:
            term = weight(n) * term
        tmp = total + term
        big = np.abs(total) >= np.abs(term)
        comp = comp + np.where(big, (total - tmp) + term, (term - tmp) + total)
        total = tmp
    tail = tail_bound(m, a, log_w0=log_w0, degree=degree, multiplicity=multiplicity)
    return total + comp, m, float(np.max(tail))


def _scaled_budget(budget, scale):
    # the series gets multiplied by `scale`; tighten its tail target accordingly
    s = float(np.max(scale))
    if s <= 1.0:
        return budget
    return TruncationBudget(max(budget.eps_abs / s, 1e-300), budget.max_terms)


def _relative_budget(budget, scale, a):
    # K~ is the m != 0 sum alone, so the target must also sit below its leading term
    # scale * exp(-a); otherwise a tiny but positive value truncates to 0
    b = _scaled_budget(budget, scale)
    with np.errstate(under="ignore"):
        lead = float(np.min(scale * np.exp(-a)))
    eps = min(b.eps_abs, 1e-17 * lead / float(np.max(scale)))
    return TruncationBudget(max(eps, 1e-300), budget.max_terms)


def jacobi_theta(u, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """``sum_{n in Z} exp(-pi n^2 u)`` by direct summation."""
    u = _positive(u, "u")
    s, m, tail = gauss_sum(_PI * u, budget)
    return ThetaValue(_out(1.0 + 2.0 * s, u), m, tail)


def trace_limit(params: KernelParams, t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """Frequency-side trace ``K_L(t) = sum_n exp(-4 pi^2 D n^2 t / L^2)``."""
    t = _positive(t)
    s, m, tail = gauss_sum(params.freq_rate * t, budget)
    return ThetaValue(_out(1.0 + 2.0 * s, t), m, tail)


def trace_limit_dual(params: KernelParams, t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """Space-side trace ``L/sqrt(4 pi D t) * sum_m exp(-m^2 L^2 / (4 D t))``."""
    t = _positive(t)
    c = params.singular_coeff / np.sqrt(t)
    s, m, tail = gauss_sum(params.alpha / t, _scaled_budget(budget, c))
    return ThetaValue(_out(c * (1.0 + 2.0 * s), t), m, float(np.max(c)) * tail)


def kernel_trace(params: KernelParams, t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """``K_L(t)`` from whichever representation converges faster at each ``t``."""
    t = _positive(t)
    flat = np.atleast_1d(t)
    out = np.empty_like(flat)
    freq = params.jacobi_time(flat) >= 1.0
    terms, tails = [1], [0.0]
    if np.any(freq):
        v = trace_limit(params, flat[freq], budget)
        out[freq] = v.value
        terms.append(v.terms_used)
        tails.append(v.tail_bound)
    if np.any(~freq):
        v = trace_limit_dual(params, flat[~freq], budget)
        out[~freq] = v.value
        terms.append(v.terms_used)
        tails.append(v.tail_bound)
    return ThetaValue(_out(out.reshape(t.shape), t), max(terms), max(tails))


def completed_trace(params: KernelParams, t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """``K~(t) = K_L(t) - L/sqrt(4 pi D t)``, always positive.

    Below Jacobi time 1 the ``m != 0`` space-side sum is used directly, so
    the singular term is never subtracted where it dominates.
    """
    t = _positive(t)
    flat = np.atleast_1d(t)
    out = np.empty_like(flat)
    freq = params.jacobi_time(flat) >= 1.0
    terms, tails = [1], [0.0]
    if np.any(freq):
        tf = flat[freq]
        s, m, tail = gauss_sum(params.freq_rate * tf, budget)
        out[freq] = (1.0 + 2.0 * s) - params.singular_coeff / np.sqrt(tf)
        terms.append(m)
        tails.append(tail)
    if np.any(~freq):
        td = flat[~freq]
        c = params.singular_coeff / np.sqrt(td)
        s, m, tail = gauss_sum(params.alpha / td, _relative_budget(budget, c, params.alpha / td))
        out[~freq] = 2.0 * c * s
        terms.append(m)
        tails.append(float(np.max(c)) * tail)
    return ThetaValue(_out(out.reshape(t.shape), t), max(terms), max(tails))


def sym_kernel(params: KernelParams, t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """Half-density kernel ``t^(-1/2) K~(t)``."""
    t = _positive(t)
    v = completed_trace(params, t, budget)
    scale = 1.0 / np.sqrt(t)
    return ThetaValue(_out(scale * v.value, t), v.terms_used, float(np.max(scale)) * v.tail_bound)


def _theta_capital_direct(u, budget):
    # sum_{n>=1} (2 pi^2 n^4 u^{3/2} - 3 pi n^2 u^{1/2}) e^{-pi n^2 u}, for u >= 1
    u15 = u * np.sqrt(u)
    u05 = np.sqrt(u)

    def weight(n):
        n2 = n * n
        return 2.0 * _PI ** 2 * n2 * n2 * u15 - 3.0 * _PI * n2 * u05

    log_w0 = np.log(2.0 * _PI ** 2 * u15 + 3.0 * _PI * u05)
    return gauss_sum(_PI * u, budget, weight, log_w0=log_w0, degree=4, multiplicity=1.0)


def theta_capital(t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """``Theta(t) = sum_{n>=1} (2 pi^2 n^4 t^(3/2) - 3 pi n^2 t^(1/2)) exp(-pi n^2 t)``.

    For ``t < 1`` the inversion ``Theta(t) = t^(-3/2) Theta(1/t)`` is used,
    which avoids summing ``O(t^(-1/2))`` terms that cancel to an
    exponentially small result.
    """
    t = _positive(t)
    flat = np.atleast_1d(t)
    out = np.empty_like(flat)
    big = flat >= 1.0
    terms, tails = [1], [0.0]
    if np.any(big):
        s, m, tail = _theta_capital_direct(flat[big], budget)
        out[big] = s
        terms.append(m)
        tails.append(tail)
    if np.any(~big):
        ts = flat[~big]
        scale = ts ** -1.5
        s, m, tail = _theta_capital_direct(1.0 / ts, _scaled_budget(budget, scale))
        out[~big] = scale * s
        terms.append(m)
        tails.append(float(np.max(scale)) * tail)
    return ThetaValue(_out(out.reshape(t.shape), t), max(terms), max(tails))
