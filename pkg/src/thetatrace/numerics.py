"""Quadrature engine and certified truncation of theta-type series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, NonConvergence, PreconditionError

__all__ = [
    "Rule",
    "QuadratureSpec",
    "TruncationBudget",
    "DEFAULT_BUDGET",
    "integrate",
    "theta_terms_needed",
    "tail_bound",
    "compensated_sum",
]


class Rule(str, Enum):
    HALFLINE = "double_exponential_halfline"
    REALLINE = "double_exponential_realline"


@dataclass(frozen=True)
class QuadratureSpec:
    """Rule kind, refinement cap and absolute target for :func:`integrate`."""

    rule: Rule = Rule.HALFLINE
    max_level: int = 8
    target_abs_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        if self.max_level < 1:
            raise PreconditionError("max_level must be >= 1")
        if not self.target_abs_tol > 0:
            raise PreconditionError("target_abs_tol must be positive")


@dataclass(frozen=True)
class TruncationBudget:
    """Absolute tail tolerance and term cap for every theta-type series."""

    eps_abs: float = 1e-16
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.eps_abs > 0:
            raise PreconditionError("eps_abs must be positive")
        if self.max_terms < 1:
            raise PreconditionError("max_terms must be >= 1")


DEFAULT_BUDGET = TruncationBudget()

_HALF_PI = 0.5 * math.pi
_T_MAX = 6.5
_H0 = 0.5
_MIN_LEVEL = 3
_TRIM = 1e-22


def compensated_sum(terms, axis=-1):
    """Neumaier-compensated sum of ``terms`` along ``axis``.

    The summation order is the array order, so results are reproducible
    bit-for-bit for a fixed input layout.
    """
    a = np.moveaxis(np.asarray(terms), axis, 0)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1:], dtype=a.dtype)
    total = a[0].copy()
    comp = np.zeros_like(total)
    for x in a[1:]:
        tmp = total + x
        big = np.abs(total) >= np.abs(x)
        comp = comp + np.where(big, (total - tmp) + x, (x - tmp) + total)
        total = tmp
    return total + comp


def _nodes(rule, lower, tau):
    e = _HALF_PI * np.sinh(tau)
    de = _HALF_PI * np.cosh(tau)
    if rule is Rule.HALFLINE:
        u = np.exp(e)
        return lower + u, de * u
    return np.sinh(e), de * np.cosh(e)


def _eval(f, rule, lower, tau):
    x, w = _nodes(rule, lower, tau)
    with np.errstate(all="ignore"):
        fx = np.asarray(f(x))
        if fx.shape != x.shape:
            fx = np.broadcast_to(fx, x.shape)
        terms = np.where(w == 0, 0.0, fx * w) if np.isrealobj(fx) else np.where(w == 0, 0j, fx * w)
    if not np.all(np.isfinite(terms)):
        bad = x[~np.isfinite(terms)][0]
        raise NonConvergence(f"integrand not finite near abscissa {bad!r}")
    return terms


def integrate(f: Callable, spec: QuadratureSpec, lower: float = 0.0):
    """Integrate a vectorized ``f`` by a double-exponential rule.

    ``Rule.HALFLINE`` covers ``(lower, inf)`` with the exp-sinh map,
    ``Rule.REALLINE`` covers the real line with the sinh-sinh map.
    The step is halved at each level; the returned error estimate is the
    absolute difference of the last two levels.

    Returns
    -------
    value, err_estimate

    Raises
    ------
    NonConvergence
        If the level difference is still above ``spec.target_abs_tol`` at
        ``spec.max_level``, or the integrand returns non-finite values.
    """
    rule = spec.rule
    n0 = int(round(_T_MAX / _H0))
    tau0 = _H0 * np.arange(-n0, n0 + 1)
    terms0 = _eval(f, rule, lower, tau0)
    mag = np.abs(terms0)
    peak = mag.max()
    if peak == 0.0:
        return 0.0 * terms0.sum(), 0.0
    keep = np.nonzero(mag > _TRIM * peak)[0]
    lo_i = max(keep[0] - 1, 0)
    hi_i = min(keep[-1] + 1, len(tau0) - 1)
    t_lo, t_hi = tau0[lo_i], tau0[hi_i]
    core = terms0[lo_i:hi_i + 1]

    h = _H0
    value = h * compensated_sum(core)
    err = math.inf
    for level in range(1, spec.max_level + 1):
        h *= 0.5
        new_tau = np.arange(t_lo + h, t_hi, 2 * h)
        new = _eval(f, rule, lower, new_tau)
        refined = 0.5 * value + h * compensated_sum(new)
        err = float(abs(refined - value))
        value = refined
        if level >= _MIN_LEVEL and err <= spec.target_abs_tol:
            break
    else:
        if err > spec.target_abs_tol:
            raise NonConvergence(
                f"level difference {err:.3e} above target {spec.target_abs_tol:.1e} "
                f"after {spec.max_level} levels"
            )
    if np.iscomplexobj(value):
        return complex(value), err
    return float(value), err


def tail_bound(m: int, a, *, log_w0=0.0, degree: int = 0, multiplicity: float = 2.0):
    """Certified bound on ``multiplicity * sum_{n >= m} w0 n^degree exp(-a n^2)``.

    The tail is dominated by its first term over ``1 - r``, where
    ``r = ((m+1)/m)^degree exp(-a (2m+1))`` bounds every ratio of
    consecutive terms.  Broadcasts over ``a`` and ``log_w0``; entries with
    ``r >= 1`` get ``inf``.
    """
    a = np.asarray(a, dtype=float)
    log_ratio = -a * (2 * m + 1) + degree * math.log1p(1.0 / m)
    log_first = (math.log(multiplicity) + np.asarray(log_w0, dtype=float)
                 + degree * math.log(m) - a * m * m)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.exp(log_first - np.log(-np.expm1(log_ratio)))
    out = np.where(log_ratio < 0, out, np.inf)
    return float(out) if out.ndim == 0 else out


def theta_terms_needed(rate: float, t, budget: TruncationBudget = DEFAULT_BUDGET, *,
                       log_w0=0.0, degree: int = 0, multiplicity: float = 2.0) -> int:
    """Smallest ``M`` whose certified tail over ``n >= M`` is at most ``budget.eps_abs``.

    Summing ``n = 0 .. M-1`` then leaves a remainder bounded by
    :func:`tail_bound`.  For array ``t`` the returned ``M`` serves every
    entry.

    Raises
    ------
    BudgetExceeded
        If no ``M <= budget.max_terms`` qualifies.
    """
    a = rate * np.asarray(t, dtype=float)
    if not np.all(a > 0):
        raise PreconditionError("rate * t must be positive")
    eps = budget.eps_abs
    cap = budget.max_terms

    def ok(m):
        return bool(np.all(tail_bound(m, a, log_w0=log_w0, degree=degree,
                                      multiplicity=multiplicity) <= eps))

    lw = np.broadcast_to(np.asarray(log_w0, dtype=float), np.broadcast(a, np.asarray(log_w0)).shape)
    with np.errstate(over="ignore", invalid="ignore"):
        need = np.sqrt(np.maximum(math.log(multiplicity / eps) + lw, 0.0) / a)
    guess = float(np.max(need)) if need.size else 1.0
    m = max(1, int(min(guess, cap)))
    bad = 0
    step = 1
    while not ok(m):
        bad = m
        if m >= cap:
            raise BudgetExceeded(f"tail above {eps:g} with {cap} terms")
        m = min(cap, m + step)
        step *= 2
    # the smallest admissible M lies in (bad, m]
    while m - bad > 1:
        mid = (bad + m) // 2
        if ok(mid):
            m = mid
        else:
            bad = mid
    return m
