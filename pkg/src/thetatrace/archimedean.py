"""The completion operator ``A f = d/dt (t^(3/2) f'(t))`` and its Mellin transforms.

``A`` annihilates ``1`` and ``t^(-1/2)``, so applied to ``K_L - 1`` it
removes both singular pieces and leaves a rapidly decaying kernel.  At the
self-dual scale that kernel is ``Theta`` and its Mellin transform is the
completed zeta function ``M(s) = xi(2s - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import PreconditionError, SelfDualRequired, StepTooLarge
from .numerics import DEFAULT_BUDGET, QuadratureSpec, Rule, TruncationBudget, integrate
from .params import KernelParams
from .report import AUDIT, DERIVED, TRIVIAL, AuditReport
from .theta import ThetaValue, _out, _positive, _scaled_budget, completed_trace, gauss_sum, theta_capital

__all__ = [
    "MellinPoint",
    "arch_completed",
    "arch_numeric",
    "arch_numeric_trace",
    "mellin_theta",
    "f_arch",
    "boundary_mellin_check",
    "trace_minus_one",
]

_PI = math.pi
# exp(-pi t) underflows past this; t^(Re s) growth up to Re s = 10 cannot revive it
_THETA_CUTOFF = 300.0
_FINE_BUDGET = TruncationBudget(eps_abs=1e-300)
MELLIN_SPEC = QuadratureSpec(Rule.HALFLINE, max_level=9, target_abs_tol=1e-12)


@dataclass(frozen=True)
class MellinPoint:
    s: complex
    value: complex
    quad_error: float


def arch_completed(params: KernelParams, t, budget: TruncationBudget = DEFAULT_BUDGET) -> ThetaValue:
    """``(A (K_L - 1))(t)`` applied term by term.

    Frequency side, ``r = 4 pi^2 D / L^2``::

        2 sum_{n>=1} (r^2 n^4 t^(3/2) - 1.5 r n^2 t^(1/2)) exp(-r n^2 t)

    Below Jacobi time 1 the space-side series is used instead; ``A`` kills
    the ``m = 0`` term and each ``t^(-1/2) exp(-alpha m^2 / t)`` maps to
    ``(alpha^2 m^4 t^-3 - 1.5 alpha m^2 t^-2) exp(-alpha m^2 / t)``.
    """
    t = _positive(t)
    flat = np.atleast_1d(t)
    out = np.empty_like(flat)
    freq = params.jacobi_time(flat) >= 1.0
    terms, tails = [1], [0.0]
    if np.any(freq):
        tf = flat[freq]
        r = params.freq_rate
        a15, a05 = tf * np.sqrt(tf), np.sqrt(tf)

        def w_freq(n):
            n2 = n * n
            return 2.0 * (r * r * n2 * n2 * a15 - 1.5 * r * n2 * a05)

        s, m, tail = gauss_sum(r * tf, budget, w_freq,
                               log_w0=np.log(2.0 * (r * r * a15 + 1.5 * r * a05)),
                               degree=4, multiplicity=1.0)
        out[freq] = s
        terms.append(m)
        tails.append(tail)
    if np.any(~freq):
        td = flat[~freq]
        al = params.alpha
        c = 2.0 * params.singular_coeff
        w3, w2 = td ** -3.0, td ** -2.0

        def w_dual(n):
            n2 = n * n
            return c * (al * al * n2 * n2 * w3 - 1.5 * al * n2 * w2)

        s, m, tail = gauss_sum(al / td, budget, w_dual,
                               log_w0=np.log(c * (al * al * w3 + 1.5 * al * w2)),
                               degree=4, multiplicity=1.0)
        out[~freq] = s
        terms.append(m)
        tails.append(tail)
    return ThetaValue(_out(out.reshape(t.shape), t), max(terms), max(tails))


_STENCIL_BUDGET = TruncationBudget(1e-40)


def arch_numeric(f, t: float, h: float) -> float:
    """Second-order finite-difference ``A f`` at ``t``.

    In ``v = t^(-1/2)`` the operator reads ``A f = (v^3 / 4) d^2 f / dv^2``,
    so a three-point second difference in ``v`` is exact on ``1`` and
    ``t^(-1/2)``.  The step in ``v`` is ``h`` times ``min(1, |dv/dt|)``,
    i.e. ``h`` measured in whichever of ``t`` and ``v`` moves slower.  The
    weights use the abscissae as actually represented, so rounding in the
    stencil placement does not leak into the result.

    Raises
    ------
    StepTooLarge
        If ``h >= t / 4``.
    """
    t = float(t)
    h = float(h)
    if not (t > 0 and h > 0):
        raise PreconditionError("t and h must be positive")
    if h >= 0.25 * t:
        raise StepTooLarge(f"h = {h:g} must be below t/4 = {0.25 * t:g}")
    v = t ** -0.5
    k = h * min(1.0, 0.5 * t ** -1.5)
    tp, tm = (v - k) ** -2.0, (v + k) ** -2.0
    v0, vp, vm = t ** -0.5, tp ** -0.5, tm ** -0.5
    f0, fp, fm = float(f(t)), float(f(tp)), float(f(tm))
    hp, hm = vp - v0, v0 - vm
    d2 = 2.0 * ((fp - f0) / hp - (f0 - fm) / hm) / (hp + hm)
    return 0.25 * v0 ** 3 * d2


def trace_minus_one(params: KernelParams, t, regular: bool = False):
    """``K_L(t) - 1`` without forming ``K_L`` first.

    With ``regular=True`` the singular part ``L/sqrt(4 pi D t) - 1`` is
    dropped as well, leaving ``K~``; ``A`` and its finite-difference form
    cannot tell the two apart, but the regular part has no cancellation.
    """
    t = _positive(t)
    if regular:
        return completed_trace(params, t).value
    flat = np.atleast_1d(t)
    out = np.empty_like(flat)
    freq = params.jacobi_time(flat) >= 1.0
    if np.any(freq):
        out[freq] = 2.0 * gauss_sum(params.freq_rate * flat[freq])[0]
    if np.any(~freq):
        td = flat[~freq]
        c = params.singular_coeff / np.sqrt(td)
        out[~freq] = (c - 1.0) + 2.0 * c * gauss_sum(params.alpha / td, _scaled_budget(DEFAULT_BUDGET, c))[0]
    return _out(out.reshape(t.shape), t)


def arch_numeric_trace(params: KernelParams, t: float, h: float = 1e-4) -> float:
    """Finite-difference ``A (K_L - 1)`` at ``t``.

    The stencil is exact on ``1`` and ``t^(-1/2)``, so below Jacobi time 1 it
    is applied to ``K~`` (identical result in exact arithmetic, without the
    cancellation between ``K_L`` and its singular term). Above it, the
    frequency-side ``K_L - 1`` is differenced directly.

    All three stencil points use the representation picked at ``t`` and a
    truncation far below double precision: a change of either between
    points is amplified by ``1/h^2``.
    """
    if params.jacobi_time(t) >= 1.0:
        fn = lambda x: 2.0 * gauss_sum(params.freq_rate * np.asarray(x, dtype=float), _STENCIL_BUDGET)[0]
    else:
        c = params.singular_coeff
        fn = lambda x: (2.0 * c * np.asarray(x, dtype=float) ** -0.5
                        * gauss_sum(params.alpha / np.asarray(x, dtype=float), _STENCIL_BUDGET)[0])
    return arch_numeric(fn, t, h)


def _masked(fn, lo=1e-250, hi=_THETA_CUTOFF):
    # the integrands below are exponentially small outside (lo, hi); skip them there
    def wrapped(t):
        out = np.zeros(t.shape, dtype=complex)
        live = (t > lo) & (t < hi)
        if np.any(live):
            out[live] = fn(t[live])
        return out
    return wrapped


def mellin_theta(s, spec: QuadratureSpec = MELLIN_SPEC, budget: TruncationBudget = DEFAULT_BUDGET) -> MellinPoint:
    """``M(s) = int_0^inf Theta(t) t^(s-1) dt``.

    The inversion ``Theta(1/t) = t^(3/2) Theta(t)`` folds ``(0, 1)`` onto
    ``(1, inf)``::

        M(s) = int_1^inf Theta(t) (t^(s-1) + t^(1/2-s)) dt

    so the integrand decays like ``exp(-pi t)`` for every ``s``.
    """
    s = complex(s)
    if abs(s.imag) > 30 or abs(s.real) > 10:
        raise PreconditionError("mellin_theta envelope is |Re s| <= 10, |Im s| <= 30")

    def integrand(tl):
        lt = np.log(tl)
        return theta_capital(tl, budget).value * (np.exp((s - 1.0) * lt) + np.exp((0.5 - s) * lt))

    val, err = integrate(_masked(integrand), spec, lower=1.0)

    return MellinPoint(s, complex(val), err)


def f_arch(z, spec: QuadratureSpec = MELLIN_SPEC, budget: TruncationBudget = DEFAULT_BUDGET,
           params: KernelParams | None = None) -> MellinPoint:
    """``F_arch(z) = int_0^inf (A(K_L - 1))(t) t^(3/4 + i z) dt / t``, equal to ``M(3/4 + i z)``.

    Raises
    ------
    SelfDualRequired
        If ``params`` is given and is not at the self-dual scale.
    """
    if params is not None and not params.self_dual_scale:
        raise SelfDualRequired("F_arch is defined at L^2 = 4 pi D")
    z = complex(z)
    if abs(z.imag) > 5 or abs(z.real) > 15:
        raise PreconditionError("f_arch envelope is |Re z| <= 15, |Im z| <= 5")
    p = mellin_theta(0.75 + 1j * z, spec, budget)
    return MellinPoint(z, p.value, p.quad_error)


def _f_and_derivative(t, regular):
    # self-dual f = theta(t) - 1 (or its regular part K~) and f', to full relative accuracy
    fine = _FINE_BUDGET
    if t >= 1.0:
        s0 = gauss_sum(_PI * t, fine)[0]
        s1 = gauss_sum(_PI * t, fine, weight=lambda n: float(n * n), degree=2, multiplicity=1.0)[0]
        f = 2.0 * s0
        df = -2.0 * _PI * s1
        if regular:
            f = f + 1.0 - t ** -0.5
            df = df + 0.5 * t ** -1.5
        return float(f), float(df)
    c = t ** -0.5
    s0 = gauss_sum(_PI / t, fine)[0]
    s1 = gauss_sum(_PI / t, fine, weight=lambda n: float(n * n), degree=2, multiplicity=1.0)[0]
    kt = 2.0 * c * s0
    dkt = 2.0 * (-0.5 * t ** -1.5 * s0 + _PI * t ** -2.5 * s1)
    if regular:
        return float(kt), float(dkt)
    return float(kt + c - 1.0), float(dkt - 0.5 * t ** -1.5)


def _rhs_split(s, spec, budget):
    # (s-1)(s-1/2) int_0^inf f t^(s-3/2) dt, continued to Re s > 1/2 by folding (0, 1)
    def integrand(t):
        lt = np.log(t)
        g = 2.0 * gauss_sum(_PI * t, budget)[0]
        return g * (np.exp((s - 1.5) * lt) + np.exp(-s * lt))

    val, err = integrate(_masked(integrand), spec, lower=1.0)
    q = (s - 1.0) * (s - 0.5)
    return q * val + 0.5, abs(q) * err


def _rhs_direct(s, spec, budget):
    def integrand(t):
        return trace_minus_one(KernelParams.self_dual(), t) * np.exp((s - 1.5) * np.log(t))

    val, err = integrate(_masked(integrand), spec, lower=0.0)
    q = (s - 1.0) * (s - 0.5)
    return q * val, abs(q) * err


def _decreasing(vals):
    vals = [abs(v) for v in vals]
    return all(b < a or (b == 0.0 and a == 0.0 and i > 0)
               for i, (a, b) in enumerate(zip(vals, vals[1:])))


def boundary_mellin_check(s, eps: float = 0.1, R: float = 5.0, spec: QuadratureSpec = MELLIN_SPEC,
                          budget: TruncationBudget = DEFAULT_BUDGET, rtol: float = 1e-8) -> AuditReport:
    """Integration-by-parts identity for ``A`` under the Mellin transform.

    With ``f = K_L - 1`` at the self-dual scale::

        int (A f) t^(s-1) dt = [t^(s+1/2) f' - (s-1) t^(s-1/2) f]  + (s-1)(s-1/2) int f t^(s-3/2) dt

    The left side is ``M(s)``.  The right integral converges absolutely only
    for ``Re s > 1`` because ``f ~ t^(-1/2)`` at 0; it is evaluated in the
    folded form, which continues it to ``Re s > 1/2``, and for ``Re s > 1``
    also by direct quadrature on ``(0, inf)``.

    Brackets are reported at ``eps * (1, 1/2, 1/4)`` and ``R * (1, 2, 4)``.
    At ``t = R`` they decay for ``f`` itself.  At small ``t`` the raw
    brackets only vanish for ``Re s > 1``; the brackets of the regular part
    ``K~`` (the piece not annihilated by ``A``) vanish for every ``s``.
    """
    s = complex(s)
    if not (0 < eps < 1 < R):
        raise PreconditionError("need 0 < eps < 1 < R")
    if not (0.5 < s.real < 10):
        raise PreconditionError("boundary check needs 1/2 < Re s < 10")
    conditional = s.real <= 1.0
    rep = AuditReport("boundary_mellin", audit=conditional,
                      metadata={"s": [s.real, s.imag], "eps": eps, "R": R,
                                "conditional": conditional})
    lhs = mellin_theta(s, spec, budget)
    rhs, rhs_err = _rhs_split(s, spec, budget)
    res = abs(lhs.value - rhs) / max(abs(lhs.value), 1e-300)
    rep.add("lhs_vs_rhs_folded", f"s={s}", lhs.value, rhs, res, rtol, DERIVED)
    if s.real > 1.0:
        direct, _ = _rhs_direct(s, spec, budget)
        rd = abs(lhs.value - direct) / max(abs(lhs.value), 1e-300)
        rep.add("lhs_vs_rhs_direct", f"s={s}", lhs.value, direct, rd, rtol, DERIVED)
    else:
        rep.notes.append("Re s <= 1: the right integral diverges at 0 for f = K_L - 1; "
                         "only the continued (folded) form is compared, result conditional")

    def brackets(t, regular):
        f, df = _f_and_derivative(t, regular)
        b1 = t ** (s + 0.5) * df
        b2 = (s - 1.0) * t ** (s - 0.5) * f
        return b1, b2

    rows = []
    small = [eps, eps / 2, eps / 4]
    large = [R, 2 * R, 4 * R]
    for label, ladder, regular in (("eps_raw", small, False), ("eps_regular", small, True),
                                   ("R_raw", large, False)):
        b1s, b2s = [], []
        for t in ladder:
            b1, b2 = brackets(t, regular)
            b1s.append(b1)
            b2s.append(b2)
            rows.append({"end": label, "t": t, "b1": abs(b1), "b2": abs(b2)})
        ok = _decreasing(b1s) and (s == 1 or _decreasing(b2s))
        asserted = not (label == "eps_raw" and conditional)
        rep.add(f"bracket_decay_{label}", ladder, 0.0, [abs(b) for b in b1s],
                0.0 if ok else 1.0, 0.0, TRIVIAL if label.startswith("R") else DERIVED,
                asserted=asserted)
    rep.tables["brackets"] = rows
    if conditional:
        rep.notes.append("raw small-t brackets do not vanish at Re s <= 1 (reported, not asserted)")
    rep.add("lhs_quad_error", f"s={s}", None, lhs.quad_error, lhs.quad_error, 1e-9, AUDIT,
            asserted=True)
    rep.metadata["rhs_quad_error"] = rhs_err
    return rep
