"""Argument-principle counting on rectangles and bracketed real root finding."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import BoundaryTooClose, NoBracket, PreconditionError, UnwrapFailure
from .params import KernelParams
from .report import AUDIT, DERIVED, AuditReport

__all__ = ["Rectangle", "argument_count", "winding", "find_real_zero", "symmetry_probe", "xi_count_check",
           "laplace_closed_fn"]

MIN_BOUNDARY_MODULUS = 1e-8
MAX_EDGE_POINTS = 2 ** 14
_MAX_STEP = 0.5 * math.pi
_INTEGER_TOL = 1e-3


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise PreconditionError("rectangle needs re_min < re_max and im_min < im_max")

    def corners(self):
        """Counter-clockwise from the lower-left corner."""
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    def reflected(self, center: float) -> "Rectangle":
        """Image under ``s -> 2 center - s``."""
        return Rectangle(2 * center - self.re_max, 2 * center - self.re_min, -self.im_max, -self.im_min)


def _evaluate(G, z):
    try:
        out = np.asarray(G(z), dtype=complex)
        if out.shape == z.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([complex(G(complex(v))) for v in z])


def _edge_phase(G, a, b, samples):
    u = np.linspace(0.0, 1.0, samples + 1)
    vals = _evaluate(G, a + (b - a) * u)
    while True:
        if np.min(np.abs(vals)) < MIN_BOUNDARY_MODULUS:
            raise BoundaryTooClose(f"|G| = {np.min(np.abs(vals)):.2e} on the edge {a} -> {b}")
        step = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(step) >= _MAX_STEP)[0]
        if bad.size == 0:
            return float(step.sum()), len(u)
        if len(u) + bad.size > MAX_EDGE_POINTS:
            raise UnwrapFailure(f"phase still jumps after {len(u)} points on edge {a} -> {b}")
        mids = 0.5 * (u[bad] + u[bad + 1])
        mvals = _evaluate(G, a + (b - a) * mids)
        u = np.insert(u, bad + 1, mids)
        vals = np.insert(vals, bad + 1, mvals)


def winding(G, rect: Rectangle, samples_per_edge: int = 256) -> float:
    """Raw winding number of ``G`` around the boundary of ``rect`` (not rounded)."""
    c = rect.corners()
    total = 0.0
    for a, b in zip(c, c[1:] + c[:1]):
        d, _ = _edge_phase(G, a, b, samples_per_edge)
        total += d
    return total / (2.0 * math.pi)


def argument_count(G, rect: Rectangle, samples_per_edge: int = 256) -> int:
    """Zeros minus poles of ``G`` inside ``rect`` by phase unwrapping along the boundary.

    Each edge starts with ``samples_per_edge`` intervals; intervals whose
    phase step reaches ``pi/2`` are bisected until none does.

    Raises
    ------
    BoundaryTooClose
        If ``|G| < 1e-8`` at a boundary sample.
    UnwrapFailure
        If an edge needs more than ``2^14`` points or the winding is not
        within ``1e-3`` of an integer.
    """
    w = winding(G, rect, samples_per_edge)
    k = round(w)
    if abs(w - k) > _INTEGER_TOL:
        raise UnwrapFailure(f"winding {w:.6f} is not an integer")
    return int(k)


def find_real_zero(F, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root of a real function in ``[lo, hi]`` by safeguarded secant steps.

    Regula falsi steps alternate with bisections, so the bracket shrinks by
    at least half every two evaluations.

    Raises
    ------
    NoBracket
        If ``F(lo)`` and ``F(hi)`` do not have opposite signs.
    """
    a, b = float(lo), float(hi)
    fa, fb = float(F(a)), float(F(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0 or not (math.isfinite(fa) and math.isfinite(fb)):
        raise NoBracket(f"F({a}) = {fa:g} and F({b}) = {fb:g} have the same sign")
    for it in range(max_iter):
        if b - a <= tol:
            break
        x = b - fb * (b - a) / (fb - fa)
        # every other step is a bisection, so the bracket at least halves per two steps
        if it % 2 or not (a < x < b):
            x = 0.5 * (a + b)
        fx = float(F(x))
        if fx == 0.0:
            return x
        if (fx < 0) == (fa < 0):
            a, fa = x, fx
        else:
            b, fb = x, fx
    return 0.5 * (a + b)


def laplace_closed_fn(params: KernelParams):
    """The continued closed-form transform ``s -> B(s)`` as a vectorized callable."""
    from .logkernel import bilateral_laplace_closed

    return lambda s: bilateral_laplace_closed(params, s)


def symmetry_probe(rect: Rectangle, G=None, centers=(0.25, -0.5), samples_per_edge: int = 256,
                   params: KernelParams | None = None) -> AuditReport:
    """Compare zero counts in ``rect`` and in its image under ``s -> 2c - s`` for each center ``c``.

    ``G`` defaults to the continued closed-form Laplace transform of ``Phi``.
    Counts are recorded, never asserted.
    """
    params = params or KernelParams.self_dual()
    if G is None:
        G = laplace_closed_fn(params)
    rep = AuditReport("zeros_symmetry_probe", audit=True,
                      metadata={"rect": [rect.re_min, rect.re_max, rect.im_min, rect.im_max],
                                "centers": list(centers)})
    base = argument_count(G, rect, samples_per_edge)
    rows = []
    for c in centers:
        img = rect.reflected(c)
        n = argument_count(G, img, samples_per_edge)
        rows.append({"center": c, "count": base, "reflected_count": n, "equal": base == n,
                     "reflected_rect": f"[{img.re_min:g},{img.re_max:g}]x[{img.im_min:g},{img.im_max:g}]"})
        rep.add(f"count_match[center={c:g}]", str(rect), base, n, abs(base - n), None, AUDIT,
                asserted=False)
    rep.tables["counts"] = rows
    return rep


def xi_count_check(samples_per_edge: int = 256) -> AuditReport:
    """Known counts: one zero of xi in ``[-1,2] x [10,20]``, none in ``[-1,2] x [0.5,10]``, a Gamma pole at -1."""
    rep = AuditReport("zeros")
    cases = [
        ("xi_first_zero", specfun.xi_completed, Rectangle(-1, 2, 10, 20), 1),
        ("xi_below_first", specfun.xi_completed, Rectangle(-1, 2, 0.5, 10), 0),
        ("gamma_pole", specfun.gamma, Rectangle(-1.4, -0.6, -0.4, 0.4), -1),
    ]
    for name, g, r, want in cases:
        got = argument_count(g, r, samples_per_edge)
        rep.add(name, str(r), want, got, abs(got - want), 0, DERIVED)
    first = find_real_zero(lambda z: specfun.Xi(2 * z).real, 6.5, 7.5, 1e-12)
    rep.add("xi_double_first_zero", "bracket (6.5, 7.5)", 7.067362570867347, first,
            abs(first - 7.067362570867347), 1e-9, DERIVED)
    return rep
