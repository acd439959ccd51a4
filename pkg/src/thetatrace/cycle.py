"""Continuous-time simple random walk on the cycle Z/NZ and its scaling limit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FitError, PreconditionError
from .params import KernelParams
from .report import DERIVED, AuditReport
from .theta import kernel_trace

__all__ = ["CycleSpec", "KernelParams", "heat_kernel_cycle", "trace_scaled", "ulclt_audit", "generator"]


@dataclass(frozen=True)
class CycleSpec:
    """``N`` sites, nearest-neighbour jump rate ``a`` in each direction."""

    N: int
    a: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise PreconditionError("N must be a positive integer")
        if not self.a > 0:
            raise PreconditionError("jump rate a must be positive")


def generator(spec: CycleSpec) -> np.ndarray:
    """Dense generator ``(Qf)(j) = a (f(j+1) - f(j)) + a (f(j-1) - f(j))``."""
    n = spec.N
    q = np.zeros((n, n))
    if n == 1:
        return q
    for j in range(n):
        q[j, (j + 1) % n] += spec.a
        q[j, (j - 1) % n] += spec.a
        q[j, j] -= 2.0 * spec.a
    return q


def _modes(n):
    # k = 0, then pairs (k, N-k) folded into one cosine with weight 2, then k = N/2 for even N
    half = n // 2
    ks = np.arange(half + 1)
    w = np.full(half + 1, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[half] = 1.0
    return ks, w


def heat_kernel_cycle(spec: CycleSpec, t, j) -> float | np.ndarray:
    """Transition probability ``p_t(0, j)`` from the spectral sum.

    ``p_t(0, j) = (1/N) sum_k exp(-4 a t sin^2(pi k / N)) cos(2 pi k j / N)``.
    ``sin^2`` replaces ``1 - cos`` to keep small eigenvalues accurate, and
    the modes ``k``, ``N - k`` are folded together so the result is real and
    exactly symmetric in ``j -> N - j``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise PreconditionError("t must be nonnegative")
    n = spec.N
    jj = np.mod(np.asarray(j), n)
    ks, w = _modes(n)
    lam = 4.0 * spec.a * np.sin(math.pi * ks / n) ** 2
    # reduce k*j mod N before scaling so the angle is exact for large j
    phase = np.cos(2.0 * math.pi * np.mod(np.multiply.outer(jj, ks), n) / n)
    decay = np.exp(-np.multiply.outer(t, lam))
    vals = np.einsum("...k,jk->...j", decay * w, phase.reshape(-1, len(ks))) / n
    vals = vals.reshape(t.shape + jj.shape)
    if vals.ndim == 0:
        return float(vals)
    return vals


def trace_scaled(N: int, params: KernelParams, t) -> float | np.ndarray:
    """``N p_{s^2 t}(0, 0)`` on the cycle with ``a = D`` and ``s = N / L``.

    The diffusively rescaled return probability; tends to ``K_L(t)`` as
    ``N -> inf``.
    """
    if N < 2:
        raise PreconditionError("trace_scaled needs N >= 2")
    s = N / params.L
    spec = CycleSpec(int(N), params.D)
    return N * heat_kernel_cycle(spec, s * s * np.asarray(t, dtype=float), 0)


def ulclt_audit(Ns, ts, params: KernelParams, min_rate: float = 0.75) -> AuditReport:
    """Convergence rate of the rescaled cycle trace to ``K_L``.

    ``e(N) = max_t |trace_scaled(N, t) - K_L(t)|``; the rate ``rho`` is the
    least-squares slope of ``-log e`` against ``log N``.  Passes iff
    ``rho >= min_rate`` and ``e`` strictly decreases along ``Ns``.

    Raises
    ------
    PreconditionError
        Nonpositive times, ``N < 16`` or non-increasing ``Ns``.
    FitError
        Fewer than two distinct ``N``.
    """
    Ns = [int(n) for n in Ns]
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0 or np.any(ts <= 0):
        raise PreconditionError("ts must be nonempty and positive")
    if len(set(Ns)) < 2:
        raise FitError("need at least two distinct N for a rate fit")
    if any(n < 16 for n in Ns):
        raise PreconditionError("each N must be >= 16")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise PreconditionError("Ns must be strictly increasing")
    ref = np.atleast_1d(kernel_trace(params, ts).value)
    errs = []
    rows = []
    for n in Ns:
        approx = np.atleast_1d(trace_scaled(n, params, ts))
        e = float(np.max(np.abs(approx - ref)))
        errs.append(e)
        rows.append({"N": n, "e": e, "argmax_t": float(ts[np.argmax(np.abs(approx - ref))])})
    x = np.log(np.asarray(Ns, dtype=float))
    y = np.log(np.asarray(errs))
    rho = -float(np.polyfit(x, y, 1)[0])
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    rep = AuditReport("ulclt", metadata={"L": params.L, "D": params.D, "t_min": float(ts.min()),
                                         "t_max": float(ts.max())})
    rep.tables["errors"] = rows
    rep.add("rate_exponent", f"Ns={Ns}", min_rate, rho, max(0.0, min_rate - rho), 0.0, DERIVED)
    rep.add("strictly_decreasing", f"Ns={Ns}", True, decreasing, 0.0 if decreasing else 1.0, 0.0, DERIVED)
    rep.metadata["rho"] = rho
    return rep
