"""Macroscopic kernel parameters shared by the kernel and transform modules."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError

SELF_DUAL_RTOL = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """Macroscopic length ``L`` and diffusion constant ``D``.

    ``alpha = L^2 / (4 D)`` is the space-side Gaussian rate; the self-dual
    scale is ``L^2 = 4 pi D``, equivalently ``alpha = pi``.
    """

    L: float
    D: float

    def __post_init__(self):
        if not (self.L > 0 and self.D > 0):
            raise PreconditionError("L and D must be positive")

    @classmethod
    def self_dual(cls) -> "KernelParams":
        return cls(L=2.0 * math.pi, D=math.pi)

    @property
    def alpha(self) -> float:
        return self.L * self.L / (4.0 * self.D)

    @property
    def self_dual_scale(self) -> bool:
        return abs(self.L * self.L - 4.0 * math.pi * self.D) <= SELF_DUAL_RTOL * self.L * self.L

    @property
    def freq_rate(self) -> float:
        """Frequency-side rate ``4 pi^2 D / L^2 = pi^2 / alpha``."""
        return 4.0 * math.pi ** 2 * self.D / (self.L * self.L)

    @property
    def singular_coeff(self) -> float:
        """``L / sqrt(4 pi D)``, the coefficient of ``t^(-1/2)`` in the trace."""
        return self.L / math.sqrt(4.0 * math.pi * self.D)

    def jacobi_time(self, t):
        """The rescaled time ``t' = 4 pi D t / L^2`` putting the trace in Jacobi form."""
        return (4.0 * math.pi * self.D / (self.L * self.L)) * t
