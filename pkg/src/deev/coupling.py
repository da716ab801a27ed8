"""SU(2) two-mode couplers: beam splitter and dual-channel directional coupler.

A coupler is a pair of complex amplitudes (a1, a2) with |a1|^2 + |a2|^2 = 1.
The moduli (|a1|, |a2|) feed the vortex generator as the (eta_x, eta_y)
weights; relative phases are absorbed into the vortex sign and an overall
phase of the state.
"""

import cmath
import math
from dataclasses import dataclass

from scipy.optimize import brentq

__all__ = [
    "ModeCoupler",
    "DcdcParams",
    "InfeasibleRatioError",
    "bs_coupler",
    "dcdc_coupler",
    "coupler_to_ellipticity",
    "dcdc_time_for_ratio",
]

_UNITARITY_TOL = 1e-12


class InfeasibleRatioError(ValueError):
    """No coupler time achieves the requested |a1|/|a2| ratio.

    ``infimum`` carries the smallest achievable ratio (delta/g).
    """

    def __init__(self, ratio, infimum):
        super().__init__(
            f"no time t > 0 gives |a1|/|a2| = {ratio:g}; "
            f"the achievable infimum is delta/g = {infimum:g}"
        )
        self.ratio = ratio
        self.infimum = infimum


@dataclass(frozen=True)
class ModeCoupler:
    """Validated SU(2) amplitude pair (a1, a2)."""

    a1: complex
    a2: complex

    def __post_init__(self):
        norm = abs(self.a1) ** 2 + abs(self.a2) ** 2
        if abs(norm - 1.0) > _UNITARITY_TOL:
            raise ValueError(f"|a1|^2 + |a2|^2 = {norm!r}, not unitary")

    def phase_condition_residual(self):
        """|a1* a2 + a1 a2*|; zero for phase-matched couplers.

        Holds exactly for phi in {0, pi} beam splitters and for zero-detuning
        directional couplers; nonzero otherwise.
        """
        return abs(self.a1.conjugate() * self.a2 + self.a1 * self.a2.conjugate())

    def ellipticity(self):
        return coupler_to_ellipticity(self)


@dataclass(frozen=True)
class DcdcParams:
    """Directional-coupler drive: strength g, half-detuning delta, time t."""

    g: float
    delta: float
    t: float

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"coupling strength g must be > 0, got {self.g!r}")
        if self.t < 0:
            raise ValueError(f"interaction time t must be >= 0, got {self.t!r}")

    @property
    def omega(self):
        return math.hypot(self.delta, self.g)


def bs_coupler(theta, phi):
    """Beam-splitter coupler from mixing angle theta and phase phi.

    Returns (cos theta, -i e^{i phi} sin theta).
    """
    a1 = complex(math.cos(theta), 0.0)
    a2 = -1j * cmath.exp(1j * phi) * math.sin(theta)
    return ModeCoupler(a1=a1, a2=a2)


def dcdc_coupler(p):
    """Coupler after evolving a :class:`DcdcParams` drive for time t.

    a1 = cos(Omega t) - i (delta/Omega) sin(Omega t),
    a2 = i (g/Omega) sin(Omega t), Omega = sqrt(delta^2 + g^2).
    """
    w = p.omega
    s, c = math.sin(w * p.t), math.cos(w * p.t)
    return ModeCoupler(a1=complex(c, -p.delta / w * s), a2=complex(0.0, p.g / w * s))


def coupler_to_ellipticity(c):
    """Vortex generator weights (eta_x, eta_y) = (|a1|, |a2|)."""
    return abs(c.a1), abs(c.a2)


def dcdc_time_for_ratio(ratio, g, delta):
    """Smallest t > 0 with |a1(t)|/|a2(t)| = ratio, on Omega*t in (0, pi/2].

    The ratio decreases monotonically from +inf at t -> 0 to delta/g at
    Omega*t = pi/2, so the first branch carries a unique solution whenever
    ratio >= delta/g; smaller ratios are unreachable at any time.
    """
    if not ratio > 0:
        raise ValueError(f"ratio must be > 0, got {ratio!r}")
    if not g > 0:
        raise ValueError(f"coupling strength g must be > 0, got {g!r}")
    infimum = abs(delta) / g
    if ratio < infimum:
        raise InfeasibleRatioError(ratio, infimum)
    omega = math.hypot(delta, g)

    def residual(theta):
        p = DcdcParams(g=g, delta=delta, t=theta / omega)
        c = dcdc_coupler(p)
        return abs(c.a1) - ratio * abs(c.a2)

    lo, hi = 1e-14, math.pi / 2
    if residual(hi) > 0:
        # ratio == infimum up to rounding; the branch endpoint is the answer
        return hi / omega
    theta = brentq(residual, lo, hi, xtol=1e-15, rtol=8.9e-16)
    return theta / omega
