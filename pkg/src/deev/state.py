"""Displaced elliptical-elliptical vortex (DEEV) state and its spatial field.

The state is an m-fold vortex factor ``[eta_x a_x^+ +/- i eta_y a_y^+]^m``
applied to a two-mode squeezed-displaced vacuum. In position space that is

    psi(x, y) = N [eta_x (x - x0) +/- i eta_y (y - y0)]^m
                * exp(-((x - x0)/sigma_x)^2 / 2 - ((y - y0)/sigma_y)^2 / 2)
                * exp(i (px0 (x - x0) + py0 (y - y0)))

with sigma_i = exp(2 zeta_i). The plane-wave factor realises the momentum
displacement; it drops out of every |psi|^2 quantity. The normalization
constant is computed by Gauss-Hermite quadrature at construction (exact for
the polynomial-times-Gaussian integrand), never transcribed.
"""

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .gridio import sample_field

__all__ = ["DeevParams", "VortexDecomposition", "psi", "intensity_field", "circular_decomposition"]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DeevParams:
    """Full parameterization of a DEEV state.

    m is the vorticity, (eta_x, eta_y) the vortex generator weights, sign
    the +/- orientation of the vortex, zeta_i the squeezing parameters
    (sigma_i = exp(2 zeta_i)), (x0, y0) the position displacements and
    (px0, py0) the momentum displacements.
    """

    m: int
    eta_x: float
    eta_y: float
    sign: int = +1
    zeta_x: float = 0.0
    zeta_y: float = 0.0
    x0: float = 0.0
    y0: float = 0.0
    px0: float = 0.0
    py0: float = 0.0

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise ValueError(f"vorticity m must be a nonnegative integer, got {self.m!r}")
        if self.sign not in (+1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if not (self.eta_x ** 2 + self.eta_y ** 2 > 0):
            raise ValueError("eta_x and eta_y cannot both vanish")
        for name in ("eta_x", "eta_y", "zeta_x", "zeta_y", "x0", "y0", "px0", "py0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def from_sigmas(cls, m, sigma_x, sigma_y, eta_x, eta_y, **kwargs):
        """Construct with beam widths given directly (zeta_i = ln(sigma_i)/2)."""
        if not (sigma_x > 0 and sigma_y > 0):
            raise ValueError("beam widths must be positive")
        return cls(m=m, eta_x=eta_x, eta_y=eta_y,
                   zeta_x=0.5 * math.log(sigma_x), zeta_y=0.5 * math.log(sigma_y), **kwargs)

    @classmethod
    def tied(cls, m, sigma_x, sigma_y, **kwargs):
        """Construct with the canonical tie eta_i = 1 / (sqrt(2) sigma_i)."""
        return cls.from_sigmas(m, sigma_x, sigma_y,
                               eta_x=1.0 / (SQRT2 * sigma_x),
                               eta_y=1.0 / (SQRT2 * sigma_y), **kwargs)

    @property
    def sigma_x(self):
        return math.exp(2.0 * self.zeta_x)

    @property
    def sigma_y(self):
        return math.exp(2.0 * self.zeta_y)

    @property
    def is_eta_tied(self):
        """True when eta_x sigma_x == eta_y sigma_y (up to rounding).

        Only the ratio eta_x : eta_y is physical (the overall scale is
        absorbed by normalization), so this is the condition under which the
        compact closed-form Wigner function applies.
        """
        hx, hy = self.eta_x * self.sigma_x, self.eta_y * self.sigma_y
        return abs(hx - hy) <= 1e-12 * max(abs(hx), abs(hy))

    def swapped(self):
        """Parameters with the two modes exchanged (x <-> y throughout)."""
        return replace(self, eta_x=self.eta_y, eta_y=self.eta_x,
                       zeta_x=self.zeta_y, zeta_y=self.zeta_x,
                       x0=self.y0, y0=self.x0, px0=self.py0, py0=self.px0)

    @cached_property
    def norm_constant(self):
        """N such that the spatial distribution integrates to 1.

        The squared-modulus integral reduces, after scaling x = sigma_x a,
        y = sigma_y b, to a degree-2m polynomial against exp(-a^2 - b^2),
        which an (m + 2)-node Gauss-Hermite rule integrates exactly.
        """
        n = self.m + 2
        nodes, weights = np.polynomial.hermite.hermgauss(n)
        a, b = np.meshgrid(nodes, nodes, indexing="ij")
        wa, wb = np.meshgrid(weights, weights, indexing="ij")
        hx = self.eta_x * self.sigma_x
        hy = self.eta_y * self.sigma_y
        poly = ((hx * a) ** 2 + (hy * b) ** 2) ** self.m
        integral = self.sigma_x * self.sigma_y * float(np.sum(wa * wb * poly))
        return 1.0 / math.sqrt(integral)


def psi(params, x, y):
    """Normalized position-space wavefunction at (x, y); scalar or array."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X = x - params.x0
    Y = y - params.y0
    bracket = (params.eta_x * X + 1j * params.sign * params.eta_y * Y) ** params.m
    gauss = np.exp(-0.5 * ((X / params.sigma_x) ** 2 + (Y / params.sigma_y) ** 2))
    phase = np.exp(1j * (params.px0 * X + params.py0 * Y))
    out = params.norm_constant * bracket * gauss * phase
    return out if out.ndim else complex(out)


def intensity_field(params, grid, threads=None):
    """Sample |psi|^2 over a grid; zero at the displaced vortex core for m >= 1."""
    meta = _param_metadata(params)
    meta["quantity"] = "intensity"

    def fn(x, y):
        p = psi(params, x, y)
        return p.real ** 2 + p.imag ** 2

    return sample_field(fn, grid, threads=threads, metadata=meta)


@dataclass(frozen=True)
class VortexDecomposition:
    """Coefficients c_k of the vortex factor over circular vortices.

    ``[eta_x x + i s eta_y y]^m = sum_k c_k u^k v^(m-k)`` with u = x + iy,
    v = x - iy. The circular limit eta_x = eta_y keeps only k = m (for
    s = +1) or k = 0 (for s = -1).
    """

    coefficients: tuple

    @property
    def m(self):
        return len(self.coefficients) - 1

    def vortex_value(self, x, y):
        """Resummed vortex factor at centered coordinates (x, y)."""
        u = np.asarray(x, dtype=complex) + 1j * np.asarray(y, dtype=float)
        v = u.conjugate()
        out = sum(c * u ** k * v ** (self.m - k) for k, c in enumerate(self.coefficients))
        return out if np.ndim(out) else complex(out)


def circular_decomposition(params):
    """Expand the elliptical vortex factor over circular vortices 0..m."""
    m = params.m
    plus = 0.5 * (params.eta_x + params.sign * params.eta_y)
    minus = 0.5 * (params.eta_x - params.sign * params.eta_y)
    cs = [complex(math.comb(m, k) * plus ** k * minus ** (m - k)) for k in range(m + 1)]
    return VortexDecomposition(coefficients=tuple(cs))


def _param_metadata(params):
    from .gridio import _fmt

    return {
        "m": str(params.m),
        "sign": f"{params.sign:+d}",
        "eta_x": _fmt(params.eta_x),
        "eta_y": _fmt(params.eta_y),
        "sigma_x": _fmt(params.sigma_x),
        "sigma_y": _fmt(params.sigma_y),
        "x0": _fmt(params.x0),
        "y0": _fmt(params.y0),
        "px0": _fmt(params.px0),
        "py0": _fmt(params.py0),
    }
