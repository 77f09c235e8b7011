"""Fundamental solutions of -y'' + V(x, lambda) y = lambda y on [0, 1].

theta is the solution with theta(0)=1, theta'(0)=0; phi has phi(0)=0,
phi'(0)=1. Two independent routes are provided: adaptive Runge-Kutta
integration (with the variational system for energy derivatives) and the
iterated-kernel series with its certified tail bound.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _fast
from ._quad import cumulative_grid, cumulative_integral
from .errors import ConfigError
from .potentials import potential_norm

__all__ = [
    "ZNorm", "znorm", "IntegratorConfig", "FundamentalData",
    "integrate_fundamental", "picard_fundamental", "error_envelope",
    "wronskian_defect", "cos_z", "sinc_z",
]


@dataclass(frozen=True)
class ZNorm:
    """Principal square root z of lambda and the cut-off modulus max(1, |z|)."""
    z: complex
    z1: float


def znorm(lam):
    z = cmath.sqrt(lam)
    return ZNorm(z=z, z1=max(1.0, abs(z)))


# Below this |lambda| the z-form of cos(z x), sin(z x)/z loses digits; the
# power series in lambda is entire and converges in a few terms.
_SERIES_CUT = 0.25
_SERIES_TERMS = 12


def cos_z(lam, x):
    """cos(sqrt(lam) * x), entire in lam; x scalar or ndarray."""
    if abs(lam) < _SERIES_CUT:
        t = lam * np.asarray(x, dtype=float) ** 2 if not np.isscalar(x) else lam * x * x
        acc = 0.0 * t
        for m in range(_SERIES_TERMS, 0, -1):
            acc = (acc + (-1) ** m / math.factorial(2 * m)) * t
        out = 1.0 + acc
        return out if not np.isscalar(x) else complex(out)
    z = cmath.sqrt(lam)
    if np.isscalar(x):
        return cmath.cos(z * x)
    return np.cos(z * np.asarray(x, dtype=float))


def sinc_z(lam, x):
    """sin(sqrt(lam) * x) / sqrt(lam), entire in lam; x scalar or ndarray."""
    if abs(lam) < _SERIES_CUT:
        xs = np.asarray(x, dtype=float) if not np.isscalar(x) else x
        t = lam * xs * xs
        acc = 0.0 * t
        for m in range(_SERIES_TERMS, 0, -1):
            acc = (acc + (-1) ** m / math.factorial(2 * m + 1)) * t
        out = xs * (1.0 + acc)
        return out if not np.isscalar(x) else complex(out)
    z = cmath.sqrt(lam)
    if np.isscalar(x):
        return cmath.sin(z * x) / z
    return np.sin(z * np.asarray(x, dtype=float)) / z


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_steps: int = 200_000
    quadrature_order: int = 64

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if self.max_steps < 1000:
            raise ConfigError("max_steps must be at least 1000")
        if self.quadrature_order < 2:
            raise ConfigError("quadrature_order must be at least 2")

    def coarsened(self, factor=1000.0):
        """A cheaper copy for bracketing work that a tight polish follows."""
        return IntegratorConfig(rel_tol=self.rel_tol * factor,
                                abs_tol=self.abs_tol * factor,
                                max_steps=self.max_steps,
                                quadrature_order=self.quadrature_order)


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class FundamentalData:
    """Values at x=1 of theta, theta', phi, phi' plus energy derivatives.

    lam_derivs orders d/dlambda of (theta1, dtheta1, phi1, dphi1); it is None
    for series-produced data. err_bound is a certified tail bound for series
    data (the weighted bound; see component_bounds) and a tolerance-based
    heuristic for integrator data.
    """

    lam: complex
    theta1: complex
    dtheta1: complex
    phi1: complex
    dphi1: complex
    lam_derivs: tuple = None
    err_bound: float = 0.0

    def component_bounds(self):
        """Per-component error weights (theta1, dtheta1, phi1, dphi1)."""
        z1 = znorm(self.lam).z1
        return (self.err_bound, self.err_bound * z1,
                self.err_bound / z1, self.err_bound)


def integrate_fundamental(spec, lam, cfg=DEFAULT_CONFIG):
    """Adaptive RK5(4) integration of the fundamental system over [0, 1].

    Carries the variational equations w'' = (V - lam) w + (dV/dlam - 1) y
    alongside, so the energy derivatives come from the same accepted steps.
    """
    lam = complex(lam)
    ev = spec.evaluator(lam)
    y = _fast.hill8(ev, lam, 1.0, cfg.rel_tol, cfg.abs_tol, cfg.max_steps)
    mag = max(abs(c) for c in y[:4])
    return FundamentalData(
        lam=lam, theta1=y[0], dtheta1=y[1], phi1=y[2], dphi1=y[3],
        lam_derivs=(y[4], y[5], y[6], y[7]),
        err_bound=500.0 * (cfg.abs_tol + cfg.rel_tol * mag))


def fundamental_values(spec, lam, cfg=DEFAULT_CONFIG):
    """Like integrate_fundamental but without the variational block.

    About twice as fast; used by spectrum scans where only the characteristic
    values are needed. lam_derivs is None on the result.
    """
    lam = complex(lam)
    ev = spec.evaluator(lam)
    y = _fast.hill4(ev, lam, 1.0, cfg.rel_tol, cfg.abs_tol, cfg.max_steps)
    mag = max(abs(c) for c in y)
    return FundamentalData(
        lam=lam, theta1=y[0], dtheta1=y[1], phi1=y[2], dphi1=y[3],
        lam_derivs=None,
        err_bound=500.0 * (cfg.abs_tol + cfg.rel_tol * mag))


def _picard_grid(lam):
    """Panelled Chebyshev grid resolving products oscillating at 2|z|."""
    z1 = znorm(lam).z1
    panels = max(4, int(math.ceil(8.0 * 2.0 * z1 / (2.0 * math.pi))))
    return cumulative_grid(panels, m=16)


def picard_fundamental(spec, lam, n_terms, cfg=DEFAULT_CONFIG):
    """Partial sums sum_{n=0}^{N} of the iterated-kernel series at x=1.

    Each iterate theta_n(x) = int_0^x phi_0(x-s) V(s) theta_{n-1}(s) ds is
    evaluated through the split phi_0(x-s) = sinc(x) cos-term(s) - cos(x)
    sinc-term(s), which keeps every piece entire in lambda and reduces the
    recursion to cumulative quadrature. err_bound is the certified tail bound
    ||V||^{N+1} exp(|Im z| + ||V||/|z|_1) / |z|_1^{N+1}, weighted per
    component as in component_bounds().
    """
    lam = complex(lam)
    if n_terms < 0:
        raise ConfigError("n_terms must be non-negative")
    spec.check_lambda(lam)
    x, edges = _picard_grid(lam)
    c = np.asarray(cos_z(lam, x), dtype=complex)
    s = np.asarray(sinc_z(lam, x), dtype=complex)
    v = np.asarray(spec.value(x, lam), dtype=complex)

    th, thp = c.copy(), -lam * s
    ph, php = s.copy(), c.copy()
    sums = [th[-1, -1], thp[-1, -1], ph[-1, -1], php[-1, -1]]
    for _ in range(n_terms):
        new = []
        for prev in (th, ph):
            a = cumulative_integral(c * v * prev, edges)
            b = cumulative_integral(s * v * prev, edges)
            new.append((s * a - c * b, c * a + lam * s * b))
        (th, thp), (ph, php) = new
        sums[0] += th[-1, -1]
        sums[1] += thp[-1, -1]
        sums[2] += ph[-1, -1]
        sums[3] += php[-1, -1]

    zn = znorm(lam)
    nv = potential_norm(spec, lam, cfg.quadrature_order)
    bound = (nv ** (n_terms + 1) / zn.z1 ** (n_terms + 1)
             * math.exp(abs(zn.z.imag) + nv / zn.z1))
    return FundamentalData(lam=lam, theta1=sums[0], dtheta1=sums[1],
                           phi1=sums[2], dphi1=sums[3],
                           lam_derivs=None, err_bound=bound)


def error_envelope(spec, lam, j, order=64):
    """Envelope e_j = (||V||/|z|_1)^j exp(|Im z| + ||V||/|z|_1)."""
    lam = complex(lam)
    zn = znorm(lam)
    nv = potential_norm(spec, lam, order)
    return (nv / zn.z1) ** j * math.exp(abs(zn.z.imag) + nv / zn.z1)


def wronskian_defect(fd):
    """|theta phi' - theta' phi - 1| at x=1; zero in exact arithmetic."""
    return abs(fd.theta1 * fd.dphi1 - fd.dtheta1 * fd.phi1 - 1.0)
