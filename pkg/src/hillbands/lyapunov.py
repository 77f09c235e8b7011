"""Lyapunov function of the Hill operator and its high-energy corrections.

Delta(lam) = (theta(1, lam) + phi'(1, lam)) / 2 is the half-trace of the
period map. At high energy Delta tracks cos z with corrections Delta_1,
Delta_2 of decreasing order in ||V|| / |z|_1, each controlled by the
envelope e_j from fundsol.error_envelope.
"""

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._quad import gauss_legendre
from .errors import ConfigError
from .fundsol import (DEFAULT_CONFIG, cos_z, error_envelope,
                      fundamental_values, integrate_fundamental, sinc_z,
                      znorm)
from .potentials import mean_V


@dataclass(frozen=True)
class DiscriminantSample:
    """Discriminant value with derivative and the boundary data behind it."""

    lam: complex
    delta: complex
    ddelta: complex
    theta1: complex
    dtheta1: complex
    phi1: complex
    dphi1: complex

    def identity_defect(self):
        """delta^2 - 1 - ((theta1 - dphi1)/2)^2 - dtheta1*phi1; zero exactly."""
        half = 0.5 * (self.theta1 - self.dphi1)
        return self.delta * self.delta - 1.0 - half * half \
            - self.dtheta1 * self.phi1


def discriminant(spec, lam, cfg=DEFAULT_CONFIG):
    """DiscriminantSample at lam; ddelta comes from the variational block."""
    fd = integrate_fundamental(spec, lam, cfg)
    dth, _, _, dphp = fd.lam_derivs
    return DiscriminantSample(
        lam=fd.lam,
        delta=0.5 * (fd.theta1 + fd.dphi1),
        ddelta=0.5 * (dth + dphp),
        theta1=fd.theta1, dtheta1=fd.dtheta1,
        phi1=fd.phi1, dphi1=fd.dphi1)


def discriminant_value(spec, lam, cfg=DEFAULT_CONFIG):
    """Delta(lam) alone, via the derivative-free integration (for scans)."""
    fd = fundamental_values(spec, lam, cfg)
    return 0.5 * (fd.theta1 + fd.dphi1)


def delta1(spec, lam):
    """First correction (sin z / 2z) * mean of V(., lam); entire in lam."""
    lam = complex(lam)
    return 0.5 * sinc_z(lam, 1.0) * mean_V(spec, lam)


def _panel_nodes(panels, order=32):
    """Composite Gauss-Legendre nodes and weights on [0, 1]."""
    x0, w0 = gauss_legendre(order)
    h = 1.0 / panels
    nodes = (np.arange(panels)[:, None] * h + x0[None, :] * h).ravel()
    weights = np.tile(w0 * h, panels)
    return nodes, weights


def delta2(spec, lam, cfg=DEFAULT_CONFIG):
    """Second correction: triangle double integral of V(s)V(t) kernels.

    The triangle 0 < t < s < 1 is mapped to the square by t = s*u (Jacobian
    s) and both directions use panelled 32-point Gauss-Legendre with the
    panel count scaled to the kernel frequency 2|z|. Away from lam = 0 the
    two integrals are assembled in the printed form

        (cos z (I_cos - mean^2/2) + sin z I_sin) / (4 z^2);

    near lam = 0 the identical expression is evaluated through the entire
    combinations sinc^2 and sinc*cos, which removes every division by z.
    """
    lam = complex(lam)
    spec.check_lambda(lam)
    zn = znorm(lam)
    panels = max(1, math.ceil(abs(zn.z) / (4.0 * math.pi)))
    s, ws = _panel_nodes(panels)
    u, wu = _panel_nodes(panels)
    inner = s[:, None] * u[None, :]
    vs = np.asarray(spec.value(s, lam), dtype=complex)
    vt = np.asarray(spec.value(inner.ravel(), lam),
                    dtype=complex).reshape(inner.shape)
    # weight matrix carries the Duffy Jacobian s and both V factors
    wmat = ((ws * s) * vs)[:, None] * (wu[None, :] * vt)
    tau = s[:, None] * (1.0 - u)[None, :]
    if abs(lam) >= 0.25:
        z = zn.z
        i_cos = complex(np.sum(np.cos(2.0 * z * tau) * wmat))
        i_sin = complex(np.sum(np.sin(2.0 * z * tau) * wmat))
        v0 = mean_V(spec, lam)
        return (cmath.cos(z) * (i_cos - 0.5 * v0 * v0)
                + cmath.sin(z) * i_sin) / (4.0 * z * z)
    sc = np.asarray(sinc_z(lam, tau.ravel()), dtype=complex).reshape(tau.shape)
    cc = np.asarray(cos_z(lam, tau.ravel()), dtype=complex).reshape(tau.shape)
    j_c = complex(np.sum(sc * sc * wmat))
    j_s = complex(np.sum(sc * cc * wmat))
    return 0.5 * (sinc_z(lam, 1.0) * j_s - cos_z(lam, 1.0) * j_c)


class EnvelopeReport(NamedTuple):
    residual: float
    bound: float
    ok: bool


def envelope_check(spec, lam, order, cfg=DEFAULT_CONFIG):
    """Compares Delta minus its expansion through `order` terms against e_order.

    order=1 tests |Delta - cos z|, order=2 additionally subtracts Delta_1,
    order=3 also Delta_2. ok allows a small additive floor for the
    integrator's own noise, without which a zero envelope (zero potential)
    could never be met in floating point.
    """
    if order not in (1, 2, 3):
        raise ConfigError(f"order must be 1, 2 or 3, got {order!r}")
    lam = complex(lam)
    sample = discriminant(spec, lam, cfg)
    partial = sample.delta - cos_z(lam, 1.0)
    if order > 1:
        partial -= delta1(spec, lam)
    if order > 2:
        partial -= delta2(spec, lam, cfg)
    residual = abs(partial)
    bound = error_envelope(spec, lam, order, cfg.quadrature_order)
    noise = 200.0 * (cfg.abs_tol + cfg.rel_tol * (1.0 + abs(sample.delta)))
    return EnvelopeReport(residual=residual, bound=bound,
                          ok=residual <= bound + noise)
