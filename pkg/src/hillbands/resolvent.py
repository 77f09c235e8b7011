"""Green kernels of the quasi-periodic and Dirichlet problems.

Both kernels are assembled from the fundamental pair theta, phi sampled on
a uniform x-mesh by a fixed-step integrator, a route independent of the
adaptive one in fundsol. Applying a kernel to a forcing and measuring the
equation residual therefore cross-checks the spectral characterizations:
a kernel built at a regular point must invert -u'' + (V - lam) u = f to
quadrature accuracy, and must blow up approaching a spectral point.

Each kernel is stored in a branch-separable form

    R(x, s) = sum_ij C[i, j] u_i(x) u_j(s),   u_0 = theta, u_1 = phi,

with one coefficient matrix for s < x and one for s > x. For the
quasi-periodic problem the coefficients are polynomial in the monodromy
entries and exp(+-ik); the Floquet m-functions never appear as divisors,
so the kernel stays regular where phi(1, lam) = 0 at regular energies
even though m_+- themselves blow up there.
"""

import cmath
import math

import numpy as np

from .errors import ConfigError, SpectralPointError, WeylSingularityError
from .fundsol import DEFAULT_CONFIG, fundamental_values, znorm
from .potentials import eval_V

__all__ = [
    "GreenKernelQuasi", "GreenKernelDirichlet",
    "green_quasi", "green_dirichlet", "resolvent_residual",
]

# Construction refusal thresholds. The quasi-periodic kernel scales like
# 1/(cos k - Delta) and the Dirichlet one like 1/phi(1): below these the
# kernel entries overflow any sensible residual test.
_SPECTRAL_RTOL = 1e-10
# phi(1) carries a natural 1/max(1,|z|) scale relative to the other entries
_WEYL_RTOL = 1e-13


def _dense_fundamental(spec, lam, mesh, substeps):
    """theta, theta', phi, phi' on linspace(0, 1, mesh+1), fixed-step RK4.

    The coefficient V(., lam) is evaluated once on the half-step grid and
    reused by the midpoint stages, so potentials pay a single vectorized
    call.
    """
    n_steps = mesh * substeps
    h = 1.0 / n_steps
    fine = np.linspace(0.0, 1.0, 2 * n_steps + 1)
    w = np.asarray(eval_V(spec, fine, lam), dtype=complex) - lam

    out = np.empty((4, mesh + 1), dtype=complex)
    t, tp, p, pp = 1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j
    out[:, 0] = (t, tp, p, pp)
    h6 = h / 6.0
    i = 0
    col = 1
    for step in range(n_steps):
        a, m, b = w[i], w[i + 1], w[i + 2]
        i += 2
        k1t, k1tp = tp, a * t
        k1p, k1pp = pp, a * p
        y = t + 0.5 * h * k1t
        k2t, k2tp = tp + 0.5 * h * k1tp, m * y
        y = p + 0.5 * h * k1p
        k2p, k2pp = pp + 0.5 * h * k1pp, m * y
        y = t + 0.5 * h * k2t
        k3t, k3tp = tp + 0.5 * h * k2tp, m * y
        y = p + 0.5 * h * k2p
        k3p, k3pp = pp + 0.5 * h * k2pp, m * y
        y = t + h * k3t
        k4t, k4tp = tp + h * k3tp, b * y
        y = p + h * k3p
        k4p, k4pp = pp + h * k3pp, b * y
        t += h6 * (k1t + 2.0 * (k2t + k3t) + k4t)
        tp += h6 * (k1tp + 2.0 * (k2tp + k3tp) + k4tp)
        p += h6 * (k1p + 2.0 * (k2p + k3p) + k4p)
        pp += h6 * (k1pp + 2.0 * (k2pp + k3pp) + k4pp)
        if (step + 1) % substeps == 0:
            out[:, col] = (t, tp, p, pp)
            col += 1
    return out


def _pick_substeps(lam, mesh):
    # local RK4 error ~ (|z| h)^5; keep |z| h below ~1/40 at the default mesh
    z1 = znorm(lam).z1
    return max(2, math.ceil(40.0 * z1 / mesh))


class _SeparableKernel:
    """Two-branch separable kernel over the (theta, phi) basis.

    coeff_lower applies for s < x, coeff_upper for s > x; the branches
    agree on the diagonal. Immutable after construction, safe to share
    across threads.
    """

    def __init__(self, spec, lam, x, samples, coeff_lower, coeff_upper, cfg):
        self.spec = spec
        self.lam = complex(lam)
        self.x = x
        self.theta = samples[0]
        self.theta_prime = samples[1]
        self.phi = samples[2]
        self.phi_prime = samples[3]
        self.coeff_lower = coeff_lower
        self.coeff_upper = coeff_upper
        self.cfg = cfg

    @property
    def mesh(self):
        return len(self.x) - 1

    def _basis_at(self, t):
        """theta, phi at arbitrary points by cubic Hermite interpolation."""
        t = np.asarray(t, dtype=float)
        h = self.x[1] - self.x[0]
        j = np.clip((t / h).astype(int), 0, self.mesh - 1)
        tau = t / h - j
        t2 = tau * tau
        t3 = t2 * tau
        h00 = 2.0 * t3 - 3.0 * t2 + 1.0
        h10 = t3 - 2.0 * t2 + tau
        h01 = 3.0 * t2 - 2.0 * t3
        h11 = t3 - t2
        th = (h00 * self.theta[j] + h10 * h * self.theta_prime[j]
              + h01 * self.theta[j + 1] + h11 * h * self.theta_prime[j + 1])
        ph = (h00 * self.phi[j] + h10 * h * self.phi_prime[j]
              + h01 * self.phi[j + 1] + h11 * h * self.phi_prime[j + 1])
        return th, ph

    def evaluate(self, x, s):
        """Kernel value R(x, s) at scalar arguments in [0, 1]."""
        bx = self._basis_at(x)
        bs = self._basis_at(s)
        c = self.coeff_lower if s < x else self.coeff_upper
        acc = 0.0j
        for i in range(2):
            for j in range(2):
                acc += c[i, j] * bx[i] * bs[j]
        return complex(acc)

    def sup_norm(self, n=256):
        """max |R| over an n-by-n subgrid of the cached mesh."""
        stride = max(1, self.mesh // n)
        th = self.theta[::stride]
        ph = self.phi[::stride]
        ux = np.stack([th, ph])
        low = np.einsum("ij,ia,jb->ab", self.coeff_lower, ux, ux)
        upp = np.einsum("ij,ia,jb->ab", self.coeff_upper, ux, ux)
        mask = np.tril(np.ones(low.shape, dtype=bool))
        vals = np.where(mask, low, upp)
        return float(np.max(np.abs(vals)))


class GreenKernelQuasi(_SeparableKernel):
    """Green kernel of the quasi-periodic problem u(1)=e^{ik}u(0), same for u'.

    Carries the Floquet m-functions m_+- = ((phi'(1)-theta(1))/2 +- i sin k)
    / phi(1) and the prefactor phi(1) / (2 (cos k - Delta)) for reference;
    evaluation uses the cancelled coefficient form and never divides by
    phi(1).
    """

    def __init__(self, spec, lam, k, x, samples, coeff_lower, coeff_upper,
                 m_plus, m_minus, prefactor, cfg):
        super().__init__(spec, lam, x, samples, coeff_lower, coeff_upper, cfg)
        self.k = float(k)
        self.m_plus = m_plus
        self.m_minus = m_minus
        self.prefactor = prefactor

    def boundary_residual(self, u, du):
        """|u(1) - e^{ik} u(0)| + |u'(1) - e^{ik} u'(0)| for mesh samples."""
        rot = cmath.exp(1j * self.k)
        return abs(u[-1] - rot * u[0]) + abs(du[-1] - rot * du[0])


class GreenKernelDirichlet(_SeparableKernel):
    """Green kernel of the Dirichlet problem u(0) = u(1) = 0.

    Symmetric, R(x, s) = R(s, x), and vanishes identically on the boundary
    of the unit square.
    """

    def boundary_residual(self, u, du):
        return abs(u[0]) + abs(u[-1])


def _check_sampler(spec, lam, theta1, dtheta1, phi1, dphi1, cfg):
    # cross-check the fixed-step endpoint against the adaptive route
    fd = fundamental_values(spec, lam, cfg.coarsened())
    scale = 1.0 + max(abs(theta1), abs(dphi1))
    worst = max(abs(theta1 - fd.theta1), abs(phi1 - fd.phi1) * znorm(lam).z1,
                abs(dphi1 - fd.dphi1))
    if worst > 1e-6 * scale:
        raise ConfigError(
            "dense sampler disagrees with adaptive integration at lam=%s "
            "(drift %.3e); increase mesh" % (lam, worst))


def green_quasi(spec, k, lam, mesh=2000, cfg=DEFAULT_CONFIG):
    """Quasi-periodic Green kernel at energy lam, quasi-momentum k.

    Refuses construction at spectral points (Delta(lam) = cos k) and where
    phi(1, lam) = 0 exactly, since the m_+- fields are then undefined; the
    kernel itself would remain finite at the latter.
    """
    if mesh < 16:
        raise ConfigError("mesh must be at least 16")
    lam = complex(lam)
    k = float(k)
    samples = _dense_fundamental(spec, lam, mesh, _pick_substeps(lam, mesh))
    theta1 = samples[0, -1]
    dtheta1 = samples[1, -1]
    phi1 = samples[2, -1]
    dphi1 = samples[3, -1]
    _check_sampler(spec, lam, theta1, dtheta1, phi1, dphi1, cfg)

    delta = 0.5 * (theta1 + dphi1)
    cos_k = math.cos(k)
    if abs(delta - cos_k) <= _SPECTRAL_RTOL * (1.0 + abs(delta)):
        raise SpectralPointError(
            "lam=%s is a quasi-periodic spectral point for k=%.6f "
            "(Delta - cos k = %.3e)" % (lam, k, abs(delta - cos_k)))
    phi_scale = (1.0 + abs(theta1) + abs(dphi1)) / znorm(lam).z1
    if abs(phi1) <= _WEYL_RTOL * phi_scale:
        raise WeylSingularityError(
            "phi(1, lam) = %s vanishes at lam=%s: Floquet m-functions "
            "undefined (the cancelled kernel would stay regular)"
            % (phi1, lam))

    m_half = 0.5 * (dphi1 - theta1)
    i_sin = 1j * math.sin(k)
    m_plus = (m_half + i_sin) / phi1
    m_minus = (m_half - i_sin) / phi1
    pole = 2.0 * (cos_k - delta)
    prefactor = phi1 / pole

    eik = cmath.exp(1j * k)
    emk = cmath.exp(-1j * k)
    coeff_lower = np.array(
        [[-phi1, eik - dphi1], [theta1 - eik, dtheta1]], dtype=complex) / pole
    coeff_upper = np.array(
        [[-phi1, theta1 - emk], [emk - dphi1, dtheta1]], dtype=complex) / pole

    x = np.linspace(0.0, 1.0, mesh + 1)
    return GreenKernelQuasi(spec, lam, k, x, samples, coeff_lower, coeff_upper,
                            m_plus, m_minus, prefactor, cfg)


def green_dirichlet(spec, lam, mesh=2000, cfg=DEFAULT_CONFIG):
    """Dirichlet Green kernel at energy lam; requires phi(1, lam) != 0."""
    if mesh < 16:
        raise ConfigError("mesh must be at least 16")
    lam = complex(lam)
    samples = _dense_fundamental(spec, lam, mesh, _pick_substeps(lam, mesh))
    theta1 = samples[0, -1]
    dtheta1 = samples[1, -1]
    phi1 = samples[2, -1]
    dphi1 = samples[3, -1]
    _check_sampler(spec, lam, theta1, dtheta1, phi1, dphi1, cfg)

    phi_scale = (1.0 + abs(theta1) + abs(dphi1)) / znorm(lam).z1
    if abs(phi1) <= _SPECTRAL_RTOL * phi_scale:
        raise SpectralPointError(
            "lam=%s is (numerically) a Dirichlet eigenvalue: phi(1)=%s"
            % (lam, phi1))

    ratio = theta1 / phi1
    coeff_lower = np.array([[0.0, 1.0], [0.0, -ratio]], dtype=complex)
    coeff_upper = np.array([[0.0, 0.0], [1.0, -ratio]], dtype=complex)

    x = np.linspace(0.0, 1.0, mesh + 1)
    return GreenKernelDirichlet(spec, lam, x, samples, coeff_lower,
                                coeff_upper, cfg)


def _forcing_values(f, pts):
    try:
        vals = np.asarray(f(pts), dtype=complex)
        if vals.shape == pts.shape:
            return vals
    except (TypeError, ValueError):
        pass
    flat = np.array([f(float(t)) for t in pts.ravel()], dtype=complex)
    return flat.reshape(pts.shape)


def resolvent_residual(kernel, f, quad_order=64):
    """Apply the kernel to a forcing and measure the equation residual.

    u(x) = integral_0^1 R(x, s) f(s) ds is computed by per-cell
    Gauss-Legendre quadrature of the stated order (the separable branch
    form turns the split integral into two cumulative sums). Returns the
    maximum of |-u'' + (V - lam) u - f| over the interior mesh, with u''
    from 5-point central differences, plus the boundary-condition
    residuals of the kernel's problem.
    """
    if quad_order < 2:
        raise ConfigError("quad_order must be at least 2")
    x = kernel.x
    n = kernel.mesh
    if n < 8:
        raise ConfigError("kernel mesh too small for 5-point differences")
    h = x[1] - x[0]

    nodes, weights = np.polynomial.legendre.leggauss(quad_order)
    tau = 0.5 * (nodes + 1.0)
    wts = 0.5 * weights

    # Hermite interpolation of theta, phi at every quadrature node of
    # every cell, vectorized over cells (shared reference abscissae)
    t2 = tau * tau
    t3 = t2 * tau
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = (t3 - 2.0 * t2 + tau) * h
    h01 = 3.0 * t2 - 2.0 * t3
    h11 = (t3 - t2) * h
    th = kernel.theta
    thp = kernel.theta_prime
    ph = kernel.phi
    php = kernel.phi_prime
    th_nodes = (np.outer(th[:-1], h00) + np.outer(thp[:-1], h10)
                + np.outer(th[1:], h01) + np.outer(thp[1:], h11))
    ph_nodes = (np.outer(ph[:-1], h00) + np.outer(php[:-1], h10)
                + np.outer(ph[1:], h01) + np.outer(php[1:], h11))

    s_nodes = x[:-1, None] + h * tau[None, :]
    f_nodes = _forcing_values(f, s_nodes)

    cell_th = h * (th_nodes * f_nodes) @ wts
    cell_ph = h * (ph_nodes * f_nodes) @ wts
    i_th = np.concatenate(([0.0j], np.cumsum(cell_th)))
    i_ph = np.concatenate(([0.0j], np.cumsum(cell_ph)))
    tail_th = i_th[-1] - i_th
    tail_ph = i_ph[-1] - i_ph

    cl = kernel.coeff_lower
    cu = kernel.coeff_upper
    u = ((cl[0, 0] * th + cl[1, 0] * ph) * i_th
         + (cl[0, 1] * th + cl[1, 1] * ph) * i_ph
         + (cu[0, 0] * th + cu[1, 0] * ph) * tail_th
         + (cu[0, 1] * th + cu[1, 1] * ph) * tail_ph)

    upp = (-u[:-4] + 16.0 * u[1:-3] - 30.0 * u[2:-2]
           + 16.0 * u[3:-1] - u[4:]) / (12.0 * h * h)
    v_mesh = np.asarray(eval_V(kernel.spec, x, kernel.lam), dtype=complex)
    f_mesh = _forcing_values(f, x)
    interior = np.abs(-upp + (v_mesh[2:-2] - kernel.lam) * u[2:-2]
                      - f_mesh[2:-2])

    du0 = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2]
           + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h)
    du1 = (25.0 * u[-1] - 48.0 * u[-2] + 36.0 * u[-3]
           - 16.0 * u[-4] + 3.0 * u[-5]) / (12.0 * h)
    bc = kernel.boundary_residual(u, np.array([du0, du1]))
    return float(np.max(interior) + bc)
