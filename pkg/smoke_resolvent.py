import cmath
import math
import time

import numpy as np

from hillbands import potentials as pot
from hillbands import resolvent as res
from hillbands.errors import SpectralPointError

t0 = time.time()
zero = pot.ZeroPotential()


def check(name, ok, detail=""):
    print(("PASS" if ok else "FAIL"), name, detail)
    if not ok:
        raise SystemExit(1)


# 1. Dirichlet closed form: V=0, lam=-1, f=sin(pi x) -> u = sin(pi x)/(pi^2+1)
kd = res.green_dirichlet(zero, -1.0)
f = lambda x: np.sin(np.pi * x)
r = res.resolvent_residual(kd, f)
check("dirichlet residual zero lam=-1", r <= 1e-6, "res=%.3e" % r)

# direct kernel value check vs sinh closed form
xs = [0.13, 0.5, 0.77]
ss = [0.05, 0.6, 0.93]
worst = 0.0
for xx in xs:
    for s in ss:
        a, b = min(xx, s), max(xx, s)
        exact = math.sinh(a) * math.sinh(1.0 - b) / math.sinh(1.0)
        got = kd.evaluate(xx, s)
        worst = max(worst, abs(got - exact))
check("dirichlet kernel closed form", worst <= 1e-9, "err=%.3e" % worst)

# boundary vanishing + symmetry
bv = max(abs(kd.evaluate(0.0, 0.37)), abs(kd.evaluate(1.0, 0.37)),
         abs(kd.evaluate(0.37, 0.0)), abs(kd.evaluate(0.37, 1.0)))
check("dirichlet boundary vanishing", bv <= 1e-12, "max=%.3e" % bv)
sym = max(abs(kd.evaluate(a, b) - kd.evaluate(b, a))
          for a in xs for b in ss)
check("dirichlet symmetry", sym <= 1e-13, "max=%.3e" % sym)

# 2. quasi-periodic: k=pi/2, V=0, lam=1, f=1 residual; closed-form solve
kq = res.green_quasi(zero, math.pi / 2, 1.0)
r = res.resolvent_residual(kq, lambda x: np.ones_like(np.asarray(x, dtype=float)))
check("quasi residual zero k=pi/2 f=1", r <= 1e-6, "res=%.3e" % r)

# closed form: u = -1/lam + a cos zx + b sin zx with (M - e^{ik})c = -(up(1)-up(0), ...)
lam = 1.0
z = 1.0
kk = math.pi / 2
eik = cmath.exp(1j * kk)
M = np.array([[math.cos(z), math.sin(z) / z],
              [-z * math.sin(z), math.cos(z)]], dtype=complex)
up = -1.0 / lam
rhs = -np.array([up - eik * up, 0.0], dtype=complex)
ab = np.linalg.solve(M - eik * np.eye(2), rhs)
u_exact = lambda t: up + ab[0] * np.cos(z * t) + ab[1] * np.sin(z * t) / z

x = kq.x
nodes, weights = np.polynomial.legendre.leggauss(64)
tau = 0.5 * (nodes + 1.0)
h = x[1] - x[0]
sn = x[:-1, None] + h * tau[None, :]
# u from kernel application (same path resolvent_residual takes)
th, phv = kq._basis_at(sn.ravel())
th = th.reshape(sn.shape)
phv = phv.reshape(sn.shape)
fw = np.ones_like(sn)
cell_th = h * (th * fw) @ (0.5 * weights)
cell_ph = h * (phv * fw) @ (0.5 * weights)
i_th = np.concatenate(([0.0j], np.cumsum(cell_th)))
i_ph = np.concatenate(([0.0j], np.cumsum(cell_ph)))
cl, cu = kq.coeff_lower, kq.coeff_upper
u = ((cl[0, 0] * kq.theta + cl[1, 0] * kq.phi) * i_th
     + (cl[0, 1] * kq.theta + cl[1, 1] * kq.phi) * i_ph
     + (cu[0, 0] * kq.theta + cu[1, 0] * kq.phi) * (i_th[-1] - i_th)
     + (cu[0, 1] * kq.theta + cu[1, 1] * kq.phi) * (i_ph[-1] - i_ph))
err = np.max(np.abs(u - u_exact(x)))
check("quasi closed-form solution", err <= 1e-8, "err=%.3e" % err)

# symmetry k -> 2pi - k transposes the kernel
kq2 = res.green_quasi(zero, 2 * math.pi - math.pi / 2, 1.0)
sw = max(abs(kq.evaluate(a, b) - kq2.evaluate(b, a)) for a in xs for b in ss)
check("quasi k -> 2pi-k transpose", sw <= 1e-12, "max=%.3e" % sw)
check("m swap", abs(kq.m_plus - kq2.m_minus) + abs(kq.m_minus - kq2.m_plus) <= 1e-12)

# 3. spectral point refusal
try:
    res.green_quasi(zero, math.pi / 2, (math.pi / 2) ** 2)
    check("quasi spectral refusal", False)
except SpectralPointError:
    check("quasi spectral refusal", True)
try:
    res.green_dirichlet(zero, math.pi ** 2)
    check("dirichlet spectral refusal", False)
except SpectralPointError:
    check("dirichlet spectral refusal", True)

# 4. pole growth ratio test near quasi spectral point lam* = (pi/2)^2
lam_star = (math.pi / 2) ** 2
prods = []
for d in (1e-2, 1e-3, 1e-4):
    kq3 = res.green_quasi(zero, math.pi / 2, lam_star + d)
    delta = 0.5 * (kq3.theta[-1] + kq3.phi_prime[-1])
    prods.append(kq3.sup_norm() * abs(delta - math.cos(math.pi / 2)))
ratio = max(prods) / min(prods)
check("pole growth ratio", ratio <= 2.0, "products=%s" % (["%.4f" % p for p in prods]))

# 5. residuals across fixtures at random regular lam (criterion 9 rehearsal)
fixtures = {
    "constant": pot.ConstantPotential(3.0),
    "mathieu": pot.LambdaIndependentPotential(pot.FourierProfile(cos_coeffs=(2.0,))),
    "exp": pot.ExpFamilyPotential([(0.5, pot.FourierProfile(a0=0.04, cos_coeffs=(0.04,))),
                                   (1.0, pot.FourierProfile(sin_coeffs=(0.02,)))]),
    "rational": pot.RationalDecayPotential(pot.FourierProfile(cos_coeffs=(0.5,)), 1.0),
}
rng = np.random.default_rng(7)
forcings = [lambda x: np.exp(np.sin(2 * np.pi * np.asarray(x))),
            lambda x: np.asarray(x) ** 2 * (1 - np.asarray(x))]
t1 = time.time()
worst_q = worst_d = 0.0
for name, spec in fixtures.items():
    for _ in range(10):
        lam = complex(rng.uniform(-5.0, 150.0), rng.uniform(-2.0, 2.0))
        kk = rng.uniform(0.3, math.pi - 0.3)
        f = forcings[int(rng.integers(2))]
        try:
            kq = res.green_quasi(spec, kk, lam)
        except SpectralPointError:
            continue
        worst_q = max(worst_q, res.resolvent_residual(kq, f))
        try:
            kd = res.green_dirichlet(spec, lam)
        except SpectralPointError:
            continue
        worst_d = max(worst_d, res.resolvent_residual(kd, f))
print("  40 quasi + 40 dirichlet kernels in %.1fs" % (time.time() - t1))
check("criterion-9 rehearsal quasi", worst_q <= 1e-5, "worst=%.3e" % worst_q)
check("criterion-9 rehearsal dirichlet", worst_d <= 1e-5, "worst=%.3e" % worst_d)

print("all resolvent checks passed in %.1fs" % (time.time() - t0))
