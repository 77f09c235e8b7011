"""Scratch: validate the variational zeta-derivative block."""
import cmath
import math

from hillbands import _fast
from hillbands import boussinesq as bz
from hillbands.potentials import FourierProfile

PQ = bz.ThirdOrderCoeffs(FourierProfile(cos_coeffs=(0.1,)),
                         FourierProfile(sin_coeffs=(0.05,)))
FREE = bz.ThirdOrderCoeffs(FourierProfile(), FourierProfile())


def cd9(pev, z, h):
    a = _fast.third9(pev, z + h, 1.0, 1e-13, 1e-15, 200_000)
    b = _fast.third9(pev, z - h, 1.0, 1e-13, 1e-15, 200_000)
    return [(x - y) / (2 * h) for x, y in zip(a, b)]


for z in (3.0 + 0j, 400.0 + 0j, 2.4e4 + 0j, 1e5 + 2e4j, -7e3 + 0j):
    m, w = _fast.third18(PQ.pev(), z, 1.0, 1e-13, 1e-15, 200_000)
    h = 1e-5 * (1 + abs(z)) ** (2 / 3)
    ref = cd9(PQ.pev(), z, h)
    sc = max(abs(v) for v in ref)
    dev = max(abs(a - b) for a, b in zip(w, ref)) / sc
    print(f"z={z}: third18 vs cd rel {dev:.2e}")

# free field: dA/dzeta = w'(zeta) * sum_j omega_j e^{omega_j w}
for z in (500.0 + 0j, 2.4e4 + 0j):
    m, w9 = _fast.third18(FREE.pev(), z, 1.0, 1e-13, 1e-15, 200_000)
    wv = z ** (1 / 3)
    wp = 1 / (3 * wv * wv)
    om = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    dA = wp * sum(o * cmath.exp(o * wv) for o in om)
    got = w9[0] + w9[4] + w9[8]
    print(f"z={z}: dA/dzeta rel {abs(got - dA) / abs(dA):.2e}")

# handle self-consistency: analytic derivative vs CD of value_only
F = bz.discriminant_handle(PQ)
F3 = bz.three_point_handle(PQ)
for z in (390.0, 2.45e4):
    h = 3e-4 * (1 + z) ** (2 / 3)
    for name, H in (("disc", F), ("3pt", F3)):
        v, dv = H(z)
        cd = (H.value_only(z + h) - H.value_only(z - h)) / (2 * h)
        print(f"z={z} {name}: F'={dv:.6e} cd={cd:.6e} "
              f"rel {abs(dv - cd) / max(abs(dv), 1e-30):.2e}")
