"""Scratch: measure discriminant bump structure at perturbed pair centers."""
import math

from hillbands import boussinesq as bz
from hillbands import rootfind
from hillbands.fundsol import DEFAULT_CONFIG
from hillbands.potentials import FourierProfile

S3 = math.sqrt(3.0)
PQ = bz.ThirdOrderCoeffs(FourierProfile(cos_coeffs=(0.1,)),
                         FourierProfile(sin_coeffs=(0.05,)))

F = bz.discriminant_handle(PQ)
F3 = bz.three_point_handle(PQ)
tight10 = DEFAULT_CONFIG.coarsened(0.1)  # rel 1e-13
samp = bz._InvariantSampler(PQ, DEFAULT_CONFIG)


def v13(z):
    f, r = samp.rows(z, tight10)
    return bz._scaled_disc_value(f, r, complex(z) ** (1 / 3)).real


for n in range(2, 9):
    base = 2 * math.pi * n / S3
    seed = bz.ram_asymptotic(PQ, n)
    crit = rootfind._critical_point(F, seed, 5.0 * (1 + abs(seed) ** (2 / 3)))
    if crit is None:
        print(f"n={n}: critical point chase failed from {seed}")
        continue
    rbar, fpp = crit
    # polish via tight derivative secant
    z2 = rootfind._polish_double(F, rbar)
    if z2 is not None:
        rbar = z2.lam.real
    # three-point eigenvalue nearby
    zt = rootfind.refine_newton(F3, rbar, 1)
    s0 = v13(rbar)
    # curvature at probe scale
    dz = 0.15 * (1 + abs(rbar)) ** (2 / 3) * 3e-4 * 50
    fpp2 = (v13(rbar + dz) + v13(rbar - dz) - 2 * s0) / dz ** 2
    half = math.sqrt(max(s0, 0.0) * 2 / abs(fpp2)) if fpp2 < 0 else float("nan")
    print(f"n={n}: rbar={rbar:.9f} zeta_n={zt.lam.real:.9f} "
          f"off={zt.lam.real - rbar:+.3e} bump={s0:+.3e} fpp={fpp2:+.3e} "
          f"half-split={half:.3e}")
    if s0 > 5e-12 and fpp2 < 0:
        for mult in (0.6, 1.0, 1.3, 1.8):
            d = half * mult
            print(f"    v(rbar +- {d:.3e}) = {v13(rbar + d):+.3e}  "
                  f"{v13(rbar - d):+.3e}")
