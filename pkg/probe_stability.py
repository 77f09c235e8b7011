"""Scratch: stability of pair-center and 3pt-zero offsets vs tolerances."""
import math
import time

from hillbands import boussinesq as bz
from hillbands import rootfind
from hillbands.fundsol import DEFAULT_CONFIG, IntegratorConfig
from hillbands.potentials import FourierProfile

S3 = math.sqrt(3.0)
PQ = bz.ThirdOrderCoeffs(FourierProfile(cos_coeffs=(0.1,)),
                         FourierProfile(sin_coeffs=(0.05,)))


def offsets(cfg, label):
    F = bz.discriminant_handle(PQ, cfg)
    F3 = bz.three_point_handle(PQ, cfg)
    out = []
    t0 = time.time()
    for n in (2, 3, 4, 5, 6, 7, 8):
        seed = bz.ram_asymptotic(PQ, n)
        crit = rootfind._critical_point(F, seed, 5.0 * (1 + abs(seed) ** (2 / 3)))
        rbar = crit[0]
        z2 = rootfind._polish_double(F, rbar)
        if z2 is not None:
            rbar = z2.lam.real
        zt = rootfind.refine_newton(F3, rbar, 1)
        s0 = F(rbar)[0].real
        out.append((n, rbar, zt.lam.real - rbar, s0))
    dt = time.time() - t0
    print(f"{label}  ({dt:.1f}s)")
    for n, rbar, off, s0 in out:
        print(f"  n={n} rbar={rbar:.9f} off={off:+.4e} bump={s0:+.3e}")
    return {n: (rbar, off) for n, rbar, off, _ in out}


a = offsets(DEFAULT_CONFIG, "rel 1e-12")
b = offsets(IntegratorConfig(rel_tol=1e-13, abs_tol=1e-15), "rel 1e-13")
c = offsets(IntegratorConfig(rel_tol=3e-12, abs_tol=3e-14), "rel 3e-12")
for n in (2, 3, 4, 5, 6, 7, 8):
    rs = [x[n][0] for x in (a, b, c)]
    print(f"n={n}: rbar spread {max(rs) - min(rs):.2e}  "
          f"offs {[f'{x[n][1]:+.3e}' for x in (a, b, c)]}")
