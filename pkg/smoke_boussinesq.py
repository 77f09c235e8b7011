"""Scratch validation for boussinesq.py. Delete before finalizing."""
import cmath
import math
import time

import numpy as np

from hillbands import boussinesq as bz
from hillbands import rootfind
from hillbands.errors import ConfigError, NearRamificationError
from hillbands.fundsol import DEFAULT_CONFIG
from hillbands.potentials import FourierProfile
from hillbands.spectra import Problem, SpectralWorkspace

S3 = math.sqrt(3.0)
FREE = bz.ThirdOrderCoeffs(FourierProfile(), FourierProfile())
PQ = bz.ThirdOrderCoeffs(FourierProfile(cos_coeffs=(0.1,)),
                         FourierProfile(sin_coeffs=(0.05,)))

t0 = time.time()
fails = []


def check(name, ok, detail=""):
    mark = "PASS" if ok else "FAIL"
    print(f"[{mark}] {name}  {detail}")
    if not ok:
        fails.append(name)


# 1. free monodromy at zeta=0: polynomial basis {1, x, x^2/2}
m = bz.integrate_third_order(FREE, 0.0, 2)
want = np.array([[1, 1, 0.5], [0, 1, 1], [0, 0, 1]], dtype=complex)
check("free M1 polynomial basis", np.max(np.abs(m.M1 - want)) < 1e-12,
      f"max dev {np.max(np.abs(m.M1 - want)):.2e}")
check("free M2 route agreement", m.periodicity_defect() < 1e-12,
      f"{m.periodicity_defect():.2e}")

# 2. free multipliers e^{omega z~} at zeta=100
zeta = 100.0
zt = zeta ** (1 / 3)
m = bz.integrate_third_order(FREE, zeta, 1)
ms = bz.multipliers(m)
omegas = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
want_k = sorted((cmath.exp(w * zt) for w in omegas), key=abs)
got_k = [ms.kappa1, ms.kappa2, ms.kappa3]
# conjugate pair ordering ambiguous at equal modulus: compare as multisets
err = min(max(abs(a - b) / abs(b) for a, b in zip(got_k, perm))
          for perm in ([want_k[0], want_k[1], want_k[2]],
                       [want_k[1], want_k[0], want_k[2]]))
check("free multipliers e^{omega zt}", err < 1e-9, f"rel {err:.2e}")
check("multiplier product", ms.product_defect() < 1e-9,
      f"{ms.product_defect():.2e}")

# 3. det M1 = 1 at random zetas, perturbed
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(20):
    z = complex(rng.uniform(1, 4000), rng.uniform(-50, 50))
    mm = bz.integrate_third_order(PQ, z, 2)
    worst = max(worst, mm.det_defect(), mm.periodicity_defect())
check("det=1 and M2=M1^2 at 20 random zeta", worst < 1e-8, f"worst {worst:.2e}")

# 4. reflected route: tr U == tr adj M1, and adjugate entries
z = 150.0
mono = bz.integrate_third_order(PQ, z, 1)
adj = np.linalg.inv(mono.M1)  # det = 1
samp = bz._InvariantSampler(PQ, DEFAULT_CONFIG)
f, r = samp.rows(z, DEFAULT_CONFIG)
U = np.array(r, dtype=complex).reshape(3, 3)
S = np.diag([1.0, -1.0, 1.0])
rel = np.linalg.norm(S @ U @ S - adj) / np.linalg.norm(adj)
check("reflected monodromy U = S M1^{-1} S", rel < 1e-9, f"rel {rel:.2e}")
bB = r[0] + r[4] + r[8]
check("B = tr U vs tr M1^{-1}", abs(bB - np.trace(adj)) / abs(bB) < 1e-9,
      f"rel {abs(bB - np.trace(adj)) / abs(bB):.2e}")

# 5. three-point determinant identity vs naive at moderate zeta
mono2 = bz.integrate_third_order(PQ, z, 2)
d_naive = bz.three_point_determinant(mono2)
d_id = f[1] * r[2] + f[2] * r[1]
check("3pt determinant adjugate identity", abs(d_id - d_naive) / abs(d_naive) < 1e-8,
      f"rel {abs(d_id - d_naive) / abs(d_naive):.2e}")

# 6. free scaled discriminant matches the pairwise-difference product
zf = 30.0
ztf = zf ** (1 / 3)
ks = [cmath.exp(w * ztf) for w in omegas]
disc_exact = ((ks[0] - ks[1]) * (ks[0] - ks[2]) * (ks[1] - ks[2])) ** 2
Fd = bz.discriminant_handle(FREE)
val, dval = Fd(zf)
want_val = disc_exact * cmath.exp(-3 * ztf)
check("free scaled disc closed form", abs(val - want_val) < 1e-9 * (1 + abs(want_val)),
      f"dev {abs(val - want_val):.2e}")

# derivative sanity: compare against a finer central difference
h = 1e-6 * (1 + zf)
num = (Fd(zf + h)[0] - Fd(zf - h)[0]) / (2 * h)
check("disc handle derivative", abs(dval - num) < 1e-4 * (1 + abs(num)),
      f"dev {abs(dval - num):.2e}")

# 7. free scaled three-point value: closed form
F3 = bz.three_point_handle(FREE)
v3 = F3(zf)[0]
want3 = (2 * S3 / 9) * ((1 + math.exp(-3 * ztf)) * math.sin(S3 * ztf / 2)
                        - math.exp(-1.5 * ztf) * math.sin(S3 * ztf))
check("free scaled 3pt closed form", abs(v3 - want3) < 1e-9 * (1 + abs(want3)),
      f"dev {abs(v3 - want3):.2e}")

# 8. window helpers
lo, hi = bz.window_edges(1)
check("window edges n=1", abs(lo - 5.9674) < 1e-3 and abs(hi - 161.12) < 1e-2,
      f"{lo:.4f}, {hi:.2f}")
check("window index", bz.window_index(47.7) == 1 and bz.window_index(3.0) is None
      and bz.window_index(300.0) == 2
      and bz.window_index(bz.window_edges(1)[1]) is None)

# 9. free ramifications and 3pt eigenvalues, n = 1..8, rel 1e-7
t1 = time.time()
lo1 = bz.window_edges(1)[0]
hi8 = bz.window_edges(8)[1]
rams = bz.ramifications(FREE, (lo1, hi8))
t_ram = time.time() - t1
by_win = bz.label_by_windows(rams)
ok = True
worst_rel = 0.0
for n in range(1, 9):
    zs = by_win.get(n, [])
    mult = sum(z.multiplicity for z in zs)
    tgt = (2 * math.pi * n / S3) ** 3
    if mult != 2:
        ok = False
        print(f"  window {n}: multiplicity {mult} != 2, zeros {[z.lam for z in zs]}")
        continue
    rel = max(abs(z.lam.real - tgt) / tgt for z in zs)
    worst_rel = max(worst_rel, rel)
    if rel > 1e-7:
        ok = False
        print(f"  window {n}: rel err {rel:.2e}")
check("free ramifications n=1..8", ok, f"worst rel {worst_rel:.2e}, {t_ram:.1f}s")

t1 = time.time()
tps = bz.three_point_eigenvalues(FREE, (lo1, hi8))
t_tp = time.time() - t1
by_win3 = bz.label_by_windows(tps)
ok = True
worst_rel = 0.0
for n in range(1, 9):
    zs = by_win3.get(n, [])
    tgt = (2 * math.pi * n / S3) ** 3
    if len(zs) != 1 or zs[0].multiplicity != 1:
        ok = False
        print(f"  window {n}: {[(z.lam, z.multiplicity) for z in zs]}")
        continue
    rel = abs(zs[0].lam.real - tgt) / tgt
    worst_rel = max(worst_rel, rel)
    if rel > 1e-7:
        ok = False
        print(f"  window {n}: rel err {rel:.2e}")
check("free 3pt eigenvalues n=1..8", ok, f"worst rel {worst_rel:.2e}, {t_tp:.1f}s")
check("free n=1 value 47.7373", abs((2 * math.pi / S3) ** 3 - 47.73728583) < 1e-7)

# 10. asymptotic formulas
check("zeta_asymptotic free n=2", abs(bz.zeta_asymptotic(FREE, 2) - 381.91) < 5e-2,
      f"{bz.zeta_asymptotic(FREE, 2):.4f}")
ptest = bz.ThirdOrderCoeffs(FourierProfile(cos_coeffs=(1.0,)), FourierProfile())
check("tilde coefficient of cos 2 pi x", abs(bz._tilted_coefficient(ptest.p, 1) - 0.5) < 1e-15)
pconst = bz.ThirdOrderCoeffs(FourierProfile(a0=0.1), FourierProfile())
want = (2 * math.pi / S3) ** 3 - (4 * math.pi / S3) * 0.1
check("zeta_asymptotic constant p", abs(bz.zeta_asymptotic(pconst, 1) - want) < 1e-10,
      f"{bz.zeta_asymptotic(pconst, 1):.5f} vs {want:.5f}")
want = (6 * math.pi / S3) ** 3 - (12 * math.pi / S3) * 0.1
check("ram_asymptotic n=3 p0=0.1", abs(bz.ram_asymptotic(pconst, 3) - want) < 1e-10,
      f"{bz.ram_asymptotic(pconst, 3):.4f}")

# 11. floquet_psi3 free case
zeta = 500.0
zt = zeta ** (1 / 3)
mesh = np.linspace(0, 1, 9)
psi = bz.floquet_psi3(FREE, zeta, mesh)
want = np.exp(zt * mesh)
err = np.max(np.abs(psi[0] - want) / want)
err1 = np.max(np.abs(psi[1] - zt * want) / (zt * want))
check("free psi3 = e^{zt x}", max(err, err1) < 1e-9, f"rel {max(err, err1):.2e}")
check("psi3(1) = kappa3 (free)", abs(psi[0, -1] - math.exp(zt)) / math.exp(zt) < 1e-9)

# perturbed: psi(1) = kappa3 consistency
mono = bz.integrate_third_order(PQ, 500.0, 1)
k3 = bz.multipliers(mono).kappa3
psi = bz.floquet_psi3(PQ, 500.0, [0.0, 0.25, 0.5, 1.0])
check("psi3(1) = kappa3 (perturbed)", abs(psi[0, -1] - k3) / abs(k3) < 1e-9,
      f"rel {abs(psi[0, -1] - k3) / abs(k3):.2e}")

# near-collision guard at tiny zeta
try:
    bz.floquet_psi3(FREE, 1e-15, [0.0, 1.0])
    check("dominance guard trips", False)
except NearRamificationError:
    check("dominance guard trips", True)

# 12. free reduction gives V = 0
spec, lam = bz.reduce_to_hill(FREE, 1289.0)
want_lam = 0.75 * 1289.0 ** (2 / 3)
xs = np.linspace(0, 1, 33)
vmax = max(abs(spec.value(float(x), lam)) for x in xs)
dvmax = max(abs(spec.dvalue(float(x), lam)) for x in xs)
check("free reduction lam", abs(lam - want_lam) < 1e-10 * want_lam)
check("free reduction V = 0", vmax < 1e-7, f"sup|V| {vmax:.2e}")
check("free reduction dV/dlam = 0", dvmax < 1e-5, f"sup {dvmax:.2e}")

# large-energy shape: V(x, lam) ~ -p(x)
spec, lam = bz.reduce_to_hill(PQ, 1.0e5)
dev = max(abs(spec.value(float(x), lam) + PQ.p.eval_scalar(float(x))) for x in xs)
check("reduction V ~ -p at high energy", dev < 3.0 / math.sqrt(abs(lam)),
      f"sup|V+p| {dev:.3e} vs lam^-1/2 {abs(lam) ** -0.5:.3e}")

# 13. perturbed windows: counts, inclusion, trends (criterion 11 rehearsal)
t1 = time.time()
lo2 = bz.window_edges(2)[0]
rams = bz.ramifications(PQ, (lo2, hi8))
tps = bz.three_point_eigenvalues(PQ, (lo2, hi8))
t_scan = time.time() - t1
rw = bz.label_by_windows(rams)
tw = bz.label_by_windows(tps)
ok = True
for n in range(2, 9):
    rmult = sum(z.multiplicity for z in rw.get(n, []))
    t_n = tw.get(n, [])
    if rmult != 2 or len(t_n) != 1 or t_n[0].multiplicity != 1:
        ok = False
        print(f"  window {n}: ram mult {rmult}, 3pt {[(z.lam, z.multiplicity) for z in t_n]}")
        continue
    r_lo = min(z.lam.real for z in rw[n])
    r_hi = max(z.lam.real for z in rw[n])
    zn = t_n[0].lam.real
    if not (r_lo - 1e-6 <= zn <= r_hi + 1e-6):
        ok = False
        print(f"  window {n}: zeta_n {zn:.6f} outside [{r_lo:.6f}, {r_hi:.6f}]")
check("perturbed windows n=2..8: counts + inclusion", ok, f"{t_scan:.1f}s")

dev_z = [abs(tw[n][0].lam.real - bz.zeta_asymptotic(PQ, n)) for n in range(4, 9)]
check("3pt asymptotic trend n=4..8", all(b < a for a, b in zip(dev_z, dev_z[1:])),
      " ".join(f"{d:.2e}" for d in dev_z))
dev_r = []
for n in range(4, 9):
    res = max(abs(z.lam.real - bz.ram_asymptotic(PQ, n)) for z in rw[n])
    dev_r.append(res / n)
check("ram asymptotic residual/n trend n=4..8",
      all(b < a for a, b in zip(dev_r, dev_r[1:])),
      " ".join(f"{d:.2e}" for d in dev_r))

# also: the n=1 window of the contract example (two real zeros, p=0.1cos, q=0)
p_only = bz.ThirdOrderCoeffs(FourierProfile(cos_coeffs=(0.1,)), FourierProfile())
r1 = bz.ramifications(p_only, bz.window_edges(1))
check("example window n=1 two real zeros",
      sum(z.multiplicity for z in r1) == 2
      and all(abs(z.lam.imag) < 1e-8 for z in r1),
      f"{[(z.lam.real, z.multiplicity) for z in r1]}")

# 14. reduction cross-check (criterion 12 rehearsal): ramifications map to
# 2-periodic eigenvalues and three-point eigenvalues to Dirichlet ones.
# The reduced potential's gap at lam* is hairline, so Delta^2 - 1 is a
# near-double there: polish with multiplicity 2.
t1 = time.time()
ok = True
worst2 = worst_d = 0.0
for n in range(3, 9):
    zs = sorted(rw[n], key=lambda z: z.lam.real)
    r = zs[-1].lam.real  # upper ramification of the window
    spec, lam_star = bz.reduce_to_hill(PQ, r)
    ws = SpectralWorkspace(spec)
    zhat = rootfind.refine_newton(ws.two_periodic_char(), lam_star.real, 2)
    dev = abs(zhat.lam - lam_star)
    worst2 = max(worst2, dev)
    if dev > 1e-6:
        ok = False
        print(f"  n={n} 2per: dev {dev:.2e} converged={zhat.newton_converged}")
    zn = tw[n][0].lam.real
    spec_d, lam_d = bz.reduce_to_hill(PQ, zn)
    ws_d = SpectralWorkspace(spec_d)
    dhat = rootfind.refine_newton(ws_d.char(Problem.DIRICHLET), lam_d.real, 1)
    dev = abs(dhat.lam - lam_d)
    worst_d = max(worst_d, dev)
    if not dhat.newton_converged or dev > 1e-6:
        ok = False
        print(f"  n={n} dir: dev {dev:.2e} converged={dhat.newton_converged}")
check("reduction cross-check n=3..8", ok,
      f"worst 2per {worst2:.2e} dir {worst_d:.2e}, {time.time() - t1:.1f}s")

# 15. error paths
try:
    bz.ramifications(PQ, (-5.0, 50.0))
    check("negative region refused", False)
except ConfigError:
    check("negative region refused", True)
try:
    bz.integrate_third_order(PQ, 2.0e8, 2)
    check("growth cap enforced", False)
except ConfigError:
    check("growth cap enforced", True)
try:
    bz.ThirdOrderCoeffs.from_json({"p": {"a0": 0.1}, "bogus": 1})
    check("json validation", False)
except ConfigError:
    check("json validation", True)
rt = bz.ThirdOrderCoeffs.from_json(PQ.to_json())
check("json round trip", rt == PQ)

print(f"\ntotal {time.time() - t0:.1f}s, {len(fails)} failures")
if fails:
    print("FAILED:", fails)
