import math
import time

from hillbands.potentials import (ConstantPotential, FourierProfile,
                                  LambdaIndependentPotential, ZeroPotential)
from hillbands.spectra import (Problem, SpectralWorkspace, assemble_bands,
                               band_functions, dirichlet_spectrum,
                               interlacing_report, mixed_spectra,
                               neumann_spectrum, quasi_spectrum,
                               two_periodic_spectrum)

zero = ZeroPotential()
const3 = ConstantPotential(3.0)
mathieu = LambdaIndependentPotential(FourierProfile(cos_coeffs=(2.0,)))

ok = True


def check(name, cond, detail=""):
    global ok
    print(("PASS " if cond else "FAIL ") + name + ("  " + detail if detail else ""))
    ok = ok and cond


# --- quasi-periodic, V=0, k=pi/2 on (0,30): (pi/2)^2, (3pi/2)^2
ws = SpectralWorkspace(zero)
eigs = quasi_spectrum(zero, math.pi / 2, (0.0, 30.0), ws=ws)
want = [(math.pi / 2) ** 2, (3 * math.pi / 2) ** 2]
check("quasi k=pi/2", len(eigs) == 2 and all(
    abs(e.lam.real - w) <= 1e-9 * (1 + w) for e, w in zip(eigs, want)),
    f"{[e.lam.real for e in eigs]}")

# --- quasi k=0 on (-1,50): 0 simple, (2pi)^2 double
eigs = quasi_spectrum(zero, 0.0, (-1.0, 50.0), ws=ws)
check("quasi k=0", len(eigs) == 2 and eigs[0].multiplicity == 1
      and abs(eigs[0].lam) < 1e-9 and eigs[1].multiplicity == 2
      and abs(eigs[1].lam.real - (2 * math.pi) ** 2) < 1e-7,
      f"{[(e.lam.real, e.multiplicity) for e in eigs]}")

# --- two-periodic, V=0 on (-1,100)
eigs = two_periodic_spectrum(zero, (-1.0, 100.0), ws=ws)
got = [(round(e.lam.real, 6), e.multiplicity, e.problem.value, e.index)
       for e in eigs]
pi2 = math.pi ** 2
# n=3 window ((2pi)^2, (4pi)^2) overhangs the region, so no index there
want_tp = [(0.0, 1, "periodic", 0),
           (round(pi2, 6), 2, "antiperiodic", 1),
           (round(4 * pi2, 6), 2, "periodic", 2),
           (round(9 * pi2, 6), 2, "antiperiodic", None)]
near = all(abs(g[0] - w[0]) < 1e-6 and g[1:] == w[1:] for g, w in zip(got, want_tp))
check("two-periodic V=0", len(got) == 4 and near, f"{got}")

# --- Dirichlet / Neumann, V=0 on (-1, 130)
dir_eigs = dirichlet_spectrum(zero, (-1.0, 130.0), ws=ws)
check("dirichlet V=0", [round(e.lam.real, 6) for e in dir_eigs]
      == [round(n * n * pi2, 6) for n in (1, 2, 3)]
      and [e.index for e in dir_eigs] == [1, 2, 3],
      f"{[(e.lam.real, e.index) for e in dir_eigs]}")
neu_eigs = neumann_spectrum(zero, (-1.0, 130.0), ws=ws)
check("neumann V=0", [round(e.lam.real, 6) for e in neu_eigs]
      == [0.0] + [round(n * n * pi2, 6) for n in (1, 2, 3)]
      and [e.index for e in neu_eigs] == [0, 1, 2, 3],
      f"{[(e.lam.real, e.index) for e in neu_eigs]}")

# --- mixed problems, V=0 on (0.1, 40): ((n-1/2)pi)^2 -> 2.467, 22.21
dn, nd = mixed_spectra(zero, (0.1, 40.0), ws=ws)
want_m = [(math.pi / 2) ** 2, (3 * math.pi / 2) ** 2]
check("mixed V=0", all(len(v) == 2 and
      all(abs(e.lam.real - w) < 1e-8 for e, w in zip(v, want_m))
      for v in (dn, nd)), f"{[e.lam.real for e in dn]}")

# --- constant shift: all problems shift by +3
ws3 = SpectralWorkspace(const3)
eigs = two_periodic_spectrum(const3, (-1.0, 103.0), ws=ws3)
check("two-periodic V=3 shift",
      len(eigs) == 4 and all(abs(e.lam.real - (w[0] + 3.0)) < 1e-6
                             for e, w in zip(eigs, want_tp)),
      f"{[round(e.lam.real, 6) for e in eigs]}")

# --- bands for V=0 on (-1, 260): five bands, all gaps closed
bs = assemble_bands(zero, (-1.0, 260.0), ws=ws)
edge_err = max(abs(b[0] - (n * math.pi) ** 2) + abs(b[1] - ((n + 1) * math.pi) ** 2)
               for n, b in zip(range(0, 5), [(b[0], b[1]) for b in bs.bands]))
check("bands V=0", bs.start_index == 1 and len(bs.bands) >= 4
      and not bs.open_gaps() and edge_err < 1e-7,
      f"nb={len(bs.bands)} start={bs.start_index} err={edge_err:.2e}")

# --- Mathieu 2cos(2pix) vs frozen FD oracle
per = [-0.050603842, 39.4699745, 39.5205775, 157.917047, 157.917048,
       355.307206, 355.307206]
anti = [8.85709895, 10.8567782, 88.83261247, 88.83293322, 246.7422209, 246.7422209]
wsm = SpectralWorkspace(mathieu)
t0 = time.perf_counter()
eigs = two_periodic_spectrum(mathieu, (-1.0, 400.0), ws=wsm)
t_math = time.perf_counter() - t0
flat = []
for e in eigs:
    flat.extend([e.lam.real] * e.multiplicity)
want_flat = sorted(per + anti)
errs = [abs(g - w) / (1 + abs(w)) for g, w in zip(flat, want_flat)]
check("mathieu two-periodic", len(flat) == len(want_flat) and max(errs) < 2e-6,
      f"n={len(flat)} maxrel={max(errs):.2e} t={t_math:.1f}s")

bsm = assemble_bands(mathieu, (-1.0, 400.0), ws=wsm)
gaps = bsm.open_gaps(tol=1e-7)
gap_w = [g[1] - g[0] for g in gaps]
want_w = [per[1] - anti[0] if False else anti[1] - anti[0],
          per[2] - per[1], anti[3] - anti[2]]
check("mathieu gaps", len(gap_w) == 3 and all(
    abs(a - b) < 1e-5 for a, b in zip(gap_w, want_w)),
    f"{[f'{w:.3e}' for w in gap_w]} want {[f'{w:.3e}' for w in want_w]}")

# --- band functions for V=0: lam1 = k^2 rising, lam2 = (2pi-k)^2 falling
kg = [j * math.pi / 8 for j in range(9)]
tab = band_functions(zero, kg, (-1.0, 45.0), ws=ws)
check("band functions V=0", tab.trends[0] == "increasing"
      and tab.trends[1] == "decreasing" and not any(tab.flags),
      f"{tab.trends} flags={tab.flags}")

# --- interlacing for Mathieu
rep = interlacing_report(mathieu, (-1.0, 400.0), ws=wsm)
check("interlacing mathieu", rep.certified and not rep.violations
      and len(rep.windows) >= 5, f"viol={rep.violations}")

# --- criterion 1 timing: V=0 per/anti/D/N on (-0.5, 1000)
t0 = time.perf_counter()
ws1 = SpectralWorkspace(zero)
eigs_tp = two_periodic_spectrum(zero, (-0.5, 1000.0), ws=ws1)
eigs_d = dirichlet_spectrum(zero, (-0.5, 1000.0), ws=ws1)
eigs_n = neumann_spectrum(zero, (-0.5, 1000.0), ws=ws1)
t1 = time.perf_counter() - t0

flat = []
for e in eigs_tp:
    flat.extend([e.lam.real] * e.multiplicity)
want = [0.0] + [x for n in range(1, 11) for x in ((n * math.pi) ** 2,) * 2
                if (n * math.pi) ** 2 < 1000]
rel = [abs(g - w) / (1 + abs(w)) for g, w in zip(flat, want)]
ok_tp = len(flat) == len(want) and max(rel) < 1e-9
want_d = [(n * math.pi) ** 2 for n in range(1, 11)]
rel_d = [abs(e.lam.real - w) / (1 + w) for e, w in zip(eigs_d, want_d)]
ok_d = len(eigs_d) == len(want_d) and max(rel_d) < 1e-9
want_n = [0.0] + want_d
rel_n = [abs(e.lam.real - w) / (1 + w) for e, w in zip(eigs_n, want_n)]
ok_n = len(eigs_n) == len(want_n) and max(rel_n) < 1e-9
check("criterion1 values", ok_tp and ok_d and ok_n,
      f"tp={max(rel):.1e} d={max(rel_d):.1e} n={max(rel_n):.1e}")
check("criterion1 time", t1 < 10.0, f"{t1:.2f}s")

print("ALL OK" if ok else "FAILURES PRESENT")
