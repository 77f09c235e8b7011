"""The five spectral problems of the Hill operator as zero sets.

Every problem is the zero set of an entire characteristic function built
from the fundamental solutions at x = 1:

    quasi-periodic(k):  Delta(lam) - cos k
    periodic/antiper.:  Delta(lam) -/+ 1   (combined: Delta^2 - 1)
    Dirichlet:          phi(1, lam)
    Neumann:            theta'(1, lam)
    mixed D->N / N->D:  phi'(1, lam) / theta(1, lam)

Real regions are scanned when a reality certificate holds; otherwise zeros
are isolated in a complex rectangle whose height comes from the eigenvalue
bound |Im lam0| <= sup_x |Im V(x, lam0)|.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

from . import rootfind
from .errors import (BandStructureError, ConfigError, DomainError,
                     HillbandsError, UnsupportedRegionError)
from .fundsol import DEFAULT_CONFIG, fundamental_values, integrate_fundamental
from .potentials import Rect as DomainRect
from .reality import (certify_derivative_strip, certify_halfplane,
                      xi_functional)

_REAL_TOL = 1e-8


class Problem(Enum):
    QUASI_PERIODIC = "quasi_periodic"
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    MIXED_DN = "mixed_dn"
    MIXED_ND = "mixed_nd"


@dataclass(frozen=True)
class Eigenvalue:
    lam: complex
    multiplicity: int
    problem: Problem
    index: int = None
    real_flag: bool = False
    k: float = None
    residual: float = 0.0


@dataclass(frozen=True)
class BandStructure:
    """Bands and gaps of the periodic/antiperiodic ladder on a real window.

    bands[j] = [lam_{n-1}^+, lam_n^-] and gaps[j] = (lam_n^-, lam_n^+) with
    n = start_index + j, so gaps[j] separates bands[j] and bands[j+1]; a gap
    may be degenerate (closed). When the window fails every reality
    certificate, certified is False and the raw zeros are reported instead.
    """

    bands: tuple
    gaps: tuple
    start_index: int
    domain: object
    certified: bool = True
    raw: tuple = ()

    def open_gaps(self, tol=1e-9):
        return tuple(g for g in self.gaps if g[1] - g[0] > tol)


def _delta_of(fd):
    return 0.5 * (fd.theta1 + fd.dphi1)


def _ddelta_of(fd):
    return 0.5 * (fd.lam_derivs[0] + fd.lam_derivs[3])


# value and d/dlam pickers on FundamentalData for the boundary problems
_PARTS = {
    Problem.DIRICHLET: (lambda fd: fd.phi1, lambda fd: fd.lam_derivs[2]),
    Problem.NEUMANN: (lambda fd: fd.dtheta1, lambda fd: fd.lam_derivs[1]),
    Problem.MIXED_DN: (lambda fd: fd.dphi1, lambda fd: fd.lam_derivs[3]),
    Problem.MIXED_ND: (lambda fd: fd.theta1, lambda fd: fd.lam_derivs[0]),
}


class SpectralWorkspace:
    """Fundamental-solution caches shared by all problems of one potential.

    Keeps a tight-tolerance cache (used for final polish and closed/open
    gap decisions) and coarse caches for scanning and bracketing, which the
    characteristic handles expose as F.coarse and F.value_only.
    """

    def __init__(self, spec, cfg=DEFAULT_CONFIG):
        self.spec = spec
        self.cfg = cfg
        self.cfg_coarse = cfg.coarsened()
        self._tight = {}
        self._coarse = {}
        self._values = {}

    def data(self, lam):
        key = complex(lam)
        fd = self._tight.get(key)
        if fd is None:
            fd = integrate_fundamental(self.spec, key, self.cfg)
            self._tight[key] = fd
        return fd

    def data_coarse(self, lam):
        key = complex(lam)
        fd = self._coarse.get(key)
        if fd is None:
            fd = integrate_fundamental(self.spec, key, self.cfg_coarse)
            self._coarse[key] = fd
        return fd

    def values_coarse(self, lam):
        key = complex(lam)
        fd = self._values.get(key)
        if fd is None:
            fd = fundamental_values(self.spec, key, self.cfg_coarse)
            self._values[key] = fd
        return fd

    def delta(self, lam):
        return _delta_of(self.data(lam))

    def _tiered(self, val, dval):
        def F(lam):
            fd = self.data(lam)
            return val(fd), dval(fd)

        def coarse(lam):
            fd = self.data_coarse(lam)
            return val(fd), dval(fd)

        F.coarse = coarse
        F.value_only = lambda lam: val(self.values_coarse(lam))
        return F

    def char(self, problem, k=None):
        """Characteristic handle F(lam) -> (value, d/dlam value)."""
        if problem is Problem.QUASI_PERIODIC:
            if k is None:
                raise ConfigError("quasi-periodic problem needs k")
            shift = -math.cos(k)
        elif problem is Problem.PERIODIC:
            shift = -1.0
        elif problem is Problem.ANTIPERIODIC:
            shift = 1.0
        else:
            try:
                val, dval = _PARTS[problem]
            except KeyError:
                raise ConfigError(f"unknown problem {problem!r}") from None
            return self._tiered(val, dval)
        return self._tiered(lambda fd: _delta_of(fd) + shift, _ddelta_of)

    def two_periodic_char(self):
        def val(fd):
            d = _delta_of(fd)
            return d * d - 1.0

        return self._tiered(val, lambda fd: 2.0 * _delta_of(fd) * _ddelta_of(fd))


def region_is_real_certified(spec, region, grid=8):
    """True when a half-plane or on-axis certificate covers (a, b)."""
    a, b = region
    try:
        cert = certify_halfplane(spec, a, grid)
        if cert.certified and cert.threshold <= a:
            return True
        # push the base of the half-plane left so its threshold clears a;
        # stop as soon as that stops helping (growing families inflate xi)
        base = a
        for _ in range(3):
            if cert.threshold is None:
                break
            base -= 2.0 * max(cert.threshold - a, 0.05)
            prev = cert.threshold
            cert = certify_halfplane(spec, base, grid)
            if cert.certified and cert.threshold <= a:
                return True
            if cert.threshold is None or not cert.threshold < prev:
                break
    except (UnsupportedRegionError, DomainError):
        pass
    try:
        return certify_derivative_strip(spec, (a, b), grid).certified
    except (UnsupportedRegionError, DomainError):
        return False


def _search_height(spec, a, b):
    """Vertical half-extent that provably contains all eigenvalues."""
    h = 1.0
    for _ in range(3):
        try:
            xi = xi_functional(spec, DomainRect(a, b, h))
        except (UnsupportedRegionError, DomainError):
            return h
        if 2.0 * xi <= h:
            return h
        h = 2.0 * xi + 0.5
    return h


def _located_to_eigs(zeros, problem, k=None, classify=None):
    out = []
    for z in zeros:
        lam = z.lam
        real = abs(lam.imag) <= _REAL_TOL * (1.0 + abs(lam.real))
        if real:
            lam = complex(lam.real, 0.0)
        prob = classify(lam) if classify is not None else problem
        out.append(Eigenvalue(lam=lam, multiplicity=z.multiplicity,
                              problem=prob, real_flag=real, k=k,
                              residual=z.residual))
    out.sort(key=lambda e: (e.lam.real, e.lam.imag))
    return out


def _solve_rect(F, rect, target=None):
    """Isolate and polish every zero inside a complex rectangle.

    Isolation integrates the logarithmic derivative on box boundaries, where
    winding numbers only need coarse accuracy; the polish is tight.
    """
    if target is None:
        # winding counts degrade once boundary |F| nears the integration
        # noise, which grows with |lam|: keep pieces comfortably above that
        target = max(1e-2, 2.5e-4 * (abs(rect.center) + rect.half_width))
    Fc = getattr(F, "coarse", F)
    pieces = rootfind.isolate_zeros(Fc, rect, target)
    zeros = []
    for piece, count in pieces:
        z = rootfind.refine_newton(F, piece.center, count)
        if count > 1 and (not z.newton_converged or z.residual > 1e-6):
            # cluster may be several distinct zeros: look closer once
            sub = rootfind.isolate_zeros(
                Fc, piece, max(target * 1e-2, 1e-5 * (1.0 + abs(piece.center))))
            if len(sub) > 1:
                for p2, c2 in sub:
                    zeros.append(rootfind.refine_newton(F, p2.center, c2))
                continue
        zeros.append(z)
    return zeros


def _annotated(exc, region):
    """Append the search region to a propagating error, in place."""
    if isinstance(region, rootfind.Rect):
        where = (f"rect center {region.center:.6g}, "
                 f"{region.half_width:.6g} x {region.half_height:.6g}")
    else:
        where = f"region ({region[0]:.6g}, {region[1]:.6g})"
    if exc.args:
        exc.args = (f"{exc.args[0]} [in {where}]",) + exc.args[1:]
    else:
        exc.args = (f"[in {where}]",)
    return exc


def _is_rect(region):
    return isinstance(region, (rootfind.Rect, DomainRect))


def _spectrum(ws, problem, region, k=None, classify=None, F=None):
    spec = ws.spec
    if F is None:
        F = ws.char(problem, k)
    if isinstance(region, DomainRect):
        region = rootfind.Rect(complex(0.5 * (region.a + region.b), 0.0),
                               0.5 * (region.b - region.a), region.r)
    try:
        if isinstance(region, rootfind.Rect):
            zeros = _solve_rect(F, region)
            return _located_to_eigs(zeros, problem, k, classify)
        a, b = float(region[0]), float(region[1])
        if not b > a:
            raise ConfigError("region must satisfy a < b")
        if region_is_real_certified(spec, (a, b)):
            zeros = rootfind.real_scan(F, (a, b))
            return _located_to_eigs(zeros, problem, k, classify)
        h = _search_height(spec, a, b)
        rect = rootfind.Rect(complex(0.5 * (a + b), 0.0), 0.5 * (b - a), h)
        zeros = _solve_rect(F, rect)
        return _located_to_eigs(zeros, problem, k, classify)
    except HillbandsError as exc:
        raise _annotated(exc, region)


def quasi_spectrum(spec, k, region, cfg=DEFAULT_CONFIG, ws=None):
    """Zeros of Delta - cos k on the region, as Eigenvalue records.

    region is a real interval (a, b), searched on the axis when a reality
    certificate covers it and in a complex rectangle otherwise; passing a
    rootfind.Rect forces the complex search. k and 2 pi - k give the same
    set, so k is folded into [0, pi].
    """
    if not 0.0 <= k < 2.0 * math.pi:
        raise ConfigError("k must lie in [0, 2 pi)")
    if k > math.pi:
        k = 2.0 * math.pi - k
    ws = ws or SpectralWorkspace(spec, cfg)
    return _spectrum(ws, Problem.QUASI_PERIODIC, region, k=k)


def two_periodic_spectrum(spec, region, cfg=DEFAULT_CONFIG, ws=None):
    """Zeros of Delta^2 - 1, attributed to the periodic or antiperiodic side.

    Where the full-width counting windows hold, eigenvalues carry the ladder
    index n (the pair lam_n^-, lam_n^+ shares it; the ground state gets 0).
    """
    ws = ws or SpectralWorkspace(spec, cfg)

    def classify(lam):
        d = ws.delta(lam)
        return Problem.PERIODIC if abs(d - 1.0) <= abs(d + 1.0) \
            else Problem.ANTIPERIODIC

    eigs = _spectrum(ws, Problem.PERIODIC, region, classify=classify,
                     F=ws.two_periodic_char())
    if _is_rect(region):
        return eigs
    return _label_ladder(eigs, (float(region[0]), float(region[1])))


def _label_ladder(eigs, region):
    pairs, ground, _ = _window_pairs(eigs, region)
    labelled = []
    for e in eigs:
        n = None
        if e.real_flag:
            x = e.lam.real
            if ground is not None and e.problem is Problem.PERIODIC \
                    and x == ground:
                n = 0
            else:
                for m, (lo, hi, want) in pairs.items():
                    if e.problem is want and x in (lo, hi):
                        n = m
                        break
        labelled.append(replace(e, index=n) if n is not None else e)
    return labelled


def _label_half_windows(eigs, region, lowest):
    """Index n when ((pi(n-1/2))^2, (pi(n+1/2))^2) holds exactly one zero."""
    a, b = region
    counts = {}
    for e in eigs:
        if not e.real_flag:
            continue
        x = e.lam.real
        n = round(math.sqrt(x) / math.pi) if x > 0.0 else 0
        counts[n] = counts.get(n, 0) + e.multiplicity
    labelled = []
    for e in eigs:
        n = None
        if e.real_flag:
            x = e.lam.real
            m = round(math.sqrt(x) / math.pi) if x > 0.0 else 0
            lo, hi = (math.pi * (m - 0.5)) ** 2, (math.pi * (m + 0.5)) ** 2
            if m == 0:
                lo = -math.inf
            # label only windows entirely inside the searched region
            if m >= lowest and counts.get(m) == 1 and e.multiplicity == 1 \
                    and (lo >= a or m == 0) and hi <= b:
                n = m
        labelled.append(replace(e, index=n) if n is not None else e)
    return labelled


def dirichlet_spectrum(spec, region, cfg=DEFAULT_CONFIG, ws=None):
    """Zeros of phi(1, .): eigenvalues with y(0) = y(1) = 0.

    Simple zeros alone in their half-integer counting window carry index n.
    """
    ws = ws or SpectralWorkspace(spec, cfg)
    eigs = _spectrum(ws, Problem.DIRICHLET, region)
    if _is_rect(region):
        return eigs
    return _label_half_windows(
        eigs, (float(region[0]), float(region[1])), lowest=1)


def neumann_spectrum(spec, region, cfg=DEFAULT_CONFIG, ws=None):
    """Zeros of theta'(1, .): eigenvalues with y'(0) = y'(1) = 0.

    Indexing as for Dirichlet, except the ladder starts at n = 0 (one
    eigenvalue below (pi/2)^2, possibly negative).
    """
    ws = ws or SpectralWorkspace(spec, cfg)
    eigs = _spectrum(ws, Problem.NEUMANN, region)
    if _is_rect(region):
        return eigs
    return _label_half_windows(
        eigs, (float(region[0]), float(region[1])), lowest=0)


def mixed_spectra(spec, region, cfg=DEFAULT_CONFIG, ws=None):
    """Both mixed problems: (y(0)=y'(1)=0 list, y'(0)=y(1)=0 list)."""
    ws = ws or SpectralWorkspace(spec, cfg)
    dn = _spectrum(ws, Problem.MIXED_DN, region)
    nd = _spectrum(ws, Problem.MIXED_ND, region)
    return dn, nd


# ---------------------------------------------------------------------------
# Window counting and band assembly

def _expand(eigs):
    """Multiplicity-expanded real parts, sorted."""
    out = []
    for e in eigs:
        out.extend([e] * e.multiplicity)
    out.sort(key=lambda e: e.lam.real)
    return out


def _window_pairs(eigs, region):
    """Pair the 2-periodic ladder by the full-width counting windows.

    Window n = (((n-1) pi)^2, ((n+1) pi)^2) must contain exactly two
    eigenvalues of parity n (periodic for even n, antiperiodic for odd).
    Returns (pairs {n: (lo, hi, problem)}, ground, bad) where bad lists
    windows with wrong counts and ground is the single eigenvalue below
    window 1, when the region reaches below pi^2.
    """
    a, b = region
    expanded = _expand([e for e in eigs if e.real_flag])
    n_lo = max(1, int(math.ceil(math.sqrt(max(a, 0.0)) / math.pi)) + 1)
    n_hi = int(math.floor(math.sqrt(max(b, 0.0)) / math.pi)) - 1
    pairs, bad = {}, []
    for n in range(n_lo, n_hi + 1):
        lo, hi = (math.pi * (n - 1)) ** 2, (math.pi * (n + 1)) ** 2
        want = Problem.PERIODIC if n % 2 == 0 else Problem.ANTIPERIODIC
        inside = [e for e in expanded
                  if lo < e.lam.real < hi and e.problem is want]
        if len(inside) == 2:
            pairs[n] = (inside[0].lam.real, inside[1].lam.real, want)
        else:
            bad.append((n, len(inside)))
    ground = None
    if a < math.pi ** 2:
        below = [e for e in expanded
                 if e.lam.real < math.pi ** 2 and e.problem is Problem.PERIODIC]
        if len(below) == 1:
            ground = below[0].lam.real
    return pairs, ground, bad


def _stable_start(pairs, bad, ground):
    """Smallest n from which 10 consecutive windows count correctly."""
    if not pairs:
        return None
    bad_set = {n for n, _ in bad}
    ns = sorted(pairs)
    end = ns[-1]
    for n in ([0] if ground is not None else []) + ns:
        run = range(max(n, 1), min(max(n, 1) + 10, end + 1))
        if all(m in pairs and m not in bad_set for m in run):
            return n
    return None


def assemble_bands(spec, region, cfg=DEFAULT_CONFIG, ws=None):
    """Band/gap decomposition of the 2-periodic ladder on a real window.

    Requires a reality certificate; without one the raw zeros are returned
    with certified=False. Ordering and the sign of Delta inside bands and
    open gaps are validated, and violations raise BandStructureError naming
    the offending window indices.
    """
    ws = ws or SpectralWorkspace(spec, cfg)
    a, b = float(region[0]), float(region[1])
    eigs = two_periodic_spectrum(spec, (a, b), cfg, ws=ws)
    if not region_is_real_certified(spec, (a, b)) \
            or not all(e.real_flag for e in eigs):
        return BandStructure(bands=(), gaps=(), start_index=None,
                             domain=(a, b), certified=False, raw=tuple(eigs))
    pairs, ground, bad = _window_pairs(eigs, (a, b))
    start = _stable_start(pairs, bad, ground)
    if start is None:
        raise BandStructureError(
            "no run of 10 consecutive valid counting windows in "
            f"[{a:.6g}, {b:.6g}]", indices=tuple(n for n, _ in bad))
    if start == 0:
        pairs = dict(pairs)
        pairs[0] = (ground, ground, Problem.PERIODIC)
    ns = sorted(n for n in pairs if n >= start)
    # drop any trailing indices after a hole so bands stay contiguous
    run = [ns[0]]
    for n in ns[1:]:
        if n == run[-1] + 1:
            run.append(n)
        else:
            break
    tol = 1e-9 * (1.0 + abs(b))
    bands, gaps, violations = [], [], []
    for n in run[1:]:
        prev_hi = pairs[n - 1][1]
        lo, hi, _ = pairs[n]
        if lo < prev_hi - tol:
            violations.append(n)
        bands.append((prev_hi, lo))
        gaps.append((lo, hi))
    if violations:
        raise BandStructureError(
            "band ordering violated", indices=tuple(sorted(set(violations))))
    start_index = run[0] + 1
    _validate_band_signs(ws, bands, gaps, start_index, tol)
    return BandStructure(bands=tuple(bands), gaps=tuple(gaps),
                         start_index=start_index, domain=(a, b),
                         certified=True)


def _validate_band_signs(ws, bands, gaps, start_index, tol):
    """|Delta| < 1 inside bands; Delta > 1 / < -1 inside open gaps by parity."""
    bad = []
    for j, (lo, hi) in enumerate(bands):
        if hi - lo <= tol:
            continue
        for t in (0.1, 0.3, 0.5, 0.7, 0.9):
            d = ws.delta(lo + t * (hi - lo))
            if abs(d) >= 1.0 + 1e-9:
                bad.append(start_index + j)
                break
    for j, (lo, hi) in enumerate(gaps):
        if hi - lo <= max(tol, 1e-7 * (1.0 + hi)):
            continue
        n = start_index + j
        d = ws.delta(0.5 * (lo + hi)).real
        if (n % 2 == 0 and d <= 1.0 - 1e-9) or (n % 2 == 1 and d >= -1.0 + 1e-9):
            bad.append(n)
    if bad:
        raise BandStructureError(
            "Lyapunov sign pattern violated inside bands/gaps",
            indices=tuple(sorted(set(bad))))


# ---------------------------------------------------------------------------
# Band functions lam_n(k)

@dataclass(frozen=True)
class BandFunctionTable:
    """lam_n(k) curves over a k-grid, with monotonicity and crossing flags."""

    k_grid: tuple
    curves: tuple          # curves[i][j] = lam_i(k_grid[j])
    trends: tuple          # "increasing" | "decreasing" | "mixed" per curve
    flags: tuple           # human-readable tracking warnings


def band_functions(spec, k_grid, region, cfg=DEFAULT_CONFIG, ws=None):
    """Table of quasi-periodic eigenvalue curves over k_grid in [0, pi].

    The region must be certified real. Curves are matched across the grid in
    sorted order (they cannot cross for 0 < k < pi); ambiguous matches within
    1e-8 are flagged rather than silently resolved.
    """
    ks = [float(k) for k in k_grid]
    if any(k < 0.0 or k > math.pi for k in ks):
        raise ConfigError("k_grid entries must lie in [0, pi]")
    a, b = float(region[0]), float(region[1])
    if not region_is_real_certified(spec, (a, b)):
        raise UnsupportedRegionError(
            "band functions need a certified-real region")
    ws = ws or SpectralWorkspace(spec, cfg)
    workers = int(os.environ.get("HILLBANDS_THREADS", "1"))

    def column(k):
        eigs = quasi_spectrum(spec, k, (a, b), cfg, ws=ws)
        return [e.lam.real for e in _expand(eigs)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(column, ks))
    else:
        columns = [column(k) for k in ks]

    flags = []
    width = min(len(c) for c in columns)
    if width == 0:
        return BandFunctionTable(tuple(ks), (), (), ("empty region",))
    # align columns of unequal length by the offset with least total motion
    aligned = [columns[0][:width]]
    for j in range(1, len(columns)):
        col, prev = columns[j], aligned[-1]
        best, best_cost = 0, math.inf
        for off in range(0, len(col) - width + 1):
            cost = sum(abs(col[off + i] - prev[i]) for i in range(width))
            if cost < best_cost:
                best, best_cost = off, cost
        if best != 0:
            flags.append(f"column {j}: dropped {best} leading value(s)")
        aligned.append(col[best:best + width])
    for j in range(1, len(columns)):
        col = aligned[j]
        for i in range(width - 1):
            if abs(col[i] - col[i + 1]) <= 1e-8 * (1.0 + abs(col[i])) \
                    and 0.0 < ks[j] < math.pi:
                flags.append(
                    f"possible crossing near lam={col[i]:.6g}, k={ks[j]:.4g}")
    curves = tuple(tuple(aligned[j][i] for j in range(len(ks)))
                   for i in range(width))
    trends = []
    for curve in curves:
        diffs = [curve[j + 1] - curve[j] for j in range(len(curve) - 1)]
        scale = 1e-10 * (1.0 + max(abs(v) for v in curve))
        if all(d > scale for d in diffs):
            trends.append("increasing")
        elif all(d < -scale for d in diffs):
            trends.append("decreasing")
        else:
            trends.append("mixed")
    return BandFunctionTable(tuple(ks), curves, tuple(trends), tuple(flags))


# ---------------------------------------------------------------------------
# Interlacing report

@dataclass(frozen=True)
class WindowCheck:
    n: int
    lam_minus: float
    lam_plus: float
    gamma: float = None
    nu: float = None
    gamma_inside: bool = False
    nu_inside: bool = False
    delta_sq_at_gamma: float = None


@dataclass(frozen=True)
class InterlacingReport:
    windows: tuple
    violations: tuple
    certified: bool


def interlacing_report(spec, region, cfg=DEFAULT_CONFIG, ws=None):
    """Checks gap inclusion of Dirichlet/Neumann eigenvalues, per window.

    For every full counting window: exactly one Dirichlet and one Neumann
    eigenvalue in ((pi(n-1/2))^2, (pi(n+1/2))^2), both inside the closed gap
    [lam_n^-, lam_n^+], and Delta^2 >= 1 at the Dirichlet point. Violations
    are returned as entries, never raised.
    """
    ws = ws or SpectralWorkspace(spec, cfg)
    a, b = float(region[0]), float(region[1])
    certified = region_is_real_certified(spec, (a, b))
    if not certified:
        return InterlacingReport(windows=(), violations=(
            "region not certified real; interlacing undefined",), certified=False)
    per = two_periodic_spectrum(spec, (a, b), cfg, ws=ws)
    gam = dirichlet_spectrum(spec, (a, b), cfg, ws=ws)
    neu = neumann_spectrum(spec, (a, b), cfg, ws=ws)
    pairs, _, bad = _window_pairs(per, (a, b))
    violations = [f"window {n}: {c} two-periodic eigenvalues (want 2)"
                  for n, c in bad]
    tol = 1e-8 * (1.0 + abs(b))
    checks = []
    for n in sorted(pairs):
        half_lo, half_hi = (math.pi * (n - 0.5)) ** 2, (math.pi * (n + 0.5)) ** 2
        if half_lo < a or half_hi > b:
            continue
        lo, hi, _ = pairs[n]
        gs = [e.lam.real for e in gam if half_lo < e.lam.real < half_hi]
        vs = [e.lam.real for e in neu if half_lo < e.lam.real < half_hi]
        if len(gs) != 1:
            violations.append(f"window {n}: {len(gs)} Dirichlet points (want 1)")
        if len(vs) != 1:
            violations.append(f"window {n}: {len(vs)} Neumann points (want 1)")
        g = gs[0] if len(gs) == 1 else None
        v = vs[0] if len(vs) == 1 else None
        g_in = g is not None and lo - tol <= g <= hi + tol
        v_in = v is not None and lo - tol <= v <= hi + tol
        if g is not None and not g_in:
            violations.append(f"window {n}: Dirichlet point outside the gap")
        if v is not None and not v_in:
            violations.append(f"window {n}: Neumann point outside the gap")
        dsq = None
        if g is not None:
            dsq = abs(ws.delta(g)) ** 2
            if dsq < 1.0 - 1e-9:
                violations.append(
                    f"window {n}: Delta^2 = {dsq:.12f} < 1 at Dirichlet point")
        checks.append(WindowCheck(
            n=n, lam_minus=lo, lam_plus=hi, gamma=g, nu=v,
            gamma_inside=g_in, nu_inside=v_in, delta_sq_at_gamma=dsq))
    return InterlacingReport(windows=tuple(checks),
                             violations=tuple(violations), certified=True)
