"""Zero location for analytic characteristic functions.

Two entry styles: rectangles in the complex plane (argument-principle count,
quadtree isolation, Newton polish) and real intervals (scan in sqrt-energy
coordinates, bracketing, tangency detection). Function handles follow the
convention F(lam) -> (value, derivative); they must be plain deterministic
callables, safe to call from concurrent workers.
"""

import cmath
import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from ._quad import kronrod15
from .errors import (BoundaryZeroError, SubdivisionDepthError,
                     WindingPrecisionError)

_TWO_PI_I = 2j * math.pi
_MAX_EDGE_DEPTH = 52
_EDGE_BUDGET = 0.05          # absolute error per edge of the winding integral
_BOUNDARY_REL = 1e-9         # min |F| below this fraction of max -> suspicious
_NOISE_GUARD = 1e-7          # boundary floor as a fraction of root-scale |F|
_DILATION = 0.01
_MAX_DILATIONS = 5
_SPLIT_JITTERS = (0.0, 0.017, -0.017, 0.035, -0.035, 0.051)
_MAX_DEPTH = 40
# tangency decision scale, per unit (1 + |lam|): the evaluation noise of
# an integrated characteristic function grows linearly in lam (about
# 0.02*rel_tol*lam at default tolerances), and gap dips below this scale
# cannot be told apart from a closed gap
_TANGENCY_TOL = 2e-13


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by center and half-extents."""

    center: complex
    half_width: float
    half_height: float

    def __post_init__(self):
        if not (self.half_width > 0.0 and self.half_height > 0.0):
            raise ValueError("rectangle extents must be positive")

    def corners(self):
        c, w, h = self.center, self.half_width, self.half_height
        return (c - w - 1j * h, c + w - 1j * h, c + w + 1j * h, c - w + 1j * h)

    def diameter(self):
        return 2.0 * math.hypot(self.half_width, self.half_height)

    def dilated(self, factor):
        return Rect(self.center, self.half_width * factor,
                    self.half_height * factor)

    def contains(self, lam):
        return (abs(lam.real - self.center.real) <= self.half_width
                and abs(lam.imag - self.center.imag) <= self.half_height)


@dataclass(frozen=True)
class LocatedZero:
    """A zero of F with its argument-principle multiplicity."""

    lam: complex
    multiplicity: int
    residual: float
    newton_converged: bool


def _edge_winding(F, a, b, stats):
    """Integral of F'/F along the segment a -> b, adaptively refined."""
    span = b - a

    def g(t):
        lam = a + t * span
        v, dv = F(lam)
        av = abs(v)
        if av < stats[0]:
            stats[0] = av
        if av > stats[1]:
            stats[1] = av
        return dv / v * span

    total = 0j
    stack = [(0.0, 1.0, 0)]
    while stack:
        t0, t1, depth = stack.pop()
        val, err, _ = kronrod15(g, t0, t1)
        if err <= _EDGE_BUDGET * (t1 - t0):
            total += val
            continue
        if depth >= _MAX_EDGE_DEPTH:
            raise WindingPrecisionError(
                f"edge quadrature stalled near t={t0:.3g} on segment "
                f"{a:.6g} -> {b:.6g}")
        tm = 0.5 * (t0 + t1)
        stack.append((t0, tm, depth + 1))
        stack.append((tm, t1, depth + 1))
    return total


def _winding_number(F, rect, floor=0.0, out_stats=None):
    """Winding count over the rectangle boundary; no dilation, no retry."""
    corners = rect.corners()
    stats = [math.inf, 0.0]  # min |F|, max |F| over quadrature samples
    total = 0j
    try:
        for i in range(4):
            total += _edge_winding(F, corners[i], corners[(i + 1) % 4], stats)
    except ZeroDivisionError:
        raise BoundaryZeroError(
            f"F vanishes on the boundary of rect centered {rect.center:.6g}")
    if out_stats is not None:
        out_stats[:] = stats
    if stats[0] <= max(_BOUNDARY_REL * (1.0 + stats[1]), floor):
        raise BoundaryZeroError(
            f"|F| dips to {stats[0]:.3e} on the boundary of rect centered "
            f"{rect.center:.6g}")
    n = total / _TWO_PI_I
    rounded = round(n.real)
    defect = abs(n - rounded)
    if defect >= 0.25:
        raise WindingPrecisionError(
            f"winding estimate {n:.4f} too far from an integer")
    if rounded < 0:
        raise WindingPrecisionError(
            f"negative winding count {rounded}; F is not analytic here")
    return int(rounded)


def _count_with_dilation(F, rect, out_stats=None):
    """(count, rect actually used); grows the boundary away from zeros."""
    factor = 1.0
    last = None
    for _ in range(_MAX_DILATIONS + 1):
        candidate = rect.dilated(factor) if factor != 1.0 else rect
        try:
            return _winding_number(F, candidate, out_stats=out_stats), candidate
        except BoundaryZeroError as exc:
            last = exc
            factor *= 1.0 + _DILATION
    raise BoundaryZeroError(
        f"boundary stayed near a zero after {_MAX_DILATIONS} dilations: {last}")


def count_zeros(F, rect):
    """Number of zeros of F in rect, counted with algebraic multiplicity.

    The boundary integral of F'/F is evaluated edge by edge with adaptive
    Gauss-Kronrod panels. A boundary pass that senses |F| collapsing near
    the contour dilates the rectangle by 1% and retries, at most five times.
    """
    n, _ = _count_with_dilation(F, rect)
    return n


def _from_bounds(x0, x1, y0, y1):
    return Rect(complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
                0.5 * (x1 - x0), 0.5 * (y1 - y0))


def _split_counted(F, rect, parent_count, floor=0.0):
    """Split rect into children whose counts sum to the parent count.

    High-aspect boxes are halved across the long side only, which keeps cut
    lines clear of zeros hugging the short axis (spectra of real potentials
    sit on the real line, and a thin box around them leaves a horizontal cut
    no room to escape). Cut positions are jittered until no cut passes near
    a zero; the outer boundary is reused as-is, so the parent count stays
    authoritative.
    """
    x0, x1 = rect.center.real - rect.half_width, rect.center.real + rect.half_width
    y0, y1 = rect.center.imag - rect.half_height, rect.center.imag + rect.half_height

    def vertical(cx, cy):
        return _from_bounds(x0, cx, y0, y1), _from_bounds(cx, x1, y0, y1)

    def horizontal(cx, cy):
        return _from_bounds(x0, x1, y0, cy), _from_bounds(x0, x1, cy, y1)

    def quarters(cx, cy):
        return (_from_bounds(x0, cx, y0, cy), _from_bounds(cx, x1, y0, cy),
                _from_bounds(x0, cx, cy, y1), _from_bounds(cx, x1, cy, y1))

    if rect.half_width > 4.0 * rect.half_height:
        schemes = (vertical, horizontal, quarters)
    elif rect.half_height > 4.0 * rect.half_width:
        schemes = (horizontal, vertical, quarters)
    else:
        schemes = (quarters, vertical, horizontal)
    for scheme in schemes:
        for jitter in _SPLIT_JITTERS:
            cx = rect.center.real + jitter * rect.half_width
            cy = rect.center.imag + jitter * rect.half_height
            children = scheme(cx, cy)
            try:
                counts = [_winding_number(F, ch, floor) for ch in children]
            except (BoundaryZeroError, WindingPrecisionError):
                continue
            if sum(counts) == parent_count:
                return [(ch, n) for ch, n in zip(children, counts) if n > 0]
    raise WindingPrecisionError(
        f"could not split rect centered {rect.center:.6g} without losing "
        "zeros across the cut lines")


def isolate_zeros(F, rect, target_radius):
    """Quadtree isolation: (sub-rect, count) pieces of diameter <= target.

    Counts are conserved at every split; pieces with zero count are dropped.
    Boundaries whose |F| falls under _NOISE_GUARD of the root contour scale
    are rejected as unreliable; a piece that cannot be split any further for
    that reason is returned as-is (its count is still certified), so pieces
    can exceed target_radius where evaluation noise limits the resolution.
    """
    if target_radius <= 0.0:
        raise ValueError("target_radius must be positive")
    stats = [math.inf, 0.0]
    total, base = _count_with_dilation(F, rect, out_stats=stats)
    if total == 0:
        return []
    floor = _NOISE_GUARD * stats[1]
    done = []
    stack = [(base, total, 0)]
    while stack:
        r, n, depth = stack.pop()
        if r.diameter() <= target_radius:
            done.append((r, n))
            continue
        if depth >= _MAX_DEPTH:
            raise SubdivisionDepthError(
                f"subdivision depth {depth} exceeded near {r.center:.6g}")
        try:
            children = _split_counted(F, r, n, floor)
        except (BoundaryZeroError, WindingPrecisionError):
            if r.diameter() <= 32.0 * target_radius:
                done.append((r, n))
                continue
            raise
        for child, cn in children:
            stack.append((child, cn, depth + 1))
    done.sort(key=lambda item: (item[0].center.real, item[0].center.imag))
    return done


def _polish_double(F, seed):
    """Locate a double zero as the simple zero of F', by secant.

    F itself is flat to second order there, so Newton on F stalls at the
    square root of the evaluation noise; the independently computed F'
    crosses zero linearly and pins the location down to the noise level.
    Returns None when the secant leaves the seed's neighbourhood.
    """
    lam0 = complex(seed)
    radius = 0.01 * (1.0 + abs(lam0))
    lam1 = lam0 + 1e-7 * (1.0 + abs(lam0))
    g0, g1 = F(lam0)[1], F(lam1)[1]
    for _ in range(60):
        if g1 == g0:
            return None
        lam2 = lam1 - g1 * (lam1 - lam0) / (g1 - g0)
        if abs(lam2 - complex(seed)) > radius:
            return None
        if abs(lam2 - lam1) < 1e-13 * (1.0 + abs(lam2)):
            return LocatedZero(lam2, 2, abs(F(lam2)[0]), True)
        lam0, g0 = lam1, g1
        lam1, g1 = lam2, F(lam2)[1]
    return None


def refine_newton(F, seed, multiplicity=1):
    """Newton polish with the multiplicity-aware step m*F/F'.

    Double zeros are instead chased through the zero of F' (see
    _polish_double), falling back to the m*F/F' iteration if that escapes.
    Returns the best iterate (flagged unconverged) if 60 steps do not push
    the update below 1e-12*(1+|lam|).
    """
    m = max(1, int(multiplicity))
    if m == 2:
        z = _polish_double(F, seed)
        if z is not None:
            return z
    lam = complex(seed)
    best_lam, best_res = lam, math.inf
    for _ in range(60):
        v, dv = F(lam)
        av = abs(v)
        if av < best_res:
            best_lam, best_res = lam, av
        if av == 0.0:
            return LocatedZero(lam, m, 0.0, True)
        if dv == 0:
            break
        step = m * v / dv
        lam -= step
        if abs(step) < 1e-12 * (1.0 + abs(lam)):
            v, _ = F(lam)
            return LocatedZero(lam, m, abs(v), True)
    return LocatedZero(best_lam, m, best_res, False)


def _u_of(lam):
    return math.copysign(math.sqrt(abs(lam)), lam)


def _critical_point(Fd, seed, radius):
    """Coarse zero of F' near seed by secant, with a curvature estimate.

    Stops at the noise plateau of the supplied handle (tracking the best
    |F'| seen so far) and returns (lam_c, F''(lam_c)), or None when the
    iteration leaves |lam - seed| > radius or the slope degenerates.
    """
    lam0 = float(seed)
    h = 1e-5 * (1.0 + abs(lam0))
    lam1 = lam0 + h
    g0, g1 = Fd(lam0)[1].real, Fd(lam1)[1].real
    best_lam, best_g, stale = lam1, abs(g1), 0
    for _ in range(30):
        if g1 == g0:
            break
        lam2 = lam1 - g1 * (lam1 - lam0) / (g1 - g0)
        if abs(lam2 - seed) > radius:
            return None
        g2 = Fd(lam2)[1].real
        lam0, g0, lam1, g1 = lam1, g1, lam2, g2
        if abs(g2) < best_g:
            best_lam, best_g, stale = lam2, abs(g2), 0
        else:
            stale += 1
            if stale >= 2:
                break
    fpp = (Fd(best_lam + h)[1].real - Fd(best_lam - h)[1].real) / (2.0 * h)
    if fpp == 0.0:
        return None
    return best_lam, fpp


def real_scan(F, interval, step_hint=None, grid=None, tangency_tol=None):
    """Real zeros of a real-analytic F on (a, b), with tangency detection.

    Sampling runs on the sqrt-energy line u = sign(lam) sqrt|lam| at spacing
    step_hint (default pi/8), which tracks the asymptotic eigenvalue density.
    Callers whose zeros cluster differently may pass an explicit increasing
    grid of sample energies instead. Sign changes are bracketed and polished
    by Newton. An interior minimum of |F| with no sign change is resolved
    through the critical point of F: the extremal value decides, on the
    noise-scaled tangency threshold (or the caller's tangency_tol(lam)),
    between a double zero and a barely open pair of simple ones.

    When the handle carries .coarse / .value_only attributes (see
    SpectralWorkspace.char), sampling and bracketing use those cheaper
    evaluations; the final polish always runs through F itself.
    """
    a, b = interval
    if not b > a:
        raise ValueError("interval must satisfy a < b")
    if grid is not None:
        lams_in = [float(t) for t in grid]
        if len(lams_in) < 3 or any(y <= x for x, y in zip(lams_in, lams_in[1:])):
            raise ValueError("grid must be strictly increasing, length >= 3")
        us = [_u_of(t) for t in lams_in]
        n = len(us)
    else:
        step = math.pi / 8.0 if step_hint is None else float(step_hint)
        if step <= 0.0:
            raise ValueError("step_hint must be positive")
        ua, ub = _u_of(a), _u_of(b)
        n = max(3, int(math.ceil((ub - ua) / step)) + 1)
        us = [ua + (ub - ua) * i / (n - 1) for i in range(n)]

    Fc = getattr(F, "coarse", F)
    fv = getattr(F, "value_only", None)
    if fv is None:
        def fv(lam):
            return F(lam)[0]

    def g_lam(lam):
        return F(lam)[0].real

    def simple_root(lam_lo, lam_hi, v_lo, v_hi):
        # coarse Newton clipped to the shrinking sign bracket, so the cheap
        # phase cannot wander off to a neighbouring root of the same sign
        # pattern (two gap edges can share one sampling cell)
        lo, hi, vlo, vhi = lam_lo, lam_hi, v_lo, v_hi
        lam = lo - vlo * (hi - lo) / (vhi - vlo)
        for _ in range(12):
            if not lo < lam < hi:
                lam = 0.5 * (lo + hi)
            v, dv = Fc(lam)
            if v.real == 0.0:
                break
            if v.real * vlo > 0.0:
                lo, vlo = lam, v.real
            else:
                hi, vhi = lam, v.real
            nxt = lam - (v / dv).real if dv != 0 else 0.5 * (lo + hi)
            done = abs(nxt - lam) < 1e-6 * (1.0 + abs(lam)) and lo < nxt < hi
            lam = nxt
            if done:
                break
        z = refine_newton(F, lam, 1)
        pad = 1e-9 * (1.0 + max(abs(lam_lo), abs(lam_hi)))
        if z.newton_converged and lam_lo - pad <= z.lam.real <= lam_hi + pad:
            return z
        try:
            lam_root = brentq(g_lam, lam_lo, lam_hi, xtol=1e-13, rtol=1e-15)
        except ValueError:
            # endpoint signs flip under tight evaluation: the root sits at
            # sampling noise distance from a grid point, keep the polish
            pad = 0.1 * (lam_hi - lam_lo) + 1e-12
            if z.newton_converged \
                    and lam_lo - pad <= z.lam.real <= lam_hi + pad:
                return z
            return LocatedZero(complex(lam), 1, abs(F(lam)[0]), False)
        z = refine_newton(F, lam_root, 1)
        if z.newton_converged and abs(z.lam.real - lam_root) \
                <= 1e-6 * (1.0 + abs(lam_root)):
            return z
        return LocatedZero(complex(lam_root), 1, abs(F(lam_root)[0]), False)

    lams = lams_in if grid is not None else [u * abs(u) for u in us]
    vals = [fv(lam).real for lam in lams]
    found = []
    consumed = set()  # sample indices already attributed to an exact zero

    for i in range(n):
        if vals[i] == 0.0:
            found.append(refine_newton(F, lams[i], 1))
            consumed.add(i)
    for i in range(n - 1):
        if i in consumed or (i + 1) in consumed:
            continue
        if vals[i] * vals[i + 1] < 0.0:
            found.append(
                simple_root(lams[i], lams[i + 1], vals[i], vals[i + 1]))

    # interior |F| minima with no sign change: either a band-edge tangency
    # (double zero) or a barely-open gap hiding two simple crossings
    for i in range(1, n - 1):
        if {i - 1, i, i + 1} & consumed:
            continue
        va, vi, vb = vals[i - 1], vals[i], vals[i + 1]
        if not (abs(vi) < abs(va) and abs(vi) <= abs(vb)
                and va * vi > 0.0 and vi * vb > 0.0):
            continue
        crit = _critical_point(Fc, lams[i], lams[i + 1] - lams[i - 1])
        if crit is None:
            found.extend(_dip_by_search(F, g_lam, us, lams, vals, i,
                                        tangency_tol))
            continue
        lam_c, fpp = crit
        s = F(lam_c)[0].real
        # evaluation noise in F grows with |lam|, so the closed/open gap
        # decision threshold must scale with it
        thr = (tangency_tol(lam_c) if tangency_tol is not None
               else _TANGENCY_TOL * (1.0 + abs(lam_c)))
        if abs(s) <= thr:
            z = _polish_double(F, lam_c)
            found.append(z if z is not None
                         else LocatedZero(complex(lam_c), 2, abs(s), True))
            continue
        if s * fpp < 0.0:
            # the extremum overshoots zero: two simple roots straddle it at
            # about lam_c +- r by the local parabola model
            r = math.sqrt(-2.0 * s / fpp)
            for direction in (-1.0, 1.0):
                z = _parabola_root(g_lam, simple_root, lam_c, r, direction)
                if z is None:
                    end = lams[i - 1] if direction < 0 else lams[i + 1]
                    lo, hi = sorted((end, lam_c))
                    z = simple_root(lo, hi, g_lam(lo), g_lam(hi))
                found.append(z)
        # otherwise the minimum never approaches zero: not a root

    found.sort(key=lambda z: z.lam.real)
    merged = []
    for z in found:
        if merged and abs(z.lam - merged[-1].lam) <= 1e-11 * (1.0 + abs(z.lam)):
            if z.multiplicity > merged[-1].multiplicity \
                    or (z.multiplicity == merged[-1].multiplicity
                        and z.residual < merged[-1].residual):
                merged[-1] = z
            continue
        merged.append(z)
    lo, hi = min(a, b), max(a, b)
    return [z for z in merged if lo - 1e-12 <= z.lam.real <= hi + 1e-12]


def _parabola_root(g_lam, simple_root, lam_c, r, direction):
    """One of the two roots straddling a near-tangent extremum at lam_c."""
    inner = lam_c + 0.55 * r * direction
    outer = lam_c + 3.0 * r * direction
    v_in, v_out = g_lam(inner), g_lam(outer)
    if v_in * v_out > 0.0:
        outer = lam_c + 8.0 * r * direction
        v_out = g_lam(outer)
        if v_in * v_out > 0.0:
            return None
    lo, hi = sorted((inner, outer))
    v_lo, v_hi = (v_in, v_out) if lo == inner else (v_out, v_in)
    return simple_root(lo, hi, v_lo, v_hi)


def _dip_by_search(F, g_lam, us, lams, vals, i, tangency_tol=None):
    """Fallback dip classification by direct bounded minimization."""
    sgn = 1.0 if vals[i] > 0.0 else -1.0
    res = minimize_scalar(lambda u: sgn * g_lam(u * abs(u)),
                          bounds=(us[i - 1], us[i + 1]),
                          method="bounded", options={"xatol": 1e-13})
    dip = res.fun
    lam_c = res.x * abs(res.x)
    thr = (tangency_tol(lam_c) if tangency_tol is not None
           else _TANGENCY_TOL * (1.0 + abs(lam_c)))
    if dip < -thr:
        lam1 = brentq(g_lam, lams[i - 1], lam_c, xtol=1e-13, rtol=1e-15)
        lam2 = brentq(g_lam, lam_c, lams[i + 1], xtol=1e-13, rtol=1e-15)
        if abs(lam2 - lam1) > 1e-10 * (1.0 + abs(lam_c)):
            return [refine_newton(F, lam1, 1), refine_newton(F, lam2, 1)]
    if dip < thr:
        return [refine_newton(F, lam_c, 2)]
    return []
