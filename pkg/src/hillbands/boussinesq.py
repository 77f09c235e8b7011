"""Third-order periodic pipeline: monodromy, multipliers, and the Hill reduction.

The operator here is y''' + (p y)' + p y' + q y = zeta y with real 1-periodic
Fourier coefficients p, q, expanded to y''' = (zeta - p' - q) y - 2 p y'. Its
3x3 monodromy M(x) drives everything else: the multipliers (eigenvalues of
M(1)), the ramification points where two multipliers collide (zeros of the
cubic discriminant), the eigenvalues of the three-point problem
y(0) = y(1) = y(2) = 0, and the reduction that turns the dominant Floquet
solution into an energy-dependent Hill potential handled by the rest of the
package.

Conditioning notes, since they shape the module layout. The monodromy grows
like e^{zeta^{1/3} x}, so the sub-dominant invariant B = tr M(1)^{-1} cannot
be assembled from the entries of M(1) in double precision: every route
through them (adjugate minors, (A^2 - tr M^2)/2) cancels e^{3 zeta^{1/3}/2}
digits. Instead B is integrated directly: u(t) = y(1 - t) with flipped first
derivative solves the same kind of equation with reflected coefficients and
energy -zeta, and its monodromy U equals S M(1)^{-1} S with S =
diag(1,-1,1). The same U supplies the two adjugate entries that make the
three-point determinant D = M1[0,1] M2[0,2] - M1[0,2] M2[0,1] computable
without forming the e^{2 zeta^{1/3}}-sized products: D = M1[0,1] U[0,2] +
M1[0,2] U[0,1]. The scan handles divide out the nonvanishing growth factor
(e^{3 zeta^{1/3}} for the discriminant, e^{3 zeta^{1/3}/2}/zeta for the
three-point determinant), which keeps every sampled value O(1) without
moving a single zero.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _fast, rootfind
from .errors import ConfigError, NearRamificationError
from .fundsol import DEFAULT_CONFIG
from .potentials import FourierProfile, Rect as DomainRect, TabulatedPotential

_SQRT3 = math.sqrt(3.0)
_PERIOD_ZT = 2.0 * math.pi / _SQRT3  # oscillation period of both scans in zeta^{1/3}

# e^{x_end * |zeta|^{1/3}} must stay inside double range with headroom
_GROWTH_CAP = 500.0
# multiplier extraction forms |A|^3-sized intermediates
_TRACE_CAP = 1e100
# relative modulus gap below which the dominant multiplier is not trusted
_DOMINANCE_TOL = 1e-4
# closed/open threshold for the O(1)-scaled scan handles (absolute)
_SCAN_TANGENCY = 1e-9
_COARSE_FACTOR = 100.0   # bracketing/critical-point tier
_VALUES_FACTOR = 1000.0  # grid-sampling tier

_REDUCTION_NODES = 64
_REDUCTION_H = 1e-4


# ---------------------------------------------------------------------------
# Coefficients

def _profile_x_derivative(f):
    """d/dx of a Fourier profile, again as a Fourier profile."""
    cos = tuple(2.0 * math.pi * (m + 1) * s for m, s in enumerate(f.sin_coeffs))
    sin = tuple(-2.0 * math.pi * (m + 1) * c for m, c in enumerate(f.cos_coeffs))
    return FourierProfile(a0=0.0, cos_coeffs=cos, sin_coeffs=sin)


def _profile_sum(f, g):
    nc = max(len(f.cos_coeffs), len(g.cos_coeffs))
    ns = max(len(f.sin_coeffs), len(g.sin_coeffs))

    def pad(t, n):
        return tuple(t) + (0.0,) * (n - len(t))

    return FourierProfile(
        a0=f.a0 + g.a0,
        cos_coeffs=tuple(x + y for x, y in zip(pad(f.cos_coeffs, nc),
                                               pad(g.cos_coeffs, nc))),
        sin_coeffs=tuple(x + y for x, y in zip(pad(f.sin_coeffs, ns),
                                               pad(g.sin_coeffs, ns))))


@dataclass(frozen=True)
class ThirdOrderCoeffs:
    """Real 1-periodic coefficient pair (p, q), both Fourier profiles.

    p' is formed termwise from the Fourier representation, so (py)' = p'y +
    py' never touches numerical differentiation.
    """

    p: FourierProfile
    q: FourierProfile

    def __post_init__(self):
        if not isinstance(self.p, FourierProfile) \
                or not isinstance(self.q, FourierProfile):
            raise ConfigError("third-order coefficients must be Fourier profiles")

    def pev(self):
        """x -> (2p(x), p'(x) + q(x)), the integrator's coefficient slots."""
        p = self.p
        s = _profile_sum(_profile_x_derivative(self.p), self.q)

        def ev(x):
            return 2.0 * p.eval_scalar(x), s.eval_scalar(x)
        return ev

    def pev_reflected(self):
        """Coefficient slots of the reversed equation u(t) = y(1 - t).

        Flipping x and the sign of the odd-order derivative turns
        y''' = (zeta - p' - q) y - 2 p y' into u''' = (-zeta + (p'+q)(1-t)) u
        - 2 p(1-t) u', an equation of the same shape at energy -zeta.
        """
        p = self.p
        s = _profile_sum(_profile_x_derivative(self.p), self.q)

        def ev(t):
            x = 1.0 - t
            return 2.0 * p.eval_scalar(x), -s.eval_scalar(x)
        return ev

    def is_zero(self):
        return self.p.is_zero() and self.q.is_zero()

    def to_json(self):
        return {"p": self.p.to_json(), "q": self.q.to_json()}

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ConfigError("third-order coefficients must be an object")
        unknown = set(obj) - {"p", "q"}
        if unknown:
            raise ConfigError(f"unknown coefficient fields: {sorted(unknown)}")
        return cls(p=FourierProfile.from_json(obj.get("p", {})),
                   q=FourierProfile.from_json(obj.get("q", {})))


# ---------------------------------------------------------------------------
# Monodromy

def _check_energy(zeta, x_end):
    growth = x_end * abs(zeta) ** (1.0 / 3.0)
    if growth > _GROWTH_CAP:
        raise ConfigError(
            f"|zeta|^(1/3) * x_end = {growth:.1f} exceeds {_GROWTH_CAP:.0f}: "
            "the monodromy would overflow double precision")


def _as_matrix(row_major):
    return np.array(row_major, dtype=complex).reshape(3, 3)


@dataclass(frozen=True, eq=False)
class Monodromy3:
    """Transfer matrices over one and two periods at a fixed energy."""

    zeta: complex
    M1: np.ndarray
    M2: np.ndarray

    def det_defect(self):
        """Deviation of det M1, det M2 from 1 (Liouville: no y'' term).

        Normalized by the cubed entry scale: the determinant of an
        e^{2 zeta^{1/3}}-sized matrix carries rounding of that size even
        when the integration itself is exact.
        """
        out = 0.0
        for mat in (self.M1, self.M2):
            scale = float(np.linalg.norm(mat)) / math.sqrt(3.0)
            out = max(out, abs(np.linalg.det(mat) - 1.0)
                      / max(1.0, scale ** 3))
        return out

    def periodicity_defect(self):
        """Relative gap between M2 and M1*M1; zero for 1-periodic coefficients."""
        scale = np.linalg.norm(self.M2)
        return float(np.linalg.norm(self.M2 - self.M1 @ self.M1)
                     / (scale if scale > 0.0 else 1.0))


def integrate_third_order(coeffs, zeta, x_end=2, cfg=DEFAULT_CONFIG):
    """Monodromy of y''' = (zeta - p' - q) y - 2 p y' over one and two periods.

    x_end picks how the second period is obtained: 2 integrates straight
    through [0, 2] (M1 captured in passing at x=1), 1 stops at the period and
    squares, M2 = M1 M1. The two routes agree for 1-periodic coefficients and
    their difference is the integrator's periodicity defect.
    """
    if x_end not in (1, 2):
        raise ConfigError("x_end must be 1 or 2")
    zeta = complex(zeta)
    _check_energy(zeta, x_end)
    pev = coeffs.pev()
    if x_end == 2:
        captured = {}
        tail = _fast.third9(pev, zeta, 2.0, cfg.rel_tol, cfg.abs_tol,
                            cfg.max_steps, checkpoints=(1.0,),
                            on_sample=lambda x, row: captured.update({x: row}))
        m1 = _as_matrix(captured[1.0])
        m2 = _as_matrix(tail)
    else:
        tail = _fast.third9(pev, zeta, 1.0, cfg.rel_tol, cfg.abs_tol,
                            cfg.max_steps)
        m1 = _as_matrix(tail)
        m2 = m1 @ m1
    return Monodromy3(zeta, m1, m2)


# ---------------------------------------------------------------------------
# Multipliers

@dataclass(frozen=True)
class MultiplierSet:
    """Eigenvalues of M1 sorted by modulus, with the trace invariants.

    A = tr M1 and B = tr adj M1 = tr M1^{-1}; the multipliers are the roots
    of t^3 - A t^2 + B t - 1, so kappa1 kappa2 kappa3 = 1.
    """

    kappa1: complex
    kappa2: complex
    kappa3: complex
    A: complex
    B: complex

    def product_defect(self):
        return abs(self.kappa1 * self.kappa2 * self.kappa3 - 1.0)


def _cubic_value(t, A, B):
    # Horner grouping (t - A) t + B keeps t ~ A from forming A^3
    return ((t - A) * t + B) * t - 1.0


def _cardano_roots(A, B):
    """Roots of t^3 - A t^2 + B t - 1 via the depressed cubic."""
    p = B - A * A / 3.0
    q = -2.0 * A ** 3 / 27.0 + A * B / 3.0 - 1.0
    w = cmath.sqrt(0.25 * q * q + p ** 3 / 27.0)
    u3 = -0.5 * q + w
    if abs(u3) < abs(-0.5 * q - w):
        u3 = -0.5 * q - w
    if u3 == 0:
        return [A / 3.0] * 3
    u = u3 ** (1.0 / 3.0)
    roots = []
    turn = cmath.exp(2j * math.pi / 3.0)
    for _ in range(3):
        roots.append(u - p / (3.0 * u) + A / 3.0)
        u *= turn
    return roots


def multipliers(m):
    """Eigenvalues of M1 from its trace invariants, sorted by modulus.

    The dominant root is polished by Newton on the cubic (well conditioned
    whenever it is separated) and the remaining pair comes from deflation,
    which preserves the unit product exactly. Companion eigenvalues are the
    fallback when the closed form degenerates.
    """
    A = complex(np.trace(m.M1))
    B = 0.5 * (A * A - complex(np.trace(m.M1 @ m.M1)))
    if max(abs(A), abs(B)) > _TRACE_CAP:
        raise ConfigError("trace invariants overflow the multiplier cubic; "
                          "use the scaled scan handles at this energy")
    roots = _cardano_roots(A, B)
    if not all(cmath.isfinite(r) for r in roots):
        roots = list(np.roots([1.0, -A, B, -1.0]))
    k3 = max(roots, key=abs)
    for _ in range(3):
        f = _cubic_value(k3, A, B)
        df = (3.0 * k3 - 2.0 * A) * k3 + B
        if df == 0:
            break
        step = f / df
        k3 -= step
        if abs(step) <= 1e-15 * (1.0 + abs(k3)):
            break
    if k3 == 0:
        roots = sorted(np.roots([1.0, -A, B, -1.0]), key=abs)
        return MultiplierSet(roots[0], roots[1], roots[2], A, B)
    # deflation: remaining pair solves t^2 - (A - k3) t + 1/k3 = 0
    s = A - k3
    d = cmath.sqrt(s * s - 4.0 / k3)
    if abs(s - d) > abs(s + d):
        d = -d
    big = 0.5 * (s + d)
    small = (1.0 / k3) / big if big != 0 else cmath.sqrt(1.0 / k3)
    pair = sorted((small, big), key=abs)
    return MultiplierSet(pair[0], pair[1], k3, A, B)


def cubic_discriminant(ms):
    """Squared pairwise multiplier differences, from the trace invariants.

    Evaluating (k1-k2)^2 (k1-k3)^2 (k2-k3)^2 through the symmetric functions
    sidesteps the cancellation of nearly equal multipliers: for the monic
    cubic with coefficients (1, -A, B, -1) the product equals
    A^2 B^2 - 4 A^3 - 4 B^3 + 18 A B - 27.
    """
    A, B = ms.A, ms.B
    if max(abs(A), abs(B)) > _TRACE_CAP:
        raise ConfigError("trace invariants overflow the discriminant formula; "
                          "use the scaled scan handles at this energy")
    return A * A * B * B - 4.0 * A ** 3 - 4.0 * B ** 3 + 18.0 * A * B - 27.0


def three_point_determinant(m):
    """det [[y2(1), y3(1)], [y2(2), y3(2)]] from the monodromy pair.

    y2, y3 are the monodromy basis columns vanishing at 0; the determinant
    vanishes exactly at the eigenvalues of y(0) = y(1) = y(2) = 0. Direct
    entry products cancel severely at large energy; prefer the scan handle
    from three_point_handle there.
    """
    return m.M1[0, 1] * m.M2[0, 2] - m.M1[0, 2] * m.M2[0, 1]


# ---------------------------------------------------------------------------
# Scaled scan handles

def _monodromy_rows(coeffs, zeta, cfg, pev=None, reflected=False):
    fn = pev if pev is not None else (
        coeffs.pev_reflected() if reflected else coeffs.pev())
    z = -zeta if reflected else zeta
    return _fast.third9(fn, z, 1.0, cfg.rel_tol, cfg.abs_tol, cfg.max_steps)


class _InvariantSampler:
    """Forward and reflected one-period integrations at shared tolerances.

    The forward run supplies A = tr M1 and the first row of M1; the
    reflected run supplies U = S M1^{-1} S, hence B = tr U and the adjugate
    entries adj[0,2] = U[0,2], adj[0,1] = -U[0,1] that the cancellation-free
    three-point determinant needs.
    """

    def __init__(self, coeffs, cfg):
        self.cfg = cfg
        self._fwd = coeffs.pev()
        self._rev = coeffs.pev_reflected()

    def rows(self, zeta, cfg):
        f = _fast.third9(self._fwd, zeta, 1.0, cfg.rel_tol, cfg.abs_tol,
                         cfg.max_steps)
        r = _fast.third9(self._rev, -zeta, 1.0, cfg.rel_tol, cfg.abs_tol,
                         cfg.max_steps)
        return f, r

    def rows_d(self, zeta, cfg):
        """rows plus their zeta-derivatives from the variational blocks.

        The reflected run integrates at -zeta, so its variational block
        differentiates with respect to -zeta; the sign flip below converts
        it to d/dzeta of the reflected rows.
        """
        f, fd = _fast.third18(self._fwd, zeta, 1.0, cfg.rel_tol, cfg.abs_tol,
                              cfg.max_steps)
        r, rd = _fast.third18(self._rev, -zeta, 1.0, cfg.rel_tol, cfg.abs_tol,
                              cfg.max_steps)
        return f, fd, r, tuple(-v for v in rd)


def _scaled_disc_value(f, r, w):
    # tr M1 ~ e^w and tr U ~ e^{w/2}: pull both to O(1) before combining
    a = (f[0] + f[4] + f[8]) * cmath.exp(-w)
    b = (r[0] + r[4] + r[8]) * cmath.exp(-0.5 * w)
    ew = cmath.exp(-1.5 * w)
    return a * a * b * b - 4.0 * a ** 3 + (18.0 * a * b - 4.0 * b ** 3) * ew \
        - 27.0 * ew * ew


def _scaled_disc_pair(f, fd, r, rd, w, zeta):
    wp = 1.0 / (3.0 * w * w)
    a = (f[0] + f[4] + f[8]) * cmath.exp(-w)
    b = (r[0] + r[4] + r[8]) * cmath.exp(-0.5 * w)
    da = (fd[0] + fd[4] + fd[8]) * cmath.exp(-w) - a * wp
    db = (rd[0] + rd[4] + rd[8]) * cmath.exp(-0.5 * w) - 0.5 * b * wp
    ew = cmath.exp(-1.5 * w)
    val = a * a * b * b - 4.0 * a ** 3 + (18.0 * a * b - 4.0 * b ** 3) * ew \
        - 27.0 * ew * ew
    dv = (2.0 * a * b * (da * b + a * db) - 12.0 * a * a * da
          + (18.0 * (da * b + a * db) - 12.0 * b * b * db) * ew
          - 1.5 * wp * (18.0 * a * b - 4.0 * b ** 3) * ew
          + 81.0 * wp * ew * ew)
    return val, dv


def _scaled_three_point_value(f, r, w, zeta):
    # D = M1[0,1] adj[0,2] - M1[0,2] adj[0,1] with adj entries from the
    # reflected run; zeta e^{-3w/2} D is O(1) on the real energy axis
    d = f[1] * r[2] + f[2] * r[1]
    return d * zeta * cmath.exp(-1.5 * w)


def _scaled_three_point_pair(f, fd, r, rd, w, zeta):
    wp = 1.0 / (3.0 * w * w)
    d = f[1] * r[2] + f[2] * r[1]
    dd = fd[1] * r[2] + f[1] * rd[2] + fd[2] * r[1] + f[2] * rd[1]
    ew = cmath.exp(-1.5 * w)
    return d * zeta * ew, (dd * zeta + d * (1.0 - 1.5 * wp * zeta)) * ew


def _tiered_handle(sampler, combine, combine_d, cfg):
    """F(zeta) -> (value, d/dzeta) with .coarse and .value_only tiers.

    The derivative comes from the variational blocks, so it shares the
    integration error of the values instead of amplifying it; near the
    nearly-double ramification pairs this pins critical points far more
    tightly than any finite difference of noisy O(1) samples could.
    """
    cfg_c = cfg.coarsened(_COARSE_FACTOR)
    cfg_v = cfg.coarsened(_VALUES_FACTOR)

    def make(c):
        def F(zeta):
            zeta = complex(zeta)
            _check_energy(zeta, 1)
            f, fd, r, rd = sampler.rows_d(zeta, c)
            return combine_d(f, fd, r, rd, zeta ** (1.0 / 3.0), zeta)
        return F

    def value_only(zeta):
        zeta = complex(zeta)
        _check_energy(zeta, 1)
        f, r = sampler.rows(zeta, cfg_v)
        return combine(f, r, zeta ** (1.0 / 3.0), zeta)

    F = make(cfg)
    F.coarse = make(cfg_c)
    F.value_only = value_only
    return F


def discriminant_handle(coeffs, cfg=DEFAULT_CONFIG):
    """Handle for the rescaled discriminant e^{-3 zeta^{1/3}} Disc(zeta).

    The removed factor never vanishes, so the zero set (the ramification
    points) is untouched while sampled values stay O(1) along the real axis.
    """
    sampler = _InvariantSampler(coeffs, cfg)

    def combine(f, r, w, zeta):
        return _scaled_disc_value(f, r, w)
    return _tiered_handle(sampler, combine, _scaled_disc_pair, cfg)


def three_point_handle(coeffs, cfg=DEFAULT_CONFIG):
    """Handle for the rescaled three-point determinant zeta e^{-3w/2} D.

    w = zeta^{1/3}. The extra zeta factor offsets the 1/zeta decay of D's
    natural normalization, so the region must stay away from zeta = 0.
    """
    sampler = _InvariantSampler(coeffs, cfg)
    return _tiered_handle(sampler, _scaled_three_point_value,
                          _scaled_three_point_pair, cfg)


# ---------------------------------------------------------------------------
# Counting windows

def window_edges(n):
    """The n-th localization interval (alpha_n^-, alpha_n^+) on the energy axis.

    Each window carries exactly two ramification points (with multiplicity)
    and one simple three-point eigenvalue once the coefficients are small
    and smooth; the free positions (2 pi n / sqrt 3)^3 sit at the center in
    the cube-root variable.
    """
    if n < 1:
        raise ConfigError("window index must be >= 1")
    lo = (math.pi * (2 * n - 1) / _SQRT3) ** 3
    hi = (math.pi * (2 * n + 1) / _SQRT3) ** 3
    return lo, hi


def window_index(zeta):
    """Window number containing the energy, or None between windows."""
    z = complex(zeta).real
    if z <= 0.0:
        return None
    n = int(round(z ** (1.0 / 3.0) * _SQRT3 / (2.0 * math.pi)))
    if n < 1:
        return None
    lo, hi = window_edges(n)
    return n if lo < z < hi else None


def label_by_windows(zeros):
    """Group located zeros by window number; zeros between windows are dropped."""
    out = {}
    for z in zeros:
        n = window_index(z.lam)
        if n is not None:
            out.setdefault(n, []).append(z)
    return out


# ---------------------------------------------------------------------------
# Zero scans

def _zt_grid(lo, hi, per_period):
    zl = lo ** (1.0 / 3.0)
    zh = hi ** (1.0 / 3.0)
    step = _PERIOD_ZT / per_period
    n = max(3, int(math.ceil((zh - zl) / step)) + 1)
    return [z * z * z for z in np.linspace(zl, zh, n)]


def _rect_of(region):
    if isinstance(region, DomainRect):
        return rootfind.Rect(complex(0.5 * (region.a + region.b), 0.0),
                             0.5 * (region.b - region.a), region.r)
    return region


def _scan_zeros(F, region, cfg):
    if isinstance(region, (rootfind.Rect, DomainRect)):
        rect = _rect_of(region)
        if rect.center.real - rect.half_width <= 0.0 \
                and abs(rect.center.imag) <= rect.half_height:
            raise ConfigError("search rectangle touches the branch ray "
                              "zeta <= 0 of the cube-root scaling")
        _check_energy(abs(rect.center) + rect.diameter(), 1)
        target = max(1e-3, 2.5e-4 * (1.0 + abs(rect.center)) ** (2.0 / 3.0))
        zeros = []
        for piece, count in rootfind.isolate_zeros(F.coarse, rect, target):
            zeros.append(rootfind.refine_newton(F, piece.center, count))
        zeros.sort(key=lambda z: (z.lam.real, z.lam.imag))
        return zeros
    a, b = float(region[0]), float(region[1])
    if not b > a:
        raise ConfigError("region must satisfy a < b")
    if a <= 0.0:
        raise ConfigError("real-axis scans need a > 0: the cube-root "
                          "rescaling is cut along zeta <= 0")
    _check_energy(b, 1)
    grid = _zt_grid(a, b, 16)
    return rootfind.real_scan(F, (a, b), grid=grid,
                              tangency_tol=lambda z: _SCAN_TANGENCY)


# bump heights below this are indistinguishable from integration noise of
# the O(1)-scaled discriminant at the default tolerances
_PAIR_RESOLVE_FLOOR = 1e-11


def _split_bump_pair(F, z, lo_bound, hi_bound):
    """Resolve a real double zero into its barely split pair when possible.

    Between the two collision energies of a real multiplier pair the
    discriminant is positive, so a genuine pair leaves a bump of height
    |f''| (s/2)^2 / 2 at the reported center; a coalesced double leaves
    none. Splits narrow enough that the bump drowns in integration noise
    stay merged, which is the honest resolution limit in double precision.
    """
    rbar = z.lam.real
    s0 = F(rbar)[0].real
    if not s0 > _PAIR_RESOLVE_FLOOR:
        return None
    dz = 1e-3 * (1.0 + abs(rbar)) ** (2.0 / 3.0)
    fpp = ((F(rbar + dz)[1] - F(rbar - dz)[1]) / (2.0 * dz)).real
    if not fpp < 0.0:
        return None
    half = math.sqrt(-2.0 * s0 / fpp)
    lo = rootfind.refine_newton(F, rbar - half, 1)
    hi = rootfind.refine_newton(F, rbar + half, 1)
    # the slope at either split zero is |fpp| half, so a residual under
    # 0.1 s0 = 0.05 |fpp| half^2 pins the location to within 0.05 half even
    # when the step-size termination test never fires
    if not all(z.newton_converged or z.residual <= 0.1 * s0 for z in (lo, hi)):
        return None
    if not lo_bound < lo.lam.real < rbar < hi.lam.real < hi_bound:
        return None
    return [lo, hi]


def ramifications(coeffs, region, cfg=DEFAULT_CONFIG):
    """Zeros of the discriminant on a real interval or complex rectangle.

    Real regions are sampled uniformly in zeta^{1/3} (the natural
    oscillation variable), bracketed, and polished tight; tangency dips are
    resolved into a double zero or a barely split pair exactly as for Hill
    band edges. Doubles then get a second look: a resolvable discriminant
    bump at the center splits them into their two simple collision points.
    Group the result with label_by_windows for per-window counts.
    """
    F = discriminant_handle(coeffs, cfg)
    zeros = _scan_zeros(F, region, cfg)
    if isinstance(region, (rootfind.Rect, DomainRect)):
        return zeros
    a, b = float(region[0]), float(region[1])
    out = []
    for z in zeros:
        pair = _split_bump_pair(F, z, a, b) if z.multiplicity == 2 else None
        out.extend(pair if pair is not None else [z])
    return out


def three_point_eigenvalues(coeffs, region, cfg=DEFAULT_CONFIG):
    """Zeros of the three-point determinant, located like ramifications."""
    return _scan_zeros(three_point_handle(coeffs, cfg), region, cfg)


# ---------------------------------------------------------------------------
# High-energy formulas

def _tilted_coefficient(f, n):
    """(2/sqrt 3) integral of f(x) cos(2 pi n x + pi/6) over one period.

    Closed form from orthogonality: only the n-th harmonic survives,
    contributing c_n/2 - s_n/(2 sqrt 3).
    """
    c = f.cos_coeffs[n - 1] if len(f.cos_coeffs) >= n else 0.0
    s = f.sin_coeffs[n - 1] if len(f.sin_coeffs) >= n else 0.0
    return 0.5 * c - s / (2.0 * _SQRT3)


def zeta_asymptotic(coeffs, n):
    """Four-term high-energy location of the n-th three-point eigenvalue."""
    if n < 1:
        raise ConfigError("asymptotic index must be >= 1")
    base = 2.0 * math.pi * n / _SQRT3
    return (base ** 3 - 2.0 * base * coeffs.p.mean
            + base * _tilted_coefficient(coeffs.p, n)
            + coeffs.q.mean - _tilted_coefficient(coeffs.q, n))


def ram_asymptotic(coeffs, n):
    """Two-term high-energy location shared by the n-th ramification pair."""
    if n < 1:
        raise ConfigError("asymptotic index must be >= 1")
    base = 2.0 * math.pi * n / _SQRT3
    return base ** 3 - 2.0 * base * coeffs.p.mean


# ---------------------------------------------------------------------------
# Floquet solution and the Hill reduction

def _null_vector(mat):
    scale = np.max(np.abs(mat))
    if scale == 0.0:
        return np.array([1.0, 0.0, 0.0], dtype=complex)
    _, _, vh = np.linalg.svd(mat / scale)
    return vh[-1].conj()


def floquet_psi3(coeffs, zeta, x_mesh, cfg=DEFAULT_CONFIG):
    """Dominant Floquet solution sampled with two derivatives on x_mesh.

    Returns a (3, len(x_mesh)) array (psi, psi', psi'') normalized to
    psi(0) = 1, so psi(1) equals the dominant multiplier. Requires a clear
    modulus gap between the two largest multipliers; near a ramification the
    dominant eigenvector is ill-defined and a NearRamificationError is
    raised.
    """
    zeta = complex(zeta)
    _check_energy(zeta, 1)
    xs = [float(x) for x in np.asarray(x_mesh, dtype=float).ravel()]
    if not xs:
        raise ConfigError("x_mesh must be non-empty")
    if min(xs) < 0.0 or max(xs) > 1.0:
        raise ConfigError("x_mesh must lie inside [0, 1]")
    rows = {}
    tail = _fast.third9(coeffs.pev(), zeta, 1.0, cfg.rel_tol, cfg.abs_tol,
                        cfg.max_steps, checkpoints=sorted(set(xs)),
                        on_sample=lambda x, row: rows.update({x: row}))
    m1 = _as_matrix(tail)
    ms = multipliers(Monodromy3(zeta, m1, m1 @ m1))
    gap = abs(ms.kappa3) - abs(ms.kappa2)
    if gap < _DOMINANCE_TOL * abs(ms.kappa3):
        raise NearRamificationError(
            f"multiplier modulus gap {gap:.3e} is below tolerance at "
            f"zeta = {zeta:.6g}")
    v = _null_vector(m1 - ms.kappa3 * np.eye(3))
    if abs(v[0]) < 1e-8 * float(np.linalg.norm(v)):
        raise NearRamificationError(
            "dominant Floquet solution vanishes at x = 0; cannot normalize")
    v = v / v[0]
    out = np.empty((3, len(xs)), dtype=complex)
    for j, x in enumerate(xs):
        out[:, j] = _as_matrix(rows[x]) @ v
    return out


def _log_derivative_potential(coeffs, zeta, xs, cfg):
    """-2p - (3/4)(2 psi''/psi - (psi'/psi)^2) on the sample mesh.

    (psi'/psi)' is expanded as psi''/psi - (psi'/psi)^2 so only sampled
    derivatives of the integrated solution enter, never a finite difference
    in x.
    """
    psi = floquet_psi3(coeffs, zeta, xs, cfg)
    # psi legitimately spans e^{Re w} in magnitude; vanishing is judged
    # against the growth envelope, not the global maximum
    grow = np.exp((complex(zeta) ** (1.0 / 3.0)).real * np.asarray(xs))
    mags = np.abs(psi[0]) / grow
    if np.min(mags) < 1e-8 * np.max(mags):
        raise NearRamificationError(
            "dominant Floquet solution nearly vanishes on the mesh; the "
            "reduced potential is singular at this energy")
    w = psi[1] / psi[0]
    return -2.0 * coeffs.p(np.asarray(xs)) \
        - 0.75 * (2.0 * psi[2] / psi[0] - w * w)


def reduce_to_hill(coeffs, zeta, cfg=DEFAULT_CONFIG, nodes=_REDUCTION_NODES):
    """Collapse the third-order problem at one energy to a Hill potential.

    Returns (spec, lam) with lam = (3/4) zeta^{2/3} and spec a tabulated
    potential V(x, lam) = -2p - (3/4)(2(psi'/psi)' + (psi'/psi)^2) + lam on
    Chebyshev nodes. dV/dlambda is tabulated from reductions at
    zeta (1 +- h) through the chain rule dzeta/dlambda = 2 zeta^{1/3} (the
    one finite-difference exception in the pipeline) plus the explicit
    +1 from the lam term. Ramification points of the third-order problem
    map to 2-periodic eigenvalues of the reduced potential.
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise ConfigError("the reduction needs zeta != 0")
    if nodes < 8:
        raise ConfigError("reduction mesh needs at least 8 nodes")
    lam = 0.75 * zeta ** (2.0 / 3.0)
    js = np.arange(nodes)
    xs = 0.5 * (1.0 - np.cos(math.pi * js / (nodes - 1)))
    xs[0], xs[-1] = 0.0, 1.0
    v0 = _log_derivative_potential(coeffs, zeta, xs, cfg)
    h = _REDUCTION_H
    vp = _log_derivative_potential(coeffs, zeta * (1.0 + h), xs, cfg)
    vm = _log_derivative_potential(coeffs, zeta * (1.0 - h), xs, cfg)
    dv = (vp - vm) / (h * zeta ** (2.0 / 3.0)) + 1.0
    spec = TabulatedPotential(lam, xs, v0 + lam, dv)
    return spec, lam
