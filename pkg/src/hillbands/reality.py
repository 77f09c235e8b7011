"""Reality certificates for spectra of energy-dependent potentials.

The imaginary part Q(x, lam) = Im V(x, lam) controls how far eigenvalues can
leave the real axis: any eigenvalue lam0 obeys |Im lam0| <= sup_x |Q(x, lam0)|.
The certificates below turn sup bounds on Q (the xi functional) into regions
with provably real spectrum: a contraction argument on half-planes, Poisson
kernel estimates on strips and half-strips, and a derivative condition along
real intervals. All sups are float upper estimates combined with per-family
analytic tail bounds; they are not interval arithmetic.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, UnsupportedRegionError
from .potentials import (CosFamilyPotential, ConstantPotential,
                         ExpFamilyPotential, HalfPlane, HalfStrip,
                         LambdaIndependentPotential, Rect,
                         RationalDecayPotential, Sector, TabulatedPotential,
                         ZeroPotential)

# Contraction constant of the half-plane certificate. Whether it can be
# improved is an open question; it is a parameter so the bound stays
# explorable, but every shipped default uses this value.
TWO_MINUS_SQRT3 = 2.0 - math.sqrt(3.0)

_REAL_FAMILIES = (ZeroPotential, ConstantPotential, LambdaIndependentPotential)


@dataclass(frozen=True)
class RealityCertificate:
    """Outcome of one reality test.

    threshold is kind-dependent: the energy a+rho for half-plane
    certificates (spectrum real to the right of it), and the xi budget
    r(1-phi)^2/2 for rect/half-strip certificates. margin > 0 whenever
    certified.
    """

    kind: str
    region: object
    xi_value: float
    threshold: float
    certified: bool
    margin: float = None
    derivative_sup: float = None
    reason: str = ""

    def to_json(self):
        out = {
            "kind": self.kind,
            "region": _region_json(self.region),
            "xi": self.xi_value,
            "threshold": self.threshold,
            "certified": self.certified,
            "margin": self.margin,
        }
        if self.derivative_sup is not None:
            out["derivative_sup"] = self.derivative_sup
        if self.reason:
            out["reason"] = self.reason
        return out


def _region_json(region):
    if region is None:
        return None
    if isinstance(region, HalfPlane):
        return {"type": "half_plane", "a": region.a}
    if isinstance(region, HalfStrip):
        return {"type": "half_strip", "a": region.a, "r": region.r}
    if isinstance(region, Rect):
        return {"type": "rect", "a": region.a, "b": region.b, "r": region.r}
    if isinstance(region, Sector):
        return {"type": "sector", "radius": region.radius,
                "half_angle": region.half_angle}
    return {"type": type(region).__name__}


def eta(spec, x, lam):
    """Im V(x, lam) - Im lam; eigenvalues force this to cross zero in x."""
    lam = complex(lam)
    return float(np.imag(spec.value(x, lam))) - lam.imag


def eigenvalue_imag_slack(spec, lam0, nx=256):
    """|Im lam0| - sup_x |Q(x, lam0)|; <= 0 at any true eigenvalue."""
    lam0 = complex(lam0)
    xs = np.linspace(0.0, 1.0, nx)
    q_sup = float(np.max(np.abs(np.imag(np.asarray(spec.value(xs, lam0),
                                                   dtype=complex)))))
    return abs(lam0.imag) - q_sup


# ---------------------------------------------------------------------------
# Grid sups with Richardson-style doubling

def _sup_grid(fn, box, contains, per_unit, nx):
    """Sup of fn(xs, lam) over box samples, densities doubled until stable."""
    mu0, mu1, nu0, nu1 = box
    xs = np.linspace(0.0, 1.0, nx)
    density = per_unit
    prev = None
    for _ in range(5):
        n_mu = max(9, int(math.ceil(density * (mu1 - mu0))) + 1)
        n_nu = max(5, int(math.ceil(density * (nu1 - nu0))) + 1) \
            if nu1 > nu0 else 1
        mus = np.linspace(mu0, mu1, n_mu)
        nus = np.linspace(nu0, nu1, n_nu) if n_nu > 1 else np.array([nu0])
        best = 0.0
        for mu in mus:
            for nu in nus:
                lam = complex(mu, nu)
                if contains is not None and not contains(lam):
                    continue
                best = max(best, fn(xs, lam))
        if prev is not None and best <= prev * 1.01 + 1e-300:
            return max(best, prev)
        prev = best
        density *= 2.0
    return prev


def _q_sup(spec, box, contains, per_unit, nx=65):
    def fn(xs, lam):
        vals = np.asarray(spec.value(xs, lam), dtype=complex)
        return float(np.max(np.abs(vals.imag)))
    return _sup_grid(fn, box, contains, per_unit, nx)


def _core_box(region, reach=4.0):
    """A bounded sampling box covering the extreme part of the region."""
    if isinstance(region, Rect):
        return (region.a, region.b, -region.r, region.r)
    if isinstance(region, HalfStrip):
        return (region.a, region.a + reach, -region.r, region.r)
    if isinstance(region, HalfPlane):
        return (region.a, region.a + reach, -reach, reach)
    if isinstance(region, Sector):
        lead = region.radius * math.cos(region.half_angle)
        return (lead, lead + reach, -reach, reach)
    raise UnsupportedRegionError(f"unknown region type {type(region).__name__}")


def _min_re(region):
    if isinstance(region, (HalfPlane, HalfStrip, Rect)):
        return region.a
    if isinstance(region, Sector):
        if region.half_angle >= 0.5 * math.pi:
            return -region.radius
        return region.radius * math.cos(region.half_angle)
    raise UnsupportedRegionError(f"unknown region type {type(region).__name__}")


def _dist_to_point(region, p):
    """Distance from a real point p to the region (for pole clearance)."""
    if isinstance(region, (HalfPlane, HalfStrip, Rect)):
        d = region.a - p
        if isinstance(region, Rect) and p > region.b:
            d = max(d, p - region.b)
        return max(d, 0.0)
    if isinstance(region, Sector):
        if p >= 0:
            return max(region.radius - p, 0.0) if p < region.radius else 0.0
        corner = region.radius * complex(math.cos(region.half_angle),
                                         math.sin(region.half_angle))
        return min(abs(corner - p), abs(-p)) if region.half_angle < math.pi \
            else 0.0
    raise UnsupportedRegionError(f"unknown region type {type(region).__name__}")


def _xi_tail(spec, region):
    """Analytic upper bound for sup |Q| over region, or None if unavailable."""
    if isinstance(spec, _REAL_FAMILIES):
        return 0.0
    if isinstance(spec, ExpFamilyPotential):
        a = _min_re(region)
        try:
            return sum(q.coeff_bound * math.exp(-k * a)
                       for k, q in spec.terms)
        except OverflowError:
            return math.inf
    if isinstance(spec, CosFamilyPotential):
        if isinstance(region, (HalfStrip, Rect)):
            r = region.r
            return sum(q.coeff_bound * math.sinh(k * r)
                       for k, q in spec.terms)
        return None
    if isinstance(spec, RationalDecayPotential):
        d = _dist_to_point(region, -spec.shift)
        if d <= 0.0:
            raise DomainError("region touches the pole of the potential")
        return spec.q.coeff_bound / d
    return None


def _is_bounded(region):
    return isinstance(region, Rect)


def xi_functional(spec, region, grid=8):
    """Upper bound for xi(region) = sup over [0,1] x region of |Im V|.

    Combines a grid sup (grid x grid samples per unit area, doubled until the
    value moves by less than 1%) with the family's analytic tail bound, so
    the result never underestimates. Unbounded regions require a tail bound.
    """
    tail = _xi_tail(spec, region)
    if tail == 0.0:
        return 0.0
    if tail is None and not _is_bounded(region):
        raise UnsupportedRegionError(
            f"no tail bound for {spec.family} over an unbounded region")
    sup = _q_sup(spec, _core_box(region), region.contains, grid)
    return max(sup, tail) if tail is not None else sup


def dQ_dnu_sup(spec, interval, grid=8):
    """Upper bound for sup |dQ/dnu| on [0,1] x interval (real interval).

    At real lam the derivative of Q transverse to the axis equals Re dV/dlam.
    ExpFamily adds the tail sum kappa_n ||q_n|| exp(-kappa_n max(a, 0)).
    """
    a, b = float(interval[0]), float(interval[1])
    if not b >= a:
        raise ConfigError("interval must satisfy a <= b")
    if isinstance(spec, _REAL_FAMILIES):
        return 0.0
    tail = None
    if isinstance(spec, ExpFamilyPotential):
        tail = sum(k * q.coeff_bound * math.exp(-k * max(a, 0.0))
                   for k, q in spec.terms)
    elif isinstance(spec, CosFamilyPotential):
        tail = sum(k * q.coeff_bound for k, q in spec.terms)
    elif isinstance(spec, RationalDecayPotential):
        pole = -spec.shift
        d = a - pole if pole < a else (pole - b if pole > b else 0.0)
        if d <= 0.0:
            raise DomainError("interval touches the pole of the potential")
        tail = spec.q.coeff_bound / (d * d)

    def fn(xs, lam):
        vals = np.asarray(spec.dvalue(xs, lam), dtype=complex)
        return float(np.max(np.abs(vals.real)))

    sup = _sup_grid(fn, (a, b if b > a else a + 1e-9, 0.0, 0.0), None, grid, 65)
    if tail is None and not math.isfinite(sup):
        raise UnsupportedRegionError(
            f"no derivative bound for {spec.family}")
    return max(sup, tail) if tail is not None else sup


def _domain_min_re(spec):
    """a_min with {Re lam > a_min} inside the analyticity domain."""
    if isinstance(spec, RationalDecayPotential):
        return -spec.shift
    if isinstance(spec, TabulatedPotential):
        return math.inf
    return -math.inf


def poisson_derivative_bound(f_max, r, nu):
    """Harmonic-function derivative bound 2 r f_max / (r - |nu|)^2.

    Valid for |nu| < r when |f| <= f_max on the disc of radius r.
    """
    if not abs(nu) < r:
        raise ConfigError(f"need |nu| < r, got nu={nu}, r={r}")
    return 2.0 * r * f_max / (r - abs(nu)) ** 2


def certify_halfplane(spec, a, grid=8, contraction=TWO_MINUS_SQRT3):
    """Half-plane certificate: spectrum right of a + rho is real.

    rho = xi({Re lam > a}) / contraction. Certification additionally needs
    the strip (a, inf) x (-rho, rho) inside the potential's analyticity
    domain; when it is not, the certificate is returned uncertified with the
    reason recorded.
    """
    if not 0.0 < contraction < 1.0:
        raise ConfigError("contraction must lie in (0, 1)")
    xi = xi_functional(spec, HalfPlane(a), grid)
    if not math.isfinite(xi):
        return RealityCertificate(
            kind="half_plane", region=None, xi_value=None, threshold=None,
            certified=False,
            reason=f"xi bound diverges over the half-plane Re > {a}")
    rho = xi / contraction
    threshold = a + rho
    a_min = _domain_min_re(spec)
    if a >= a_min:
        return RealityCertificate(
            kind="half_plane", region=HalfPlane(threshold), xi_value=xi,
            threshold=threshold, certified=True)
    return RealityCertificate(
        kind="half_plane", region=None, xi_value=xi, threshold=threshold,
        certified=False,
        reason=f"strip Re > {a} not inside analyticity domain Re > {a_min}")


def certify_strip(spec, a, b, r, phi, grid=8):
    """Strip certificate: xi budget r(1-phi)^2/2 over a-to-b strip of height r.

    Certifies the inner region (a+r, b-r) x (-phi r, phi r); pass b = inf for
    the half-strip version. phi = 2 - sqrt(3) makes the budget (2 - sqrt3) r.
    """
    if not 0.0 < phi < 1.0:
        raise ConfigError("phi must lie in (0, 1)")
    if r <= 0.0:
        raise ConfigError("strip height r must be positive")
    if not b > a + 2.0 * r:
        raise ConfigError("need b > a + 2r for an inner region to exist")
    a_min = _domain_min_re(spec)
    if a < a_min:
        raise DomainError(
            f"strip starts at Re = {a}, outside analyticity domain "
            f"Re > {a_min}")
    half = math.isinf(b)
    outer = HalfStrip(a, r) if half else Rect(a, b, r)
    xi = xi_functional(spec, outer, grid)
    budget = 0.5 * r * (1.0 - phi) ** 2
    certified = xi <= budget
    region = (HalfStrip(a + r, phi * r) if half
              else Rect(a + r, b - r, phi * r)) if certified else None
    return RealityCertificate(
        kind="half_strip" if half else "rect", region=region, xi_value=xi,
        threshold=budget, certified=certified, margin=budget - xi,
        reason="" if certified else "xi exceeds the strip budget")


def certify_derivative_strip(spec, interval, grid=8):
    """Real-interval certificate: V real on the axis and sup |dQ/dnu| < 1.

    The vertical clearance of the resulting real window is empirical (the
    underlying statement only asserts some positive clearance), so the
    certified region is reported as the interval itself at height 0.
    """
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ConfigError("interval must satisfy a < b")
    if _domain_min_re(spec) > a and not isinstance(spec, TabulatedPotential):
        raise DomainError("interval leaves the analyticity domain")
    xs = np.linspace(0.0, 1.0, 129)
    scale = 0.0
    q_on_axis = 0.0
    for mu in np.linspace(a, b, 65):
        vals = np.asarray(spec.value(xs, complex(mu, 0.0)), dtype=complex)
        q_on_axis = max(q_on_axis, float(np.max(np.abs(vals.imag))))
        scale = max(scale, float(np.max(np.abs(vals))))
    real_on_axis = q_on_axis <= 1e-12 * (1.0 + scale)
    dsup = dQ_dnu_sup(spec, (a, b), grid)
    certified = real_on_axis and dsup < 1.0
    if not real_on_axis:
        reason = "potential is not real on the axis"
    elif dsup >= 1.0:
        reason = "transverse derivative of Q reaches 1"
    else:
        reason = ""
    return RealityCertificate(
        kind="derivative_strip", region=Rect(a, b, 0.0) if certified else None,
        xi_value=q_on_axis, threshold=1.0, certified=certified,
        margin=(1.0 - dsup) if certified else None,
        derivative_sup=dsup, reason=reason)
