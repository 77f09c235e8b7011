"""Potential families V(x, lambda): 1-periodic in x, analytic in lambda.

Every family keeps real Fourier data in x, so V(x, conj(lambda)) =
conj(V(x, lambda)) holds for all of them except tabulated slices, which are
snapshots at a fixed energy.
"""

import cmath
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._quad import gauss_legendre
from .errors import ConfigError, DomainError

TWO_PI = 2.0 * math.pi

__all__ = [
    "FourierProfile", "Potential", "ZeroPotential", "ConstantPotential",
    "LambdaIndependentPotential", "ExpFamilyPotential", "CosFamilyPotential",
    "RationalDecayPotential", "TabulatedPotential",
    "HalfPlane", "HalfStrip", "Rect", "Sector",
    "eval_V", "eval_dV", "potential_norm", "mean_V",
    "potential_from_json", "potential_to_json", "load_potential",
]


# ---------------------------------------------------------------------------
# Fourier profiles

@dataclass(frozen=True)
class FourierProfile:
    """Real trigonometric polynomial a0 + sum_m a_m cos(2 pi m x) + b_m sin."""

    a0: float = 0.0
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self):
        for name in ("cos_coeffs", "sin_coeffs"):
            vals = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
            if any(not math.isfinite(v) for v in vals):
                raise ConfigError(f"non-finite coefficient in {name}")
        object.__setattr__(self, "a0", float(self.a0))

    @cached_property
    def _terms(self):
        terms = [(m + 1, a, 0) for m, a in enumerate(self.cos_coeffs) if a != 0.0]
        terms += [(m + 1, b, 1) for m, b in enumerate(self.sin_coeffs) if b != 0.0]
        return tuple(terms)

    def eval_scalar(self, x):
        v = self.a0
        for m, c, kind in self._terms:
            ang = TWO_PI * m * x
            v += c * (math.sin(ang) if kind else math.cos(ang))
        return v

    def __call__(self, x):
        if np.isscalar(x):
            return self.eval_scalar(float(x))
        xs = np.asarray(x, dtype=float)
        v = np.full(xs.shape, self.a0)
        for m, c, kind in self._terms:
            ang = TWO_PI * m * xs
            v += c * (np.sin(ang) if kind else np.cos(ang))
        return v

    @property
    def coeff_bound(self):
        """Upper bound for sup |q| (exact for a single harmonic)."""
        return abs(self.a0) + sum(map(abs, self.cos_coeffs)) + sum(map(abs, self.sin_coeffs))

    @property
    def mean(self):
        return self.a0

    def is_zero(self):
        return self.a0 == 0.0 and not self._terms

    def to_json(self):
        out = {"a0": self.a0}
        if self.cos_coeffs:
            out["cos"] = list(self.cos_coeffs)
        if self.sin_coeffs:
            out["sin"] = list(self.sin_coeffs)
        return out

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ConfigError("Fourier profile must be an object")
        unknown = set(obj) - {"a0", "cos", "sin"}
        if unknown:
            raise ConfigError(f"unknown profile fields: {sorted(unknown)}")
        return cls(a0=obj.get("a0", 0.0),
                   cos_coeffs=tuple(obj.get("cos", ())),
                   sin_coeffs=tuple(obj.get("sin", ())))


# ---------------------------------------------------------------------------
# Domain descriptions in the energy plane

@dataclass(frozen=True)
class HalfPlane:
    """{ Re lambda > a }"""
    a: float

    def contains(self, lam):
        return lam.real > self.a


@dataclass(frozen=True)
class HalfStrip:
    """{ Re lambda > a, |Im lambda| < r }"""
    a: float
    r: float

    def contains(self, lam):
        return lam.real > self.a and abs(lam.imag) < self.r


@dataclass(frozen=True)
class Rect:
    """{ a < Re lambda < b, |Im lambda| < r }"""
    a: float
    b: float
    r: float

    def contains(self, lam):
        return self.a < lam.real < self.b and abs(lam.imag) <= self.r


@dataclass(frozen=True)
class Sector:
    """{ |lambda| > radius, |arg lambda| < half_angle }"""
    radius: float
    half_angle: float

    def contains(self, lam):
        return abs(lam) > self.radius and abs(cmath.phase(complex(lam))) < self.half_angle


# ---------------------------------------------------------------------------
# Potential families

class Potential:
    """Base class. Subclasses provide value/dvalue and family metadata."""

    family = "base"

    def check_lambda(self, lam):
        """Raise DomainError if lam is outside the analyticity domain."""

    def value(self, x, lam):
        raise NotImplementedError

    def dvalue(self, x, lam):
        """dV/dlambda at (x, lam)."""
        raise NotImplementedError

    def evaluator(self, lam):
        """Return f(x) -> (V, dV/dlambda) with lambda-only factors hoisted."""
        self.check_lambda(lam)
        return lambda x: (self.value(x, lam), self.dvalue(x, lam))

    def to_json(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json()})"

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash((type(self).__name__, json.dumps(self.to_json(), sort_keys=True)))


class ZeroPotential(Potential):
    family = "zero"

    def value(self, x, lam):
        return 0.0 if np.isscalar(x) else np.zeros(np.shape(x))

    def dvalue(self, x, lam):
        return 0.0 if np.isscalar(x) else np.zeros(np.shape(x))

    def evaluator(self, lam):
        zero = (0.0, 0.0)
        return lambda x: zero

    def to_json(self):
        return {"family": "zero"}


class ConstantPotential(Potential):
    family = "constant"

    def __init__(self, c):
        self.c = float(c)

    def value(self, x, lam):
        return self.c if np.isscalar(x) else np.full(np.shape(x), self.c)

    def dvalue(self, x, lam):
        return 0.0 if np.isscalar(x) else np.zeros(np.shape(x))

    def evaluator(self, lam):
        pair = (self.c, 0.0)
        return lambda x: pair

    def to_json(self):
        return {"family": "constant", "c": self.c}


class LambdaIndependentPotential(Potential):
    family = "lambda_independent"

    def __init__(self, q):
        self.q = q

    def value(self, x, lam):
        return self.q(x)

    def dvalue(self, x, lam):
        return 0.0 if np.isscalar(x) else np.zeros(np.shape(x))

    def evaluator(self, lam):
        q = self.q.eval_scalar
        return lambda x: (q(x), 0.0)

    def to_json(self):
        return {"family": "lambda_independent", "q": self.q.to_json()}


class ExpFamilyPotential(Potential):
    """V(x, lam) = sum_n q_n(x) exp(-kappa_n lam), entire in lam."""

    family = "exp"

    def __init__(self, terms):
        self.terms = tuple((float(k), q) for k, q in terms)
        if not self.terms:
            raise ConfigError("exp family needs at least one term")
        if any(k <= 0 for k, _ in self.terms):
            raise ConfigError("decay rates kappa must be positive")

    def value(self, x, lam):
        return sum(q(x) * cmath.exp(-k * lam) for k, q in self.terms)

    def dvalue(self, x, lam):
        return sum(q(x) * (-k) * cmath.exp(-k * lam) for k, q in self.terms)

    def evaluator(self, lam):
        parts = [(q.eval_scalar, cmath.exp(-k * lam), -k * cmath.exp(-k * lam))
                 for k, q in self.terms]
        if len(parts) == 1:
            q, g, dg = parts[0]
            return lambda x: (q(x) * g, q(x) * dg)

        def f(x):
            v = 0.0
            dv = 0.0
            for q, g, dg in parts:
                qq = q(x)
                v += qq * g
                dv += qq * dg
            return v, dv
        return f

    def to_json(self):
        return {"family": "exp",
                "terms": [{"kappa": k, "q": q.to_json()} for k, q in self.terms]}


class CosFamilyPotential(Potential):
    """V(x, lam) = sum_n q_n(x) cos(kappa_n lam), entire in lam."""

    family = "cos"

    def __init__(self, terms):
        self.terms = tuple((float(k), q) for k, q in terms)
        if not self.terms:
            raise ConfigError("cos family needs at least one term")
        if any(k <= 0 for k, _ in self.terms):
            raise ConfigError("frequencies kappa must be positive")

    def value(self, x, lam):
        return sum(q(x) * cmath.cos(k * lam) for k, q in self.terms)

    def dvalue(self, x, lam):
        return sum(q(x) * (-k) * cmath.sin(k * lam) for k, q in self.terms)

    def evaluator(self, lam):
        parts = [(q.eval_scalar, cmath.cos(k * lam), -k * cmath.sin(k * lam))
                 for k, q in self.terms]
        if len(parts) == 1:
            q, g, dg = parts[0]
            return lambda x: (q(x) * g, q(x) * dg)

        def f(x):
            v = 0.0
            dv = 0.0
            for q, g, dg in parts:
                qq = q(x)
                v += qq * g
                dv += qq * dg
            return v, dv
        return f

    def to_json(self):
        return {"family": "cos",
                "terms": [{"kappa": k, "q": q.to_json()} for k, q in self.terms]}


class RationalDecayPotential(Potential):
    """V(x, lam) = q(x) / (shift + lam), analytic on Re lam > -shift."""

    family = "rational_decay"

    def __init__(self, q, shift):
        self.q = q
        self.shift = float(shift)

    def check_lambda(self, lam):
        if complex(lam).real <= -self.shift:
            raise DomainError(
                f"lambda={lam} outside Re lambda > {-self.shift} for rational_decay")

    def value(self, x, lam):
        self.check_lambda(lam)
        return self.q(x) / (self.shift + lam)

    def dvalue(self, x, lam):
        self.check_lambda(lam)
        return -self.q(x) / (self.shift + lam) ** 2

    def evaluator(self, lam):
        self.check_lambda(lam)
        g = 1.0 / (self.shift + lam)
        dg = -g * g
        q = self.q.eval_scalar
        return lambda x: (q(x) * g, q(x) * dg)

    def to_json(self):
        return {"family": "rational_decay", "q": self.q.to_json(), "shift": self.shift}


def _barycentric_weights(nodes):
    n = len(nodes)
    w = np.ones(n)
    for j in range(n):
        diff = nodes[j] - np.delete(nodes, j)
        w[j] = 1.0 / np.prod(diff * 4.0)  # scaling keeps products away from under/overflow
    return w


class TabulatedPotential(Potential):
    """One energy slice V(x, lam0), dV/dlambda(x, lam0) sampled on x nodes.

    Away from lam0 the first-order continuation V0 + (lam - lam0) V1 is used;
    producers that need the exact lambda dependence re-tabulate per energy.
    """

    family = "tabulated"

    def __init__(self, lam0, x_nodes, v_vals, dv_vals):
        self.lam0 = complex(lam0)
        self.x_nodes = np.asarray(x_nodes, dtype=float)
        self.v_vals = np.asarray(v_vals, dtype=complex)
        self.dv_vals = np.asarray(dv_vals, dtype=complex)
        if not (len(self.x_nodes) == len(self.v_vals) == len(self.dv_vals)):
            raise ConfigError("tabulated arrays must share a length")
        if len(self.x_nodes) < 4:
            raise ConfigError("tabulated potential needs at least 4 nodes")
        self._bw = _barycentric_weights(self.x_nodes)

    def _interp(self, vals, x):
        d = x - self.x_nodes
        hit = np.nonzero(d == 0.0)[0]
        if hit.size:
            return complex(vals[hit[0]])
        c = self._bw / d
        return complex(np.dot(c, vals) / np.sum(c))

    def value(self, x, lam):
        if not np.isscalar(x):
            return np.array([self.value(float(t), lam) for t in np.asarray(x).ravel()]
                            ).reshape(np.shape(x))
        v0 = self._interp(self.v_vals, float(x))
        v1 = self._interp(self.dv_vals, float(x))
        return v0 + (lam - self.lam0) * v1

    def dvalue(self, x, lam):
        if not np.isscalar(x):
            return np.array([self.dvalue(float(t), lam) for t in np.asarray(x).ravel()]
                            ).reshape(np.shape(x))
        return self._interp(self.dv_vals, float(x))

    def evaluator(self, lam):
        dl = lam - self.lam0
        nodes = self.x_nodes
        bw = self._bw
        vv = self.v_vals
        dv = self.dv_vals

        def f(x):
            d = x - nodes
            hit = np.nonzero(d == 0.0)[0]
            if hit.size:
                j = hit[0]
                return vv[j] + dl * dv[j], dv[j]
            c = bw / d
            s = np.sum(c)
            v1 = np.dot(c, dv) / s
            return np.dot(c, vv) / s + dl * v1, v1
        return f

    def to_json(self):
        return {
            "family": "tabulated",
            "lambda0": [self.lam0.real, self.lam0.imag],
            "x_nodes": list(map(float, self.x_nodes)),
            "v": [[v.real, v.imag] for v in self.v_vals],
            "dv": [[v.real, v.imag] for v in self.dv_vals],
        }


# ---------------------------------------------------------------------------
# Module-level operations

def eval_V(spec, x, lam):
    """V(x, lambda); x scalar or array in [0, 1] (periodic continuation applies)."""
    spec.check_lambda(lam)
    return spec.value(x, lam)


def eval_dV(spec, x, lam):
    """dV/dlambda at (x, lambda)."""
    spec.check_lambda(lam)
    return spec.dvalue(x, lam)


def potential_norm(spec, lam, order=64):
    """L1 norm over one period, integral_0^1 |V(x, lam)| dx, by Gauss-Legendre."""
    spec.check_lambda(lam)
    xs, ws = gauss_legendre(order)
    vals = spec.value(xs, lam)
    return float(np.dot(ws, np.abs(vals)))


def mean_V(spec, lam):
    """Mean over one period, closed form per family."""
    spec.check_lambda(lam)
    if isinstance(spec, ZeroPotential):
        return 0.0
    if isinstance(spec, ConstantPotential):
        return spec.c
    if isinstance(spec, LambdaIndependentPotential):
        return spec.q.mean
    if isinstance(spec, ExpFamilyPotential):
        return sum(q.mean * cmath.exp(-k * lam) for k, q in spec.terms)
    if isinstance(spec, CosFamilyPotential):
        return sum(q.mean * cmath.cos(k * lam) for k, q in spec.terms)
    if isinstance(spec, RationalDecayPotential):
        return spec.q.mean / (spec.shift + lam)
    # tabulated slice: integrate the interpolant
    xs, ws = gauss_legendre(64)
    return complex(np.dot(ws, spec.value(xs, lam)))


# ---------------------------------------------------------------------------
# JSON configuration

def _require_keys(obj, allowed, required, what):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown fields in {what}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"missing fields in {what}: {sorted(missing)}")


def _terms_from_json(obj, what):
    if not isinstance(obj, list) or not obj:
        raise ConfigError(f"{what}: 'terms' must be a non-empty list")
    out = []
    for t in obj:
        if not isinstance(t, dict):
            raise ConfigError(f"{what}: each term must be an object")
        _require_keys(t, {"kappa", "q"}, {"kappa", "q"}, f"{what} term")
        out.append((float(t["kappa"]), FourierProfile.from_json(t["q"])))
    return out


def potential_from_json(obj):
    """Build a potential from its JSON object form. Unknown fields are errors."""
    if not isinstance(obj, dict):
        raise ConfigError("potential config must be an object")
    family = obj.get("family")
    if family == "zero":
        _require_keys(obj, {"family"}, {"family"}, "zero potential")
        return ZeroPotential()
    if family == "constant":
        _require_keys(obj, {"family", "c"}, {"family", "c"}, "constant potential")
        return ConstantPotential(obj["c"])
    if family == "lambda_independent":
        _require_keys(obj, {"family", "q"}, {"family", "q"}, "lambda_independent potential")
        return LambdaIndependentPotential(FourierProfile.from_json(obj["q"]))
    if family == "exp":
        _require_keys(obj, {"family", "terms"}, {"family", "terms"}, "exp potential")
        return ExpFamilyPotential(_terms_from_json(obj["terms"], "exp potential"))
    if family == "cos":
        _require_keys(obj, {"family", "terms"}, {"family", "terms"}, "cos potential")
        return CosFamilyPotential(_terms_from_json(obj["terms"], "cos potential"))
    if family == "rational_decay":
        _require_keys(obj, {"family", "q", "shift"}, {"family", "q", "shift"},
                      "rational_decay potential")
        return RationalDecayPotential(FourierProfile.from_json(obj["q"]), obj["shift"])
    if family == "tabulated":
        _require_keys(obj, {"family", "lambda0", "x_nodes", "v", "dv"},
                      {"family", "lambda0", "x_nodes", "v", "dv"}, "tabulated potential")
        lam0 = complex(obj["lambda0"][0], obj["lambda0"][1])
        v = [complex(a, b) for a, b in obj["v"]]
        dv = [complex(a, b) for a, b in obj["dv"]]
        return TabulatedPotential(lam0, obj["x_nodes"], v, dv)
    raise ConfigError(f"unknown potential family: {family!r}")


def potential_to_json(spec):
    return spec.to_json()


def load_potential(source):
    """Load a potential from a JSON file path, JSON text, or a dict."""
    if isinstance(source, dict):
        return potential_from_json(source)
    text = source
    if "{" not in str(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return potential_from_json(obj)
