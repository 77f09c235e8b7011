"""Quadrature helpers: Gauss-Legendre panels and Chebyshev cumulative integrals."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def gauss_legendre(n):
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def composite_gl(a, b, panels, order):
    """Composite Gauss-Legendre grid on [a, b]: (nodes, weights) flat arrays."""
    x0, w0 = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    widths = np.diff(edges)
    nodes = (edges[:-1, None] + widths[:, None] * x0[None, :]).ravel()
    weights = (widths[:, None] * w0[None, :]).ravel()
    return nodes, weights


def panels_for_frequency(freq, min_panels=4, per_period=8.0):
    """Panel count resolving an oscillation exp(i*freq*x) on a unit interval.

    Keeps at least `per_period` panels per oscillation period, so each panel
    sees a bounded phase increment regardless of |freq|.
    """
    periods = abs(freq) / (2.0 * np.pi)
    return max(min_panels, int(np.ceil(per_period * periods)))


@lru_cache(maxsize=8)
def chebyshev_lobatto(m):
    """Chebyshev-Lobatto nodes on [0, 1], ascending."""
    k = np.arange(m)
    t = -np.cos(np.pi * k / (m - 1))  # [-1, 1] ascending
    return 0.5 * (t + 1.0)


@lru_cache(maxsize=8)
def cumulative_matrix(m):
    """Matrix K with (K f)[j] = integral_0^{t_j} p(t) dt on [0, 1] nodes.

    p is the degree m-1 interpolant of f at the Chebyshev-Lobatto nodes, so
    the rule is spectrally accurate for smooth integrands.
    """
    k = np.arange(m)
    t = -np.cos(np.pi * k / (m - 1))
    vand = np.polynomial.chebyshev.chebvander(t, m - 1)
    coeff_map = np.linalg.solve(vand, np.eye(m))
    out = np.zeros((m, m))
    for j in range(m):
        anti = np.polynomial.chebyshev.chebint(coeff_map[:, j])
        vals = np.polynomial.chebyshev.chebval(t, anti)
        out[:, j] = vals - vals[0]
    # map from [-1,1] to [0,1]: dt scales by 1/2
    return 0.5 * out


def cumulative_grid(panels, m=16):
    """Panelled Chebyshev-Lobatto grid on [0, 1] for cumulative quadrature.

    Returns (x, edges) where x has shape (panels, m); panel p covers
    [edges[p], edges[p+1]] and x[p] are its nodes.
    """
    edges = np.linspace(0.0, 1.0, panels + 1)
    base = chebyshev_lobatto(m)
    x = edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * base[None, :]
    return x, edges


def cumulative_integral(values, edges, m=16):
    """Cumulative integral on a cumulative_grid layout.

    values: (panels, m) samples of the integrand at the grid nodes.
    Returns an array of the same shape holding integral_0^{x} f.
    """
    kmat = cumulative_matrix(m)
    widths = np.diff(edges)
    within = values @ kmat.T * widths[:, None]
    # chain panel totals so each panel continues the running sum
    totals = np.cumsum(within[:, -1])
    within[1:] += totals[:-1, None]
    return within


# Gauss 7 / Kronrod 15 pair on [-1, 1] (standard tabulated values).
_KRONROD_X = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_KRONROD_W = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_GAUSS7_W = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870,
])


def kronrod15(f, a, b):
    """One G7/K15 application of a complex-valued f over [a, b].

    Returns (k15_value, error_estimate, min_abs_sample) where the last entry
    is min |f| over the Kronrod nodes (used to spot zeros near the contour).
    """
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = np.array([f(mid + half * t) for t in _KRONROD_X])
    k15 = half * np.dot(_KRONROD_W, vals)
    g7 = half * np.dot(_GAUSS7_W, vals[1::2])
    return k15, abs(k15 - g7), float(np.min(np.abs(vals)))
