"""Series evaluation of the polylogarithm and endpoint-weighted quadrature.

Li_s(z) = sum_{k>=1} z^k k^(-s) is needed for the occupancy generating
function and its derivatives, at arguments that come within 1e-16 of z = 1
(the top order statistics of the site disorder).  Direct summation is hopeless
there, so for z > 0.75 we use the classical expansion of Li_s(e^-t) in powers
of t = -log z, whose coefficients are zeta values:

  s not a positive integer:
      Li_s(e^-t) = Gamma(1-s) t^(s-1) + sum_j zeta(s-j) (-t)^j / j!
  s = m a positive integer:
      Li_m(e^-t) = (-t)^(m-1)/(m-1)! (H_{m-1} - log t)
                   + sum_{j != m-1} zeta(m-j) (-t)^j / j!

Both converge for 0 < t < 2pi; with t < 0.29 (z > 0.75) some thirty terms
reach double precision.  Zeta coefficients are computed once per index with
mpmath-free code: positive arguments via scipy, non-positive via the
functional equation.

To keep full precision next to z = 1 every entry point is parameterized by
u = 1 - z, and t is formed as -log1p(-u).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import special as sc

_MAX_J = 56
_SPLIT = 0.25  # u above this: direct series; below: expansion in t


def _zeta(s: float) -> float:
    """Riemann zeta for real s != 1, including non-positive arguments."""
    if s > 1.0:
        return float(sc.zeta(s))
    if abs(s - 1.0) < 1e-13:
        raise ValueError("zeta pole at s=1")
    if s == 0.0:
        return -0.5
    # functional equation: zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    return float(
        2.0**s * np.pi ** (s - 1.0) * np.sin(np.pi * s / 2.0) * sc.gamma(1.0 - s) * sc.zeta(1.0 - s)
    )


@lru_cache(maxsize=None)
def _expansion_coeffs(s: float):
    """Coefficients zeta(s-j)/j! for j=0.._MAX_J-1, pole entry zeroed."""
    out = np.empty(_MAX_J)
    pole = -1
    for j in range(_MAX_J):
        a = s - j
        if abs(a - 1.0) < 1e-12:
            out[j] = 0.0
            pole = j
        else:
            out[j] = _zeta(a) / sc.factorial(j)
    return out, pole


def polylog_u(s: float, u, tol: float = 1e-15):
    """Li_s(1-u) for u in (0, 1], vectorized; s > -1.

    Returns (values, max_terms_used, tail_bound).  tail_bound is a rigorous
    truncation bound for the direct-series branch and a last-term estimate
    for the expansion branch (which is converged to ~1e-15 relative).
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any((u <= 0.0) | (u > 1.0)):
        raise ValueError("u must lie in (0, 1]")
    out = np.empty_like(u)
    terms_used = 0
    tail_bound = 0.0

    far = u >= _SPLIT
    if far.any():
        z = 1.0 - u[far]
        acc = np.zeros_like(z)
        zk = z.copy()
        k = 1
        while True:
            acc += zk * float(k) ** (-s)
            zk *= z
            k += 1
            bound = float(np.max(zk)) * k ** (-min(s, 0.0)) / _SPLIT
            if bound <= tol or k > 10**6:
                break
        out[far] = acc
        terms_used = k
        tail_bound = max(tail_bound, bound)

    near = ~far
    if near.any():
        t = -np.log1p(-u[near])
        coeffs, pole = _expansion_coeffs(float(s))
        j = np.arange(_MAX_J)
        # powers (-t)^j, all finite for t <= -log(1-_SPLIT) < 0.29
        pw = np.power.outer(-t, j)
        series = pw @ coeffs
        if abs(s - round(s)) < 1e-12 and round(s) >= 1:
            m = int(round(s))
            h = float(np.sum(1.0 / np.arange(1, m)))  # H_{m-1}, 0 when m=1
            lead = (-t) ** (m - 1) / sc.factorial(m - 1) * (h - np.log(t))
            out[near] = lead + series
        else:
            out[near] = sc.gamma(1.0 - s) * t ** (s - 1.0) + series
        terms_used = max(terms_used, _MAX_J)
        last = float(np.max(np.abs(pw[:, -1]))) * abs(coeffs[-1])
        tail_bound = max(tail_bound, 4.0 * last + 1e-15)

    return out, terms_used, tail_bound


def polylog_at_one(s: float) -> float:
    """Li_s(1) = zeta(s); diverges for s <= 1."""
    if s <= 1.0:
        raise ValueError("polylog diverges at z=1 for s<=1")
    return _zeta(s)


def panel_quad_near_one(f, sing_exponent: float, upper: float = 1.0,
                        tol: float = 1e-10, max_panels: int = 600):
    """integral_0^upper f(u) u^sing_exponent du with sing_exponent > -1.

    f must be vectorized and finite on (0, upper]; the integrable endpoint
    singularity sits at u=0.  Geometrically shrinking panels [b/2, b] are each
    handled by 48-point Gauss-Legendre (f smooth per panel), and the remaining
    [0, b] stub is bounded by geometric extrapolation of the panel values.

    Returns (value, error_estimate).
    """
    if sing_exponent <= -1.0:
        raise ValueError("endpoint exponent must exceed -1")
    nodes, wts = np.polynomial.legendre.leggauss(48)
    total = 0.0
    b = float(upper)
    vals = []
    for _ in range(max_panels):
        a = b / 2.0
        x = (nodes + 1.0) * (b - a) / 2.0 + a
        w = wts * (b - a) / 2.0
        v = float(np.sum(f(x) * x**sing_exponent * w))
        total += v
        vals.append(abs(v))
        if len(vals) >= 4:
            r = vals[-1] / max(vals[-2], 1e-300)
            if r < 0.9 and vals[-1] * r / (1.0 - r) < tol / 2.0 and vals[-1] < tol:
                return total, vals[-1] * r / (1.0 - r) + 1e-15 * abs(total)
        b = a
    # panels exhausted: either extremely slow decay or divergence
    r = vals[-1] / max(vals[-2], 1e-300)
    if r >= 0.999:
        raise ArithmeticError("endpoint integrand does not decay: integral appears divergent")
    est = vals[-1] * r / max(1.0 - r, 1e-6)
    return total + est, est + 1e-15 * abs(total)
