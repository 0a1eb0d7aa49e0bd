"""Occupancy weights p_k, their generating function, hop rates, critical density.

The default family is an exact power law ("zeta tail"):

    p_0 = 1/(1 + zeta(b)),   p_k = k^(-b)/(1 + zeta(b))   for k >= 1,

so the tail constant alpha2 = 1/(1 + zeta(b)) is known in closed form, which
the acceptance constants need.  A custom family overrides a finite head
p_0..p_K and keeps the exact alpha2 * k^(-b) tail, renormalized.

The generating function F(z) = sum p_k z^k and its derivatives reduce to
polylogarithms; they are evaluated stably arbitrarily close to z = 1 through
the u = 1 - z parameterization of :mod:`zrpsim.special`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .disorder import FitnessLaw, expect_from_top
from .special import polylog_u, polylog_at_one, _zeta


class DivergenceError(ArithmeticError):
    """A series or integral that the parameters make infinite."""


@dataclass(frozen=True)
class WeightSeq:
    family: str                 # "zeta" or "custom"
    beta: float                 # tail index, > 1
    alpha2: float               # tail constant: p_k = alpha2 * k^-beta for k > head
    p0: float
    head: tuple | None = None   # explicit p_0..p_K for the custom family

    def __post_init__(self):
        if self.beta <= 1.0:
            raise ValueError("tail index beta must exceed 1")
        if self.p0 <= 0.0:
            raise ValueError("p0 must be positive")

    @property
    def head_len(self) -> int:
        """First k at which the analytic tail applies."""
        return 1 if self.head is None else len(self.head)


def zeta_tail(beta: float) -> WeightSeq:
    a2 = 1.0 / (1.0 + _zeta(float(beta)))
    return WeightSeq("zeta", float(beta), a2, a2)


def custom_head(head, beta: float) -> WeightSeq:
    """Explicit p_0..p_K head with an exact alpha2 k^-beta tail from K+1 on."""
    head = tuple(float(h) for h in head)
    if len(head) < 1 or head[0] <= 0.0:
        raise ValueError("head must start with a positive p_0")
    if any(h < 0 for h in head):
        raise ValueError("weights must be nonnegative")
    s = sum(head)
    if s >= 1.0:
        raise ValueError("head mass must leave room for the tail")
    k0 = len(head)
    tail_sum = sc.zeta(beta, k0)  # sum_{k >= k0} k^-beta
    a2 = (1.0 - s) / tail_sum
    return WeightSeq("custom", float(beta), float(a2), head[0], head)


def weight(seq: WeightSeq, k: int) -> float:
    """Exact p_k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if seq.head is not None and k < len(seq.head):
        return seq.head[k]
    if seq.head is None and k == 0:
        return seq.p0
    return seq.alpha2 * float(k) ** (-seq.beta)


def log_weights(seq: WeightSeq, kmax: int) -> np.ndarray:
    """log p_k for k = 0..kmax (kernel input)."""
    k = np.arange(kmax + 1, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.log(seq.alpha2) - seq.beta * np.log(np.maximum(k, 1.0))
    h = seq.head_len
    head_vals = seq.head if seq.head is not None else (seq.p0,)
    for i in range(min(h, kmax + 1)):
        out[i] = np.log(head_vals[i]) if head_vals[i] > 0 else -np.inf
    return out


def hop_rate(seq: WeightSeq, k: int) -> float:
    """u_k = p_{k-1}/p_k, the per-particle exit rate factor at occupancy k.

    u_0 = 0 by convention (an empty site emits nothing) and is rejected here.
    """
    if k < 1:
        raise ValueError("hop rate defined for k >= 1 (u_0 = 0: empty site)")
    if seq.family == "zeta" and seq.head is None:
        if k == 1:
            return 1.0
        if k > seq.head_len:
            return (k / (k - 1.0)) ** seq.beta
    return weight(seq, k - 1) / weight(seq, k)


@dataclass(frozen=True)
class GenFnEval:
    value: float
    derivative: float
    truncation_k: int
    tail_bound: float


def _head_correction(seq: WeightSeq, u: np.ndarray, order: int) -> np.ndarray:
    """sum over head k of (p_k - alpha2 k^-beta) k^order z^(k-order), z = 1-u.

    Adjusts the pure polylog tail to the actual head weights.  order = 0 for
    the value, 1 for the first derivative, 2 for the factorial second moment.
    """
    corr = np.zeros_like(u)
    head_vals = seq.head if seq.head is not None else (seq.p0,)
    for k, pk in enumerate(head_vals):
        tail_pk = seq.alpha2 * float(k) ** (-seq.beta) if k >= 1 else 0.0
        diff = pk - tail_pk
        if diff == 0.0:
            continue
        if order == 0:
            fac = 1.0
        elif order == 1:
            fac = float(k)
        else:
            fac = float(k * (k - 1))
        if fac == 0.0:
            continue
        corr += diff * fac * np.exp((k - order) * np.log1p(-u))
    return corr


def phi_from_top(seq: WeightSeq, u) -> np.ndarray:
    """F(1-u) for u in (0, 1], vectorized and stable next to u = 0."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    li, _, _ = polylog_u(seq.beta, u)
    return seq.alpha2 * li + _head_correction(seq, u, 0)


def phi_deriv_from_top(seq: WeightSeq, u) -> np.ndarray:
    """F'(1-u) for u in (0, 1]."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    li, _, _ = polylog_u(seq.beta - 1.0, u)
    z = 1.0 - u
    out = np.where(z > 0, seq.alpha2 * li / np.where(z > 0, z, 1.0), 0.0)
    # z = 0: derivative is p_1
    out = np.where(z == 0.0, weight(seq, 1), out)
    return out + _head_correction(seq, u, 1)


def phi_fact2_from_top(seq: WeightSeq, u) -> np.ndarray:
    """F''(1-u) = sum k(k-1) p_k z^(k-2)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    li1, _, _ = polylog_u(seq.beta - 1.0, u)
    li2, _, _ = polylog_u(seq.beta - 2.0, u)
    z = 1.0 - u
    zz = np.where(z > 0, z, 1.0)
    out = np.where(z > 0, seq.alpha2 * (li2 - li1) / zz**2, 0.0)
    out = np.where(z == 0.0, 2.0 * weight(seq, 2), out)
    return out + _head_correction(seq, u, 2)


def phi(seq: WeightSeq, z: float, tol: float = 1e-12) -> GenFnEval:
    """Generating function F(z) and F'(z) with a truncation bound <= tol.

    Direct summation with the geometric tail bound p_K z^K z/(1-z) when few
    enough terms suffice; otherwise the zeta-coefficient expansion around
    z = 1.  At z = 1 the value is exactly 1; the derivative is finite only
    for beta > 2 and otherwise raises DivergenceError.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError("z must lie in [0, 1]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if z == 1.0:
        if seq.beta <= 2.0:
            raise DivergenceError("F'(1) diverges for beta <= 2")
        deriv = seq.alpha2 * polylog_at_one(seq.beta - 1.0) + float(
            _head_correction(seq, np.array([0.0]), 1)[0])
        return GenFnEval(1.0, deriv, 0, 0.0)
    if z == 0.0:
        return GenFnEval(weight(seq, 0), weight(seq, 1), 1, 0.0)
    if z <= 0.75:
        val = 0.0
        der = 0.0
        k = 0
        zk = 1.0
        while True:
            pk = weight(seq, k)
            val += pk * zk
            if k >= 1:
                der += k * pk * zk / z
            # beyond the head p_j <= p_{k+1} ((k+1)/j)^beta, so both tails are
            # geometrically bounded:
            #   sum_{j>k} p_j z^j        <= p_{k+1} z^{k+1} / (1-z)
            #   sum_{j>k} j p_j z^{j-1}  <= (k+1) p_{k+1} z^k / (1-z)
            pk1 = weight(seq, k + 1)
            bound = max(pk1 * zk * z, (k + 1.0) * pk1 * zk) / (1.0 - z)
            if k >= seq.head_len and bound <= tol:
                break
            zk *= z
            k += 1
            if k > 10**8:
                raise DivergenceError("series truncation cap exceeded")
        return GenFnEval(val, der, k + 1, bound)
    u = np.array([1.0 - z])
    li_v, n1, b1 = polylog_u(seq.beta, u)
    li_d, n2, b2 = polylog_u(seq.beta - 1.0, u)
    val = float(seq.alpha2 * li_v[0] + _head_correction(seq, u, 0)[0])
    der = float(seq.alpha2 * li_d[0] / z + _head_correction(seq, u, 1)[0])
    bound = seq.alpha2 * max(b1, b2 / z) + 8e-16 * max(val, der)
    return GenFnEval(val, der, max(n1, n2), bound)


def g_from_top(seq: WeightSeq, u) -> np.ndarray:
    """Mean grand-canonical occupancy G(1-u) = (1-u) F'(1-u) / F(1-u)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    z = 1.0 - u
    return z * phi_deriv_from_top(seq, u) / phi_from_top(seq, u)


def g_of_x(seq: WeightSeq, x) -> np.ndarray | float:
    """Mean occupancy at fitness x; diverges at x = 1 when beta <= 2."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((x_arr < 0) | (x_arr > 1)):
        raise ValueError("x must lie in [0, 1]")
    if np.any(x_arr == 1.0) and seq.beta <= 2.0:
        raise DivergenceError("G(1) diverges for beta <= 2")
    out = np.zeros_like(x_arr)
    pos = x_arr > 0
    at_one = x_arr == 1.0
    inner = pos & ~at_one
    if inner.any():
        out[inner] = g_from_top(seq, 1.0 - x_arr[inner])
    if at_one.any():
        out[at_one] = seq.alpha2 * polylog_at_one(seq.beta - 1.0) + float(
            _head_correction(seq, np.array([0.0]), 1)[0])
    return out if np.ndim(x) else float(out[0])


def var_q_from_top(seq: WeightSeq, u) -> np.ndarray:
    """Var of the grand-canonical occupancy at fitness 1-u."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    z = 1.0 - u
    f = phi_from_top(seq, u)
    g = z * phi_deriv_from_top(seq, u) / f
    fact2 = z**2 * phi_fact2_from_top(seq, u) / f
    return fact2 + g - g * g


def critical_density(seq: WeightSeq, law: FitnessLaw, tol: float = 1e-8) -> float:
    """Critical particle density: the disorder average of G.

    Finite iff beta + gamma > 2; outside that regime the endpoint integrand
    fails to decay and a DivergenceError is raised.
    """
    if seq.beta + law.gamma <= 2.0:
        raise DivergenceError(
            f"critical density diverges: beta+gamma = {seq.beta + law.gamma:.3f} <= 2 "
            "(endpoint integrand is not integrable)")
    val, _err = expect_from_top(law, lambda u: g_from_top(seq, u), tol=tol)
    return val  # atom at x=0 contributes G(0) = 0


def gc_occupancy_variance(seq: WeightSeq, law: FitnessLaw, tol: float = 1e-8) -> float:
    """Disorder average of Var Q: the limit variance of the occupancy CLT.

    Var(Q|x) grows like (1-x)^(beta-3) for beta < 3 (log for beta = 3), so the
    disorder average is finite iff beta >= 3 or beta + gamma > 3.
    """
    if seq.beta < 3.0 and seq.beta + law.gamma <= 3.0:
        raise DivergenceError("occupancy variance diverges: beta < 3 and beta+gamma <= 3")
    val, _err = expect_from_top(law, lambda u: var_q_from_top(seq, u), tol=tol)
    return val
