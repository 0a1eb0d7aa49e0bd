"""Site-fitness disorder: i.i.d. laws on [0,1] with a power upper tail.

Two families are implemented.  ``power_tail`` has the tail mass alpha1 * x^g
exactly (closed-form quantile, so limit-law constants are known exactly);
``beta_law`` is a Beta(a, g) distribution whose tail constant is induced,
alpha1 = 1/(g * B(a, g)).  Both satisfy mass([1-x, 1]) ~ alpha1 * x^g as x -> 0.

For power_tail with alpha1 < 1 the deficit 1 - alpha1 sits as an atom at 0;
with alpha1 > 1 the support shrinks to [1 - alpha1^(-1/g), 1].  This keeps the
upper tail exactly alpha1 * x^g, which is the only regime the condensation
limit theorems see.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special as sc

from .rng import generator_from
from .special import panel_quad_near_one


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested accuracy."""

    def __init__(self, msg, achieved=None):
        super().__init__(msg)
        self.achieved = achieved


@dataclass(frozen=True)
class FitnessLaw:
    family: str            # "power" or "beta"
    gamma: float           # upper-tail index, > 0
    alpha1: float          # tail constant
    beta_a: float | None = None   # first Beta shape (beta family only)

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("tail index gamma must be positive")
        if self.family not in ("power", "beta"):
            raise ValueError(f"unknown disorder family {self.family!r}")
        if self.family == "beta" and (self.beta_a is None or self.beta_a <= 0):
            raise ValueError("beta family needs a positive first shape")
        if self.alpha1 <= 0:
            raise ValueError("tail constant alpha1 must be positive")

    @property
    def atom_at_zero(self) -> float:
        """Point mass at fitness 0 (power family with alpha1 < 1)."""
        if self.family == "power" and self.alpha1 < 1.0:
            return 1.0 - self.alpha1
        return 0.0

    @property
    def top_support(self) -> float:
        """Largest u = 1 - x carrying continuous mass."""
        if self.family == "power":
            return min(1.0, self.alpha1 ** (-1.0 / self.gamma))
        return 1.0


def power_tail(gamma: float, alpha1: float = 1.0) -> FitnessLaw:
    return FitnessLaw("power", float(gamma), float(alpha1))


def beta_law(a: float, gamma: float) -> FitnessLaw:
    alpha1 = 1.0 / (gamma * sc.beta(a, gamma))
    return FitnessLaw("beta", float(gamma), float(alpha1), beta_a=float(a))


@dataclass(frozen=True)
class DisorderSample:
    law: FitnessLaw
    fitnesses: np.ndarray          # X_1..X_n in [0,1]
    sorted_desc: np.ndarray        # permutation: fitnesses[sorted_desc] non-increasing
    seed_entropy: tuple            # SeedSequence entropy used for the draw

    @property
    def n(self) -> int:
        return len(self.fitnesses)

    def order_statistic(self, k: int) -> float:
        """k-th largest fitness, 1-indexed."""
        return float(self.fitnesses[self.sorted_desc[k - 1]])


def tail_mass(law: FitnessLaw, x) -> np.ndarray | float:
    """mass([1-x, 1]) for x in [0,1]."""
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr < 0) | (x_arr > 1)):
        raise ValueError("x must lie in [0, 1]")
    if law.family == "power":
        out = np.minimum(1.0, law.alpha1 * x_arr**law.gamma)
    else:
        out = sc.betainc(law.gamma, law.beta_a, x_arr)
    return out if out.ndim else float(out)


def quantile(law: FitnessLaw, u) -> np.ndarray | float:
    """Upper-tail quantile: largest x with P(X >= x) >= u; P(X >= quantile(u)) = u
    wherever u is attainable.  Non-increasing, quantile(0) = essential supremum."""
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0) | (u_arr > 1)):
        raise ValueError("u must lie in [0, 1]")
    if law.family == "power":
        inner = np.minimum(1.0, (u_arr / law.alpha1) ** (1.0 / law.gamma))
        out = np.where(u_arr > min(1.0, law.alpha1), 0.0, 1.0 - inner)
    else:
        out = 1.0 - sc.betaincinv(law.gamma, law.beta_a, u_arr)
    return out if out.ndim else float(out)


def sample_disorder(law: FitnessLaw, n: int, seed) -> DisorderSample:
    """n i.i.d. fitness draws by inverse CDF, reproducible from the seed."""
    if n < 1:
        raise ValueError("need n >= 1 sites")
    gen = generator_from(seed)
    entropy = gen.bit_generator.seed_seq.entropy if hasattr(gen.bit_generator, "seed_seq") else None
    u = 1.0 - gen.random(n)          # in (0, 1]: never hits the essential supremum
    fit = np.asarray(quantile(law, u), dtype=float).reshape(n)
    order = np.argsort(-fit, kind="stable")
    ent = entropy if isinstance(entropy, tuple) else (entropy,)
    return DisorderSample(law, fit, order, ent)


def density_from_top(law: FitnessLaw, u: np.ndarray) -> np.ndarray:
    """Continuous density of U = 1 - X with the u^(gamma-1) factor removed.

    Full density of U is density_from_top(u) * u^(gamma-1); the split keeps
    the endpoint singularity explicit for the panel quadrature.
    """
    if law.family == "power":
        out = np.where(u <= law.top_support, law.alpha1 * law.gamma, 0.0)
        return out
    return (1.0 - u) ** (law.beta_a - 1.0) / sc.beta(law.beta_a, law.gamma)


def expect_from_top(law: FitnessLaw, f_u, *, tol: float = 1e-10) -> tuple[float, float]:
    """E f(X) for the continuous part, with f parameterized by u = 1 - X.

    f_u must be vectorized and finite on (0, top_support); growth of an
    integrable order at u -> 0 is fine.  Returns (value, error_estimate).
    The atom at 0, if any, is NOT included (f(0) may not be defined); callers
    add law.atom_at_zero * f(x=0) when it matters.
    """
    upper = law.top_support
    g = law.gamma
    if law.family == "beta" and law.beta_a < 1.0:
        # extra integrable singularity at u = 1 (x = 0): split and mirror
        a = law.beta_a
        bfac = 1.0 / sc.beta(a, g)
        left, e1 = panel_quad_near_one(
            lambda u: f_u(u) * (1.0 - u) ** (a - 1.0) * bfac, g - 1.0,
            upper=0.5, tol=tol / 2)
        right, e2 = panel_quad_near_one(
            lambda v: f_u(1.0 - v) * (1.0 - v) ** (g - 1.0) * bfac, a - 1.0,
            upper=0.5, tol=tol / 2)
        return left + right, e1 + e2
    val, err = panel_quad_near_one(
        lambda u: f_u(u) * density_from_top(law, u), g - 1.0,
        upper=upper, tol=tol)
    return val, err


def moment_xr(law: FitnessLaw, r: float, psi=None, *, rel_tol: float = 1e-8) -> float:
    """E[X^r / psi(X)] by adaptive panel quadrature.

    psi: positive continuous weight with psi(1) = 1 (default: constant 1).
    Raises QuadratureError when the error estimate exceeds rel_tol * value.
    """
    if r <= 0:
        raise ValueError("moment order r must be positive")
    if psi is None:
        f_u = lambda u: np.exp(r * np.log1p(-u))
    else:
        f_u = lambda u: np.exp(r * np.log1p(-u)) / psi(1.0 - u)
    # atom at x=0 contributes 0^r = 0
    val, err = expect_from_top(law, f_u, tol=min(1e-12, rel_tol))
    if val > 0 and err > rel_tol * val:
        raise QuadratureError(
            f"moment quadrature reached {err:.3e} absolute, above {rel_tol:.1e} relative",
            achieved=err)
    return val


def extremal_gaps(sample: DisorderSample) -> tuple[float, float]:
    """(1 - X^(1), 1 - X^(2)/X^(1)): the two top-order-statistic gap diagnostics."""
    if sample.n < 2:
        raise ValueError("need at least two sites for extremal gaps")
    x1 = sample.order_statistic(1)
    x2 = sample.order_statistic(2)
    ratio_gap = 0.0 if x1 == 0.0 else 1.0 - x2 / x1
    return 1.0 - x1, ratio_gap
