"""Classical side of the model: Lagrangian parameters, canonical momentum,
velocity branches and the two Hamiltonian branches.

The k=1 family admits closed forms: with mu = 4**(-2/3) - delta > 0 and
gamma = mu**(3/2),

    p(v)   = mu*(v-1)**(-2/3) - lam
    v+-(p) = 1 -+ gamma*(p+lam)**(-3/2)
    H+-(p) = (p+lam) +- 2*gamma/sqrt(p+lam)        (potential part dropped)

For general k only the parametric-in-v forms are available; the momentum
relation is not invertible in closed form and is exposed for curve tracing
and diagnostics only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DomainError

#: 4**(-2/3), the delta -> 0 value of the kinetic rescaling mu.
MU_BARE = 4.0 ** (-2.0 / 3.0)


class BranchSign(Enum):
    """Selector for the upper (PLUS) or lower (MINUS) Hamiltonian branch."""

    PLUS = 1
    MINUS = -1

    @property
    def factor(self) -> float:
        return float(self.value)


def signed_cbrt(x: float) -> float:
    """Real cube root, negative for x < 0."""
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the k=1 Lagrangian family.

    Constructed either from (lam, delta), which derives mu and gamma, or
    directly from gamma (``from_gamma``), in which case delta is recorded
    as absent and mu only when gamma > 0.
    """

    k: int
    lam: float
    delta: Optional[float]
    mu: Optional[float]
    gamma: float

    @classmethod
    def from_lambda_delta(cls, lam: float, delta: float, k: int = 1) -> "ModelParams":
        if k < 1:
            raise DomainError(f"k must be a positive integer, got {k}")
        if lam < 0:
            raise DomainError(f"lambda must be >= 0, got {lam}")
        if delta >= MU_BARE:
            raise DomainError(
                f"delta must be < 4**(-2/3) = {MU_BARE:.12g}, got {delta} "
                "(equality collapses both branches)"
            )
        mu = MU_BARE - delta
        return cls(k=k, lam=float(lam), delta=float(delta), mu=mu, gamma=mu ** 1.5)

    @classmethod
    def from_gamma(cls, gamma: float, lam: float = 0.0, k: int = 1) -> "ModelParams":
        if k < 1:
            raise DomainError(f"k must be a positive integer, got {k}")
        if lam < 0:
            raise DomainError(f"lambda must be >= 0, got {lam}")
        mu = gamma ** (2.0 / 3.0) if gamma > 0 else None
        return cls(k=k, lam=float(lam), delta=None, mu=mu, gamma=float(gamma))

    def require_positive_gamma(self) -> None:
        if self.gamma <= 0:
            raise DomainError(
                f"classical branch operations require gamma > 0, got {self.gamma}"
            )


def kinetic_constant(k: int) -> float:
    """Coefficient C = ((2k+1)/(2k-1)) * (1/4)**(2/(2k+1)) of the kinetic term."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k} (2k-1 degenerates at k=0)")
    return (2 * k + 1) / (2 * k - 1) * 0.25 ** (2.0 / (2 * k + 1))


def general_branch_hamiltonian(p: float, k: int, sign: BranchSign) -> float:
    """Momentum part of the branch pair, p +- (1/(4k-2)) * p**(-(2k-1)/2)."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if p <= 0:
        raise DomainError(f"general branch Hamiltonian requires p > 0, got {p}")
    return p + sign.factor / (4 * k - 2) * p ** (-(2 * k - 1) / 2.0)


def f_of_v(v: float, params: ModelParams) -> float:
    """Velocity-dependent potential piece f(v) = lam*v + 3*delta*(v-1)**(1/3).

    Uses the real signed cube root, so f is defined for all real v.
    """
    if params.delta is None:
        raise DomainError(
            "f_of_v needs a delta; these params were built directly from gamma"
        )
    return params.lam * v + 3.0 * params.delta * signed_cbrt(v - 1.0)


def fprime_of_v(v: float, params: ModelParams) -> float:
    """Derivative f'(v) = lam + delta*(v-1)**(-2/3)."""
    if params.delta is None:
        raise DomainError(
            "fprime_of_v needs a delta; these params were built directly from gamma"
        )
    if v == 1.0:
        raise DomainError("f'(v) diverges at v = 1")
    return params.lam + params.delta * abs(v - 1.0) ** (-2.0 / 3.0)


def canonical_momentum_k1(v: float, params: ModelParams) -> float:
    """Closed-form momentum p = mu*(v-1)**(-2/3) - lam of the k=1 family.

    (v-1)**(-2/3) is even in (v-1), so both velocity branches map to the
    same momentum.
    """
    if v == 1.0:
        raise DomainError("canonical momentum diverges at v = 1")
    if params.mu is None:
        raise DomainError("params carry no mu (gamma <= 0 direct construction)")
    return params.mu * abs(v - 1.0) ** (-2.0 / 3.0) - params.lam


def velocity_deviations(p: float, params: ModelParams) -> tuple[float, float]:
    """Deviations w = v - 1 of both velocity roots: (-corr, +corr) with
    corr = gamma*(p+lam)**(-3/2).

    At large p the roots hug v = 1 within a few ulps, so the deviation is the
    numerically faithful representation; `velocity_branches` derives v = 1 + w
    from it (and loses the sub-ulp information by construction).
    """
    params.require_positive_gamma()
    x = p + params.lam
    if x <= 0:
        raise DomainError(
            f"p + lambda must be > 0; the branch curves have a cusp boundary at "
            f"p = {-params.lam} (got p = {p})"
        )
    corr = params.gamma * x ** -1.5
    return -corr, corr


def momentum_from_deviation(w: float, params: ModelParams) -> float:
    """Closed-form momentum p = mu*|w|**(-2/3) - lam in the deviation
    variable w = v - 1 (same relation as canonical_momentum_k1)."""
    if w == 0.0:
        raise DomainError("canonical momentum diverges at v = 1 (w = 0)")
    if params.mu is None:
        raise DomainError("params carry no mu (gamma <= 0 direct construction)")
    return params.mu * abs(w) ** (-2.0 / 3.0) - params.lam


def velocity_branches(p: float, params: ModelParams) -> tuple[float, float]:
    """Both velocity roots (v_plus, v_minus) = 1 -+ gamma*(p+lam)**(-3/2)."""
    w_plus, w_minus = velocity_deviations(p, params)
    return 1.0 + w_plus, 1.0 + w_minus


def branch_hamiltonian_k1(p: float, sign: BranchSign, params: ModelParams) -> float:
    """Branch Hamiltonian (minus the coordinate potential),
    (p+lam) +- 2*gamma/sqrt(p+lam)."""
    params.require_positive_gamma()
    x = p + params.lam
    if x <= 0:
        raise DomainError(
            f"p + lambda must be > 0; domain boundary (cusp) at p = {-params.lam} "
            f"(got p = {p})"
        )
    return x + sign.factor * 2.0 * params.gamma / math.sqrt(x)


def general_momentum_parametric(v: float, k: int, fprime_at_v: float) -> float:
    """Momentum p(v) = (1/4)**(2/(2k+1)) * (v-1)**(-2/(2k+1)) - f'(v).

    Parametric evaluator only; the relation is not inverted.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if v == 1.0:
        raise DomainError("momentum diverges at v = 1")
    expo = 2.0 / (2 * k + 1)
    return 0.25 ** expo * abs(v - 1.0) ** (-expo) - fprime_at_v


def general_mixed_hamiltonian(
    v: float,
    p: float,
    k: int,
    fprime_at_v: float,
    U_at_xv: float,
    sign: BranchSign,
) -> float:
    """Mixed-form branch Hamiltonian in (v, p) variables. Diagnostic only:
    the value is meaningful on-shell, where p and v satisfy the momentum
    relation, and is evaluated literally otherwise.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    s = p + fprime_at_v
    if s <= 0:
        raise DomainError(f"p + f'(v) must be > 0, got {s}")
    bracket = (2 * k + 1) / (2 * k - 1) - p / s
    return p + sign.factor * 0.25 * s ** (-(2 * k - 1) / 2.0) * bracket + U_at_xv


@dataclass(frozen=True)
class BranchCurve:
    """Sampled (p, H) points of a single branch, for plot/CSV emission."""

    points: tuple[tuple[float, float], ...]
    branch: BranchSign
    params: ModelParams


def sample_branch_curve(
    p_min: float,
    p_max: float,
    n: int,
    sign: BranchSign,
    params: ModelParams,
) -> BranchCurve:
    """Uniformly sample one branch Hamiltonian on [p_min, p_max]."""
    if n < 2:
        raise DomainError(f"need at least 2 samples, got {n}")
    if not (p_min < p_max):
        raise DomainError(f"empty or reversed range [{p_min}, {p_max}]")
    if p_min <= -params.lam:
        raise DomainError(
            f"p_min must exceed the cusp boundary p = {-params.lam}, got {p_min}"
        )
    step = (p_max - p_min) / (n - 1)
    pts = []
    for i in range(n):
        p = p_min + i * step if i < n - 1 else p_max
        pts.append((p, branch_hamiltonian_k1(p, sign, params)))
    return BranchCurve(points=tuple(pts), branch=sign, params=params)
