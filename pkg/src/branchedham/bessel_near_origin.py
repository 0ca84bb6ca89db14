"""Near-origin solutions of the leading-order equation
-sqrt(p) * psi''(p) + 2*gamma*psi(p) = 0.

With z = (4*sqrt(2)/3) * sqrt(|gamma|) * p**(3/4) the two-parameter solution
families are

    gamma > 0:  psi = C1*sqrt(p)*I_{2/3}(z) + C2*sqrt(p)*K_{2/3}(z)
    gamma < 0:  psi = D1*sqrt(p)*J_{2/3}(z) + D2*sqrt(p)*Y_{2/3}(z)

The regular element vanishes like p and the singular one tends to a nonzero
constant, so the Dirichlet condition psi(0+) = 0 kills C2 (resp. D2).

The Bessel functions of order +-2/3 are evaluated by their ascending power
series; K and Y are assembled through the standard connection formulas,
which is safe because the order is non-integer.  This module is local to
the small-argument regime (z <= 30) where the leading-order equation is
deployed; no large-argument asymptotics are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

# Gamma-function values at the orders needed, 20 significant digits
# (Abramowitz & Stegun / DLMF 5.4).  Hardcoded so no general Gamma
# implementation is shipped.
GAMMA_1_3 = 2.6789385347077477889
GAMMA_2_3 = 1.3541179394264004830
GAMMA_4_3 = 0.89297951156924921994
GAMMA_5_3 = 0.90274529295093362344

_ORDER = 2.0 / 3.0
_MAX_TERMS = 60
_Z_MAX = 30.0

#: coefficient of p**(3/4) in the Bessel argument
Z_PREFACTOR = 4.0 * math.sqrt(2.0) / 3.0


def bessel_argument(gamma: float, p: float) -> float:
    """z = (4*sqrt(2)/3) * sqrt(|gamma|) * p**(3/4)."""
    if p < 0:
        raise DomainError(f"p must be >= 0, got {p}")
    return Z_PREFACTOR * math.sqrt(abs(gamma)) * p ** 0.75


def _ascending_series(nu: float, z: float, signed: bool):
    """sum_m (+-1)^m (z/2)^(2m+nu) / (m! * Gamma(m+nu+1)).

    signed=False gives I_nu, signed=True gives J_nu.  Terms are summed until
    below 1e-19 of the partial sum (cap _MAX_TERMS).  Extended precision is
    used so that the I_{-nu} - I_nu cancellation in the K connection formula
    stays below 1e-12 absolute up to z = 10.
    """
    half = np.longdouble(0.5) * np.longdouble(z)
    if z == 0.0:
        return np.longdouble(0.0)
    # Gamma(nu + 1) for nu = +-2/3 only
    gam = np.longdouble(GAMMA_5_3 if nu > 0 else GAMMA_1_3)
    nu_l = np.longdouble(nu)
    term = half ** nu_l / gam
    total = term
    m = 0
    while m < _MAX_TERMS:
        m += 1
        factor = half * half / (m * (m + nu_l))
        term = term * (-factor if signed else factor)
        total = total + term
        if abs(term) < 1e-19 * abs(total):
            return total
    return total


def bessel_frac(kind: str, order: float, z: float) -> float:
    """Bessel functions I, K, J, Y of order +-2/3 for 0 <= z <= 30.

    K and Y come from the connection formulas
        K_nu = pi*(I_{-nu} - I_nu)/(2*sin(nu*pi)),
        Y_nu = (J_nu*cos(nu*pi) - J_{-nu})/sin(nu*pi).
    """
    if z < 0:
        raise DomainError(f"z must be >= 0, got {z}")
    if z > _Z_MAX:
        raise DomainError(
            f"z = {z:g} outside the small-argument regime (z <= {_Z_MAX:g})"
        )
    if abs(abs(order) - _ORDER) > 1e-15:
        raise DomainError(f"only orders +-2/3 are supported, got {order}")
    if kind in ("I", "J"):
        if order < 0 and z == 0.0:
            raise DomainError("negative-order series diverges at z = 0")
        return float(_ascending_series(order, z, signed=(kind == "J")))
    if kind in ("K", "Y"):
        nu = abs(order)
        if z == 0.0:
            raise DomainError(f"{kind}_nu diverges at z = 0")
        s = math.sin(nu * math.pi)
        if kind == "K":
            diff = _ascending_series(-nu, z, False) - _ascending_series(nu, z, False)
            return float(np.longdouble(math.pi) * diff / (2.0 * s))
        comb = (
            _ascending_series(nu, z, True) * np.longdouble(math.cos(nu * math.pi))
            - _ascending_series(-nu, z, True)
        )
        return float(comb / np.longdouble(s))
    raise DomainError(f"unknown Bessel kind {kind!r}; expected I, K, J or Y")


@dataclass(frozen=True)
class SmallPSolution:
    """Coefficients of one member of the near-origin solution family."""

    gamma: float
    coeff_regular: float   # C1 (gamma > 0) or D1 (gamma < 0)
    coeff_singular: float  # C2 or D2

    def __post_init__(self) -> None:
        if self.gamma == 0:
            raise DomainError("gamma must be nonzero")

    @property
    def family(self) -> str:
        return "modified-IK" if self.gamma > 0 else "ordinary-JY"


def small_p_solution(p: float, sol: SmallPSolution) -> float:
    """psi(p) for the stated coefficient combination, p > 0 small."""
    if p <= 0:
        raise DomainError(f"p must be > 0, got {p}")
    z = bessel_argument(sol.gamma, p)
    sq = math.sqrt(p)
    if sol.gamma > 0:
        reg, sing = "I", "K"
    else:
        reg, sing = "J", "Y"
    val = 0.0
    if sol.coeff_regular != 0.0:
        val += sol.coeff_regular * sq * bessel_frac(reg, _ORDER, z)
    if sol.coeff_singular != 0.0:
        val += sol.coeff_singular * sq * bessel_frac(sing, _ORDER, z)
    return val


def verify_leading_order_ode(p: float, sol: SmallPSolution) -> float:
    """Residual -sqrt(p)*psi'' + 2*gamma*psi with psi'' by 5-point central
    differences (step 0.01*p keeps both truncation and roundoff far below
    the 1e-8 scale tolerance on (0, 0.5])."""
    if not (0.0 < p <= 0.5):
        raise DomainError(f"p must lie in (0, 0.5], got {p}")
    if sol.coeff_regular == 0.0 and sol.coeff_singular == 0.0:
        return 0.0
    d = 0.01 * p
    f = [small_p_solution(p + k * d, sol) for k in (-2, -1, 0, 1, 2)]
    second = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * d * d)
    return -math.sqrt(p) * second + 2.0 * sol.gamma * f[2]


def _loglog_slope(ps: Sequence[float], vals: Sequence[float]) -> float:
    """Least-squares slope of log|psi| against log p."""
    xs = [math.log(p) for p in ps]
    ys = [math.log(abs(v)) for v in vals]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


@dataclass(frozen=True)
class SelectionReport:
    """Outcome of applying the Dirichlet condition to the solution family."""

    gamma: float
    vanishing_coefficient: str  # "C2" or "D2"
    family: str
    regular_slope: float
    singular_slope: float
    samples: tuple[tuple[float, float, float], ...]  # (p, psi_regular, psi_singular)


_PROBE_PS = (1e-4, 1e-6, 1e-8)


def dirichlet_selection(gamma: float) -> SelectionReport:
    """Which coefficient the condition psi(0+) = 0 forces to vanish.

    The regular basis element behaves like p and survives; the singular one
    tends to a nonzero constant and must be dropped: C2 = 0 for gamma > 0,
    D2 = 0 for gamma < 0.  The report carries the sampled limit behaviour
    and log-log slope fits demonstrating the exponents {1, 0}.
    """
    if gamma == 0:
        raise DomainError("gamma must be nonzero")
    regular = SmallPSolution(gamma=gamma, coeff_regular=1.0, coeff_singular=0.0)
    singular = SmallPSolution(gamma=gamma, coeff_regular=0.0, coeff_singular=1.0)
    samples = tuple(
        (p, small_p_solution(p, regular), small_p_solution(p, singular))
        for p in _PROBE_PS
    )
    fit_ps = [10.0 ** exp for exp in (-8, -7, -6, -5, -4)]
    reg_slope = _loglog_slope(fit_ps, [small_p_solution(p, regular) for p in fit_ps])
    sing_slope = _loglog_slope(fit_ps, [small_p_solution(p, singular) for p in fit_ps])
    return SelectionReport(
        gamma=gamma,
        vanishing_coefficient="C2" if gamma > 0 else "D2",
        family=regular.family,
        regular_slope=reg_slope,
        singular_slope=sing_slope,
        samples=samples,
    )


def full_equation_proportionality(
    gamma: float,
    energy: float = 0.01,
    p_window: tuple[float, float] = (1e-3, 1e-2),
    step: float = 1e-5,
) -> float:
    """Max relative deviation from proportionality between a Numerov solution
    of the full equation -psi'' + (p + 2*gamma/sqrt(p))psi = E psi, started
    from the regular origin series, and the singular-coefficient-free Bessel
    combination, over `p_window`.

    Small values confirm that the leading-order family really is the
    near-origin limit of the full problem.
    """
    from .spectral import _origin_series  # shared origin-series machinery

    if gamma == 0:
        raise DomainError("gamma must be nonzero")
    p_lo, p_hi = p_window
    n = int(round(p_hi / step))
    h2 = step * step
    sol = SmallPSolution(gamma=gamma, coeff_regular=1.0, coeff_singular=0.0)

    def w(p: float) -> float:
        return p + 2.0 * gamma / math.sqrt(p)

    y_prev = _origin_series(gamma, energy, step, regular=True)
    y_cur = _origin_series(gamma, energy, 2.0 * step, regular=True)
    f_prev = w(step) - energy
    f_cur = w(2.0 * step) - energy
    ratios = []
    for i in range(2, n):
        p_next = (i + 1) * step
        f_next = w(p_next) - energy
        y_next = (
            2.0 * y_cur * (1.0 + 5.0 * h2 * f_cur / 12.0)
            - y_prev * (1.0 - h2 * f_prev / 12.0)
        ) / (1.0 - h2 * f_next / 12.0)
        y_prev, y_cur = y_cur, y_next
        f_prev, f_cur = f_cur, f_next
        if p_lo <= p_next <= p_hi:
            ratios.append(y_cur / small_p_solution(p_next, sol))
    mean = sum(ratios) / len(ratios)
    return max(abs(r / mean - 1.0) for r in ratios)
