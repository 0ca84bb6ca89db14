"""Large-gamma analysis of the pseudo-potential W(p) = p + 2*gamma/sqrt(p).

W has a unique interior minimum at p0 = gamma**(2/3) with W(p0) = 3*gamma**(2/3).
Expanding around p0 and rescaling p = rho*q with rho = (4/3)**(1/4)*gamma**(1/6)
turns the half-line eigenproblem into a weakly perturbed unit harmonic
oscillator plus the additive constant gamma*sqrt(12).  The resulting level
prediction, obtained from E_n * rho**2 = gamma*sqrt(12) + (2n+1), is

    E_n = 3*gamma**(2/3) + (sqrt(3)/2) * (2n+1) * gamma**(-1/3).

This closed form is the oracle the spectral solver is checked against; the
cubic Taylor remainder supplies a heuristic reliability scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


def _require_positive(gamma: float) -> None:
    if gamma <= 0:
        raise DomainError(
            f"gamma must be > 0 for the oscillator-limit analysis "
            f"(repulsive barrier), got {gamma}"
        )


def minimum_of_W(gamma: float) -> tuple[float, float]:
    """Location and value of the unique minimum of W: (gamma**(2/3), 3*gamma**(2/3))."""
    _require_positive(gamma)
    p0 = gamma ** (2.0 / 3.0)
    return p0, 3.0 * p0


def taylor_coefficients(gamma: float) -> tuple[float, float]:
    """Second and third derivatives of W at its minimum:
    W''(p0) = (3/2)*gamma**(-2/3), W'''(p0) = -(15/4)*gamma**(-4/3)."""
    _require_positive(gamma)
    return 1.5 * gamma ** (-2.0 / 3.0), -3.75 * gamma ** (-4.0 / 3.0)


def rescaling(gamma: float) -> tuple[float, float, float]:
    """Oscillator rescaling: (rho, q0, constant_term).

    rho = (4/3)**(1/4) * gamma**(1/6) makes the quadratic term exactly
    (q - q0)**2; q0 = p0/rho; the additive constant is gamma*sqrt(12) and
    satisfies constant/rho**2 = W(p0).
    """
    _require_positive(gamma)
    rho = (4.0 / 3.0) ** 0.25 * gamma ** (1.0 / 6.0)
    p0 = gamma ** (2.0 / 3.0)
    return rho, p0 / rho, math.sqrt(12.0) * gamma


def predicted_levels(gamma: float, count: int = 1) -> list[float]:
    """First `count` oscillator-limit energies, ascending."""
    _require_positive(gamma)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    base = 3.0 * gamma ** (2.0 / 3.0)
    spacing_half = 0.5 * math.sqrt(3.0) * gamma ** (-1.0 / 3.0)
    return [base + spacing_half * (2 * n + 1) for n in range(count)]


def level_spacing(gamma: float) -> float:
    """Constant level spacing sqrt(3)*gamma**(-1/3) of the oscillator limit."""
    _require_positive(gamma)
    return math.sqrt(3.0) * gamma ** (-1.0 / 3.0)


def anharmonic_error_bound(gamma: float) -> float:
    """Heuristic scale of the neglected cubic term, (|W'''|/6 * gamma**(4/3))
    * gamma**(-4/3) * rho**3 = 0.625 * gamma**(-4/3) * rho**3.

    An estimate used to gate reliability warnings, not a rigorous bound.
    """
    _require_positive(gamma)
    rho = (4.0 / 3.0) ** 0.25 * gamma ** (1.0 / 6.0)
    return 0.625 * gamma ** (-4.0 / 3.0) * rho ** 3


def reliability_warning(gamma: float) -> str | None:
    """Warning text when the anharmonic estimate exceeds 10% of the spacing."""
    est = anharmonic_error_bound(gamma)
    if est > 0.1 * level_spacing(gamma):
        return (
            f"oscillator-limit prediction unreliable at gamma={gamma:g}: "
            f"anharmonic estimate {est:.3g} exceeds 10% of the level spacing "
            f"{level_spacing(gamma):.3g}"
        )
    return None


@dataclass(frozen=True)
class PerturbativePrediction:
    """Everything the large-gamma analysis produces for one coupling."""

    gamma: float
    p0: float
    W0: float
    W2: float
    W3: float
    rho: float
    q0: float
    constant_term: float
    levels: tuple[float, ...]


def predict(gamma: float, count: int = 1) -> PerturbativePrediction:
    p0, W0 = minimum_of_W(gamma)
    W2, W3 = taylor_coefficients(gamma)
    rho, q0, const = rescaling(gamma)
    return PerturbativePrediction(
        gamma=gamma,
        p0=p0,
        W0=W0,
        W2=W2,
        W3=W3,
        rho=rho,
        q0=q0,
        constant_term=const,
        levels=tuple(predicted_levels(gamma, count)),
    )
