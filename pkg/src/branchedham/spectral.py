"""Half-line eigensolver for H = -d^2/dp^2 + W(p), W(p) = p + 2*gamma/sqrt(p).

Two independent routes:

* a uniform-grid 3-point discretization whose symmetric tridiagonal matrix is
  diagonalized by Sturm-sequence bisection (LAPACK stebz via scipy), with
  Richardson extrapolation over spacings h and h/2;
* Numerov shooting from both ends with the match residual evaluated in the
  Numerov-transformed variable, so its root is the discrete 4th-order
  eigenvalue.

The singular endpoint p = 0 is never evaluated: grid nodes start at p = h,
and the shooting integrations start from power-series solutions of the full
equation around the origin (regular basis ~ p, singular basis ~ 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .oscillator_limit import minimum_of_W, rescaling


@dataclass(frozen=True)
class PseudoPotential:
    """W(p) = (p + lam) + 2*gamma/sqrt(p + lam) - lam, defined for p + lam > 0.

    The default lam = 0 is the convention used everywhere in the analysis;
    a positive shift reproduces the classical branch value at nonzero lam.
    """

    gamma: float
    shift_lambda: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma == 0:
            raise DomainError(
                "gamma must be nonzero (gamma = 0 is the pure linear/Airy regime, "
                "out of scope for the pseudo-potential solver)"
            )
        if self.shift_lambda < 0:
            raise DomainError(f"shift_lambda must be >= 0, got {self.shift_lambda}")


def eval_W(p, pot: PseudoPotential):
    """Pseudo-potential value(s); accepts scalars or numpy arrays, p > 0."""
    p = np.asarray(p, dtype=float)
    x = p + pot.shift_lambda
    if np.any(x <= 0):
        raise DomainError("W(p) requires p + shift_lambda > 0")
    w = x + 2.0 * pot.gamma / np.sqrt(x) - pot.shift_lambda
    return float(w) if w.ndim == 0 else w


@dataclass(frozen=True)
class BoundaryCondition:
    """Condition at the singular endpoint p = 0.

    Robin uses the outward-derivative convention psi'(0) = alpha * psi(0);
    alpha = 0 is Neumann, Dirichlet is a separate code path (not alpha -> inf).
    """

    kind: str  # "dirichlet" | "neumann" | "robin"
    alpha: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("dirichlet", "neumann", "robin"):
            raise DomainError(f"unknown boundary condition kind {self.kind!r}")
        if self.kind == "robin":
            if self.alpha is None:
                raise DomainError("robin boundary condition needs an alpha")
        elif self.alpha is not None:
            raise DomainError(f"alpha is only meaningful for robin, not {self.kind}")

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls("dirichlet")

    @classmethod
    def neumann(cls) -> "BoundaryCondition":
        return cls("neumann")

    @classmethod
    def robin(cls, alpha: float) -> "BoundaryCondition":
        return cls("robin", float(alpha))


@dataclass(frozen=True)
class Grid:
    """Uniform grid of n interior nodes p_i = i*h, i = 1..n, h = p_max/(n+1).

    Node 0 (the singular point) and node n+1 (the Dirichlet wall at p_max)
    are never part of the unknowns.
    """

    p_max: float
    n: int

    def __post_init__(self) -> None:
        if self.p_max <= 0:
            raise DomainError(f"p_max must be > 0, got {self.p_max}")
        if self.n < 16:
            raise DomainError(f"need at least 16 interior points, got {self.n}")

    @property
    def h(self) -> float:
        return self.p_max / (self.n + 1)

    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n + 1)

    def refined(self) -> "Grid":
        """Grid with spacing h/2 on the same interval."""
        return Grid(self.p_max, 2 * self.n + 1)


def default_grid(pot: PseudoPotential, points_per_width: int = 40) -> Grid:
    """Wall at p0 + 25*rho (>= 30) with at least `points_per_width` nodes per
    oscillator width rho; plain 30-wide grid for gamma < 0."""
    if pot.gamma > 0:
        p0, _ = minimum_of_W(pot.gamma)
        rho, _, _ = rescaling(pot.gamma)
        p_max = max(p0 + 25.0 * rho, 30.0)
        h_target = rho / points_per_width
    else:
        p_max = 30.0
        h_target = 1.0 / points_per_width
    n = max(16, math.ceil(p_max / h_target) - 1)
    return Grid(p_max=p_max, n=n)


# --------------------------------------------------------------------------
# matrix route
# --------------------------------------------------------------------------

def tridiagonal_from_values(
    w_values: np.ndarray, bc: BoundaryCondition, h: float
) -> tuple[np.ndarray, np.ndarray]:
    """Assemble (diagonal, off-diagonal) for -psi'' + W psi on the interior nodes.

    Ghost-node elimination at i = 1: Dirichlet keeps the ghost value 0;
    Neumann reflects psi_0 = psi_1 (midpoint convention, psi'(h/2) = 0);
    Robin folds psi_0 = psi_1 * (1 - alpha*h)/(1 + alpha*h) into d_1.
    """
    inv_h2 = 1.0 / (h * h)
    d = 2.0 * inv_h2 + np.asarray(w_values, dtype=float)
    e = np.full(len(d) - 1, -inv_h2)
    if bc.kind == "neumann":
        d[0] -= inv_h2
    elif bc.kind == "robin":
        a = bc.alpha
        d[0] -= inv_h2 * (1.0 - a * h) / (1.0 + a * h)
    return d, e


def build_operator(
    pot: PseudoPotential, bc: BoundaryCondition, grid: Grid
) -> tuple[np.ndarray, np.ndarray]:
    """Discretized Hamiltonian as a symmetric tridiagonal (d, e) pair."""
    return tridiagonal_from_values(eval_W(grid.nodes(), pot), bc, grid.h)


def eigen_lowest(
    matrix: tuple[np.ndarray, np.ndarray], count: int
) -> np.ndarray:
    """Smallest `count` eigenvalues by Sturm-sequence bisection (deterministic)."""
    d, e = matrix
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if count > len(d):
        raise DomainError(f"requested {count} eigenvalues of a {len(d)}x{len(d)} matrix")
    return eigh_tridiagonal(
        d, e, eigvals_only=True, select="i", select_range=(0, count - 1),
        lapack_driver="stebz",
    )


# --------------------------------------------------------------------------
# shooting route (Numerov)
# --------------------------------------------------------------------------

_SERIES_CAP = 400


def _origin_series(gamma: float, energy: float, p: float, regular: bool) -> float:
    """Power-series solution of psi'' = (p + 2*gamma/sqrt(p) - E) psi around 0.

    Expansion in s = sqrt(p): coefficients obey
        c_m * (m/2)(m/2 - 1) = 2*gamma*c_{m-3} - E*c_{m-4} + c_{m-6}.
    The regular basis starts c_2 = 1 (psi ~ p, psi(0) = 0, psi'(0) = 1);
    the singular basis starts c_0 = 1 (psi(0) = 1, psi'(0) = 0).
    """
    s = math.sqrt(p)
    c: list[float] = [0.0] * _SERIES_CAP
    c[2 if regular else 0] = 1.0
    sm_list = [1.0]
    for m in range(1, _SERIES_CAP):
        sm_list.append(sm_list[-1] * s)
        if m == 2:
            continue
        coef = (m / 2.0) * (m / 2.0 - 1.0)
        rhs = 0.0
        if m >= 3:
            rhs += 2.0 * gamma * c[m - 3]
        if m >= 4:
            rhs -= energy * c[m - 4]
        if m >= 6:
            rhs += c[m - 6]
        c[m] = rhs / coef if coef != 0.0 else 0.0
    # evaluate with early termination once terms are negligible
    partial = 0.0
    terms_small = 0
    for m in range(_SERIES_CAP):
        term = c[m] * sm_list[m]
        partial += term
        if m > 8 and abs(term) < 1e-17 * max(abs(partial), 1e-300):
            terms_small += 1
            if terms_small >= 6:
                break
        else:
            terms_small = 0
    else:
        raise NumericalError(
            f"origin series did not converge at p = {p:g} (gamma = {gamma:g}); "
            "use a finer grid so the first nodes sit closer to the origin"
        )
    return partial


def _start_values(
    pot: PseudoPotential, bc: BoundaryCondition, energy: float, h: float
) -> tuple[float, float]:
    """psi at the first two grid nodes from the origin series, per BC."""
    if pot.shift_lambda != 0.0:
        raise DomainError(
            "shooting supports the shift_lambda = 0 convention only"
        )
    g = pot.gamma

    def combo(p: float) -> float:
        if bc.kind == "dirichlet":
            return _origin_series(g, energy, p, regular=True)
        if bc.kind == "neumann":
            return _origin_series(g, energy, p, regular=False)
        return _origin_series(g, energy, p, regular=False) + bc.alpha * _origin_series(
            g, energy, p, regular=True
        )

    return combo(h), combo(2.0 * h)


_RENORM = 1e250


def _match_residual(
    f: np.ndarray, h: float, m: int, y1: float, y2: float
) -> float:
    """Numerov match residual at interior index m (1-based over nodes 1..n+1).

    f[i] = W(p_i) - E for i = 1..n+1 (f[0] unused).  Left sweep starts from
    (y1, y2) at nodes 1, 2; right sweep from the Dirichlet wall y_{n+1} = 0.
    Zero residual means the combined sequence satisfies the Numerov
    three-term recurrence at m, i.e. E is a discrete eigenvalue.

    With u_i = (1 - h^2 f_i / 12) y_i the recurrence for y'' = f y reads
    u_{i+1} = 2 u_i - u_{i-1} + h^2 f_i y_i.
    """
    h2 = h * h
    c = 1.0 - h2 * f / 12.0
    n_top = len(f) - 1  # index of the wall node

    # left sweep: u_{i+1} = 2u_i - u_{i-1} + h^2 f_i y_i, up to u_m
    u_prev = c[1] * y1
    u_cur = c[2] * y2
    for i in range(2, m):
        u_next = 2.0 * u_cur - u_prev + h2 * f[i] * (u_cur / c[i])
        u_prev, u_cur = u_cur, u_next
        if abs(u_cur) > _RENORM:
            u_prev /= u_cur
            u_cur = 1.0
    uL_m1, uL_m = u_prev, u_cur
    yL_m = uL_m / c[m]

    # right sweep from the wall down to m
    u_after = 0.0  # y at wall node is 0
    u_cur = c[n_top - 1] * 1.0
    for i in range(n_top - 1, m, -1):
        u_before = 2.0 * u_cur - u_after + h2 * f[i] * (u_cur / c[i])
        u_after, u_cur = u_cur, u_before
        if abs(u_cur) > _RENORM:
            u_after /= u_cur
            u_cur = 1.0
    uR_p1, uR_m = u_after, u_cur
    yR_m = uR_m / c[m]

    if yL_m == 0.0 or yR_m == 0.0:
        return math.inf
    return uL_m1 / yL_m + uR_p1 / yR_m - 2.0 * c[m] - h2 * f[m]


def _matching_index(w: np.ndarray, e_mid: float) -> int:
    """Interior node index inside the classically allowed region, off-center
    (30% in) so low-lying eigenfunctions do not vanish there."""
    allowed = np.nonzero(w[1:-1] < e_mid)[0] + 1
    if len(allowed) == 0:
        raise NumericalError(
            f"no classically allowed region below E = {e_mid:g}; bad bracket?"
        )
    m = int(allowed[int(0.3 * (len(allowed) - 1))])
    return min(max(m, 2), len(w) - 2)


def shooting_eigenvalue(
    pot: PseudoPotential,
    bc: BoundaryCondition,
    grid: Grid,
    bracket: tuple[float, float],
    match_index: Optional[int] = None,
) -> float:
    """Numerov-shooting eigenvalue inside `bracket` (independent of the
    matrix route).  The bracket must contain exactly one sign change of the
    match residual.

    `match_index` places the matching node; it should sit where the target
    eigenfunction is large (away from its nodes) so the residual has no
    poles inside the bracket.  Defaults to a point 30% into the classically
    allowed region.
    """
    lo, hi = bracket
    if not lo < hi:
        raise DomainError(f"invalid bracket ({lo}, {hi})")
    h = grid.h
    p_all = h * np.arange(0, grid.n + 2)
    w = np.empty(grid.n + 2)
    w[0] = math.inf  # singular point, never used
    w[1:] = eval_W(p_all[1:], pot)
    if match_index is None:
        m = _matching_index(w, 0.5 * (lo + hi))
    else:
        m = min(max(int(match_index), 2), grid.n)

    def residual(energy: float) -> float:
        y1, y2 = _start_values(pot, bc, energy, h)
        return _match_residual(w - energy, h, m, y1, y2)

    r_lo, r_hi = residual(lo), residual(hi)
    if not (math.isfinite(r_lo) and math.isfinite(r_hi)):
        raise NumericalError("match residual not finite at the bracket endpoints")
    if r_lo * r_hi > 0:
        raise NumericalError(
            f"no sign change of the match residual in bracket ({lo:g}, {hi:g}); "
            "widen the bracket or check the level count"
        )
    return float(brentq(residual, lo, hi, xtol=1e-12, rtol=8.9e-16))


# --------------------------------------------------------------------------
# combined solve
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Low-lying spectrum with convergence metadata.

    `energies` are the Richardson-extrapolated matrix eigenvalues;
    `shooting` holds the independent Numerov values when computed.
    """

    energies: tuple[float, ...]
    bc: BoundaryCondition
    grid: Grid
    method: str
    residual_matrix: tuple[float, ...]
    shooting: Optional[tuple[float, ...]] = None
    residual_cross: Optional[tuple[float, ...]] = None


def solve_spectrum(
    pot: PseudoPotential,
    bc: BoundaryCondition,
    grid: Optional[Grid] = None,
    count: int = 1,
    cross_check: bool = True,
) -> Spectrum:
    """Lowest `count` eigenvalues: bisection on grids h and h/2, Richardson
    extrapolation, and (by default) Numerov-shooting confirmation."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if grid is None:
        grid = default_grid(pot)
    fine = grid.refined()
    e_h = eigen_lowest(build_operator(pot, bc, grid), count)
    e_h2 = eigen_lowest(build_operator(pot, bc, fine), count)
    e_ext = (4.0 * e_h2 - e_h) / 3.0
    residual_matrix = tuple(float(x) for x in np.abs(e_h - e_h2))

    shooting = None
    residual_cross = None
    if cross_check and pot.shift_lambda == 0.0:
        # matrix eigenvectors on the fine grid pick a node-free match point
        _, vecs = eigh_tridiagonal(
            *build_operator(pot, bc, fine), select="i",
            select_range=(0, count - 1), lapack_driver="stebz",
        )
        roots = []
        for i in range(count):
            gap = math.inf
            if count > 1:
                if i > 0:
                    gap = min(gap, e_ext[i] - e_ext[i - 1])
                if i < count - 1:
                    gap = min(gap, e_ext[i + 1] - e_ext[i])
            width = max(20.0 * residual_matrix[i], 1e-6 * max(1.0, abs(e_ext[i])))
            width = min(width, 0.45 * gap)
            attempt = 0
            while True:
                try:
                    roots.append(
                        shooting_eigenvalue(
                            pot, bc, fine, (e_ext[i] - width, e_ext[i] + width),
                            match_index=int(np.argmax(np.abs(vecs[:, i]))) + 1,
                        )
                    )
                    break
                except NumericalError:
                    attempt += 1
                    if attempt >= 8 or width >= 0.45 * gap:
                        raise
                    width = min(2.0 * width, 0.45 * gap)
        shooting = tuple(roots)
        residual_cross = tuple(abs(e - s) for e, s in zip(e_ext, shooting))

    energies = tuple(float(x) for x in e_ext)
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise NumericalError(f"spectrum not strictly ascending: {energies}")

    w_wall = eval_W(grid.p_max, pot)
    if w_wall <= energies[-1] + 10.0:
        raise NumericalError(
            f"Dirichlet wall too close: W(p_max={grid.p_max:g}) = {w_wall:g} "
            f"must exceed E_{count - 1} + 10 = {energies[-1] + 10:g}; "
            "re-solve with a larger p_max"
        )

    return Spectrum(
        energies=energies,
        bc=bc,
        grid=grid,
        method="matrix-richardson",
        residual_matrix=residual_matrix,
        shooting=shooting,
        residual_cross=residual_cross,
    )


# --------------------------------------------------------------------------
# diagnostics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfLineReport:
    gamma: float
    domain: str
    singularity: str
    notes: tuple[str, ...]


def left_halfline_guard(pot_or_gamma) -> HalfLineReport:
    """Why the problem lives on (0, inf), and what the origin looks like."""
    gamma = pot_or_gamma.gamma if isinstance(pot_or_gamma, PseudoPotential) else float(
        pot_or_gamma
    )
    notes = [
        "negative momenta excluded: W decreases linearly on the left half-line, "
        "so no normalizable states exist there",
    ]
    if gamma > 0:
        singularity = "singularity repulsive"
    elif gamma < 0:
        singularity = "singularity attractive, weak"
        notes.append(
            "W -> -inf as p -> 0+, but the inverse-square-root singularity is weak: "
            "square-integrability alone does not fix the boundary condition"
        )
    else:
        singularity = "no singularity"
        notes.append("degenerate case gamma = 0: pure linear potential, Airy regime")
    return HalfLineReport(
        gamma=gamma,
        domain="half-line (0, inf)",
        singularity=singularity,
        notes=tuple(notes),
    )
