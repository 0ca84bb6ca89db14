"""Report builders behind both the HTTP endpoints and the CLI.

Each handler resolves every default, computes, and returns a plain dict:
{"config": ..., "payload": ..., "warnings": [...], "version": ...} with the
payloads of tabular commands carrying explicit columns/rows.
"""

from __future__ import annotations

import math

from .. import __version__
from ..branch_model import (
    BranchSign,
    ModelParams,
    branch_hamiltonian_k1,
    fprime_of_v,
    general_branch_hamiltonian,
    general_mixed_hamiltonian,
    velocity_branches,
)
from ..bessel_near_origin import (
    SmallPSolution,
    dirichlet_selection,
    full_equation_proportionality,
    small_p_solution,
    verify_leading_order_ode,
)
from ..errors import DomainError
from ..oscillator_limit import (
    anharmonic_error_bound,
    level_spacing,
    predict,
    predicted_levels,
    reliability_warning,
)
from ..spectral import (
    BoundaryCondition,
    Grid,
    PseudoPotential,
    default_grid,
    left_halfline_guard,
    solve_spectrum,
)
from .schemas import (
    BesselCheckRequest,
    BranchesRequest,
    PerturbationRequest,
    SpectrumRequest,
    SweepRequest,
)


def _report(config: dict, payload: dict, warnings: list[str]) -> dict:
    return {
        "config": config,
        "payload": payload,
        "warnings": warnings,
        "version": __version__,
    }


def _bc_from(kind: str, alpha) -> BoundaryCondition:
    return BoundaryCondition.robin(alpha) if kind == "robin" else BoundaryCondition(kind)


def branches(req: BranchesRequest) -> dict:
    """Branch-curve table: p, H_plus, H_minus (and velocities for k=1)."""
    warnings: list[str] = []
    if req.general:
        if req.p_min <= 0:
            raise DomainError(
                f"the general-k branch pair is restricted to p > 0, got p_min = {req.p_min}"
            )
        columns = ["p", "H_plus", "H_minus"]
        rows = []
        step = (req.p_max - req.p_min) / (req.n - 1)
        if step <= 0:
            raise DomainError(f"empty or reversed range [{req.p_min}, {req.p_max}]")
        for i in range(req.n):
            p = req.p_min + i * step if i < req.n - 1 else req.p_max
            rows.append(
                [
                    p,
                    general_branch_hamiltonian(p, req.k, BranchSign.PLUS),
                    general_branch_hamiltonian(p, req.k, BranchSign.MINUS),
                ]
            )
        config = {
            "subcommand": "branches",
            "general": True,
            "k": req.k,
            "p_min": req.p_min,
            "p_max": req.p_max,
            "n": req.n,
        }
        return _report(config, {"columns": columns, "rows": rows}, warnings)

    if req.delta is not None:
        params = ModelParams.from_lambda_delta(req.lam, req.delta, req.k)
    else:
        gamma = 0.5 if req.gamma is None else req.gamma
        params = ModelParams.from_gamma(gamma, req.lam, req.k)
    if req.k != 1:
        raise DomainError("the closed-form branch family is k = 1; pass --general for other k")

    if not (req.p_min < req.p_max):
        raise DomainError(f"empty or reversed range [{req.p_min}, {req.p_max}]")
    columns = ["p", "H_plus", "H_minus", "v_plus", "v_minus"]
    if req.diagnostic_mixed:
        columns += ["H_mixed_plus", "H_mixed_minus"]
        warnings.append(
            "diagnostic-mixed columns evaluate the mixed-form Hamiltonian "
            "literally at the on-shell velocities; the mixed form is of "
            "diagnostic value only"
        )
    rows = []
    step = (req.p_max - req.p_min) / (req.n - 1)
    for i in range(req.n):
        p = req.p_min + i * step if i < req.n - 1 else req.p_max
        v_plus, v_minus = velocity_branches(p, params)
        row = [
            p,
            branch_hamiltonian_k1(p, BranchSign.PLUS, params),
            branch_hamiltonian_k1(p, BranchSign.MINUS, params),
            v_plus,
            v_minus,
        ]
        if req.diagnostic_mixed:
            for sign, v in ((BranchSign.PLUS, v_plus), (BranchSign.MINUS, v_minus)):
                fp = (
                    fprime_of_v(v, params)
                    if params.delta is not None
                    else params.lam
                )
                row.append(general_mixed_hamiltonian(v, p, params.k, fp, 0.0, sign))
        rows.append(row)
    config = {
        "subcommand": "branches",
        "general": False,
        "k": params.k,
        "lambda": params.lam,
        "gamma": params.gamma,
        "delta": params.delta,
        "mu": params.mu,
        "p_min": req.p_min,
        "p_max": req.p_max,
        "n": req.n,
        "diagnostic_mixed": req.diagnostic_mixed,
        "cusp": -params.lam,
    }
    return _report(config, {"columns": columns, "rows": rows}, warnings)


def _resolve_grid(req: SpectrumRequest, pot: PseudoPotential) -> Grid:
    base = default_grid(pot)
    p_max = req.p_max if req.p_max is not None else base.p_max
    if req.n is not None:
        n = req.n
    elif req.p_max is not None:
        n = max(16, math.ceil(req.p_max / base.h) - 1)
    else:
        n = base.n
    return Grid(p_max=p_max, n=n)


def spectrum(req: SpectrumRequest) -> dict:
    pot = PseudoPotential(gamma=req.gamma)
    bc = _bc_from(req.bc, req.alpha)
    grid = _resolve_grid(req, pot)
    spec = solve_spectrum(pot, bc, grid, req.count, cross_check=req.cross_check)
    warnings: list[str] = []
    guard = left_halfline_guard(pot)
    predicted = None
    if req.gamma > 0:
        predicted = predicted_levels(req.gamma, req.count)
        w = reliability_warning(req.gamma)
        if w:
            warnings.append(w)
    columns = ["level", "energy", "shooting", "residual_matrix", "residual_cross"]
    if predicted is not None:
        columns += ["predicted", "abs_delta"]
    rows = []
    for i, e in enumerate(spec.energies):
        row = [
            i,
            e,
            spec.shooting[i] if spec.shooting else None,
            spec.residual_matrix[i],
            spec.residual_cross[i] if spec.residual_cross else None,
        ]
        if predicted is not None:
            row += [predicted[i], abs(e - predicted[i])]
        rows.append(row)
    payload = {
        "columns": columns,
        "rows": rows,
        "energies": list(spec.energies),
        "shooting": list(spec.shooting) if spec.shooting else None,
        "residual_matrix": list(spec.residual_matrix),
        "residual_cross": list(spec.residual_cross) if spec.residual_cross else None,
        "predicted": predicted,
        "method": spec.method,
        "halfline": {
            "domain": guard.domain,
            "singularity": guard.singularity,
            "notes": list(guard.notes),
        },
    }
    config = {
        "subcommand": "spectrum",
        "gamma": req.gamma,
        "bc": req.bc,
        "alpha": req.alpha,
        "count": req.count,
        "p_max": grid.p_max,
        "n": grid.n,
        "h": grid.h,
        "cross_check": req.cross_check,
    }
    return _report(config, payload, warnings)


def sweep(req: SweepRequest) -> dict:
    """Boundary-condition degeneracy sweep over an ascending gamma list."""
    warnings: list[str] = []
    columns = [
        "gamma",
        f"E0_{req.bc_pair[0]}",
        f"E0_{req.bc_pair[1]}",
        "gap",
        "E0_predicted",
        "anharmonic_estimate",
    ]
    rows = []
    gaps = []
    e0_first = []
    for g in req.gammas:
        try:
            pot = PseudoPotential(gamma=g)
            bc_a = _bc_from(req.bc_pair[0], None)
            bc_b = _bc_from(req.bc_pair[1], None)
            e_a = solve_spectrum(pot, bc_a, count=1, cross_check=req.cross_check).energies[0]
            e_b = solve_spectrum(pot, bc_b, count=1, cross_check=req.cross_check).energies[0]
        except Exception as exc:
            raise type(exc)(f"sweep failed at gamma = {g:g}: {exc}") from exc
        gap = abs(e_a - e_b)
        pred = predicted_levels(g, 1)[0] if g > 0 else None
        est = anharmonic_error_bound(g) if g > 0 else None
        rows.append([g, e_a, e_b, gap, pred, est])
        gaps.append(gap)
        e0_first.append(e_a)
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    if not decreasing:
        warnings.append("gap column is not strictly decreasing over the gamma list")
    payload = {"columns": columns, "rows": rows, "gap_strictly_decreasing": decreasing}
    if req.fit_slope:
        if any(g <= 0 for g in req.gammas):
            raise DomainError("--fit-slope requires all gammas > 0")
        xs = [math.log(g) for g in req.gammas]
        ys = [math.log(e - 3.0 * g ** (2.0 / 3.0)) for e, g in zip(e0_first, req.gammas)]
        mx = sum(xs) / len(xs)
        my = sum(ys) / len(ys)
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum(
            (x - mx) ** 2 for x in xs
        )
        payload["excess_loglog_slope"] = slope
    config = {
        "subcommand": "sweep",
        "gammas": list(req.gammas),
        "bc_pair": list(req.bc_pair),
        "fit_slope": req.fit_slope,
        "cross_check": req.cross_check,
    }
    return _report(config, payload, warnings)


def perturbation(req: PerturbationRequest) -> dict:
    pred = predict(req.gamma, req.count)
    rho2 = pred.rho ** 2
    identity_residuals = {
        "constant_over_rho2_vs_W0": abs(pred.constant_term / rho2 - pred.W0) / pred.W0,
        "oscillator_coefficient_vs_1": abs(
            0.75 * pred.rho ** 4 * req.gamma ** (-2.0 / 3.0) - 1.0
        ),
        "W2_times_p0": abs(pred.W2 * pred.p0 - 1.5) / 1.5,
        "W3_times_p0sq": abs(pred.W3 * pred.p0 ** 2 + 3.75) / 3.75,
    }
    warnings = []
    w = reliability_warning(req.gamma)
    if w:
        warnings.append(w)
    payload = {
        "p0": pred.p0,
        "W0": pred.W0,
        "W2": pred.W2,
        "W3": pred.W3,
        "rho": pred.rho,
        "q0": pred.q0,
        "constant_term": pred.constant_term,
        "levels": list(pred.levels),
        "level_spacing": level_spacing(req.gamma),
        "anharmonic_estimate": anharmonic_error_bound(req.gamma),
        "identity_residuals": identity_residuals,
    }
    config = {"subcommand": "perturbation", "gamma": req.gamma, "count": req.count}
    return _report(config, payload, warnings)


def bessel_check(req: BesselCheckRequest) -> dict:
    sel = dirichlet_selection(req.gamma)
    ode_ps = [0.01, 0.05, 0.1, 0.25, 0.5]
    residual_max = 0.0
    for coeffs in ((1.0, 0.0), (0.0, 1.0)):
        sol = SmallPSolution(
            gamma=req.gamma, coeff_regular=coeffs[0], coeff_singular=coeffs[1]
        )
        for p in ode_ps:
            psi = small_p_solution(p, sol)
            scale = abs(psi) + abs(2.0 * req.gamma * psi / math.sqrt(p))
            residual_max = max(
                residual_max, abs(verify_leading_order_ode(p, sol)) / scale
            )
    payload = {
        "vanishing_coefficient": sel.vanishing_coefficient,
        "family": sel.family,
        "regular_slope": sel.regular_slope,
        "singular_slope": sel.singular_slope,
        "limit_samples": {
            "columns": ["p", "psi_regular", "psi_singular"],
            "rows": [list(s) for s in sel.samples],
        },
        "ode_residual_max_scaled": residual_max,
        "full_equation_proportionality_deviation": full_equation_proportionality(
            req.gamma
        ),
    }
    config = {"subcommand": "bessel-check", "gamma": req.gamma}
    return _report(config, payload, [])
