"""Command-line front end: a thin client of the service handlers.

Every subcommand builds a request model, obtains a report (in-process by
default, over HTTP with --server) and renders it as canonical JSON or CSV.
Exit codes: 0 success, 2 usage error, 3 domain/precondition error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
import urllib.error
import urllib.request

from pydantic import ValidationError

from . import __version__
from .errors import DomainError, NumericalError
from .reports import canonical_json, render_csv
from .service import handlers
from .service.schemas import (
    BesselCheckRequest,
    BranchesRequest,
    PerturbationRequest,
    SpectrumRequest,
    SweepRequest,
)

_DEFAULT_FORMAT = {
    "branches": "csv",
    "spectrum": "json",
    "sweep": "csv",
    "perturbation": "json",
    "bessel-check": "json",
}

_ENDPOINT = {
    "branches": "/branches",
    "spectrum": "/spectrum",
    "sweep": "/sweep",
    "perturbation": "/perturbation",
    "bessel-check": "/bessel-check",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchedham",
        description=(
            "Branched-Hamiltonian laboratory: classical branch curves, "
            "half-line spectra of W(p) = p + 2*gamma/sqrt(p), near-origin "
            "Bessel analysis and the large-gamma oscillator limit."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default: csv for tables, json otherwise)")
        p.add_argument("--out", default=None, help="write output to this path")
        p.add_argument("--stamp", action="store_true",
                       help="print a timestamp line to stderr (payload stays deterministic)")
        p.add_argument("--server", default=None,
                       help="base URL of a running service; default is in-process")

    b = sub.add_parser("branches", help="sample the classical branch curves")
    b.add_argument("--lambda", dest="lam", type=float, default=1.0)
    b.add_argument("--gamma", type=float, default=None)
    b.add_argument("--delta", type=float, default=None)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--general", action="store_true",
                   help="use the general-k branch pair instead of the k=1 closed form")
    b.add_argument("--p-min", type=float, default=-0.9)
    b.add_argument("--p-max", type=float, default=5.0)
    b.add_argument("--n", type=int, default=200)
    b.add_argument("--diagnostic-mixed", action="store_true",
                   help="append mixed-form Hamiltonian columns (diagnostic only)")
    add_common(b)

    s = sub.add_parser("spectrum", help="solve the half-line eigenproblem")
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--bc", choices=("dirichlet", "neumann", "robin"),
                   default="dirichlet")
    s.add_argument("--alpha", type=float, default=None,
                   help="Robin coefficient in psi'(0) = alpha*psi(0) "
                        "(outward derivative at the origin)")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--p-max", type=float, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--no-cross-check", action="store_true",
                   help="skip the Numerov shooting confirmation")
    add_common(s)

    w = sub.add_parser("sweep", help="boundary-condition degeneracy sweep over gamma")
    w.add_argument("--gammas", required=True,
                   help="comma-separated gamma list, e.g. 1,10,100")
    w.add_argument("--bc-pair", default="dirichlet,neumann",
                   help="two boundary conditions to compare, e.g. dirichlet,neumann")
    w.add_argument("--fit-slope", action="store_true",
                   help="fit the log-log slope of E0 - 3*gamma**(2/3) against gamma")
    w.add_argument("--cross-check", action="store_true",
                   help="also run the shooting confirmation per gamma")
    add_common(w)

    q = sub.add_parser("perturbation", help="large-gamma oscillator-limit analysis")
    q.add_argument("--gamma", type=float, required=True)
    q.add_argument("--count", type=int, default=4)
    add_common(q)

    c = sub.add_parser("bessel-check", help="near-origin Bessel selection rule")
    c.add_argument("--gamma", type=float, required=True)
    add_common(c)

    return parser


def _request_from(args: argparse.Namespace):
    sc = args.subcommand
    if sc == "branches":
        return BranchesRequest(
            lam=args.lam, gamma=args.gamma, delta=args.delta, k=args.k,
            general=args.general, p_min=args.p_min, p_max=args.p_max,
            n=args.n, diagnostic_mixed=args.diagnostic_mixed,
        )
    if sc == "spectrum":
        return SpectrumRequest(
            gamma=args.gamma, bc=args.bc, alpha=args.alpha, count=args.count,
            p_max=args.p_max, n=args.n, cross_check=not args.no_cross_check,
        )
    if sc == "sweep":
        gammas = [float(x) for x in args.gammas.split(",") if x.strip()]
        pair = tuple(x.strip() for x in args.bc_pair.split(","))
        if len(pair) != 2:
            raise ValueError("--bc-pair needs exactly two comma-separated kinds")
        return SweepRequest(
            gammas=gammas, bc_pair=pair, fit_slope=args.fit_slope,
            cross_check=args.cross_check,
        )
    if sc == "perturbation":
        return PerturbationRequest(gamma=args.gamma, count=args.count)
    return BesselCheckRequest(gamma=args.gamma)


_HANDLERS = {
    "branches": handlers.branches,
    "spectrum": handlers.spectrum,
    "sweep": handlers.sweep,
    "perturbation": handlers.perturbation,
    "bessel-check": handlers.bessel_check,
}


def _via_server(base_url: str, subcommand: str, request) -> dict:
    url = base_url.rstrip("/") + _ENDPOINT[subcommand]
    body = request.model_dump_json().encode()
    req = urllib.request.Request(
        url, data=body, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        detail = exc.read().decode(errors="replace")
        if exc.code == 400:
            raise DomainError(detail) from exc
        if exc.code == 422:
            raise ValueError(detail) from exc
        raise NumericalError(detail) from exc


def _comment_value(v) -> str:
    """Render a comment value identically whether it was computed in-process
    or round-tripped through JSON (so --server output is byte-identical)."""
    if isinstance(v, str):
        return v
    return canonical_json(v)


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return canonical_json(report) + "\n"
    payload = report.get("payload", {})
    if "columns" not in payload:
        raise ValueError("this report has no tabular payload; use --format json")
    comments = [f"version={report['version']}"]
    comments += [f"{k}={_comment_value(v)}" for k, v in sorted(report["config"].items())]
    comments += [f"warning: {w}" for w in report["warnings"]]
    extra = {
        k: v for k, v in payload.items() if k not in ("columns", "rows")
        and not isinstance(v, (dict, list))
    }
    comments += [f"{k}={_comment_value(v)}" for k, v in sorted(extra.items())]
    return render_csv(payload["columns"], payload["rows"], comments)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.stamp:
        print(f"# run at {datetime.datetime.now().isoformat()}", file=sys.stderr)
    try:
        request = _request_from(args)
    except (ValidationError, ValueError) as exc:
        print(f"branchedham: invalid arguments: {exc}", file=sys.stderr)
        return 2
    try:
        if args.server:
            report = _via_server(args.server, args.subcommand, request)
        else:
            report = _HANDLERS[args.subcommand](request)
        fmt = args.format or _DEFAULT_FORMAT[args.subcommand]
        text = _render(report, fmt)
    except DomainError as exc:
        print(f"branchedham: domain error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"branchedham: numerical failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"branchedham: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
