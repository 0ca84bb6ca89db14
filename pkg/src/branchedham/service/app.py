"""FastAPI application exposing the laboratory as a small compute service.

Responses are emitted through the canonical serializer, so identical request
bodies produce byte-identical response bodies.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response

from .. import __version__
from ..errors import DomainError, NumericalError
from ..reports import canonical_json
from . import handlers
from .schemas import (
    BesselCheckRequest,
    BranchesRequest,
    PerturbationRequest,
    SpectrumRequest,
    SweepRequest,
)

app = FastAPI(
    title="branchedham",
    version=__version__,
    description=(
        "Branch curves of the velocity-dependent Lagrangian family, half-line "
        "spectra of W(p) = p + 2*gamma/sqrt(p), near-origin Bessel analysis "
        "and the large-gamma oscillator limit."
    ),
)


def _json_response(report: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(report),
        media_type="application/json",
        status_code=status_code,
    )


@app.exception_handler(DomainError)
async def _domain_error(_: Request, exc: DomainError) -> Response:
    return _json_response({"error": "domain", "detail": str(exc)}, status_code=400)


@app.exception_handler(NumericalError)
async def _numerical_error(_: Request, exc: NumericalError) -> Response:
    return _json_response({"error": "numerical", "detail": str(exc)}, status_code=500)


@app.get("/health")
async def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/branches")
async def branches(req: BranchesRequest) -> Response:
    return _json_response(handlers.branches(req))


@app.post("/spectrum")
async def spectrum(req: SpectrumRequest) -> Response:
    return _json_response(handlers.spectrum(req))


@app.post("/sweep")
async def sweep(req: SweepRequest) -> Response:
    return _json_response(handlers.sweep(req))


@app.post("/perturbation")
async def perturbation(req: PerturbationRequest) -> Response:
    return _json_response(handlers.perturbation(req))


@app.post("/bessel-check")
async def bessel_check(req: BesselCheckRequest) -> Response:
    return _json_response(handlers.bessel_check(req))
