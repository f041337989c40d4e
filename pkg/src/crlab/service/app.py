"""FastAPI application exposing the analysis operations.

Every route is a thin binding of a pydantic request model to its pure
handler; domain errors map to 422 (bad input) or 409 (degenerate
computation) responses.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import CrLabError, InvalidInputError
from . import handlers
from . import schemas as s

app = FastAPI(
    title="crlab",
    version=__version__,
    description=(
        "Echoed cross-resonance gate laboratory: rotary sweeps, error "
        "amplification tomography, unitarity benchmarking, model fitting, "
        "and heavy-output sampling."
    ),
)


@app.exception_handler(CrLabError)
async def _crlab_error_handler(request: Request, exc: CrLabError):
    status = 422 if isinstance(exc, InvalidInputError) else 409
    return JSONResponse(
        status_code=status,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/version", response_model=s.VersionResponse)
def version() -> s.VersionResponse:
    return s.VersionResponse(name="crlab", version=__version__)


@app.post("/sweep-rotary", response_model=s.SweepRotaryResponse)
def sweep_rotary(req: s.SweepRotaryRequest) -> s.SweepRotaryResponse:
    return handlers.handle_sweep_rotary(req)


@app.post("/zeros", response_model=s.ZerosResponse)
def zeros(req: s.ZerosRequest) -> s.ZerosResponse:
    return handlers.handle_zeros(req)


@app.post("/heat", response_model=s.HeatResponse)
def heat(req: s.HeatRequest) -> s.HeatResponse:
    return handlers.handle_heat(req)


@app.post("/purity-rb", response_model=s.PurityRbResponse)
def purity_rb(req: s.PurityRbRequest) -> s.PurityRbResponse:
    return handlers.handle_purity_rb(req)


@app.post("/unitarity", response_model=s.UnitarityResponse)
def unitarity(req: s.UnitarityRequest) -> s.UnitarityResponse:
    return handlers.handle_unitarity(req)


@app.post("/synth", response_model=s.SynthResponse)
def synth(req: s.SynthRequest) -> s.SynthResponse:
    return handlers.handle_synth(req)


@app.post("/fit", response_model=s.FitResponse)
def fit(req: s.FitRequest) -> s.FitResponse:
    return handlers.handle_fit(req)


@app.post("/spectator", response_model=s.SpectatorSweepResponse)
def spectator(req: s.SpectatorSweepRequest) -> s.SpectatorSweepResponse:
    return handlers.handle_spectator(req)


@app.post("/qv", response_model=s.QvResponse)
def qv(req: s.QvRequest) -> s.QvResponse:
    return handlers.handle_qv(req)
