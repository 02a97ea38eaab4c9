"""FastAPI service wrapping the simulation lab.

Errors raised by the core map to status codes by category: config 400,
numerical 500, horizon 409. The body always carries {category, message} so
clients (the CLI included) can translate them to exit codes.

Run with: uvicorn walklab.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, runs
from ..errors import WalkLabError
from .schemas import (
    AuditRequest,
    AuditResponse,
    EntropyRequest,
    EntropyResponse,
    EvolveRequest,
    EvolveResponse,
    HealthResponse,
    LimitsRequest,
    LimitsResponse,
    SpectrumRequest,
    SpectrumResponse,
)

STATUS_BY_CATEGORY = {"config": 400, "numerical": 500, "horizon": 409}

app = FastAPI(
    title="walklab",
    version=__version__,
    description="Decoherent 2D quantum walk simulation and verification lab",
)


@app.exception_handler(WalkLabError)
async def walklab_error_handler(request: Request, exc: WalkLabError) -> JSONResponse:
    return JSONResponse(
        status_code=STATUS_BY_CATEGORY.get(exc.category, 500),
        content={"category": exc.category, "message": str(exc)},
    )


@app.get("/health", response_model=HealthResponse)
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/run/evolve", response_model=EvolveResponse)
def evolve_endpoint(req: EvolveRequest) -> dict:
    return runs.run_evolve(req.config.to_config(), seed=req.config.seed)


@app.post("/run/entropy", response_model=EntropyResponse)
def entropy_endpoint(req: EntropyRequest) -> dict:
    return runs.run_entropy(req.config.to_config(), seed=req.config.seed)


@app.post("/run/spectrum", response_model=SpectrumResponse)
def spectrum_endpoint(req: SpectrumRequest) -> dict:
    return runs.run_spectrum(req.config.to_config(), seed=req.config.seed, trials=req.trials)


@app.post("/run/audit", response_model=AuditResponse)
def audit_endpoint(req: AuditRequest) -> dict:
    return runs.run_audit(
        req.config.to_config(),
        seed=req.config.seed,
        trials=req.trials,
        block_t_max=req.block_t_max,
    )


@app.post("/run/limits", response_model=LimitsResponse)
def limits_endpoint(req: LimitsRequest) -> dict:
    return runs.run_limits(req.config.to_config(), seed=req.config.seed, t_long=req.t_long)
