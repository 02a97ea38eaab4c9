"""Pydantic request/response models for the walklab service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..walk_model import WalkConfig


class WalkConfigModel(BaseModel):
    """Run parameters; coin_init is a list of [re, im] pairs (default: the
    symmetric product state)."""

    n: int
    p: float
    coin_init: Optional[list[list[float]]] = None
    t_max: int = 0
    kraus_mode: Literal["sqrt", "paper_literal"] = "sqrt"
    backend: Literal["direct", "fourier", "both"] = "direct"
    tol: float = 1e-10
    record_stride: Optional[int] = None
    seed: int = 0

    def to_config(self) -> WalkConfig:
        return WalkConfig.from_dict(self.model_dump())


class EvolveRequest(BaseModel):
    config: WalkConfigModel


class EntropyRequest(BaseModel):
    config: WalkConfigModel


class SpectrumRequest(BaseModel):
    config: WalkConfigModel
    trials: int = Field(default=1000, ge=1)


class AuditRequest(BaseModel):
    config: WalkConfigModel
    trials: int = Field(default=1000, ge=1)
    block_t_max: Optional[int] = None


class LimitsRequest(BaseModel):
    config: WalkConfigModel
    t_long: Optional[int] = None


class DistributionRow(BaseModel):
    t: int
    x: int
    y: int
    p: float


class InvariantRow(BaseModel):
    t: int
    trace: float
    herm_dev: float
    min_eig: float


class EntropyRow(BaseModel):
    t: int
    s_total: float
    s_coin: float
    s_walker: float
    mutual_info: float


class EigenRow(BaseModel):
    kx: int
    ky: int
    kxp: int
    kyp: int
    re_lambda: float
    im_lambda: float
    modulus: float


class ResponseMeta(BaseModel):
    schema_version: str
    command: str
    seed: int
    config: dict


class EvolveResponse(ResponseMeta):
    rows: list[DistributionRow]
    invariants: list[InvariantRow]


class EntropyResponse(ResponseMeta):
    rows: list[EntropyRow]


class SpectrumResponse(ResponseMeta):
    rows: list[EigenRow]
    audit: dict


class AuditResponse(ResponseMeta):
    audit: dict


class LimitsResponse(ResponseMeta):
    report: dict


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    category: str
    message: str
