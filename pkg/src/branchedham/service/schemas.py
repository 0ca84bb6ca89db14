"""Request models shared by the HTTP endpoints and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

BCKind = Literal["dirichlet", "neumann", "robin"]


class BranchesRequest(BaseModel):
    """Sample the classical branch curves.

    Defaults reproduce the reference illustration (lam = 1, gamma = 1/2 on
    p in [-0.9, 5]).  Either gamma or delta may be given, not both; with
    neither, gamma defaults to 0.5.
    """

    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(1.0, alias="lambda", ge=0.0)
    gamma: Optional[float] = None
    delta: Optional[float] = None
    k: int = Field(1, ge=1)
    general: bool = False
    p_min: float = -0.9
    p_max: float = 5.0
    n: int = Field(200, ge=2)
    diagnostic_mixed: bool = False

    @model_validator(mode="after")
    def _exclusive_coupling(self) -> "BranchesRequest":
        if self.gamma is not None and self.delta is not None:
            raise ValueError("give either gamma or delta, not both")
        return self


class SpectrumRequest(BaseModel):
    gamma: float
    bc: BCKind = "dirichlet"
    alpha: Optional[float] = None
    count: int = Field(1, ge=1)
    p_max: Optional[float] = Field(None, gt=0.0)
    n: Optional[int] = Field(None, ge=16)
    cross_check: bool = True

    @model_validator(mode="after")
    def _alpha_only_for_robin(self) -> "SpectrumRequest":
        if self.bc == "robin" and self.alpha is None:
            raise ValueError("robin boundary condition needs --alpha")
        if self.bc != "robin" and self.alpha is not None:
            raise ValueError("--alpha is only meaningful with --bc robin")
        return self


class SweepRequest(BaseModel):
    gammas: list[float] = Field(min_length=2)
    bc_pair: tuple[BCKind, BCKind] = ("dirichlet", "neumann")
    fit_slope: bool = False
    cross_check: bool = False


class PerturbationRequest(BaseModel):
    gamma: float
    count: int = Field(4, ge=1)


class BesselCheckRequest(BaseModel):
    gamma: float
