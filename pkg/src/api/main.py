"""FastAPI entry point for the voting toolkit."""

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, ValidationError

from config.settings import settings
from src.voting import __version__
from src.voting.dynamics.configuration import Configuration
from src.voting.dynamics.engine import exact_moments
from src.voting.errors import VotingError
from src.voting.graph.core import VertexSet
from src.voting.graph.edgelist import parse_edge_list
from src.voting.graph.spectral import expansion
from src.voting.kernels.growing import bok_growing_constants
from src.voting.kernels.profile import derive_profile
from src.voting.kernels.quasi_majority import quasi_majority_check
from src.voting.state.schemas import (
    BetrayalSpec,
    BokConstantsReport,
    QuasiMajorityReport,
    SpectralSummary,
    UpdatingProfile,
)
from src.voting.utils.logging_config import configure_logging, get_logger

# Configure logging on startup
configure_logging(settings.log_level, settings.log_format)
logger = get_logger(__name__)

app = FastAPI(
    title="Expander Voting API",
    description="Betrayal-function verification, spectral summaries and exact one-step moments",
    version=__version__,
)


# === REQUEST/RESPONSE MODELS ===

class EdgeListRequest(BaseModel):
    """Graph in the edge-list text format: one ``u v`` pair per line."""

    edges: str = Field(..., min_length=1, examples=["0 1\n1 2\n2 0"])
    method: Literal["auto", "dense", "power", "lanczos"] = "auto"


class MomentsRequest(BaseModel):
    edges: str = Field(..., min_length=1)
    spec: BetrayalSpec
    opinion_zero: list[int] = Field(..., description="Vertices holding opinion 0 (the set A)")


class MomentsResponse(BaseModel):
    pi_a: float
    mean: float = Field(..., description="E[pi(A')]")
    variance: float = Field(..., description="Var[pi(A')]")


class ErrorResponse(BaseModel):
    """Error response model."""

    detail: str


ERRORS = {
    400: {"model": ErrorResponse, "description": "Invalid input"},
    500: {"model": ErrorResponse, "description": "Processing error"},
}


def _bad_request(exc: Exception) -> HTTPException:
    logger.warning("request_rejected", error=str(exc))
    return HTTPException(status_code=400, detail=str(exc))


# === API ENDPOINTS ===

@app.post("/verify", response_model=QuasiMajorityReport, responses=ERRORS,
          summary="Quasi-majority verification")
async def verify(spec: BetrayalSpec) -> QuasiMajorityReport:
    try:
        return quasi_majority_check(spec)
    except VotingError as e:
        raise _bad_request(e)


@app.post("/profile", response_model=UpdatingProfile, responses=ERRORS,
          summary="Constants of the updating function")
async def profile(spec: BetrayalSpec, strict: bool = False) -> UpdatingProfile:
    try:
        return derive_profile(spec, strict=strict)
    except VotingError as e:
        raise _bad_request(e)


@app.post("/spectral", response_model=SpectralSummary, responses=ERRORS,
          summary="Expansion parameter of an edge list")
async def spectral(request: EdgeListRequest) -> SpectralSummary:
    try:
        graph = parse_edge_list(request.edges, name="request")
        return expansion(graph, method=request.method)
    except VotingError as e:
        raise _bad_request(e)
    except Exception as e:
        logger.error("Spectral computation failed", error=str(e))
        raise HTTPException(status_code=500, detail=f"Processing error: {str(e)}")


@app.post("/moments", response_model=MomentsResponse, responses=ERRORS,
          summary="Exact one-step mean and variance of pi(A')")
async def moments(request: MomentsRequest) -> MomentsResponse:
    try:
        graph = parse_edge_list(request.edges, name="request")
        cfg = Configuration.of(graph, VertexSet.from_indices(graph.n, request.opinion_zero))
        mean, variance = exact_moments(cfg, graph, request.spec)
    except (VotingError, ValidationError, ValueError) as e:
        raise _bad_request(e)
    return MomentsResponse(pi_a=cfg.pi_a, mean=mean, variance=variance)


@app.get("/bok/{k}", response_model=BokConstantsReport, responses=ERRORS,
         summary="Growing-k constants of best-of-(2k+1)")
async def bok(k: int, grid_points: Optional[int] = None) -> BokConstantsReport:
    try:
        return bok_growing_constants(k, grid_points=grid_points)
    except VotingError as e:
        raise _bad_request(e)


@app.get("/health", summary="Health check", description="Check if API is running.")
async def health_check():
    """Simple health check endpoint."""
    return {"status": "healthy", "service": "expander-voting", "version": __version__}


# === RUN (for development) ===

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
