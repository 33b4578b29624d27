"""HTTP service wrapping the core package.

Banks live in an in-process registry behind integer handles so clients
can create one once and rotate many batches against it.  Every endpoint
mirrors a library operation; validation failures come back as 400 with a
{code, message} body, unknown handles as 404.

Run with: python3 -m uvicorn gridpe.service:app
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from . import __version__, ops
from .embedding import WaveVectorBank, build_bank, feature_map_batch, rotate_batch
from .errors import ValidationError
from .formats import pgm_bytes
from .models import (
    ArrayPayload,
    BankConfigModel,
    BankInfoResponse,
    BenchRequest,
    BenchResponse,
    CreateBankResponse,
    ErrorBody,
    FeatureRequest,
    FeatureResponse,
    KernelCurveRequest,
    KernelCurveResponse,
    PatternRequest,
    ReleaseResponse,
    RotateRequest,
    RotateResponse,
    ScheduleResponse,
    SimplexRequest,
    SimplexResponse,
    StatsResponse,
    VerifyReportModel,
    VerifyRequest,
    positions_for_bank,
)
from .verify import run_verify


class UnknownHandle(KeyError):
    pass


class BankRegistry:
    """Thread-safe handle table for live banks.

    Handles are monotonically increasing integers starting at 1 and are
    never reused, so a release followed by a create cannot resurrect a
    stale handle.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._banks: dict[int, tuple[WaveVectorBank, BankConfigModel]] = {}
        self._next_handle = 1
        self._created = 0
        self._released = 0

    def create(self, config: BankConfigModel) -> int:
        bank = build_bank(config.to_config())
        with self._lock:
            handle = self._next_handle
            self._next_handle += 1
            self._banks[handle] = (bank, config)
            self._created += 1
        return handle

    def get(self, handle: int) -> tuple[WaveVectorBank, BankConfigModel]:
        with self._lock:
            try:
                return self._banks[handle]
            except KeyError:
                raise UnknownHandle(handle) from None

    def release(self, handle: int) -> None:
        with self._lock:
            if handle not in self._banks:
                raise UnknownHandle(handle)
            del self._banks[handle]
            self._released += 1

    def stats(self) -> StatsResponse:
        with self._lock:
            return StatsResponse(
                active_banks=len(self._banks),
                created_total=self._created,
                released_total=self._released,
            )


registry = BankRegistry()

app = FastAPI(title="gridpe", version=__version__)


@app.exception_handler(ValidationError)
async def _validation_error(request: Request, exc: ValidationError):
    body = ErrorBody(code="validation_error", message=str(exc))
    return JSONResponse(status_code=400, content=body.model_dump())


@app.exception_handler(UnknownHandle)
async def _unknown_handle(request: Request, exc: UnknownHandle):
    body = ErrorBody(code="unknown_handle", message=f"no bank with handle {exc.args[0]}")
    return JSONResponse(status_code=404, content=body.model_dump())


@app.exception_handler(RequestValidationError)
async def _request_validation(request: Request, exc: RequestValidationError):
    parts = []
    for err in exc.errors():
        where = ".".join(str(p) for p in err.get("loc", ()) if p != "body")
        parts.append(f"{where}: {err.get('msg', 'invalid')}")
    body = ErrorBody(code="validation_error", message="; ".join(parts) or "invalid request")
    return JSONResponse(status_code=400, content=body.model_dump())


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/v1/stats", response_model=StatsResponse)
def stats() -> StatsResponse:
    return registry.stats()


@app.post("/v1/banks", response_model=CreateBankResponse)
def create_bank(config: BankConfigModel) -> CreateBankResponse:
    return CreateBankResponse(handle=registry.create(config))


@app.get("/v1/banks/{handle}", response_model=BankInfoResponse)
def bank_info(handle: int) -> BankInfoResponse:
    bank, config = registry.get(handle)
    return BankInfoResponse(
        handle=handle,
        config=config,
        num_vectors=int(bank.vectors.shape[0]),
        head_dim=config.head_dim,
    )


@app.delete("/v1/banks/{handle}", response_model=ReleaseResponse)
def release_bank(handle: int) -> ReleaseResponse:
    registry.release(handle)
    return ReleaseResponse(released=True)


@app.post("/v1/banks/{handle}/rotate", response_model=RotateResponse)
def rotate(handle: int, request: RotateRequest) -> RotateResponse:
    bank, config = registry.get(handle)
    contents = request.contents.to_array()
    positions = positions_for_bank(request.positions, config.n)
    if contents.shape[0] != positions.shape[0]:
        raise ValidationError(
            f"contents rows {contents.shape[0]} != positions rows {positions.shape[0]}")
    rotated = rotate_batch(contents, positions, bank)
    return RotateResponse(contents=ArrayPayload.from_array(rotated))


@app.post("/v1/banks/{handle}/features", response_model=FeatureResponse)
def features(handle: int, request: FeatureRequest) -> FeatureResponse:
    bank, config = registry.get(handle)
    positions = positions_for_bank(request.positions, config.n)
    values = feature_map_batch(positions, bank)
    return FeatureResponse(features=ArrayPayload.from_array(values))


@app.get("/v1/scales", response_model=ScheduleResponse)
def scales(dim: int, head_dim: int, base: float | None = None) -> ScheduleResponse:
    return ScheduleResponse(**ops.schedule_payload(dim, head_dim, base))


@app.post("/v1/simplex", response_model=SimplexResponse)
def simplex(request: SimplexRequest) -> SimplexResponse:
    _, rows = ops.simplex_table(request.dim, mode=request.mode, seed=request.seed)
    return SimplexResponse(directions=[row[2:] for row in rows])


@app.post("/v1/kernel", response_model=KernelCurveResponse)
def kernel(request: KernelCurveRequest) -> KernelCurveResponse:
    _, rows = ops.kernel_table(
        request.params, request.direction, request.d_max, request.samples)
    return KernelCurveResponse(
        distance=[r[0] for r in rows],
        h=[r[1] for r in rows],
    )


@app.post("/v1/pattern")
def pattern(request: PatternRequest) -> Response:
    grid = ops.pattern_grid(request.params, request.extent, request.resolution)
    return Response(content=pgm_bytes(grid), media_type="image/x-portable-graymap")


@app.post("/v1/bench", response_model=BenchResponse)
def bench(request: BenchRequest) -> BenchResponse:
    payload = ops.bench_payload(
        request.method, request.dim, request.tokens,
        request.trials, request.shift_range, request.seed)
    return BenchResponse(**payload)


@app.post("/v1/verify", response_model=VerifyReportModel)
def verify(request: VerifyRequest) -> VerifyReportModel:
    return VerifyReportModel.from_report(run_verify(request.dim, request.head_dim))
