"""Pydantic models for config files, service payloads, and reports.

These mirror the dataclass layer one-to-one so that JSON documents on
disk and HTTP bodies share a single schema.  Unknown keys are rejected
everywhere; wave-vector banks for the interference model can be given
explicitly or described by a sampler.
"""

from __future__ import annotations

import base64
from typing import Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .attention import ShiftGeneralizationReport
from .embedding import GridPEConfig
from .errors import ValidationError
from .kernel import VcoParams, simplex_wave_vectors, uniform_wave_vectors
from .scales import ScaleSchedule, max_base, optimal_ratio
from .verify import VerifyReport


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BankConfigModel(StrictModel):
    """JSON form of :class:`gridpe.embedding.GridPEConfig`."""

    n: int
    head_dim: int
    num_heads: int = 1
    scales_per_head: Optional[int] = None
    base: Optional[float] = None
    direction_mode: Literal["fixed", "random"] = "fixed"
    seed: int = 0

    def to_config(self) -> GridPEConfig:
        return GridPEConfig(**self.model_dump())


class ExplicitWaveVectors(StrictModel):
    kind: Literal["explicit"] = "explicit"
    vectors: list[list[float]]

    def build(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=np.float64)


class UniformWaveVectors(StrictModel):
    kind: Literal["uniform"] = "uniform"
    count: int
    n: int
    seed: int = 0
    mag_lo: float = 0.5
    mag_hi: float = 2.0

    def build(self) -> np.ndarray:
        return uniform_wave_vectors(
            self.count, self.n, seed=self.seed,
            mag_lo=self.mag_lo, mag_hi=self.mag_hi,
        )


class SimplexWaveVectors(StrictModel):
    kind: Literal["simplex"] = "simplex"
    n: int
    magnitude: float = 1.0
    mode: Literal["fixed", "random"] = "fixed"
    seed: int = 0

    def build(self) -> np.ndarray:
        return simplex_wave_vectors(
            self.n, magnitude=self.magnitude, mode=self.mode, seed=self.seed,
        )


WaveVectorSpec = Union[ExplicitWaveVectors, UniformWaveVectors, SimplexWaveVectors]


class VcoParamsModel(StrictModel):
    """JSON form of :class:`gridpe.kernel.VcoParams`.

    ``coefficients`` defaults to all ones, one per wave vector.
    """

    wave_vectors: WaveVectorSpec = Field(discriminator="kind")
    coefficients: Optional[list[float]] = None
    baseline_freq: float = 0.0
    gain: float = 1.0
    t0: float = 0.0

    def to_params(self) -> VcoParams:
        vectors = self.wave_vectors.build()
        if self.coefficients is None:
            coefficients = np.ones(vectors.shape[0] if vectors.ndim == 2 else 0)
        else:
            coefficients = np.asarray(self.coefficients, dtype=np.float64)
        return VcoParams(
            baseline_freq=self.baseline_freq,
            gain=self.gain,
            wave_vectors=vectors,
            coefficients=coefficients,
            t0=self.t0,
        )


class ScheduleResponse(StrictModel):
    base: float
    max_base: float
    optimal_ratio: float
    magnitudes: list[float]

    @classmethod
    def from_schedule(cls, schedule: ScaleSchedule, n: int) -> "ScheduleResponse":
        return cls(
            base=schedule.base,
            max_base=max_base(schedule.head_dim, schedule.bases_per_scale, n),
            optimal_ratio=optimal_ratio(n),
            magnitudes=[float(m) for m in schedule.magnitudes],
        )


class BenchResponse(StrictModel):
    method: str
    preservation_rate: float
    mean_distance: float
    mean_entropy: float

    @classmethod
    def from_report(cls, report: ShiftGeneralizationReport) -> "BenchResponse":
        return cls(
            method=report.method,
            preservation_rate=report.preservation_rate,
            mean_distance=report.mean_distance,
            mean_entropy=report.mean_entropy,
        )


class VerifyCheckModel(StrictModel):
    name: str
    passed: bool
    measured: float
    tolerance: float


class VerifyReportModel(StrictModel):
    checks: list[VerifyCheckModel]
    overall: bool

    @classmethod
    def from_report(cls, report: VerifyReport) -> "VerifyReportModel":
        return cls(
            checks=[
                VerifyCheckModel(
                    name=c.name, passed=c.passed,
                    measured=c.measured, tolerance=c.tolerance,
                )
                for c in report.checks
            ],
            overall=report.overall,
        )


class ArrayPayload(StrictModel):
    """Row-major float64 matrix as base64 of its little-endian bytes."""

    shape: list[int]
    data_b64: str

    @classmethod
    def from_array(cls, array: np.ndarray) -> "ArrayPayload":
        array = np.ascontiguousarray(array, dtype="<f8")
        return cls(
            shape=[int(s) for s in array.shape],
            data_b64=base64.b64encode(array.tobytes()).decode("ascii"),
        )

    def to_array(self) -> np.ndarray:
        if len(self.shape) != 2 or any(s < 0 for s in self.shape):
            raise ValidationError(f"shape must be [rows, cols], got {self.shape}")
        try:
            raw = base64.b64decode(self.data_b64, validate=True)
        except Exception as exc:
            raise ValidationError(f"data_b64 is not valid base64 ({exc})") from None
        count = self.shape[0] * self.shape[1]
        if len(raw) != 8 * count:
            raise ValidationError(
                f"payload holds {len(raw)} bytes, shape {self.shape} needs {8 * count}"
            )
        return np.frombuffer(raw, dtype="<f8").reshape(self.shape).astype(
            np.float64, copy=False
        )


class CreateBankResponse(StrictModel):
    handle: int


class BankInfoResponse(StrictModel):
    handle: int
    config: BankConfigModel
    num_vectors: int
    head_dim: int


class RotateRequest(StrictModel):
    contents: ArrayPayload
    positions: ArrayPayload


class RotateResponse(StrictModel):
    contents: ArrayPayload


class FeatureRequest(StrictModel):
    positions: ArrayPayload


class FeatureResponse(StrictModel):
    features: ArrayPayload


class ReleaseResponse(StrictModel):
    released: bool


class StatsResponse(StrictModel):
    active_banks: int
    created_total: int
    released_total: int


class SimplexRequest(StrictModel):
    dim: int
    mode: Literal["fixed", "random"] = "fixed"
    seed: int = 0


class SimplexResponse(StrictModel):
    directions: list[list[float]]


class KernelCurveRequest(StrictModel):
    params: VcoParamsModel
    direction: list[float]
    d_max: float
    samples: int


class KernelCurveResponse(StrictModel):
    distance: list[float]
    h: list[float]


class PatternRequest(StrictModel):
    params: VcoParamsModel
    extent: list[float]
    resolution: int


class BenchRequest(StrictModel):
    method: str
    dim: int
    tokens: int
    trials: int
    shift_range: float
    seed: int = 0


class VerifyRequest(StrictModel):
    dim: int
    head_dim: int


class ErrorBody(StrictModel):
    code: str
    message: str


def positions_for_bank(payload: ArrayPayload, n: int) -> np.ndarray:
    positions = payload.to_array()
    if positions.shape[1] != n:
        raise ValidationError(
            f"positions have {positions.shape[1]} columns, bank dimension n is {n}"
        )
    return positions
