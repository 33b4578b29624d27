"""Velocity-controlled-oscillator grid model and its shift kernels.

An oscillator's frequency is the baseline plus the velocity projected on a
preferred wave vector; integrating along a trajectory leaves a phase that
depends only on elapsed time and net displacement.  Summing cosines of such
phases over a wave-vector set gives a spatial activation map (hexagonal for
the three 120-degree planar directions), and the inner product of two maps
collapses to a translation-invariant kernel over their displacement.

Coefficient bookkeeping: a real cosine of amplitude c_i keeps a
positive-frequency component of amplitude c_i/2, so the kernel weights are
c_i^2/4.  The kernel treats stored wave vectors as effective spatial
frequencies; fold any velocity gain into them before kernel evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import _dot_angles
from .errors import ValidationError
from .rng import seeded_rng
from .simplex import simplex_directions


@dataclass(frozen=True)
class VcoParams:
    """Oscillator population: baseline frequency, velocity gain, one wave
    vector and input weight per member, and the evaluation time t0."""

    baseline_freq: float
    gain: float
    wave_vectors: np.ndarray
    coefficients: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        vectors = np.asarray(self.wave_vectors, dtype=np.float64)
        coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] < 1:
            raise ValidationError(f"wave_vectors must be a nonempty matrix, got shape {vectors.shape}")
        if coefficients.shape != (vectors.shape[0],):
            raise ValidationError(
                f"need one coefficient per wave vector: {coefficients.shape} vs {vectors.shape[0]}")
        if not (np.all(np.isfinite(vectors)) and np.all(np.isfinite(coefficients))):
            raise ValidationError("wave_vectors and coefficients must be finite")
        for name in ("baseline_freq", "gain", "t0"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        vectors = np.ascontiguousarray(vectors)
        coefficients = np.ascontiguousarray(coefficients)
        vectors.flags.writeable = False
        coefficients.flags.writeable = False
        object.__setattr__(self, "wave_vectors", vectors)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def n(self) -> int:
        return self.wave_vectors.shape[1]

    @property
    def size(self) -> int:
        return self.wave_vectors.shape[0]


@dataclass(frozen=True)
class KernelEstimate:
    """Sampled kernel: one displacement point per value."""

    displacements: np.ndarray
    values: np.ndarray


def vco_phase_along_path(path, params: VcoParams, row: int) -> float:
    """Trapezoidal integral of baseline_freq + gain * v . w along a path.

    ``path`` is a sequence of (time, velocity) samples starting at t=0;
    piecewise-constant velocities are represented by listing the corner
    time twice, once with each velocity, which makes the trapezoid exact.
    The result depends only on elapsed time and the integrated displacement.
    """
    times, velocities = _split_path(path, params.n)
    if not 0 <= row < params.size:
        raise ValidationError(f"row {row} outside 0..{params.size - 1}")
    integrand = params.baseline_freq + params.gain * velocities @ params.wave_vectors[row]
    return float(np.trapezoid(integrand, times))


def path_displacement(path, n: int) -> np.ndarray:
    """Trapezoidal integral of velocity: the path's net displacement."""
    times, velocities = _split_path(path, n)
    return np.trapezoid(velocities, times, axis=0)


def grid_activation(x, params: VcoParams) -> float:
    """Activation at one location: sum of c_i * cos(w_s t0 + gain * w_i . x)."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return float(grid_activation_batch(x[None, :], params)[0])


def grid_activation_batch(points, params: VcoParams) -> np.ndarray:
    """Activations at a batch of locations, shape (B,)."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != params.n:
        raise ValidationError(f"points must be (batch, {params.n}), got {points.shape}")
    if not np.all(np.isfinite(points)):
        raise ValidationError("points must be finite")
    phases = params.baseline_freq * params.t0 + params.gain * _dot_angles(points, params.wave_vectors)
    return np.cos(phases) @ params.coefficients


def raster(extent, resolution: int, params: VcoParams) -> np.ndarray:
    """Activation sampled on a square pixel grid, for 2-D parameter sets.

    ``extent`` is (a, b, c, d) for x in [a, b], y in [c, d]; samples sit at
    pixel centers.  Row r of the result holds y index r counted from the
    minimum-y edge, so the array is in mathematical (not image) orientation.
    """
    if params.n != 2:
        raise ValidationError(
            "rasterization requires n=2; evaluate grid_activation_batch on a "
            "point set for other dimensions")
    a, b, c, d = (float(v) for v in extent)
    if not (a < b and c < d):
        raise ValidationError(f"degenerate extent {extent!r}")
    if not isinstance(resolution, (int, np.integer)) or resolution < 2:
        raise ValidationError(f"resolution must be an integer >= 2, got {resolution!r}")
    xs = a + (np.arange(resolution) + 0.5) * (b - a) / resolution
    ys = c + (np.arange(resolution) + 0.5) * (d - c) / resolution
    grid_x, grid_y = np.meshgrid(xs, ys)
    points = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    return grid_activation_batch(points, params).reshape(resolution, resolution)


def shift_kernel(params: VcoParams, d) -> float:
    """Translation-invariant kernel at one displacement:
    (2 pi)^n * sum of (c_i/2)^2 * cos(w_i . d)."""
    d = np.atleast_1d(np.asarray(d, dtype=np.float64))
    return float(shift_kernel_batch(params, d[None, :])[0])


def shift_kernel_batch(params: VcoParams, displacements) -> np.ndarray:
    """Kernel values over a batch of displacements, shape (B,)."""
    displacements = np.asarray(displacements, dtype=np.float64)
    if displacements.ndim != 2 or displacements.shape[1] != params.n:
        raise ValidationError(
            f"displacements must be (batch, {params.n}), got {displacements.shape}")
    if not np.all(np.isfinite(displacements)):
        raise ValidationError("displacements must be finite")
    weights = (params.coefficients / 2.0) ** 2
    angles = _dot_angles(displacements, params.wave_vectors)
    return (2.0 * np.pi) ** params.n * (np.cos(angles) @ weights)


def kernel_curve(params: VcoParams, direction, d_max: float, num_samples: int) -> KernelEstimate:
    """Kernel sampled along a ray: displacements t * unit(direction) for t
    evenly spaced on [0, d_max]."""
    direction = np.atleast_1d(np.asarray(direction, dtype=np.float64))
    if direction.shape != (params.n,):
        raise ValidationError(f"direction must have shape ({params.n},), got {direction.shape}")
    norm = np.linalg.norm(direction)
    if not norm > 0:
        raise ValidationError("direction must be nonzero")
    if num_samples < 2:
        raise ValidationError(f"num_samples must be at least 2, got {num_samples!r}")
    if not d_max > 0:
        raise ValidationError(f"d_max must be positive, got {d_max!r}")
    unit = direction / norm
    distances = np.linspace(0.0, float(d_max), int(num_samples))
    displacements = distances[:, None] * unit
    values = shift_kernel_batch(params, displacements)
    displacements.flags.writeable = False
    values.flags.writeable = False
    return KernelEstimate(displacements=displacements, values=values)


def uniform_wave_vectors(count: int, n: int, seed: int, mag_lo: float = 0.5, mag_hi: float = 2.0) -> np.ndarray:
    """Monte-Carlo bank: directions uniform on the sphere (normalized
    Gaussian), magnitudes uniform in [mag_lo, mag_hi]."""
    if count < 1 or n < 1:
        raise ValidationError(f"count and n must be positive, got {count!r}, {n!r}")
    if not 0 < mag_lo <= mag_hi:
        raise ValidationError(f"need 0 < mag_lo <= mag_hi, got {mag_lo!r}, {mag_hi!r}")
    rng = seeded_rng(seed)
    gaussian = rng.standard_normal((count, n))
    directions = gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)
    return rng.uniform(mag_lo, mag_hi, count)[:, None] * directions


def simplex_wave_vectors(n: int, magnitude: float = 1.0, mode: str = "fixed", seed: int = 0) -> np.ndarray:
    """The n+1 simplex directions scaled to a common magnitude."""
    if not magnitude > 0:
        raise ValidationError(f"magnitude must be positive, got {magnitude!r}")
    return magnitude * simplex_directions(n, mode, seed)


def lattice_vector(wave_vectors, k) -> tuple:
    """Least-squares x solving W x = 2 pi k, with the residual norm.

    A near-zero residual certifies that integer phase vector k is realized
    by a spatial period x: the activation repeats under translation by x.
    """
    wave_vectors = np.asarray(wave_vectors, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    if wave_vectors.ndim != 2 or k.shape != (wave_vectors.shape[0],):
        raise ValidationError(
            f"need k with one entry per wave vector: {k.shape} vs {wave_vectors.shape}")
    target = 2.0 * np.pi * k
    x, *_ = np.linalg.lstsq(wave_vectors, target, rcond=None)
    residual = float(np.linalg.norm(wave_vectors @ x - target))
    return x, residual


def _split_path(path, n: int) -> tuple:
    entries = list(path)
    if not entries:
        raise ValidationError("path must contain at least one (time, velocity) sample")
    times = np.array([float(t) for t, _ in entries])
    velocities = np.array([np.atleast_1d(np.asarray(v, dtype=np.float64)) for _, v in entries])
    if velocities.ndim != 2 or velocities.shape[1] != n:
        raise ValidationError(f"velocities must have {n} coordinates, got shape {velocities.shape}")
    if times[0] != 0.0:
        raise ValidationError(f"path must start at t=0, got t={times[0]!r}")
    if np.any(np.diff(times) < 0):
        raise ValidationError("path times must be non-decreasing")
    if not (np.all(np.isfinite(times)) and np.all(np.isfinite(velocities))):
        raise ValidationError("path samples must be finite")
    return times, velocities
