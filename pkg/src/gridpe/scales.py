"""Geometric frequency schedules and the grid-economy model.

A schedule assigns each scale s a wave-vector magnitude base**(-2*M*s/d),
the n-dimensional analog of the classical sinusoidal frequency ladder.
The economy model answers how the consecutive-scale ratio should be chosen:
minimizing total cell count at fixed resolution puts the per-dimension
ratio at e**(1/n), which caps the usable base at exp(d / (2*M*n)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


def bases_per_scale(n: int) -> int:
    """Wave vectors per scale: the n+1 simplex directions, except in 1-D
    where the second vertex is the negation of the first and adds nothing."""
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n!r}")
    return 1 if n == 1 else n + 1


@dataclass(frozen=True)
class ScaleSchedule:
    """Per-scale magnitudes for one head: magnitudes[s] = base**(-2*M*s/d)."""

    base: float
    head_dim: int
    bases_per_scale: int
    num_scales: int
    magnitudes: np.ndarray

    @property
    def ratio(self) -> float:
        """Consecutive-scale magnitude ratio, constant by construction."""
        return float(self.base) ** (2.0 * self.bases_per_scale / self.head_dim)


def make_schedule(base: float, head_dim: int, bases_per_scale: int) -> ScaleSchedule:
    """Fit S = floor(head_dim / (2*M)) geometric scales into one head.

    The highest spatial frequency (magnitude 1) sits at s = 0 and
    magnitudes decay geometrically, mirroring the rotary convention.
    """
    if not base > 1:
        raise ValidationError(f"base must exceed 1, got {base!r}")
    if bases_per_scale < 1:
        raise ValidationError(f"bases_per_scale must be positive, got {bases_per_scale!r}")
    if head_dim < 2 * bases_per_scale:
        raise ValidationError(
            f"head_dim {head_dim} holds no full scale: need at least {2 * bases_per_scale}")
    num_scales = head_dim // (2 * bases_per_scale)
    exponents = -2.0 * bases_per_scale * np.arange(num_scales) / head_dim
    magnitudes = float(base) ** exponents
    magnitudes.flags.writeable = False
    return ScaleSchedule(
        base=float(base),
        head_dim=int(head_dim),
        bases_per_scale=int(bases_per_scale),
        num_scales=num_scales,
        magnitudes=magnitudes,
    )


def max_base(d: int, M: int, n: int) -> float:
    """Largest base whose schedule keeps the consecutive-scale ratio within
    the economy optimum e**(1/n): exp(d / (2*M*n))."""
    if d < 1 or M < 1 or n < 1:
        raise ValidationError(f"all arguments must be >= 1, got d={d!r} M={M!r} n={n!r}")
    return math.exp(d / (2.0 * M * n))


def default_base(head_dim: int, M: int, n: int) -> float:
    """Conventional base 10000 capped by the economy bound."""
    return min(10000.0, max_base(head_dim, M, n))


def optimal_ratio(n: int) -> float:
    """Cell-count-minimizing consecutive-scale ratio in n dimensions."""
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n!r}")
    return math.exp(1.0 / n)


def cell_count(rho: float, R: float, d_min: float) -> float:
    """Grid cells needed to cover resolution R at volumetric scale ratio rho
    with d_min cells per location: d_min * rho * log(R) / log(rho)."""
    if not rho > 1:
        raise ValidationError(f"rho must exceed 1, got {rho!r}")
    if not R > 1:
        raise ValidationError(f"resolution must exceed 1, got {R!r}")
    if d_min < 1:
        raise ValidationError(f"d_min must be at least 1, got {d_min!r}")
    return d_min * rho * math.log(R) / math.log(rho)


@dataclass(frozen=True)
class RhoScan:
    """Brute-force minimizer result; a boundary hit means the grid clipped."""

    rho: float
    cells: float
    at_boundary: bool


def optimal_rho_bruteforce(
    R: float,
    d_min: float = 1.0,
    grid_lo: float = 1.5,
    grid_hi: float = 4.0,
    step: float = 0.001,
) -> RhoScan:
    """Scan cell_count over an evenly spaced rho grid and return the minimizer.

    Serves as the independent numerical check that the minimizer sits at e
    regardless of R and d_min; a grid that excludes e is reported via the
    boundary flag rather than silently clamped.
    """
    if step <= 0 or grid_hi <= grid_lo:
        raise ValidationError(f"empty rho grid: [{grid_lo!r}, {grid_hi!r}] step {step!r}")
    if not grid_lo > 1:
        raise ValidationError(f"grid_lo must exceed 1, got {grid_lo!r}")
    count = int(math.floor((grid_hi - grid_lo) / step + 1e-9)) + 1
    grid = grid_lo + step * np.arange(count)
    cells = d_min * grid * math.log(R) / np.log(grid)
    index = int(np.argmin(cells))
    return RhoScan(
        rho=float(grid[index]),
        cells=float(cells[index]),
        at_boundary=index in (0, count - 1),
    )


@dataclass(frozen=True)
class EconomyModel:
    """Stack of m grid modules with periods and firing-field diameters.

    ratio is the common period ratio r (with the first-layer convention
    r = periods[0] / field_diameters[0]); rho = r**n is the volumetric
    ratio and resolution = (periods[-1] / field_diameters[0])**n.
    """

    n: int
    m: int
    periods: tuple
    field_diameters: tuple
    ratio: float
    min_cells_per_location: int = 1

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValidationError("n and m must be positive")
        if len(self.periods) != self.m or len(self.field_diameters) != self.m:
            raise ValidationError("periods and field_diameters must have length m")
        if any(p <= 0 for p in self.periods) or any(l <= 0 for l in self.field_diameters):
            raise ValidationError("periods and field diameters must be positive")
        if any(b <= a for a, b in zip(self.periods, self.periods[1:])):
            raise ValidationError("periods must be strictly increasing")
        # Disambiguation: a field no wider than the previous period keeps
        # location readout unique within the next module.
        for i in range(1, self.m):
            if self.field_diameters[i] > self.periods[i - 1] * (1 + 1e-12):
                raise ValidationError(
                    f"field diameter {i + 1} exceeds period {i}: ambiguous readout")

    @property
    def rho(self) -> float:
        return self.ratio**self.n

    @property
    def resolution(self) -> float:
        return (self.periods[-1] / self.field_diameters[0]) ** self.n

    @property
    def cells(self) -> float:
        return cell_count(self.rho, self.resolution, self.min_cells_per_location)


def geometric_economy_model(
    n: int, m: int, ratio: float, l1: float = 1.0, min_cells_per_location: int = 1
) -> EconomyModel:
    """Constant-ratio module stack: periods l1*r**i, field diameters equal to
    the previous period, saturating the disambiguation constraint so that
    resolution = rho**m exactly."""
    if not ratio > 1:
        raise ValidationError(f"ratio must exceed 1, got {ratio!r}")
    if not l1 > 0:
        raise ValidationError(f"l1 must be positive, got {l1!r}")
    periods = tuple(l1 * ratio**i for i in range(1, m + 1))
    diameters = tuple(l1 * ratio ** (i - 1) for i in range(1, m + 1))
    return EconomyModel(
        n=n,
        m=m,
        periods=periods,
        field_diameters=diameters,
        ratio=ratio,
        min_cells_per_location=min_cells_per_location,
    )
