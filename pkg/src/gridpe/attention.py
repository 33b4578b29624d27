"""Desk-scale attention harness over interchangeable positional encoders.

Single layer, single head: token contents serve as both queries and keys,
an encoder injects position (rotary methods rotate the contents, additive
methods add a feature vector), and scaled dot-product attention with a
stable softmax produces the row-stochastic matrix the diagnostics read.

The shift-generalization experiment plants a distinguished key, translates
the whole token set, and checks whether the query's argmax target moves.
Shift-invariant encoders preserve it by construction; the untrained
random-table stand-in loses it once shifts leave its declared grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .baselines import (
    BaselineConfig,
    axial_pair_vectors,
    mixed_pair_vectors,
    sinusoidal_encode_batch,
)
from .embedding import GridPEConfig, build_bank, rotate_pairs
from .errors import ValidationError
from .rng import seeded_rng

METHODS = ("gridpe", "rope_axial", "rope_mixed", "sinusoidal", "random_table")

_MAX_TABLE_ENTRIES = 10**7


@dataclass(frozen=True)
class TokenSet:
    """Positions and contents of one token batch."""

    positions: np.ndarray
    contents: np.ndarray

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=np.float64)
        contents = np.asarray(self.contents, dtype=np.float64)
        if positions.ndim != 2 or contents.ndim != 2:
            raise ValidationError("positions and contents must be matrices")
        if positions.shape[0] != contents.shape[0] or positions.shape[0] < 1:
            raise ValidationError(
                f"need one content row per position, got {positions.shape} vs {contents.shape}")
        if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(contents))):
            raise ValidationError("positions and contents must be finite")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "contents", contents)

    @property
    def size(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class AttentionStats:
    """Row-averaged diagnostics of one attention matrix."""

    mean_distance: float
    mean_entropy: float

    def __post_init__(self):
        if self.mean_distance < 0 or self.mean_entropy < -1e-12:
            raise ValidationError("attention stats must be non-negative")


@dataclass(frozen=True)
class RandomTableConfig:
    """Untrained stand-in for a learned position table.

    One seeded Gaussian row per point of a declared axis-uniform grid;
    positions are looked up by nearest grid point, clamped at the edges,
    so anything outside the grid collapses onto its border.
    """

    n: int
    head_dim: int
    grid_min: float
    grid_max: float
    grid_points: int
    seed: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if self.n < 1 or self.head_dim < 1:
            raise ValidationError("n and head_dim must be positive")
        if self.grid_points < 2:
            raise ValidationError(f"grid_points must be at least 2, got {self.grid_points!r}")
        if not self.grid_max > self.grid_min:
            raise ValidationError("grid_max must exceed grid_min")
        if self.grid_points**self.n > _MAX_TABLE_ENTRIES:
            raise ValidationError(f"table would exceed {_MAX_TABLE_ENTRIES} entries")
        if not self.scale > 0:
            raise ValidationError("scale must be positive")


@dataclass(frozen=True)
class ShiftGeneralizationReport:
    """Aggregated experiment outcome for one encoder."""

    method: str
    num_trials: int
    preservation_rate: float
    mean_distance: float
    mean_entropy: float


def random_table_features(positions, cfg: RandomTableConfig) -> np.ndarray:
    """Table rows for a batch of positions via clamped nearest-grid lookup."""
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != cfg.n:
        raise ValidationError(f"positions must be (batch, {cfg.n}), got {positions.shape}")
    step = (cfg.grid_max - cfg.grid_min) / (cfg.grid_points - 1)
    indices = np.rint((positions - cfg.grid_min) / step).astype(np.int64)
    indices = np.clip(indices, 0, cfg.grid_points - 1)
    flat = np.ravel_multi_index(tuple(indices.T), (cfg.grid_points,) * cfg.n)
    table = cfg.scale * seeded_rng(cfg.seed).standard_normal(
        (cfg.grid_points**cfg.n, cfg.head_dim))
    return table[flat]


def encoder_method(cfg) -> str:
    """Method name an encoder config belongs to."""
    if isinstance(cfg, GridPEConfig):
        return "gridpe"
    if isinstance(cfg, BaselineConfig):
        return cfg.kind
    if isinstance(cfg, RandomTableConfig):
        return "random_table"
    raise ValidationError(f"unrecognized encoder config {type(cfg).__name__}")


def encoder_scores(tokens: TokenSet, method: str, cfg) -> np.ndarray:
    """Raw score matrix: entry (i, j) is the encoded query i dotted with the
    encoded key j.  Contents play both roles in this harness."""
    _check_method(tokens, method, cfg)
    if method in ("gridpe", "rope_axial", "rope_mixed"):
        if method == "gridpe":
            pair_vectors = build_bank(cfg).pair_vectors
        elif method == "rope_axial":
            pair_vectors = axial_pair_vectors(cfg)
        else:
            pair_vectors = mixed_pair_vectors(cfg)
        rotated = rotate_pairs(tokens.contents, tokens.positions, pair_vectors)
        return rotated @ rotated.T
    if method == "sinusoidal":
        augmented = tokens.contents + sinusoidal_encode_batch(tokens.positions, cfg)
    else:
        augmented = tokens.contents + random_table_features(tokens.positions, cfg)
    return augmented @ augmented.T


def attention_matrix(tokens: TokenSet, method: str, cfg, temperature: float | None = None) -> np.ndarray:
    """Row-stochastic attention: softmax of scores over keys, per query.

    ``temperature`` defaults to sqrt(head_dim); the row maximum is
    subtracted before exponentiation so large scores stay finite.
    """
    if temperature is None:
        temperature = math.sqrt(tokens.contents.shape[1])
    if not temperature > 0:
        raise ValidationError(f"temperature must be positive, got {temperature!r}")
    # Overflow is detected and reported below, not left as a warning.
    with np.errstate(over="ignore", invalid="ignore"):
        scores = encoder_scores(tokens, method, cfg)
    finite = np.isfinite(scores)
    if not finite.all():
        bad = np.argwhere(~finite)[0]
        finite_max = np.abs(scores[finite]).max() if finite.any() else float("nan")
        raise ValidationError(
            f"non-finite attention score at {tuple(bad)} for method {method}; "
            f"finite max |score| = {finite_max:.3e}")
    z = scores / temperature
    z = z - z.max(axis=1, keepdims=True)
    weights = np.exp(z)
    return weights / weights.sum(axis=1, keepdims=True)


def attention_distance(A, positions) -> float:
    """Mean over queries of the attention-weighted distance to their keys."""
    A = np.asarray(A, dtype=np.float64)
    positions = np.asarray(positions, dtype=np.float64)
    T = A.shape[0]
    if A.shape != (T, T) or positions.ndim != 2 or positions.shape[0] != T:
        raise ValidationError(f"shape mismatch: A {A.shape} vs positions {positions.shape}")
    gaps = positions[:, None, :] - positions[None, :, :]
    distances = np.sqrt((gaps**2).sum(-1))
    return float(np.mean((A * distances).sum(axis=1)))


def attention_entropy(A) -> float:
    """Mean over rows of the Shannon entropy, with 0 * ln 0 = 0."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"A must be square, got {A.shape}")
    if np.any(A < 0):
        raise ValidationError("attention weights must be non-negative")
    terms = np.zeros_like(A)
    mask = A > 0
    terms[mask] = A[mask] * np.log(A[mask])
    return float(np.mean(-terms.sum(axis=1)))


def attention_stats(A, positions) -> AttentionStats:
    return AttentionStats(
        mean_distance=attention_distance(A, positions),
        mean_entropy=attention_entropy(A),
    )


def shift_generalization_experiment(
    cfg,
    grid_size: int,
    num_trials: int,
    shift_range: float,
    seed: int,
    num_tokens: int | None = None,
) -> ShiftGeneralizationReport:
    """Planted-argmax translation test.

    Each trial samples distinct token positions from the integer grid
    {0..grid_size-1}^n, plants contents[target] = 2 * contents[0], records
    query 0's argmax key, then translates every position by one uniform
    draw from [-shift_range, shift_range]^n and checks the argmax again.
    """
    method = encoder_method(cfg)
    n = cfg.n
    head_dim = cfg.head_dim
    if grid_size < 2:
        raise ValidationError(f"degenerate grid: grid_size must be at least 2, got {grid_size!r}")
    capacity = grid_size**n
    if num_tokens is None:
        num_tokens = min(capacity, 16)
    if num_tokens < 2:
        raise ValidationError(f"need at least 2 tokens, got {num_tokens!r}")
    if num_tokens > capacity:
        raise ValidationError(
            f"degenerate grid: {num_tokens} tokens exceed {capacity} grid points")
    if num_trials < 1:
        raise ValidationError(f"num_trials must be positive, got {num_trials!r}")
    if shift_range < 0:
        raise ValidationError(f"shift_range must be non-negative, got {shift_range!r}")

    preserved = 0
    distances = np.empty(num_trials)
    entropies = np.empty(num_trials)
    for trial in range(num_trials):
        rng = seeded_rng(seed, trial)
        flat = rng.choice(capacity, size=num_tokens, replace=False)
        positions = np.column_stack(np.unravel_index(flat, (grid_size,) * n)).astype(np.float64)
        contents = rng.standard_normal((num_tokens, head_dim))
        target = int(rng.integers(1, num_tokens))
        contents[target] = 2.0 * contents[0]
        tokens = TokenSet(positions, contents)
        A = attention_matrix(tokens, method, cfg)
        base_argmax = int(np.argmax(A[0]))
        shift = rng.uniform(-shift_range, shift_range, size=n)
        shifted = attention_matrix(TokenSet(positions + shift, contents), method, cfg)
        preserved += int(np.argmax(shifted[0]) == base_argmax)
        stats = attention_stats(A, positions)
        distances[trial] = stats.mean_distance
        entropies[trial] = stats.mean_entropy
    return ShiftGeneralizationReport(
        method=method,
        num_trials=num_trials,
        preservation_rate=preserved / num_trials,
        mean_distance=float(distances.mean()),
        mean_entropy=float(entropies.mean()),
    )


def _check_method(tokens: TokenSet, method: str, cfg) -> None:
    if method not in METHODS:
        raise ValidationError(f"method must be one of {METHODS}, got {method!r}")
    if encoder_method(cfg) != method:
        raise ValidationError(
            f"config {type(cfg).__name__} does not implement method {method!r}")
    if tokens.positions.shape[1] != cfg.n:
        raise ValidationError(
            f"positions have {tokens.positions.shape[1]} coordinates, config expects {cfg.n}")
    if tokens.contents.shape[1] != cfg.head_dim:
        raise ValidationError(
            f"contents have width {tokens.contents.shape[1]}, config expects {cfg.head_dim}")
