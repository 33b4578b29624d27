"""Multi-scale wave-vector banks and blockwise rotary application.

A bank pairs each 2-wide slice of a head with one wave vector: the slice is
rotated by the angle obtained by projecting the token position onto that
vector.  Wave vectors come in scales; each scale contributes M simplex
directions sharing one magnitude from the geometric schedule.  Inner
products of rotated queries and keys then depend only on the displacement
between the two positions.

All angle computations accumulate coordinate products strictly left to
right with elementwise operations only.  That makes every row of a batch
bitwise independent of the batch size, which the bindings layer's exact
single-versus-batch equivalence contract relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .rng import seeded_rng
from .scales import bases_per_scale, default_base, make_schedule
from .simplex import random_rotation, simplex_directions

# Layout entry for dimension pairs that no wave vector owns; such pairs
# pass through every rotation unchanged.
IDENTITY_PAIR = (-1, -1)


@dataclass(frozen=True)
class GridPEConfig:
    """Bank shape: spatial dimension, head width, and schedule knobs.

    ``base`` defaults to 10000 capped by the economy bound; ``scales_per_head``
    defaults to every scale the head width admits.  ``seed`` only matters for
    ``direction_mode="random"``, where each scale gets an independent seeded
    rotation of the simplex frame.
    """

    n: int
    head_dim: int
    num_heads: int = 1
    scales_per_head: int | None = None
    base: float | None = None
    direction_mode: str = "fixed"
    seed: int = 0

    def __post_init__(self):
        def positive_int(value, name):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")

        positive_int(self.n, "n")
        positive_int(self.head_dim, "head_dim")
        positive_int(self.num_heads, "num_heads")
        if self.head_dim % 2:
            raise ValidationError(f"head_dim must be even, got {self.head_dim}")
        M = bases_per_scale(self.n)
        if self.head_dim < 2 * M:
            raise ValidationError(
                f"head_dim {self.head_dim} holds no full scale: need at least {2 * M}")
        if self.scales_per_head is not None:
            positive_int(self.scales_per_head, "scales_per_head")
            if self.scales_per_head > self.num_scales:
                raise ValidationError(
                    f"scales_per_head {self.scales_per_head} exceeds the "
                    f"{self.num_scales} scales head_dim admits")
        if self.base is not None and not self.base > 1:
            raise ValidationError(f"base must exceed 1, got {self.base!r}")
        if self.direction_mode not in ("fixed", "random"):
            raise ValidationError(
                f"direction_mode must be 'fixed' or 'random', got {self.direction_mode!r}")
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise ValidationError(f"seed must be an integer, got {self.seed!r}")

    @property
    def bases(self) -> int:
        """Wave vectors per scale (M)."""
        return bases_per_scale(self.n)

    @property
    def num_scales(self) -> int:
        """Scales the head width admits (S)."""
        return self.head_dim // (2 * self.bases)

    @property
    def effective_base(self) -> float:
        return default_base(self.head_dim, self.bases, self.n) if self.base is None else float(self.base)

    @property
    def effective_scales_per_head(self) -> int:
        return self.num_scales if self.scales_per_head is None else self.scales_per_head


@dataclass(frozen=True)
class WaveVectorBank:
    """Immutable wave-vector set for one head.

    ``vectors`` stacks the owned scales in scale-major, direction-minor
    order; ``layout`` maps each dimension pair to its (scale, direction) or
    to :data:`IDENTITY_PAIR`; ``pair_vectors`` is the per-pair wave vector
    with zero rows for identity pairs, the form rotations consume directly.
    """

    config: GridPEConfig
    vectors: np.ndarray
    layout: tuple
    pair_vectors: np.ndarray
    head_index: int = 0

    @property
    def num_pairs(self) -> int:
        return self.config.head_dim // 2


@dataclass(frozen=True)
class FeatureMap:
    """Interleaved (cos, sin) phase features of one position."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_vector(self.values))


@dataclass(frozen=True)
class ContentVector:
    """Query or key content occupying one head."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_vector(self.values))


def build_bank(config: GridPEConfig) -> WaveVectorBank:
    """Bank for head 0; equal to build_head_banks(config)[0]."""
    return _build_for_head(config, 0)


def build_head_banks(config: GridPEConfig) -> tuple:
    """One bank per head; head h owns a contiguous block of scales starting
    at (h * scales_per_head) mod S, wrapping round robin."""
    return tuple(_build_for_head(config, h) for h in range(config.num_heads))


def phase(x, row) -> float:
    """Projection of position x onto one wave-vector row."""
    x = np.asarray(x, dtype=np.float64)
    row = np.asarray(row, dtype=np.float64)
    if x.ndim != 1 or row.ndim != 1 or x.shape != row.shape:
        raise ValidationError(
            f"dimension mismatch: position has shape {x.shape}, row has shape {row.shape}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("positions must be finite")
    return float(_dot_angles(x[None, :], row[None, :])[0, 0])


def feature_map(x, bank: WaveVectorBank) -> FeatureMap:
    """Cosine/sine features of one position: values[2k] = cos(w_k . x),
    values[2k+1] = sin(w_k . x) over the bank rows."""
    return FeatureMap(feature_map_batch(np.atleast_1d(np.asarray(x, dtype=np.float64))[None, :], bank)[0])


def feature_map_batch(positions, bank: WaveVectorBank) -> np.ndarray:
    """Feature maps for a batch of positions, one row per position."""
    positions = _position_matrix(positions, bank.config.n)
    return cosine_features(positions, bank.vectors)


def cosine_features(positions, vectors) -> np.ndarray:
    """Interleaved (cos, sin) of every position-vector phase: (B, 2K)."""
    positions = _position_matrix(positions, vectors.shape[1])
    angles = _dot_angles(positions, vectors)
    out = np.empty((positions.shape[0], 2 * vectors.shape[0]))
    out[:, 0::2] = np.cos(angles)
    out[:, 1::2] = np.sin(angles)
    return out


def apply_rotation(v, x, bank: WaveVectorBank) -> ContentVector:
    """Rotate each dimension pair of v by its wave vector's phase at x.

    Shares the batch code path, so a single call is bitwise identical to
    the corresponding row of :func:`rotate_batch`.
    """
    values = v.values if isinstance(v, ContentVector) else np.asarray(v, dtype=np.float64)
    if values.ndim != 1:
        raise ValidationError(f"content must be a vector, got shape {values.shape}")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    rotated = rotate_batch(values[None, :], x[None, :], bank)
    return ContentVector(rotated[0])


def rotate_batch(contents, positions, bank: WaveVectorBank) -> np.ndarray:
    """Apply per-pair rotations to a batch: row b of the result is row b of
    ``contents`` rotated at row b of ``positions``.

    Identity pairs carry a zero wave vector, so their angle is exactly zero
    and the pair passes through bit for bit.
    """
    contents = np.asarray(contents, dtype=np.float64)
    positions = _position_matrix(positions, bank.config.n)
    if contents.ndim != 2 or contents.shape[1] != bank.config.head_dim:
        raise ValidationError(
            f"contents must be (batch, {bank.config.head_dim}), got {contents.shape}")
    if contents.shape[0] != positions.shape[0]:
        raise ValidationError(
            f"batch mismatch: {contents.shape[0]} contents vs {positions.shape[0]} positions")
    return rotate_pairs(contents, positions, bank.pair_vectors)


def rotate_pairs(contents, positions, pair_vectors) -> np.ndarray:
    """Rotation engine under :func:`rotate_batch`, for arbitrary per-pair
    wave vectors: pair p of row b turns by positions[b] . pair_vectors[p]."""
    contents = np.asarray(contents, dtype=np.float64)
    positions = _position_matrix(positions, pair_vectors.shape[1])
    if contents.ndim != 2 or contents.shape[1] != 2 * pair_vectors.shape[0]:
        raise ValidationError(
            f"contents must be (batch, {2 * pair_vectors.shape[0]}), got {contents.shape}")
    if contents.shape[0] != positions.shape[0]:
        raise ValidationError(
            f"batch mismatch: {contents.shape[0]} contents vs {positions.shape[0]} positions")
    angles = _dot_angles(positions, pair_vectors)
    cos = np.cos(angles)
    sin = np.sin(angles)
    even = contents[:, 0::2]
    odd = contents[:, 1::2]
    out = np.empty_like(contents)
    out[:, 0::2] = even * cos - odd * sin
    out[:, 1::2] = even * sin + odd * cos
    return out


def relative_score(q, k, x1, x2, bank: WaveVectorBank) -> float:
    """Dot product of q rotated at x1 with k rotated at x2; depends only on
    x1 - x2 for fixed contents."""
    rotated_q = apply_rotation(q, x1, bank).values
    rotated_k = apply_rotation(k, x2, bank).values
    return float(np.dot(rotated_q, rotated_k))


def _build_for_head(config: GridPEConfig, head_index: int) -> WaveVectorBank:
    if not 0 <= head_index < config.num_heads:
        raise ValidationError(f"head_index {head_index} outside 0..{config.num_heads - 1}")
    M = config.bases
    S = config.num_scales
    schedule = make_schedule(config.effective_base, config.head_dim, M)
    directions = _scale_directions(config)
    start = (head_index * config.effective_scales_per_head) % S
    owned = [(start + j) % S for j in range(config.effective_scales_per_head)]
    vectors = np.concatenate([schedule.magnitudes[s] * directions[s] for s in owned])
    layout = tuple((s, i) for s in owned for i in range(M))
    num_pairs = config.head_dim // 2
    layout = layout + (IDENTITY_PAIR,) * (num_pairs - len(layout))
    pair_vectors = np.zeros((num_pairs, config.n))
    pair_vectors[: vectors.shape[0]] = vectors
    vectors.flags.writeable = False
    pair_vectors.flags.writeable = False
    return WaveVectorBank(
        config=config,
        vectors=vectors,
        layout=layout,
        pair_vectors=pair_vectors,
        head_index=head_index,
    )


def _scale_directions(config: GridPEConfig) -> np.ndarray:
    """Unit direction rows per scale, shape (S, M, n).

    In 1-D the frame's second vertex is the negation of the first, so a
    single +1 direction suffices.  Random mode rotates the fixed frame once
    per scale, keyed by the (seed, scale index) substream.
    """
    fixed = np.array([[1.0]]) if config.n == 1 else simplex_directions(config.n)
    S = config.num_scales
    if config.direction_mode == "fixed":
        return np.stack([fixed] * S)
    return np.stack(
        [fixed @ random_rotation(config.n, seeded_rng(config.seed, s)) for s in range(S)])


def _dot_angles(positions: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """angles[b, k] = positions[b] . vectors[k], accumulated left to right.

    No reductions: each coordinate product is added in a fixed order with
    elementwise operations, so results never depend on the batch size.
    """
    acc = positions[:, [0]] * vectors[:, 0]
    for k in range(1, vectors.shape[1]):
        acc = acc + positions[:, [k]] * vectors[:, k]
    return acc


def _position_matrix(positions, n) -> np.ndarray:
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2:
        raise ValidationError(f"positions must be (batch, n), got shape {positions.shape}")
    if n is not None and positions.shape[1] != n:
        raise ValidationError(
            f"dimension mismatch: positions have {positions.shape[1]} coordinates, bank has {n}")
    if not np.all(np.isfinite(positions)):
        raise ValidationError("positions must be finite")
    return positions


def _frozen_vector(values) -> np.ndarray:
    values = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
    if values.ndim != 1:
        raise ValidationError(f"expected a flat vector, got shape {values.shape}")
    values.flags.writeable = False
    return values
