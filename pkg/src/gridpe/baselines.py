"""Reference positional encoders the main method is compared against.

Three desk-scale baselines: classical sinusoidal absolute features, axial
rotary (independent 1-D rotary per coordinate axis), and mixed rotary (one
arbitrary-direction wave vector per dimension pair).  The rotary pair goes
through the exact rotation engine the main embedding uses, so the shared
shift-invariance oracle applies verbatim.

Axial divisibility policy: the head splits into n equal groups of
floor(head_dim / (2n)) dimension pairs, one group per axis, and any pairs
beyond them pass through unrotated.  Widths that are not exact multiples of
2n are therefore accepted as long as every axis gets at least one pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import ContentVector, cosine_features, rotate_pairs
from .errors import ValidationError
from .rng import seeded_rng
from .scales import make_schedule

KINDS = ("sinusoidal", "rope_axial", "rope_mixed")


@dataclass(frozen=True)
class BaselineConfig:
    """Shape and schedule knobs shared by all baseline encoders.

    ``seed`` only matters for rope_mixed, whose fixed random directions are
    drawn from it (they stand in for the learned directions full-scale
    training would fit).
    """

    kind: str
    n: int
    head_dim: int
    base: float = 10000.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if self.head_dim < 2 or self.head_dim % 2:
            raise ValidationError(f"head_dim must be a positive even integer, got {self.head_dim!r}")
        if self.kind == "rope_axial" and self.head_dim // 2 < self.n:
            raise ValidationError(
                f"head_dim {self.head_dim} gives some axis no dimension pair: need at least {2 * self.n}")
        if not self.base > 1:
            raise ValidationError(f"base must exceed 1, got {self.base!r}")

    @property
    def pairs_per_axis(self) -> int:
        return self.head_dim // 2 // self.n


def axial_pair_vectors(cfg: BaselineConfig) -> np.ndarray:
    """Axis-aligned wave vectors, axis-major: group a holds the 1-D ladder
    along coordinate axis a; leftover pairs get the zero vector."""
    if cfg.kind != "rope_axial":
        raise ValidationError(f"expected kind rope_axial, got {cfg.kind!r}")
    group = cfg.pairs_per_axis
    ladder = make_schedule(cfg.base, 2 * group, 1).magnitudes
    pair_vectors = np.zeros((cfg.head_dim // 2, cfg.n))
    for axis in range(cfg.n):
        pair_vectors[axis * group : (axis + 1) * group, axis] = ladder
    pair_vectors.flags.writeable = False
    return pair_vectors


def mixed_pair_vectors(cfg: BaselineConfig) -> np.ndarray:
    """One wave vector per pair: direction uniform on the sphere (seeded),
    magnitude from the 1-D ladder over all head_dim/2 pairs."""
    if cfg.kind != "rope_mixed":
        raise ValidationError(f"expected kind rope_mixed, got {cfg.kind!r}")
    magnitudes = make_schedule(cfg.base, cfg.head_dim, 1).magnitudes
    gaussian = seeded_rng(cfg.seed).standard_normal((cfg.head_dim // 2, cfg.n))
    directions = gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)
    pair_vectors = magnitudes[:, None] * directions
    pair_vectors.flags.writeable = False
    return pair_vectors


def axial_rope_rotate(v, x, cfg: BaselineConfig) -> ContentVector:
    """Rotate each axis group of v by that axis's 1-D rotary angles at x."""
    return _rotate_single(v, x, axial_pair_vectors(cfg))


def mixed_rope_rotate(v, x, cfg: BaselineConfig) -> ContentVector:
    """Rotate each pair of v by its fixed random-direction wave vector."""
    return _rotate_single(v, x, mixed_pair_vectors(cfg))


def sinusoidal_encode(x, cfg: BaselineConfig) -> np.ndarray:
    """Classical absolute features, concatenated per axis.

    Each axis owns floor(head_dim / (2n)) (sin, cos) pairs on the 1-D
    frequency ladder; leftover dimensions are zero.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return sinusoidal_encode_batch(x[None, :], cfg)[0]


def sinusoidal_encode_batch(positions, cfg: BaselineConfig) -> np.ndarray:
    if cfg.kind != "sinusoidal":
        raise ValidationError(f"expected kind sinusoidal, got {cfg.kind!r}")
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != cfg.n:
        raise ValidationError(f"positions must be (batch, {cfg.n}), got {positions.shape}")
    group = cfg.pairs_per_axis
    if group < 1:
        raise ValidationError(
            f"head_dim {cfg.head_dim} gives some axis no feature pair: need at least {2 * cfg.n}")
    ladder = make_schedule(cfg.base, 2 * group, 1).magnitudes
    out = np.zeros((positions.shape[0], cfg.head_dim))
    for axis in range(cfg.n):
        angles = positions[:, [axis]] * ladder
        block = slice(2 * axis * group, 2 * (axis + 1) * group)
        out[:, block][:, 0::2] = np.sin(angles)
        out[:, block][:, 1::2] = np.cos(angles)
    return out


def _rotate_single(v, x, pair_vectors) -> ContentVector:
    values = v.values if isinstance(v, ContentVector) else np.asarray(v, dtype=np.float64)
    if values.ndim != 1:
        raise ValidationError(f"content must be a vector, got shape {values.shape}")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return ContentVector(rotate_pairs(values[None, :], x[None, :], pair_vectors)[0])
