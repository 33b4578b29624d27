import numpy as np
import pytest

from gridpe import ValidationError
from gridpe.baselines import (
    BaselineConfig,
    axial_pair_vectors,
    axial_rope_rotate,
    mixed_pair_vectors,
    mixed_rope_rotate,
    sinusoidal_encode,
    sinusoidal_encode_batch,
)
from gridpe.embedding import rotate_pairs

from rope_reference import rope_rotate


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="learned", n=2, head_dim=8),
        dict(kind="sinusoidal", n=0, head_dim=8),
        dict(kind="sinusoidal", n=2, head_dim=7),
        dict(kind="rope_axial", n=3, head_dim=4),
        dict(kind="rope_mixed", n=2, head_dim=8, base=1.0),
    ],
)
def test_config_rejected(kwargs):
    with pytest.raises(ValidationError):
        BaselineConfig(**kwargs)


def test_axial_vectors_are_axis_aligned():
    cfg = BaselineConfig(kind="rope_axial", n=3, head_dim=64)
    vectors = axial_pair_vectors(cfg)
    assert vectors.shape == (32, 3)
    assert cfg.pairs_per_axis == 10
    active = vectors[:30]
    assert np.all(np.sum(active != 0, axis=1) == 1)
    assert np.array_equal(vectors[30:], np.zeros((2, 3)))
    for axis in range(3):
        ladder = active[axis * 10 : (axis + 1) * 10, axis]
        assert ladder[0] == 1.0
        assert np.all(np.diff(ladder) < 0)


def test_axial_n1_matches_standard_rope():
    cfg = BaselineConfig(kind="rope_axial", n=1, head_dim=32, base=10000.0)
    rng = np.random.default_rng(0)
    for _ in range(25):
        v = rng.normal(size=32)
        x = rng.normal(scale=10.0)
        ours = axial_rope_rotate(v, np.array([x]), cfg).values
        assert np.max(np.abs(ours - rope_rotate(v, x, 10000.0))) < 1e-12


def test_axial_axis_separation_is_bitwise():
    cfg = BaselineConfig(kind="rope_axial", n=2, head_dim=16)
    rng = np.random.default_rng(1)
    v = rng.normal(size=16)
    group = cfg.pairs_per_axis
    moved = axial_rope_rotate(v, np.array([3.7, 0.0]), cfg).values
    assert not np.array_equal(moved[: 2 * group], v[: 2 * group])
    assert np.array_equal(moved[2 * group :], v[2 * group :])


@pytest.mark.parametrize("kind", ["rope_axial", "rope_mixed"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_rotary_baselines_shift_invariant(kind, n):
    cfg = BaselineConfig(kind=kind, n=n, head_dim=64, seed=4)
    rotate = axial_rope_rotate if kind == "rope_axial" else mixed_rope_rotate
    rng = np.random.default_rng(2)
    for _ in range(40):
        q, k = rng.normal(size=64), rng.normal(size=64)
        x1, x2 = rng.normal(scale=10.0, size=n), rng.normal(scale=10.0, size=n)
        t = rng.normal(size=n)
        t *= rng.uniform(0, 100) / max(np.linalg.norm(t), 1e-12)
        base = np.dot(rotate(q, x1, cfg).values, rotate(k, x2, cfg).values)
        shifted = np.dot(rotate(q, x1 + t, cfg).values, rotate(k, x2 + t, cfg).values)
        assert abs(shifted - base) < 1e-8


def test_mixed_vectors_deterministic_and_on_schedule():
    cfg = BaselineConfig(kind="rope_mixed", n=3, head_dim=64, seed=9)
    a = mixed_pair_vectors(cfg)
    b = mixed_pair_vectors(cfg)
    assert np.array_equal(a, b)
    assert a.shape == (32, 3)
    norms = np.linalg.norm(a, axis=1)
    expected = np.array([10000.0 ** (-2.0 * p / 64) for p in range(32)])
    assert np.max(np.abs(norms - expected)) < 1e-12
    other = mixed_pair_vectors(BaselineConfig(kind="rope_mixed", n=3, head_dim=64, seed=10))
    assert not np.array_equal(a, other)


def test_mixed_n1_positive_directions_match_rope():
    cfg = BaselineConfig(kind="rope_mixed", n=1, head_dim=32, seed=5)
    vectors = np.abs(mixed_pair_vectors(cfg))
    rng = np.random.default_rng(3)
    for _ in range(25):
        v = rng.normal(size=32)
        x = rng.normal(scale=10.0)
        ours = rotate_pairs(v[None, :], np.array([[x]]), vectors)[0]
        assert np.max(np.abs(ours - rope_rotate(v, x, 10000.0))) < 1e-12


def test_sinusoidal_at_origin():
    cfg = BaselineConfig(kind="sinusoidal", n=2, head_dim=12)
    features = sinusoidal_encode(np.zeros(2), cfg)
    assert np.array_equal(features[0::2], np.zeros(6))
    assert np.array_equal(features[1::2], np.ones(6))


def test_sinusoidal_1d_direct_values():
    cfg = BaselineConfig(kind="sinusoidal", n=1, head_dim=4, base=10000.0)
    features = sinusoidal_encode(np.array([1.0]), cfg)
    expected = np.array([np.sin(1.0), np.cos(1.0), np.sin(1e-2), np.cos(1e-2)])
    assert np.max(np.abs(features - expected)) < 1e-15


def test_sinusoidal_axis_permutation():
    cfg = BaselineConfig(kind="sinusoidal", n=2, head_dim=8)
    a = sinusoidal_encode(np.array([1.3, -0.4]), cfg)
    b = sinusoidal_encode(np.array([-0.4, 1.3]), cfg)
    assert np.array_equal(a[:4], b[4:])
    assert np.array_equal(a[4:], b[:4])


def test_sinusoidal_leftover_dims_zero():
    cfg = BaselineConfig(kind="sinusoidal", n=3, head_dim=64)
    features = sinusoidal_encode_batch(np.random.default_rng(4).normal(size=(5, 3)), cfg)
    assert features.shape == (5, 64)
    assert np.array_equal(features[:, 60:], np.zeros((5, 4)))


def test_kind_mismatch_rejected():
    cfg = BaselineConfig(kind="sinusoidal", n=2, head_dim=8)
    with pytest.raises(ValidationError):
        axial_pair_vectors(cfg)
    with pytest.raises(ValidationError):
        mixed_pair_vectors(cfg)
    with pytest.raises(ValidationError):
        sinusoidal_encode(np.zeros(2), BaselineConfig(kind="rope_axial", n=2, head_dim=8))
