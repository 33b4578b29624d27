"""Operation layer shared by the command line and the HTTP service.

Each function takes plain Python data, runs the corresponding library
routine, and returns rows or dictionaries ready for the formats module.
Keeping this layer free of I/O and framework imports lets the CLI run
in process while the service exposes the same operations over HTTP.
"""

from __future__ import annotations

import numpy as np

from .attention import (
    METHODS,
    RandomTableConfig,
    shift_generalization_experiment,
)
from .baselines import (
    BaselineConfig,
    axial_pair_vectors,
    mixed_pair_vectors,
    sinusoidal_encode_batch,
)
from .embedding import GridPEConfig, build_head_banks, cosine_features, feature_map_batch
from .errors import ValidationError
from .kernel import kernel_curve, raster
from .models import BankConfigModel, BenchResponse, ScheduleResponse, VcoParamsModel
from .scales import bases_per_scale, default_base, make_schedule
from .simplex import simplex_directions
from .verify import VerifyReport, run_verify

EMBED_METHODS = ("gridpe", "rope_axial", "rope_mixed", "sinusoidal")

# Head width used by the attention benchmark; wide enough for several
# scales in every supported dimension while staying desk scale.
BENCH_HEAD_DIM = 64


def simplex_table(dim: int, mode: str = "fixed", seed: int = 0):
    """Header and rows for the simplex direction CSV.

    Rows carry a leading scale_index column (always 0 here: one frame)
    so the file shape matches multi-scale bank dumps.
    """
    directions = simplex_directions(dim, mode=mode, seed=seed)
    header = ["scale_index", "dir_index"] + [f"c{k}" for k in range(dim)]
    rows = [
        [0, i] + [float(v) for v in row]
        for i, row in enumerate(directions)
    ]
    return header, rows


def schedule_payload(dim: int, head_dim: int, base: float | None = None) -> dict:
    """Schedule summary with keys base, max_base, optimal_ratio, magnitudes."""
    # Reuse the bank config validation so bad widths name the constraint.
    config = GridPEConfig(n=dim, head_dim=head_dim, base=base)
    bases = bases_per_scale(dim)
    effective = base if base is not None else default_base(head_dim, bases, dim)
    schedule = make_schedule(effective, head_dim, bases)
    return ScheduleResponse.from_schedule(schedule, dim).model_dump()


def embed_features(config: BankConfigModel, positions, method: str = "gridpe") -> np.ndarray:
    """Feature rows for a position batch under the chosen encoder.

    gridpe concatenates every head's feature map (2 * scales * directions
    columns per head).  The rotary baselines emit interleaved cos/sin of
    their pair angles; sinusoidal emits its additive code.  Baselines use
    only n, head_dim, base, and seed from the config.
    """
    positions = np.asarray(positions, dtype=np.float64)
    if method not in EMBED_METHODS:
        raise ValidationError(f"method must be one of {EMBED_METHODS}, got {method!r}")
    if method == "gridpe":
        banks = build_head_banks(config.to_config())
        return np.hstack([feature_map_batch(positions, bank) for bank in banks])
    kwargs = {"kind": method, "n": config.n, "head_dim": config.head_dim,
              "seed": config.seed}
    if config.base is not None:
        kwargs["base"] = config.base
    cfg = BaselineConfig(**kwargs)
    if method == "sinusoidal":
        return sinusoidal_encode_batch(positions, cfg)
    vectors = axial_pair_vectors(cfg) if method == "rope_axial" else mixed_pair_vectors(cfg)
    return cosine_features(positions, vectors)


def feature_header(width: int):
    return [f"f{k}" for k in range(width)]


def pattern_grid(params: VcoParamsModel, extent, resolution: int) -> np.ndarray:
    return raster(tuple(extent), resolution, params.to_params())


def kernel_table(params: VcoParamsModel, direction, d_max: float, samples: int):
    """Header and rows for the kernel-curve CSV (columns distance, h)."""
    estimate = kernel_curve(params.to_params(), direction, d_max, samples)
    distances = np.linspace(0.0, float(d_max), int(samples))
    rows = [[float(t), float(v)] for t, v in zip(distances, estimate.values)]
    return ["distance", "h"], rows


def _bench_grid_size(n: int, tokens: int) -> int:
    size = 2
    while size ** n < tokens:
        size += 1
    return size


def bench_payload(method: str, dim: int, tokens: int, trials: int,
                  shift_range: float, seed: int = 0) -> dict:
    """Shift-generalization benchmark summary for one encoder method."""
    if method not in METHODS:
        raise ValidationError(f"method must be one of {METHODS}, got {method!r}")
    if not isinstance(tokens, (int, np.integer)) or isinstance(tokens, bool) or tokens < 2:
        raise ValidationError(f"tokens must be an integer >= 2, got {tokens!r}")
    grid_size = _bench_grid_size(dim, tokens)
    if method == "gridpe":
        cfg = GridPEConfig(n=dim, head_dim=BENCH_HEAD_DIM, seed=seed)
    elif method == "random_table":
        cfg = RandomTableConfig(
            n=dim, head_dim=BENCH_HEAD_DIM,
            grid_min=0.0, grid_max=float(grid_size - 1),
            grid_points=grid_size, seed=seed,
        )
    else:
        cfg = BaselineConfig(kind=method, n=dim, head_dim=BENCH_HEAD_DIM, seed=seed)
    report = shift_generalization_experiment(
        cfg, grid_size=grid_size, num_trials=trials,
        shift_range=shift_range, seed=seed, num_tokens=tokens,
    )
    return BenchResponse.from_report(report).model_dump()


def verify_report(dim: int, head_dim: int) -> VerifyReport:
    return run_verify(dim, head_dim)
