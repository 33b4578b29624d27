"""Simplex-structured Fourier positional embeddings for n-dimensional space."""

from .attention import (
    METHODS,
    AttentionStats,
    RandomTableConfig,
    ShiftGeneralizationReport,
    TokenSet,
    attention_distance,
    attention_entropy,
    attention_matrix,
    attention_stats,
    encoder_method,
    encoder_scores,
    random_table_features,
    shift_generalization_experiment,
)
from .baselines import (
    KINDS,
    BaselineConfig,
    axial_pair_vectors,
    axial_rope_rotate,
    mixed_pair_vectors,
    mixed_rope_rotate,
    sinusoidal_encode,
    sinusoidal_encode_batch,
)
from .embedding import (
    IDENTITY_PAIR,
    ContentVector,
    FeatureMap,
    GridPEConfig,
    WaveVectorBank,
    apply_rotation,
    build_bank,
    build_head_banks,
    cosine_features,
    feature_map,
    feature_map_batch,
    phase,
    relative_score,
    rotate_batch,
    rotate_pairs,
)
from .errors import ValidationError
from .kernel import (
    KernelEstimate,
    VcoParams,
    grid_activation,
    grid_activation_batch,
    kernel_curve,
    lattice_vector,
    path_displacement,
    raster,
    shift_kernel,
    shift_kernel_batch,
    simplex_wave_vectors,
    uniform_wave_vectors,
    vco_phase_along_path,
)
from .rng import seeded_rng
from .scales import (
    EconomyModel,
    RhoScan,
    ScaleSchedule,
    bases_per_scale,
    cell_count,
    default_base,
    geometric_economy_model,
    make_schedule,
    max_base,
    optimal_ratio,
    optimal_rho_bruteforce,
)
from .simplex import (
    SimplexFrame,
    oriented_directions,
    project_to_hyperplane,
    random_rotation,
    simplex_directions,
    standard_simplex_vertices,
)
from .verify import VerifyCheck, VerifyReport, run_verify

__all__ = [
    "AttentionStats",
    "BaselineConfig",
    "ContentVector",
    "EconomyModel",
    "FeatureMap",
    "GridPEConfig",
    "IDENTITY_PAIR",
    "KINDS",
    "KernelEstimate",
    "METHODS",
    "RandomTableConfig",
    "RhoScan",
    "ScaleSchedule",
    "ShiftGeneralizationReport",
    "SimplexFrame",
    "TokenSet",
    "ValidationError",
    "VcoParams",
    "VerifyCheck",
    "VerifyReport",
    "WaveVectorBank",
    "apply_rotation",
    "attention_distance",
    "attention_entropy",
    "attention_matrix",
    "attention_stats",
    "axial_pair_vectors",
    "axial_rope_rotate",
    "bases_per_scale",
    "build_bank",
    "build_head_banks",
    "cell_count",
    "cosine_features",
    "default_base",
    "encoder_method",
    "encoder_scores",
    "feature_map",
    "feature_map_batch",
    "geometric_economy_model",
    "grid_activation",
    "grid_activation_batch",
    "kernel_curve",
    "lattice_vector",
    "make_schedule",
    "max_base",
    "mixed_pair_vectors",
    "mixed_rope_rotate",
    "optimal_ratio",
    "optimal_rho_bruteforce",
    "oriented_directions",
    "path_displacement",
    "phase",
    "project_to_hyperplane",
    "random_rotation",
    "random_table_features",
    "raster",
    "relative_score",
    "rotate_batch",
    "rotate_pairs",
    "run_verify",
    "seeded_rng",
    "shift_generalization_experiment",
    "shift_kernel",
    "shift_kernel_batch",
    "simplex_directions",
    "simplex_wave_vectors",
    "sinusoidal_encode",
    "sinusoidal_encode_batch",
    "standard_simplex_vertices",
    "uniform_wave_vectors",
    "vco_phase_along_path",
]

__version__ = "0.1.0"
