"""Acceptance suite: one test per shipped claim, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
pass/fail lines.  Every test re-derives its expectations from independent
oracles (closed forms, the standalone RoPE reference, the plain-numpy
raster analyzer) rather than from package internals, and asserts its own
wall-clock budget.
"""

import contextlib
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from raster_oracle import interior_mask, local_peaks, neighbor_distances, refine_peaks
from rope_reference import rope_rotate

from gridpe import (
    BaselineConfig,
    GridPEConfig,
    RandomTableConfig,
    VcoParams,
    axial_rope_rotate,
    bases_per_scale,
    build_bank,
    kernel_curve,
    make_schedule,
    max_base,
    mixed_rope_rotate,
    optimal_rho_bruteforce,
    project_to_hyperplane,
    raster,
    relative_score,
    rotate_batch,
    seeded_rng,
    shift_generalization_experiment,
    shift_kernel,
    shift_kernel_batch,
    simplex_wave_vectors,
    standard_simplex_vertices,
    uniform_wave_vectors,
    vco_phase_along_path,
)


@contextlib.contextmanager
def criterion(number: int, label: str, limit: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\n[FAIL] criterion {number:2d}: {label}")
        raise
    elapsed = time.perf_counter() - start
    on_time = elapsed < limit
    status = "PASS" if on_time else "FAIL"
    print(f"\n[{status}] criterion {number:2d}: {label} ({elapsed:.2f}s, limit {limit:.0f}s)")
    assert on_time, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def test_criterion_01_simplex_geometry():
    with criterion(1, "simplex geometry for n=1..8", limit=1.0):
        for n in range(1, 9):
            frame = project_to_hyperplane(standard_simplex_vertices(n))
            vertices = frame.projected
            raw = frame.raw_vertices
            norms = np.linalg.norm(vertices, axis=1)
            assert np.abs(norms - norms[0]).max() <= 1e-12
            assert abs(norms[0] - math.sqrt(n / (n + 1))) <= 1e-12
            unit = vertices / norms[:, None]
            dots = unit @ unit.T
            off = dots[~np.eye(n + 1, dtype=bool)]
            assert np.abs(off + 1.0 / n).max() <= 1e-12
            assert np.abs(vertices.sum(axis=0)).max() <= 1e-12
            assert np.linalg.matrix_rank(vertices) == n
            gram_gap = np.abs(vertices @ vertices.T - raw @ raw.T).max()
            assert gram_gap <= 1e-12


def test_criterion_02_shift_invariance():
    with criterion(2, "shift invariance of rotary scores, n in {1,2,3}", limit=10.0):
        rng = seeded_rng(1002)
        head_dim = 64
        worst = 0.0
        for n in (1, 2, 3):
            bank = build_bank(GridPEConfig(n=n, head_dim=head_dim))
            axial = BaselineConfig(kind="rope_axial", n=n, head_dim=head_dim)
            mixed = BaselineConfig(kind="rope_mixed", n=n, head_dim=head_dim)
            for _ in range(1000):
                q = rng.standard_normal(head_dim)
                k = rng.standard_normal(head_dim)
                x1, x2 = rng.uniform(-10.0, 10.0, size=(2, n))
                direction = rng.standard_normal(n)
                direction /= np.linalg.norm(direction)
                t = direction * rng.uniform(0.0, 100.0)
                base = relative_score(q, k, x1, x2, bank)
                moved = relative_score(q, k, x1 + t, x2 + t, bank)
                worst = max(worst, abs(base - moved))
                for cfg, rotate in ((axial, axial_rope_rotate), (mixed, mixed_rope_rotate)):
                    base = rotate(q, x1, cfg).values @ rotate(k, x2, cfg).values
                    moved = rotate(q, x1 + t, cfg).values @ rotate(k, x2 + t, cfg).values
                    worst = max(worst, abs(base - moved))
        assert worst < 1e-8, f"worst score drift {worst:.3e}"


def test_criterion_03_one_dimensional_reduction():
    with criterion(3, "n=1 equals the independent rotary reference", limit=1.0):
        bank = build_bank(GridPEConfig(n=1, head_dim=64, base=10000.0))
        rng = seeded_rng(1003)
        for _ in range(100):
            vector = rng.standard_normal(64)
            position = float(rng.uniform(-100.0, 100.0))
            ours = rotate_batch(vector[None, :], np.array([[position]]), bank)[0]
            reference = rope_rotate(vector, position, 10000.0)
            assert np.abs(ours - reference).max() <= 1e-12


def test_criterion_04_economy_optimum():
    with criterion(4, "brute-force cell-count minimizer sits at e", limit=1.0):
        for resolution in (1e2, 1e4, 1e6):
            scan = optimal_rho_bruteforce(resolution)
            assert not scan.at_boundary
            assert abs(scan.rho - math.e) <= 0.002, (resolution, scan.rho)


def test_criterion_05_base_bound_consistency():
    with criterion(5, "schedule at the bound has ratio e^(1/n), 20 cases", limit=1.0):
        cases = [(n, d) for n in (1, 2, 3, 4) for d in (12, 24, 48, 96, 120)]
        assert len(cases) == 20
        for n, d in cases:
            m = bases_per_scale(n)
            schedule = make_schedule(max_base(d, m, n), d, m)
            assert abs(schedule.ratio - math.exp(1.0 / n)) <= 1e-12, (n, d)


def test_criterion_06_hexagonal_pattern():
    scipy_ndimage = pytest.importorskip("scipy.ndimage")
    with criterion(6, "512^2 interference raster is hexagonal", limit=30.0):
        extent = (-20.3, 19.7, -20.7, 19.3)
        res = 512
        params = VcoParams(baseline_freq=0.0, gain=1.0,
                           wave_vectors=simplex_wave_vectors(2),
                           coefficients=np.ones(3))
        grid = raster(extent, res, params)

        peaks = refine_peaks(grid, local_peaks(grid))
        assert len(peaks) >= 12
        median_nn = float(np.median(neighbor_distances(peaks, 1)))
        deep = interior_mask(peaks, grid.shape, margin=1.3 * median_nn)
        assert deep.sum() >= 3
        six = neighbor_distances(peaks, 6)[deep]
        spread = (six.max() - six.min()) / six.mean()
        assert spread < 0.05, f"six-neighbor distance spread {spread:.4f}"

        # 60 degree rotation about the central peak (the origin), compared
        # by cubic resampling of the raster itself.
        a, b, c, d = extent
        dx, dy = (b - a) / res, (d - c) / res
        xs = a + (np.arange(res) + 0.5) * dx
        ys = c + (np.arange(res) + 0.5) * dy
        X, Y = np.meshgrid(xs, ys)
        angle = math.pi / 3.0
        RX = math.cos(angle) * X - math.sin(angle) * Y
        RY = math.sin(angle) * X + math.cos(angle) * Y
        cols = (RX - a) / dx - 0.5
        rows = (RY - c) / dy - 0.5
        valid = (rows >= 2) & (rows <= res - 3) & (cols >= 2) & (cols <= res - 3)
        turned = scipy_ndimage.map_coordinates(grid, [rows[valid], cols[valid]], order=3)
        rel = np.linalg.norm(turned - grid[valid]) / np.linalg.norm(grid[valid])
        assert rel < 0.02, f"rotation relative L2 {rel:.4f}"


def test_criterion_07_kernel_shape():
    with criterion(7, "kernel peaks at zero and its envelope decays", limit=10.0):
        vectors = uniform_wave_vectors(1500, 2, seed=42)
        params = VcoParams(baseline_freq=0.0, gain=1.0, wave_vectors=vectors,
                           coefficients=np.ones(len(vectors)))
        h0 = shift_kernel(params, np.zeros(2))
        rng = seeded_rng(1007)
        box = rng.uniform(-15.0, 15.0, size=(10_000, 2))
        assert shift_kernel_batch(params, box).max() < h0

        angles = rng.uniform(0.0, 2.0 * math.pi, size=10_000)
        ring = 10.0 * np.column_stack([np.cos(angles), np.sin(angles)])
        envelope = np.abs(shift_kernel_batch(params, ring)).max()
        assert envelope < 0.2 * h0, f"envelope {envelope / h0:.3f} of h(0)"

        curve = kernel_curve(params, [1.0, 0.3], 10.0, 400).values
        sign_flips = int(np.sum(np.sign(curve[1:]) * np.sign(curve[:-1]) < 0))
        assert sign_flips >= 3


def test_criterion_08_vco_path_independence():
    with criterion(8, "straight and dog-leg paths agree in phase", limit=1.0):
        params = VcoParams(baseline_freq=0.7, gain=1.3,
                           wave_vectors=simplex_wave_vectors(2, magnitude=1.5),
                           coefficients=np.ones(3))
        rng = seeded_rng(1008)
        for _ in range(100):
            total = float(rng.uniform(1.0, 4.0))
            corner = float(rng.uniform(0.2, 0.8)) * total
            target = rng.uniform(-5.0, 5.0, size=2)
            v_first = rng.uniform(-3.0, 3.0, size=2)
            v_second = (target - v_first * corner) / (total - corner)
            v_straight = target / total
            straight = [(0.0, v_straight), (total, v_straight)]
            dogleg = [(0.0, v_first), (corner, v_first),
                      (corner, v_second), (total, v_second)]
            for row in range(params.size):
                a = vco_phase_along_path(straight, params, row)
                b = vco_phase_along_path(dogleg, params, row)
                assert abs(a - b) <= 1e-6 * (1.0 + abs(a))


def test_criterion_09_shift_generalization_rates():
    with criterion(9, "rotary encoders preserve argmax; table stand-in does not",
                   limit=60.0):
        trials = 1000
        common = dict(grid_size=4, num_trials=trials, shift_range=40.0,
                      seed=1009, num_tokens=16)
        for cfg in (GridPEConfig(n=2, head_dim=64),
                    BaselineConfig(kind="rope_axial", n=2, head_dim=64)):
            report = shift_generalization_experiment(cfg, **common)
            assert report.num_trials == trials
            assert report.preservation_rate == 1.0, report
        table = RandomTableConfig(n=2, head_dim=64, grid_min=0.0, grid_max=3.0,
                                  grid_points=4, seed=1009)
        report = shift_generalization_experiment(table, **common)
        assert report.preservation_rate < 1.0, report


def test_criterion_10_cli_determinism(tmp_path):
    with criterion(10, "every CLI command is byte-identical across runs", limit=60.0):
        config = tmp_path / "config.json"
        config.write_text(json.dumps(
            {"n": 2, "head_dim": 16, "direction_mode": "random", "seed": 3}))
        positions = tmp_path / "positions.csv"
        positions.write_text("x0,x1\n0.0,0.0\n1.25,-2.5\n0.125,9.0\n")
        params = tmp_path / "params.json"
        params.write_text(json.dumps(
            {"wave_vectors": {"kind": "uniform", "count": 7, "n": 2, "seed": 5}}))

        commands = {
            "simplex": ["simplex", "--dim", "3", "--mode", "random", "--seed", "11"],
            "scales": ["scales", "--dim", "2", "--head-dim", "32", "--json"],
            "embed": ["embed", "--config", str(config), "--positions", str(positions),
                      "--method", "gridpe", "--out", "OUT.csv"],
            "pattern": ["pattern", "--params", str(params), "--extent=-6,6,-6,6",
                        "--res", "48", "--out", "OUT.pgm"],
            "kernel": ["kernel", "--params", str(params), "--dir", "1,-0.5",
                       "--dmax", "8", "--samples", "64"],
            "bench-attn": ["bench-attn", "--method", "random_table", "--dim", "2",
                           "--tokens", "9", "--trials", "25", "--shift-range", "7",
                           "--seed", "6", "--json"],
            "verify": ["verify", "--dim", "1", "--head-dim", "4", "--json"],
        }
        for name, argv in commands.items():
            outputs = []
            for attempt in ("first", "second"):
                run_dir = tmp_path / f"{name}-{attempt}"
                run_dir.mkdir()
                argv_run = [a.replace("OUT", str(run_dir / "out")) for a in argv]
                proc = subprocess.run(
                    [sys.executable, "-m", "gridpe", *argv_run],
                    capture_output=True, cwd=run_dir, timeout=120)
                assert proc.returncode == 0, (name, proc.stderr.decode())
                blobs = [proc.stdout]
                for artifact in sorted(run_dir.iterdir()):
                    blobs.append(artifact.read_bytes())
                outputs.append(blobs)
            assert outputs[0] == outputs[1], f"{name} output differs between runs"
