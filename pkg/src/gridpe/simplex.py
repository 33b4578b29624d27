"""Regular-simplex direction frames.

One scale of the embedding uses the n+1 vectors pointing from the centroid
of a regular n-simplex to its vertices: the largest set of equal-norm,
maximally spread directions in R^n.  The frame is built exactly in a lifted
space R^(n+1) and then projected down to R^n.

The lifted vertex matrix is symmetric, so the symmetric eigendecomposition
serves as the factorization; it coincides with an SVD here and avoids the
left-versus-right basis ambiguity a generic SVD would leave open.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .rng import seeded_rng

# Eigenvalues of the lifted vertex matrix are exactly 1 (n times) and 0
# (once); anything between signals a numerical failure, not an input error.
_RANK_THRESHOLD = 1e-10


@dataclass(frozen=True)
class SimplexFrame:
    """Vertex directions of a regular n-simplex, lifted and projected.

    ``raw_vertices`` holds the centered lifted vertices (rows sum to zero);
    ``projected`` and ``projection_basis`` stay ``None`` until
    :func:`project_to_hyperplane` fills them.
    """

    dim: int
    raw_vertices: np.ndarray
    projected: np.ndarray | None = None
    projection_basis: np.ndarray | None = None


def standard_simplex_vertices(n: int) -> SimplexFrame:
    """Centered vertex set e_i - (1/(n+1)) * ones in the lifted space R^(n+1)."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"dimension must be a positive integer, got {n!r}")
    n = int(n)
    raw = np.eye(n + 1) - np.full((n + 1, n + 1), 1.0 / (n + 1))
    raw.flags.writeable = False
    return SimplexFrame(dim=n, raw_vertices=raw)


def project_to_hyperplane(frame: SimplexFrame) -> SimplexFrame:
    """Drop the zero mode of the lifted vertices, keeping all inner products.

    The n eigenvectors with eigenvalue 1 span the hyperplane the vertices
    live in; the single zero eigenvalue belongs to the all-ones normal
    direction.  Projection onto that basis preserves the Gram matrix
    entrywise, so norms and angles survive unchanged.
    """
    n = frame.dim
    eigenvalues, eigenvectors = np.linalg.eigh(frame.raw_vertices)
    # eigh sorts ascending: index 0 is the zero mode, the rest are the
    # eigenvalue-1 block.  A gap violation here is a bug by construction.
    assert eigenvalues[0] < _RANK_THRESHOLD < eigenvalues[1], "lifted simplex matrix lost rank"
    basis = _fix_column_signs(eigenvectors[:, :0:-1])
    projected = frame.raw_vertices @ basis
    projected.flags.writeable = False
    basis.flags.writeable = False
    return replace(frame, projected=projected, projection_basis=basis)


def oriented_directions(frame: SimplexFrame, mode: str = "fixed", seed: int = 0) -> np.ndarray:
    """Unit centroid-to-vertex directions, optionally randomly rotated.

    ``fixed`` normalizes the projected rows and applies one global sign so
    the first nonzero entry of the first row is positive.  ``random``
    multiplies the fixed rows by a single seeded rotation from SO(n);
    either way the pairwise normalized dot products stay -1/n.
    """
    if frame.projected is None:
        raise ValidationError("frame has no projection; call project_to_hyperplane first")
    if mode not in ("fixed", "random"):
        raise ValidationError(f"unknown direction mode {mode!r}")
    rows = frame.projected / np.linalg.norm(frame.projected, axis=1, keepdims=True)
    first = rows[0]
    nonzero = np.flatnonzero(np.abs(first) > _RANK_THRESHOLD)
    if nonzero.size and first[nonzero[0]] < 0:
        rows = -rows
    if mode == "random":
        rows = rows @ random_rotation(frame.dim, seeded_rng(seed))
    rows = np.ascontiguousarray(rows)
    rows.flags.writeable = False
    return rows


def simplex_directions(n: int, mode: str = "fixed", seed: int = 0) -> np.ndarray:
    """Build, project, and orient in one call: (n+1) x n unit rows."""
    return oriented_directions(project_to_hyperplane(standard_simplex_vertices(n)), mode, seed)


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Rotation matrix from the QR factorization of a Gaussian draw.

    The diagonal signs of R are folded into Q to remove the QR sign
    ambiguity, then the determinant is corrected to +1 so the result is a
    proper rotation.
    """
    if n < 1:
        raise ValidationError(f"rotation dimension must be positive, got {n!r}")
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.where(np.diag(r) >= 0, 1.0, -1.0)
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return q


def _fix_column_signs(basis: np.ndarray) -> np.ndarray:
    """Flip columns so each column's first nonzero entry is positive."""
    basis = basis.copy()
    for j in range(basis.shape[1]):
        column = basis[:, j]
        nonzero = np.flatnonzero(np.abs(column) > _RANK_THRESHOLD)
        if nonzero.size and column[nonzero[0]] < 0:
            basis[:, j] = -column
    return basis
