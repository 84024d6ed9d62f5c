"""Symmetric-matrix kernels and subspace geometry.

PSD square roots and inverse square roots, deterministic symmetric
eigendecomposition, orthonormalization, and the principal-angle (geodesic)
distance between subspaces. All functions are pure and operate on immutable
inputs, so they are safe to call concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidInput,
    NotPositiveSemidefinite,
    RankDeficient,
    SingularMatrix,
)

SYM_RTOL = 1e-10
PSD_EIG_RTOL = 1e-10
RANK_RTOL = 1e-10
INV_RCOND = 1e-12


def _square_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix, symmetrized on construction.

    Asymmetry beyond ``SYM_RTOL`` (relative to the largest entry) is rejected
    rather than silently averaged away.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = _square_matrix(self.entries)
        scale = np.abs(a).max()
        if scale > 0 and np.abs(a - a.T).max() > SYM_RTOL * scale:
            raise InvalidInput("matrix is not symmetric to tolerance")
        a = (a + a.T) / 2.0
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^d held as a matrix with orthonormal columns."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if b.ndim != 2 or b.shape[1] > b.shape[0]:
            raise InvalidInput(f"invalid basis shape {b.shape}")
        if not np.all(np.isfinite(b)):
            raise InvalidInput("basis has non-finite entries")
        gram = b.T @ b
        if np.abs(gram - np.eye(b.shape[1])).max() > 1e-8:
            raise InvalidInput("basis columns are not orthonormal to 1e-8")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _as_sym_entries(m) -> np.ndarray:
    if isinstance(m, SymMatrix):
        return m.entries
    return SymMatrix(m).entries


def _fix_signs(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip eigenvector columns so the first non-negligible entry is positive."""
    v = vectors.copy()
    for j in range(v.shape[1]):
        nz = np.nonzero(np.abs(v[:, j]) > tol)[0]
        if nz.size and v[nz[0], j] < 0:
            v[:, j] = -v[:, j]
    return v


def sym_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Returns ``(eigenvalues, eigenvectors)`` with orthonormal eigenvector
    columns. Each eigenvector's first non-negligible entry is made positive
    so repeated runs and golden tests see identical output.
    """
    a = _as_sym_entries(m)
    w, v = np.linalg.eigh(a)
    w = np.ascontiguousarray(w[::-1])
    v = np.ascontiguousarray(v[:, ::-1])
    return w, _fix_signs(v)


def psd_sqrt(m) -> SymMatrix:
    """Symmetric square root of a numerically PSD matrix.

    Eigenvalues below ``-PSD_EIG_RTOL * max|lambda|`` raise
    ``NotPositiveSemidefinite``; small negative eigenvalues from roundoff are
    clamped to zero before rooting.
    """
    a = _as_sym_entries(m)
    w, v = np.linalg.eigh(a)
    scale = np.abs(w).max() if w.size else 0.0
    if w[0] < -PSD_EIG_RTOL * scale:
        raise NotPositiveSemidefinite(
            f"eigenvalue {w[0]:g} below PSD tolerance (scale {scale:g})"
        )
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return SymMatrix((root + root.T) / 2.0)


def psd_inv_sqrt(m, ridge: float = 0.0) -> SymMatrix:
    """Inverse square root of ``m + ridge * I``.

    With ``ridge=0`` the matrix must satisfy ``lambda_min > INV_RCOND *
    lambda_max``; otherwise ``SingularMatrix`` is raised.
    """
    a = _as_sym_entries(m)
    if ridge < 0 or not np.isfinite(ridge):
        raise InvalidInput(f"ridge must be a nonnegative real, got {ridge}")
    if ridge > 0:
        a = a + ridge * np.eye(a.shape[0])
    w, v = np.linalg.eigh(a)
    if w[-1] <= 0 or w[0] <= INV_RCOND * w[-1]:
        raise SingularMatrix(
            f"matrix numerically singular (lambda_min={w[0]:g}, lambda_max={w[-1]:g})"
        )
    inv_root = (v * (1.0 / np.sqrt(w))) @ v.T
    return SymMatrix((inv_root + inv_root.T) / 2.0)


def orthonormal_span(a) -> Subspace:
    """Orthonormal basis for the column span of ``a``.

    QR with the R diagonal forced positive, so the result is deterministic.
    Rank-deficient input (smallest singular value below ``RANK_RTOL`` of the
    largest) raises ``RankDeficient``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[1] > a.shape[0]:
        raise InvalidInput(f"invalid matrix shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= RANK_RTOL * sv[0]:
        raise RankDeficient("columns are linearly dependent to tolerance")
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return Subspace(q * signs)


def grassmann_distance(s1: Subspace, s2: Subspace) -> float:
    """Geodesic distance between equal-dimension subspaces.

    Square root of the sum of squared principal angles; the angle cosines are
    the singular values of ``s1.basis.T @ s2.basis`` clamped to [0, 1].
    """
    if not isinstance(s1, Subspace):
        s1 = Subspace(s1)
    if not isinstance(s2, Subspace):
        s2 = Subspace(s2)
    if s1.ambient_dim != s2.ambient_dim or s1.dim != s2.dim:
        raise DimensionMismatch(
            f"subspaces {s1.basis.shape} and {s2.basis.shape} are not comparable"
        )
    sv = np.linalg.svd(s1.basis.T @ s2.basis, compute_uv=False)
    theta = np.arccos(np.clip(sv, 0.0, 1.0))
    return float(np.sqrt(np.sum(theta * theta)))
