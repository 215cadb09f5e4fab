"""Subspaces, oblique projectors, direct-sum tests and the gap metric.

The gap is computed in the Euclidean norm through orthogonal projectors:
``delta(M, N) = || (I - P_N) P_M ||`` with the conventions delta(0, N) = 0 and
delta(M, 0) = 1 for M != 0. A seeded sampling oracle gives an independent
lower bound on the one-sided deviation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernel
from .errors import CertificateError, ExistenceError, InputError
from .kernel import DEFAULT_TOL, ToleranceConfig, as_matrix


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n (or R^n) carried as an orthonormal column basis."""

    ambient_dim: int
    basis: np.ndarray  # ambient_dim x dim, orthonormal columns (dim may be 0)
    tol_used: ToleranceConfig = DEFAULT_TOL

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.basis @ self.basis.conj().T

    def __post_init__(self):
        basis = as_matrix(self.basis)
        if basis.shape[0] != self.ambient_dim:
            raise InputError("basis rows do not match ambient dimension")
        if basis.shape[1] > self.ambient_dim:
            raise InputError("basis has more columns than the ambient dimension")
        d = basis.shape[1]
        if d:
            gram = basis.conj().T @ basis
            defect = kernel.spectral_norm(gram - np.eye(d))
            if defect > max(self.tol_used.residual_tol, 1e-12):
                raise InputError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", basis)


def trivial_subspace(ambient_dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    dtype = np.float64
    return Subspace(ambient_dim, np.zeros((ambient_dim, 0), dtype=dtype), tol)


def full_subspace(ambient_dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    return Subspace(ambient_dim, np.eye(ambient_dim), tol)


def column_space(a, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the span of the columns of ``a`` at numerical rank."""
    a = as_matrix(a)
    if a.shape[1] == 0:
        return trivial_subspace(a.shape[0], tol)
    u, sigma, _ = kernel.svd(a)
    r = kernel.numerical_rank(sigma, tol)
    return Subspace(a.shape[0], u[:, :r], tol)


def null_space(a, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of {x : a x = 0}; dimension is cols - rank."""
    a = as_matrix(a)
    m, n = a.shape
    if n == 0:
        return trivial_subspace(0, tol)
    if m == 0:
        return full_subspace(n, tol)
    _, sigma, vh = np.linalg.svd(a, full_matrices=True)
    r = kernel.numerical_rank(sigma, tol)
    return Subspace(n, vh.conj().T[:, r:], tol)


def orthogonal_complement(s: Subspace) -> Subspace:
    """Orthogonal complement within the same ambient space."""
    if s.is_trivial:
        return full_subspace(s.ambient_dim, s.tol_used)
    return null_space(s.basis.conj().T, s.tol_used)


class DirectSumResult(NamedTuple):
    holds: bool
    margin: float


def direct_sum_check(t: Subspace, s: Subspace) -> DirectSumResult:
    """Whether T and S decompose the ambient space as a direct sum.

    Holds iff the dimensions add up to the ambient one and the concatenated
    bases are jointly well conditioned; the margin is the smallest singular
    value of [T.basis | S.basis].
    """
    if t.ambient_dim != s.ambient_dim:
        raise InputError("ambient dimensions differ")
    stacked = np.hstack([_common_dtype(t.basis, s.basis), _common_dtype(s.basis, t.basis)])
    if stacked.shape[1] == 0:
        margin = 0.0
    else:
        sig = kernel.singular_values(stacked)
        margin = float(sig[-1]) if sig.size else 0.0
    tol = t.tol_used
    holds = (t.dim + s.dim == t.ambient_dim) and margin > tol.rank_rel_tol
    return DirectSumResult(holds, margin)


def _common_dtype(a: np.ndarray, other: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(other) and not np.iscomplexobj(a):
        return a.astype(np.complex128)
    return a


@dataclass(frozen=True)
class ObliqueProjector:
    """Idempotent matrix with recorded range and null-space bases."""

    matrix: np.ndarray
    range: Subspace
    nullspace: Subspace

    @classmethod
    def from_matrix(cls, p, tol: ToleranceConfig = DEFAULT_TOL) -> "ObliqueProjector":
        """Wrap an explicit idempotent, deriving its range and null space."""
        p = as_matrix(p)
        if p.shape[0] != p.shape[1]:
            raise InputError("projector matrix must be square")
        defect = kernel.spectral_norm(p @ p - p)
        if defect > tol.residual_tol * max(1.0, kernel.spectral_norm(p)):
            raise InputError(f"matrix is not idempotent (defect {defect:.3e})")
        return cls(p, column_space(p, tol), null_space(p, tol))


def oblique_projector(
    t: Subspace, s: Subspace, tol: ToleranceConfig | None = None
) -> ObliqueProjector:
    """Idempotent with range T and null space S, if T and S are complementary."""
    tol = tol or t.tol_used
    if t.ambient_dim != s.ambient_dim:
        raise InputError("ambient dimensions differ")
    check = direct_sum_check(t, s)
    if not check.holds:
        raise ExistenceError(
            "not complementary", clause="not complementary", margin=check.margin
        )
    n = t.ambient_dim
    stacked = np.hstack([_common_dtype(t.basis, s.basis), _common_dtype(s.basis, t.basis)])
    selector = np.zeros((n, n), dtype=stacked.dtype)
    selector[: t.dim, : t.dim] = np.eye(t.dim)
    p = stacked @ selector @ np.linalg.inv(stacked)
    defect = kernel.spectral_norm(p @ p - p)
    if defect > tol.residual_tol * max(1.0, kernel.spectral_norm(p)):
        raise CertificateError(
            f"projector construction lost idempotency (defect {defect:.3e})",
            margin=defect,
        )
    return ObliqueProjector(p, t, s)


class GapResult(NamedTuple):
    delta_mn: float
    delta_nm: float
    gap: float


def _one_sided_deviation(m: Subspace, n: Subspace) -> float:
    if m.is_trivial:
        return 0.0
    if n.is_trivial:
        return 1.0
    offside = m.basis - n.basis @ (n.basis.conj().T @ m.basis)
    return min(1.0, kernel.spectral_norm(offside))


def gap(m: Subspace, n: Subspace) -> GapResult:
    """One-sided deviations and their max, all in [0, 1]."""
    if m.ambient_dim != n.ambient_dim:
        raise InputError("ambient dimensions differ")
    d_mn = _one_sided_deviation(m, n)
    d_nm = _one_sided_deviation(n, m)
    return GapResult(d_mn, d_nm, max(d_mn, d_nm))


def gap_sampling_oracle(m: Subspace, n: Subspace, trials: int, seed: int) -> float:
    """Brute-force lower bound for the deviation of M from N.

    Samples unit vectors of M through normalized Gaussian coefficients with a
    fixed seed and returns the largest distance to N observed.
    """
    if m.ambient_dim != n.ambient_dim:
        raise InputError("ambient dimensions differ")
    if trials < 1:
        raise InputError("trials must be >= 1")
    if m.is_trivial:
        return 0.0
    rng = np.random.default_rng(seed)
    complex_ = np.iscomplexobj(m.basis) or np.iscomplexobj(n.basis)
    p_n = n.projector() if not n.is_trivial else None
    best = 0.0
    for _ in range(trials):
        coeff = rng.standard_normal(m.dim)
        if complex_:
            coeff = coeff + 1j * rng.standard_normal(m.dim)
        nrm = np.linalg.norm(coeff)
        if nrm == 0.0:
            continue
        x = m.basis @ (coeff / nrm)
        residual = x if p_n is None else x - p_n @ x
        best = max(best, float(np.linalg.norm(residual)))
    return min(1.0, best)
