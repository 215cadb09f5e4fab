"""Dense linear-algebra substrate: SVD, numerical rank, norms, restricted solves.

Everything downstream decides rank questions relative to the largest singular
value and works in the spectral norm. Real and complex matrices are both
supported; complex is the canonical path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExistenceError, InputError, KernelError

_REAL = np.float64
_COMPLEX = np.complex128


def as_matrix(a) -> np.ndarray:
    """Validate and promote input to a 2-d float64/complex128 array.

    Rejects non-finite entries; every public operation goes through here.
    """
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got ndim={arr.ndim}")
    dtype = _COMPLEX if np.iscomplexobj(arr) else _REAL
    arr = arr.astype(dtype, copy=False)
    if arr.size and not np.isfinite(arr).all():
        raise InputError("matrix contains non-finite entries")
    return arr


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical policy shared by all constructions.

    rank_rel_tol: singular values below ``rank_rel_tol * sigma_max`` count as zero.
    residual_tol: acceptance threshold for certificate residuals, scaled by the
        problem size (see the individual constructions).
    fd_step_sweep: strictly decreasing finite-difference steps.
    """

    rank_rel_tol: float = 1e-10
    residual_tol: float = 1e-10
    fd_step_sweep: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5)

    def __post_init__(self):
        if not 0.0 <= self.rank_rel_tol < 1.0:
            raise InputError("rank_rel_tol must lie in [0, 1)")
        if not 0.0 <= self.residual_tol < 1.0:
            raise InputError("residual_tol must lie in [0, 1)")
        steps = tuple(float(s) for s in self.fd_step_sweep)
        if not steps or any(s <= 0.0 for s in steps):
            raise InputError("fd_step_sweep entries must be positive")
        if any(b >= a for a, b in zip(steps, steps[1:])):
            raise InputError("fd_step_sweep must be strictly decreasing")
        object.__setattr__(self, "fd_step_sweep", steps)


DEFAULT_TOL = ToleranceConfig()


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = u @ diag(sigma) @ v.conj().T`` with orthonormal columns.

    Returns (u, sigma, v), sigma nonincreasing and nonnegative.
    """
    a = as_matrix(a)
    try:
        u, sigma, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise KernelError(
            f"svd did not converge on a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    return u, sigma, vh.conj().T


def singular_values(a) -> np.ndarray:
    a = as_matrix(a)
    if 0 in a.shape:
        return np.zeros(0)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise KernelError(
            f"svd did not converge on a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc


def numerical_rank(sigma, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Count singular values above ``rank_rel_tol * sigma_max``; 0 for sigma_max = 0."""
    s = np.asarray(sigma, dtype=float)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * s[0]))


def spectral_norm(a) -> float:
    """Largest singular value; 0 exactly for empty or zero matrices."""
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def solve_on_subspace(
    a, range_basis, target, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Coefficients w with ``(a @ range_basis) @ w = target`` on span(a @ range_basis).

    range_basis must have orthonormal columns and the restriction of ``a`` to
    its span must be injective at the working rank tolerance. The component of
    ``target`` outside span(a @ range_basis) is ignored.
    """
    a = as_matrix(a)
    basis = as_matrix(range_basis)
    rhs = as_matrix(target)
    if basis.shape[0] != a.shape[1]:
        raise InputError("range_basis ambient dimension does not match a")
    if rhs.shape[0] != a.shape[0]:
        raise InputError("target row count does not match a")
    restricted = a @ basis
    k = basis.shape[1]
    if k:
        sig = singular_values(restricted)
        if numerical_rank(sig, tol) < k:
            raise ExistenceError(
                "restriction not injective",
                clause="restriction not injective",
                margin=float(sig[-1]) if sig.size else 0.0,
            )
    w, *_ = np.linalg.lstsq(restricted, rhs, rcond=None)
    if k:
        # least squares leaves only the out-of-span part of the residual
        q, _, _ = svd(restricted)
        onto_span = q @ (q.conj().T @ (restricted @ w - rhs))
        scale = max(1.0, spectral_norm(rhs))
        if spectral_norm(onto_span) > tol.residual_tol * scale:
            raise KernelError("restricted solve failed its residual check")
    return w
