"""Generalized inverses with prescribed range and null space.

The central construction is the outer inverse of ``a`` that has a prescribed
range T (in the domain of ``a``) and a prescribed null space S (in its
codomain): it exists iff ``a`` restricted to T is injective and a(T) and S
decompose the codomain, in which case it inverts ``a`` on a(T) and kills S.
Every other inverse here is that construction with specific subspaces:

  moore_penrose   T = range(a*),  S = null(a*)
  bc_inverse      T = range(b),   S = null(c)
  bott_duffin     T = range(p),   S = null(q)   for idempotents p, q
  inverse_along   T = range(d),   S = null(d)

Certificates carry the residual norms of the defining equations together with
conditioning data; a construction whose residuals exceed tolerance is rejected
rather than returned.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernel
from .errors import CertificateError, ExistenceError, InputError
from .kernel import DEFAULT_TOL, ToleranceConfig, as_matrix, spectral_norm
from .subspace import (
    ObliqueProjector,
    Subspace,
    column_space,
    direct_sum_check,
    gap,
    null_space,
    oblique_projector,
    trivial_subspace,
)


@dataclass(frozen=True)
class InverseCertificate:
    """An inverse candidate bundled with the evidence that it is one.

    residuals maps each defining equation to the norm of its defect;
    restricted_condition is the condition number of ``a`` restricted to the
    prescribed range; range_gap / nullspace_gap measure how far the computed
    inverse's subspaces are from the prescribed ones; complement_margin is the
    smallest singular value of the direct-sum test that granted existence.
    """

    inverse: np.ndarray
    kind: str
    residuals: dict[str, float]
    restricted_condition: float
    range_gap: float
    nullspace_gap: float
    complement_margin: float
    operator: np.ndarray
    prescribed_range: Subspace
    prescribed_nullspace: Subspace
    tol_used: ToleranceConfig = DEFAULT_TOL


def _accept(residuals: dict[str, float], budgets: dict[str, float], kind: str):
    for name, value in residuals.items():
        if value > budgets[name]:
            raise CertificateError(
                f"{kind} certificate rejected: residual {name}={value:.3e} "
                f"exceeds budget {budgets[name]:.3e}",
                margin=value,
            )


def moore_penrose(a, tol: ToleranceConfig = DEFAULT_TOL) -> InverseCertificate:
    """Moore-Penrose inverse from the SVD, inverting singular values above the cutoff."""
    a = as_matrix(a)
    u, sigma, v = kernel.svd(a)
    r = kernel.numerical_rank(sigma, tol)
    if r:
        b = (v[:, :r] / sigma[:r]) @ u[:, :r].conj().T
    else:
        b = np.zeros((a.shape[1], a.shape[0]), dtype=a.dtype)
    ab = a @ b
    ba = b @ a
    residuals = {
        "aba": spectral_norm(ab @ a - a),
        "bab": spectral_norm(ba @ b - b),
        "ab_hermitian": spectral_norm(ab.conj().T - ab),
        "ba_hermitian": spectral_norm(ba.conj().T - ba),
    }
    scale = max(1.0, spectral_norm(a) * spectral_norm(b))
    _accept(residuals, {k: tol.residual_tol * scale for k in residuals}, "moore_penrose")
    adj = a.conj().T
    t = column_space(adj, tol)
    s = null_space(adj, tol)
    return InverseCertificate(
        inverse=b,
        kind="moore_penrose",
        residuals=residuals,
        restricted_condition=float(sigma[0] / sigma[r - 1]) if r else 1.0,
        range_gap=gap(column_space(b, tol), t).gap,
        nullspace_gap=gap(null_space(b, tol), s).gap,
        complement_margin=1.0,
        operator=a,
        prescribed_range=t,
        prescribed_nullspace=s,
        tol_used=tol,
    )


def outer_prescribed(
    a, t: Subspace, s: Subspace, tol: ToleranceConfig = DEFAULT_TOL, kind: str = "outer_prescribed"
) -> InverseCertificate:
    """Outer inverse of ``a`` with range T and null space S.

    ``a`` may be rectangular (m x n); T lives in the domain C^n, S in the
    codomain C^m. Existence requires the restriction of ``a`` to T to be
    injective and a(T) (+) S to fill the codomain; each failure is reported
    with the violated clause and the deciding margin.
    """
    a = as_matrix(a)
    m, n = a.shape
    if t.ambient_dim != n:
        raise InputError("prescribed range does not live in the domain of a")
    if s.ambient_dim != m:
        raise InputError("prescribed null space does not live in the codomain of a")
    anorm = spectral_norm(a)

    if t.is_trivial:
        check = direct_sum_check(trivial_subspace(m, tol), s)
        if not check.holds:
            raise ExistenceError(
                "complement fails: R(A*T) (+) S != Y",
                clause="R(A*T) (+) S != Y",
                margin=check.margin,
            )
        b = np.zeros((n, m), dtype=a.dtype)
        return InverseCertificate(
            inverse=b,
            kind=kind,
            residuals={"xax_x": 0.0},
            restricted_condition=1.0,
            range_gap=0.0,
            nullspace_gap=0.0,
            complement_margin=check.margin,
            operator=a,
            prescribed_range=t,
            prescribed_nullspace=s,
            tol_used=tol,
        )

    restricted = a @ t.basis
    sig = kernel.singular_values(restricted)
    smin = float(sig[t.dim - 1]) if sig.size >= t.dim else 0.0
    if t.dim > m or smin <= tol.rank_rel_tol * anorm:
        raise ExistenceError(
            "restriction not injective",
            clause="restriction not injective",
            margin=smin,
        )
    u, _, _ = kernel.svd(restricted)
    image = Subspace(m, u[:, : t.dim], tol)
    check = direct_sum_check(image, s)
    if not check.holds:
        raise ExistenceError(
            "complement fails: R(A*T) (+) S != Y",
            clause="R(A*T) (+) S != Y",
            margin=check.margin,
        )
    onto_image = oblique_projector(image, s, tol)
    w = kernel.solve_on_subspace(a, t.basis, onto_image.matrix, tol)
    b = t.basis @ w

    residuals = {"xax_x": spectral_norm(b @ a @ b - b)}
    scale = max(1.0, anorm * spectral_norm(b))
    _accept(residuals, {"xax_x": tol.residual_tol * scale}, kind)
    return InverseCertificate(
        inverse=b,
        kind=kind,
        residuals=residuals,
        restricted_condition=float(sig[0] / smin),
        range_gap=gap(column_space(b, tol), t).gap,
        nullspace_gap=gap(null_space(b, tol), s).gap,
        complement_margin=check.margin,
        operator=a,
        prescribed_range=t,
        prescribed_nullspace=s,
        tol_used=tol,
    )


def bc_inverse(a, b, c, tol: ToleranceConfig = DEFAULT_TOL) -> InverseCertificate:
    """The (b, c)-inverse: outer inverse with range R(b) and null space N(c).

    Requires square operands of equal size. The certificate additionally
    records the residuals of the absorption equations b = x a b and c = c a x.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    c = as_matrix(c)
    if a.shape[0] != a.shape[1] or a.shape != b.shape or a.shape != c.shape:
        raise InputError("bc_inverse needs square a, b, c of equal size")
    t = column_space(b, tol)
    s = null_space(c, tol)
    try:
        cert = outer_prescribed(a, t, s, tol, kind="bc")
    except ExistenceError as exc:
        if isinstance(exc, CertificateError):
            raise
        raise ExistenceError(
            f"(B,C)-inverse does not exist: {exc}", clause=exc.clause, margin=exc.margin
        ) from exc
    x = cert.inverse
    extra = {
        "xab_b": spectral_norm(x @ a @ b - b),
        "cax_c": spectral_norm(c @ a @ x - c),
    }
    base = max(1.0, spectral_norm(a) * spectral_norm(x))
    budgets = {
        "xab_b": tol.residual_tol * base * max(1.0, spectral_norm(b)),
        "cax_c": tol.residual_tol * base * max(1.0, spectral_norm(c)),
    }
    _accept(extra, budgets, "bc")
    return replace(cert, residuals={**cert.residuals, **extra})


def bott_duffin(
    a, p: ObliqueProjector, q: ObliqueProjector, tol: ToleranceConfig = DEFAULT_TOL
) -> InverseCertificate:
    """The (p, q)-inverse for idempotents p, q: range R(p), null space N(q)."""
    cert = bc_inverse(a, p.matrix, q.matrix, tol)
    x = cert.inverse
    extra = {
        "py_y": spectral_norm(p.matrix @ x - x),
        "yq_y": spectral_norm(x @ q.matrix - x),
        "yap_p": spectral_norm(x @ cert.operator @ p.matrix - p.matrix),
        "qay_q": spectral_norm(q.matrix @ cert.operator @ x - q.matrix),
    }
    base = max(1.0, spectral_norm(cert.operator) * spectral_norm(x))
    budgets = {
        "py_y": tol.residual_tol * base * max(1.0, spectral_norm(p.matrix)),
        "yq_y": tol.residual_tol * base * max(1.0, spectral_norm(q.matrix)),
        "yap_p": tol.residual_tol * base * max(1.0, spectral_norm(p.matrix)),
        "qay_q": tol.residual_tol * base * max(1.0, spectral_norm(q.matrix)),
    }
    _accept(extra, budgets, "bott_duffin")
    return replace(cert, kind="bott_duffin", residuals={**cert.residuals, **extra})


def inverse_along(a, d, tol: ToleranceConfig = DEFAULT_TOL) -> InverseCertificate:
    """Inverse of ``a`` along ``d``: the (d, d)-inverse."""
    try:
        cert = bc_inverse(a, d, d, tol)
    except ExistenceError as exc:
        if isinstance(exc, CertificateError):
            raise
        raise ExistenceError(
            f"not invertible along D: {exc}", clause=exc.clause, margin=exc.margin
        ) from exc
    x = cert.inverse
    d = as_matrix(d)
    extra = {
        "xad_d": spectral_norm(x @ cert.operator @ d - d),
        "dax_d": spectral_norm(d @ cert.operator @ x - d),
    }
    base = max(1.0, spectral_norm(cert.operator) * spectral_norm(x))
    budget = tol.residual_tol * base * max(1.0, spectral_norm(d))
    _accept(extra, {k: budget for k in extra}, "along")
    return replace(cert, kind="along", residuals={**cert.residuals, **extra})


def reflexive_inverse(
    f, n_complement: Subspace, m_complement: Subspace, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Reflexive generalized inverse of ``f`` with range N and null space M.

    N must complement the kernel of ``f`` in the domain and M must complement
    its range in the codomain; the result inverts ``f`` between N and R(f) and
    vanishes on M.
    """
    f = as_matrix(f)
    kern = null_space(f, tol)
    dom = direct_sum_check(kern, n_complement)
    if not dom.holds:
        raise ExistenceError(
            "complement fails: N(F) (+) N != X",
            clause="N(F) (+) N != X",
            margin=dom.margin,
        )
    ran = column_space(f, tol)
    cod = direct_sum_check(ran, m_complement)
    if not cod.holds:
        raise ExistenceError(
            "complement fails: R(F) (+) M != Y",
            clause="R(F) (+) M != Y",
            margin=cod.margin,
        )
    return outer_prescribed(f, n_complement, m_complement, tol).inverse


def left_regular(a, k: int) -> np.ndarray:
    """Matrix of x -> a x on k x k matrices under column-stacking vectorization."""
    a = as_matrix(a)
    if a.shape != (k, k):
        raise InputError(f"expected a {k}x{k} matrix, got {a.shape}")
    return np.kron(np.eye(k), a)


def right_regular(a, k: int) -> np.ndarray:
    """Matrix of x -> x a on k x k matrices under column-stacking vectorization."""
    a = as_matrix(a)
    if a.shape != (k, k):
        raise InputError(f"expected a {k}x{k} matrix, got {a.shape}")
    return np.kron(a.T, np.eye(k))
