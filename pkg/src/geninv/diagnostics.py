"""Empirical convergence diagnostics for sequences of inverse problems.

A sequence report evaluates, per index, every quantity appearing in the
equivalent characterizations of inverse convergence: inverse and product
errors, geometric gaps between prescribed subspaces, and the Moore-Penrose
projector terms that express those gaps algebraically. Each characterization
gets a boolean verdict under a finite-sequence convergence proxy; because the
characterizations are equivalent, a split verdict set is flagged as an alarm.

Verdict keys are grouped by prefix:

  gap_*  operator-norm / subspace-gap characterizations (six)
  mp_*   Moore-Penrose projector characterizations (eight)
  oip_*  prescribed-subspace characterizations (five)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExistenceError, InputError
from .inverses import InverseCertificate, bc_inverse, moore_penrose
from .kernel import DEFAULT_TOL, ToleranceConfig, as_matrix, spectral_norm
from .subspace import column_space, gap, null_space

_NAN = float("nan")


@dataclass(frozen=True)
class SequenceDiagnostics:
    """Per-index convergence measurements plus verdicts.

    All error entries are nonnegative, all gap entries lie in [0, 1]; failed
    indices (where the per-index inverse does not exist) hold NaN and are
    excluded from the verdicts.
    """

    inverse_error: tuple[float, ...]
    left_product_error: tuple[float, ...]
    right_product_error: tuple[float, ...]
    range_gap: tuple[float, ...]
    nullspace_gap: tuple[float, ...]
    inverse_range_gap: tuple[float, ...]
    inverse_nullspace_gap: tuple[float, ...]
    mp_range_terms: tuple[tuple[float, float], ...]
    mp_null_terms: tuple[tuple[float, float], ...]
    mp_cokernel_terms: tuple[tuple[float, float], ...]
    mp_corange_terms: tuple[tuple[float, float], ...]
    range_projector_error: tuple[float, ...]
    null_projector_error: tuple[float, ...]
    failed_indices: tuple[int, ...]
    verdicts: dict[str, bool]
    alarm: bool
    remark_gap_identity_mismatch: float | None = None


def converged_by_final_index(
    values, tol: ToleranceConfig, scale: float = 1.0
) -> bool:
    """Finite-sequence convergence proxy.

    True iff the final value sits below ``10 * residual_tol * scale`` and the
    last third of the sequence shows no significant increase. NaN entries
    (failed indices) are skipped.
    """
    vals = [float(v) for v in values if not math.isnan(float(v))]
    if not vals:
        return False
    if vals[-1] > 10.0 * tol.residual_tol * scale:
        return False
    tail = vals[-max(2, len(vals) // 3):]
    slack = 1e-12 * max(1.0, scale)
    return all(b <= 1.05 * a + slack for a, b in zip(tail, tail[1:]))


def mp_gap_terms(b, bn, tol: ToleranceConfig = DEFAULT_TOL):
    """Projector-difference norms expressing subspace gaps through b b^+.

    Returns (range_terms, cokernel_terms): range_terms are
    ``(||(1 - b b^+) bn bn^+||, ||(1 - bn bn^+) b b^+||)`` and measure the gap
    between the column spaces; cokernel_terms are the complementary products
    ``(||b b^+ (1 - bn bn^+)||, ||bn bn^+ (1 - b b^+)||)`` and measure the gap
    between the row-annihilator spaces.
    """
    b = as_matrix(b)
    bn = as_matrix(bn)
    if b.shape != bn.shape or b.shape[0] != b.shape[1]:
        raise InputError("mp_gap_terms needs square matrices of equal size")
    eye = np.eye(b.shape[0])
    p = b @ moore_penrose(b, tol).inverse
    pn = bn @ moore_penrose(bn, tol).inverse
    range_terms = (
        spectral_norm((eye - p) @ pn),
        spectral_norm((eye - pn) @ p),
    )
    cokernel_terms = (
        spectral_norm(p @ (eye - pn)),
        spectral_norm(pn @ (eye - p)),
    )
    return range_terms, cokernel_terms


def zero_limit_check(
    certificates, tol: ToleranceConfig | None = None
) -> tuple[bool, int | None]:
    """Classify a sequence whose limit inverse is zero.

    Such a sequence converges iff the inverses are exactly zero from some
    index on; returns that first 1-based index, or (False, None).
    """
    certs = list(certificates)
    if not certs:
        raise InputError("empty certificate sequence")
    tol = tol or certs[0].tol_used
    norms = [spectral_norm(c.inverse) for c in certs]
    nonzero = [i for i, v in enumerate(norms) if v > tol.residual_tol]
    if not nonzero:
        return True, 1
    if nonzero[-1] == len(certs) - 1:
        return False, None
    return True, nonzero[-1] + 2


def _pair(values) -> tuple[float, float]:
    return float(values[0]), float(values[1])


def sequence_report(
    limit_problem, sequence, tol: ToleranceConfig = DEFAULT_TOL
) -> SequenceDiagnostics:
    """Convergence diagnostics for a sequence (a_n, b_n, c_n) against a limit (a, b, c).

    The limit inverse must be nonzero (the zero-limit regime has its own
    dichotomy, see zero_limit_check). Indices where the per-index inverse does
    not exist are recorded and excluded from the verdicts.
    """
    a, b, c = (as_matrix(x) for x in limit_problem)
    cert = bc_inverse(a, b, c, tol)
    x = cert.inverse
    if spectral_norm(x) == 0.0:
        raise InputError("limit inverse is zero; use zero_limit_check")
    xa = x @ a
    ax = a @ x
    t_space = cert.prescribed_range
    s_space = cert.prescribed_nullspace
    x_range = column_space(x, tol)
    x_null = null_space(x, tol)
    eye = np.eye(a.shape[0])
    bbp = b @ moore_penrose(b, tol).inverse
    cpc = moore_penrose(c, tol).inverse @ c

    cols: dict[str, list] = {
        key: []
        for key in (
            "inverse_error",
            "left_product_error",
            "right_product_error",
            "range_gap",
            "nullspace_gap",
            "inverse_range_gap",
            "inverse_nullspace_gap",
            "mp_range_terms",
            "mp_null_terms",
            "mp_cokernel_terms",
            "mp_corange_terms",
            "range_projector_error",
            "null_projector_error",
        )
    }
    failed: list[int] = []
    for idx, (an, bn, cn) in enumerate(sequence, start=1):
        an, bn, cn = as_matrix(an), as_matrix(bn), as_matrix(cn)
        try:
            cert_n = bc_inverse(an, bn, cn, tol)
        except ExistenceError:
            failed.append(idx)
            for key, col in cols.items():
                col.append((_NAN, _NAN) if key.startswith("mp_") and key.endswith("terms") else _NAN)
            continue
        xn = cert_n.inverse
        cols["inverse_error"].append(spectral_norm(xn - x))
        cols["left_product_error"].append(spectral_norm(xn @ an - xa))
        cols["right_product_error"].append(spectral_norm(an @ xn - ax))
        cols["range_gap"].append(gap(cert_n.prescribed_range, t_space).gap)
        cols["nullspace_gap"].append(gap(cert_n.prescribed_nullspace, s_space).gap)
        cols["inverse_range_gap"].append(gap(column_space(xn, tol), x_range).gap)
        cols["inverse_nullspace_gap"].append(gap(null_space(xn, tol), x_null).gap)
        br, bk = mp_gap_terms(b, bn, tol)
        cr, ck = mp_gap_terms(c.conj().T, cn.conj().T, tol)
        cols["mp_range_terms"].append(br)
        cols["mp_null_terms"].append(ck)
        cols["mp_cokernel_terms"].append(bk)
        cols["mp_corange_terms"].append(cr)
        bnp = bn @ moore_penrose(bn, tol).inverse
        cnp = moore_penrose(cn, tol).inverse @ cn
        cols["range_projector_error"].append(spectral_norm(bnp - bbp))
        cols["null_projector_error"].append(spectral_norm(cnp - cpc))

    err_scale = max(1.0, spectral_norm(x) * max(1.0, spectral_norm(a)))
    verdicts = _verdicts(cols, tol, err_scale)
    return SequenceDiagnostics(
        inverse_error=tuple(cols["inverse_error"]),
        left_product_error=tuple(cols["left_product_error"]),
        right_product_error=tuple(cols["right_product_error"]),
        range_gap=tuple(cols["range_gap"]),
        nullspace_gap=tuple(cols["nullspace_gap"]),
        inverse_range_gap=tuple(cols["inverse_range_gap"]),
        inverse_nullspace_gap=tuple(cols["inverse_nullspace_gap"]),
        mp_range_terms=tuple(map(_pair, cols["mp_range_terms"])),
        mp_null_terms=tuple(map(_pair, cols["mp_null_terms"])),
        mp_cokernel_terms=tuple(map(_pair, cols["mp_cokernel_terms"])),
        mp_corange_terms=tuple(map(_pair, cols["mp_corange_terms"])),
        range_projector_error=tuple(cols["range_projector_error"]),
        null_projector_error=tuple(cols["null_projector_error"]),
        failed_indices=tuple(failed),
        verdicts=verdicts,
        alarm=_alarm(verdicts),
    )


def _verdicts(cols: dict[str, list], tol: ToleranceConfig, err_scale: float) -> dict[str, bool]:
    def conv(key: str, scale: float = 1.0) -> bool:
        return converged_by_final_index(cols[key], tol, scale)

    def conv_pair(key: str) -> bool:
        first = converged_by_final_index([p[0] for p in cols[key]], tol)
        second = converged_by_final_index([p[1] for p in cols[key]], tol)
        return first and second

    inverse = conv("inverse_error", err_scale)
    left = conv("left_product_error", err_scale)
    right = conv("right_product_error", err_scale)
    range_g = conv("range_gap")
    null_g = conv("nullspace_gap")
    br = conv_pair("mp_range_terms")
    ck = conv_pair("mp_null_terms")
    bk = conv_pair("mp_cokernel_terms")
    cr = conv_pair("mp_corange_terms")
    proj_range = conv("range_projector_error")
    proj_null = conv("null_projector_error")

    return {
        "gap_inverse": inverse,
        "gap_both_products": left and right,
        "gap_left_product_null_gap": left and null_g,
        "gap_right_product_range_gap": right and range_g,
        "gap_subspace_gaps": range_g and null_g,
        "gap_inverse_subspace_gaps": conv("inverse_range_gap") and conv("inverse_nullspace_gap"),
        "mp_inverse": inverse,
        "mp_left_product_null_proj": left and ck,
        "mp_right_product_range_proj": right and br,
        "mp_range_null_proj": br and ck,
        "mp_right_product_cokernel_proj": right and bk,
        "mp_left_product_corange_proj": left and cr,
        "mp_cokernel_corange_proj": bk and cr,
        "mp_projector_products": proj_range and proj_null,
        "oip_inverse": inverse,
        "oip_both_products": left and right,
        "oip_left_product_null_gap": left and null_g,
        "oip_right_product_range_gap": right and range_g,
        "oip_subspace_gaps": range_g and null_g,
    }


def _alarm(verdicts: dict[str, bool]) -> bool:
    for prefix in ("gap_", "mp_", "oip_"):
        group = [v for k, v in verdicts.items() if k.startswith(prefix)]
        if group and any(group) and not all(group):
            return True
    return False


def mp_continuity_report(
    a, sequence, tol: ToleranceConfig = DEFAULT_TOL
) -> SequenceDiagnostics:
    """Convergence diagnostics for a Moore-Penrose inverse sequence.

    Specializes the sequence diagnostics to b = c = a^+ per index, evaluates
    the eight projector characterizations, and cross-checks the algebraic gap
    identities against geometric gaps (the largest mismatch is recorded).
    """
    a = as_matrix(a)
    if spectral_norm(a) == 0.0:
        raise InputError("limit element must be nonzero")
    adag = moore_penrose(a, tol).inverse
    ada = adag @ a
    aad = a @ adag
    adag_range = column_space(adag, tol)
    adag_null = null_space(adag, tol)
    adj_range = column_space(adag.conj().T, tol)
    adj_null = null_space(adag.conj().T, tol)

    cols: dict[str, list] = {
        key: []
        for key in (
            "inverse_error",
            "left_product_error",
            "right_product_error",
            "range_gap",
            "nullspace_gap",
            "inverse_range_gap",
            "inverse_nullspace_gap",
            "mp_range_terms",
            "mp_null_terms",
            "mp_cokernel_terms",
            "mp_corange_terms",
            "range_projector_error",
            "null_projector_error",
        )
    }
    mismatch = 0.0
    for an in sequence:
        an = as_matrix(an)
        adn = moore_penrose(an, tol).inverse
        cols["inverse_error"].append(spectral_norm(adn - adag))
        left = spectral_norm(adn @ an - ada)
        right = spectral_norm(an @ adn - aad)
        cols["left_product_error"].append(left)
        cols["right_product_error"].append(right)
        br, bk = mp_gap_terms(adag, adn, tol)
        cr, ck = mp_gap_terms(adag.conj().T, adn.conj().T, tol)
        cols["mp_range_terms"].append(br)
        cols["mp_null_terms"].append(ck)
        cols["mp_cokernel_terms"].append(bk)
        cols["mp_corange_terms"].append(cr)
        g_range = gap(column_space(adn, tol), adag_range).gap
        g_null = gap(null_space(adn, tol), adag_null).gap
        g_cokernel = gap(null_space(adn.conj().T, tol), adj_null).gap
        g_corange = gap(column_space(adn.conj().T, tol), adj_range).gap
        cols["range_gap"].append(g_range)
        cols["nullspace_gap"].append(g_null)
        cols["inverse_range_gap"].append(g_range)
        cols["inverse_nullspace_gap"].append(g_null)
        mismatch = max(
            mismatch,
            abs(g_range - max(br)),
            abs(g_null - max(ck)),
            abs(g_cokernel - max(bk)),
            abs(g_corange - max(cr)),
        )
        cols["range_projector_error"].append(left)
        cols["null_projector_error"].append(right)

    err_scale = max(1.0, spectral_norm(adag) * max(1.0, spectral_norm(a)))
    verdicts = {
        k: v for k, v in _verdicts(cols, tol, err_scale).items() if k.startswith("mp_")
    }
    return SequenceDiagnostics(
        inverse_error=tuple(cols["inverse_error"]),
        left_product_error=tuple(cols["left_product_error"]),
        right_product_error=tuple(cols["right_product_error"]),
        range_gap=tuple(cols["range_gap"]),
        nullspace_gap=tuple(cols["nullspace_gap"]),
        inverse_range_gap=tuple(cols["inverse_range_gap"]),
        inverse_nullspace_gap=tuple(cols["inverse_nullspace_gap"]),
        mp_range_terms=tuple(map(_pair, cols["mp_range_terms"])),
        mp_null_terms=tuple(map(_pair, cols["mp_null_terms"])),
        mp_cokernel_terms=tuple(map(_pair, cols["mp_cokernel_terms"])),
        mp_corange_terms=tuple(map(_pair, cols["mp_corange_terms"])),
        range_projector_error=tuple(cols["range_projector_error"]),
        null_projector_error=tuple(cols["null_projector_error"]),
        failed_indices=(),
        verdicts=verdicts,
        alarm=_alarm(verdicts),
        remark_gap_identity_mismatch=mismatch,
    )
