"""Shared helpers: independent oracles and subspace assertions."""

import numpy as np
import pytest

import geninv as gi


def outer_fullrank_oracle(a, t_space, s_space):
    """Independent construction of the outer inverse with range T, null space S.

    Uses the full-rank representation ``T (C A T)^{-1} C`` with C the
    annihilator of S, which shares no code with the projector-plus-solve path
    in the library.
    """
    a = np.asarray(a)
    tb = t_space.basis
    if s_space.is_trivial:
        cs = np.eye(s_space.ambient_dim)
    else:
        _, _, vh = np.linalg.svd(s_space.basis.conj().T, full_matrices=True)
        cs = vh[s_space.dim:, :]
    if np.iscomplexobj(a) or np.iscomplexobj(tb):
        cs = cs.astype(np.complex128)
    core = cs @ a @ tb
    return tb @ np.linalg.solve(core, cs)


def assert_same_subspace(s1, s2, tol=1e-9):
    assert s1.dim == s2.dim
    assert gi.gap(s1, s2).gap <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
