import numpy as np
import pytest

import geninv as gi
from geninv import families
from geninv.errors import ExistenceError, InputError

from conftest import assert_same_subspace


def line(*coords):
    v = np.array(coords, dtype=float).reshape(-1, 1)
    return gi.column_space(v)


def test_column_space_examples():
    s = gi.column_space(np.diag([1.0, 0.0]))
    assert_same_subspace(s, line(1, 0))
    assert gi.column_space(np.zeros((3, 3))).dim == 0
    s = gi.column_space(np.array([[1.0, 2.0], [1.0, 2.0]]))
    assert_same_subspace(s, line(1, 1))


def test_null_space_examples():
    assert gi.null_space(np.eye(3)).dim == 0
    assert_same_subspace(gi.null_space(np.diag([1.0, 0.0])), line(0, 1))
    assert_same_subspace(gi.null_space(np.array([[1.0, 1.0]])), line(1, -1))


def test_oblique_projector_orthogonal_case():
    p = gi.oblique_projector(line(1, 0), line(0, 1))
    assert np.allclose(p.matrix, np.diag([1.0, 0.0]))


def test_oblique_projector_skew_case():
    p = gi.oblique_projector(line(1, 0), line(1, 1))
    assert np.allclose(p.matrix, np.array([[1.0, -1.0], [0.0, 0.0]]), atol=1e-12)


def test_oblique_projector_overlapping_rejected():
    with pytest.raises(ExistenceError, match="not complementary"):
        gi.oblique_projector(line(1, 0), line(1, 0))


def test_oblique_projector_trivial_and_full():
    n = 4
    assert np.allclose(
        gi.oblique_projector(gi.trivial_subspace(n), gi.full_subspace(n)).matrix,
        np.zeros((n, n)),
    )
    assert np.allclose(
        gi.oblique_projector(gi.full_subspace(n), gi.trivial_subspace(n)).matrix,
        np.eye(n),
    )


def test_oblique_projector_recovers_subspaces(rng):
    for _ in range(10):
        n = int(rng.integers(2, 8))
        d = int(rng.integers(1, n))
        t = families.random_subspace(rng, n, d)
        s = families.random_subspace(rng, n, n - d)
        if gi.direct_sum_check(t, s).margin < 0.1:
            continue
        p = gi.oblique_projector(t, s)
        assert gi.gap(gi.column_space(p.matrix), t).gap <= 1e-9
        assert gi.gap(gi.null_space(p.matrix), s).gap <= 1e-9


def test_projector_from_matrix_validates():
    gi.ObliqueProjector.from_matrix(np.diag([1.0, 0.0]))
    with pytest.raises(InputError, match="idempotent"):
        gi.ObliqueProjector.from_matrix(np.array([[1.0, 0.0], [0.0, 2.0]]))


def test_gap_examples():
    m = line(1, 0)
    assert gi.gap(m, m) == (0.0, 0.0, 0.0)
    assert gi.gap(m, line(0, 1)) == (1.0, 1.0, 1.0)
    theta = 0.3
    result = gi.gap(m, line(np.cos(theta), np.sin(theta)))
    assert result.gap == pytest.approx(np.sin(theta), abs=1e-12)


def test_gap_trivial_conventions():
    m = line(1, 0)
    zero = gi.trivial_subspace(2)
    assert gi.gap(zero, m).delta_mn == 0.0
    assert gi.gap(m, zero).delta_mn == 1.0
    assert gi.gap(zero, zero).gap == 0.0


def test_gap_symmetry(rng):
    for _ in range(20):
        n = int(rng.integers(2, 9))
        m = families.random_subspace(rng, n, int(rng.integers(0, n + 1)))
        s = families.random_subspace(rng, n, int(rng.integers(0, n + 1)))
        assert gi.gap(m, s).gap == gi.gap(s, m).gap


def test_gap_equal_dimension_rigidity(rng):
    # equal-dimension pairs with deviation < 1 have equal one-sided deviations
    for _ in range(20):
        n = int(rng.integers(2, 9))
        d = int(rng.integers(1, n))
        m = families.random_subspace(rng, n, d)
        k = families.random_skew(rng, n)
        s = gi.Subspace(n, families.cayley(k, 0.4) @ m.basis)
        result = gi.gap(m, s)
        assert result.delta_mn < 1.0
        assert abs(result.delta_mn - result.delta_nm) <= 1e-10


def test_gap_sampling_oracle_examples():
    m = line(1, 0)
    assert gi.gap_sampling_oracle(m, m, 10, 0) <= 1e-12
    assert gi.gap_sampling_oracle(m, line(0, 1), 1, 0) == pytest.approx(1.0)
    theta = 0.3
    n = line(np.cos(theta), np.sin(theta))
    assert gi.gap_sampling_oracle(m, n, 1000, 5) == pytest.approx(np.sin(theta), abs=1e-6)


def test_gap_sampling_oracle_is_lower_bound(rng):
    for trial in range(10):
        n = int(rng.integers(2, 7))
        m = families.random_subspace(rng, n, int(rng.integers(1, n + 1)))
        s = families.random_subspace(rng, n, int(rng.integers(1, n + 1)))
        sampled = gi.gap_sampling_oracle(m, s, 200, trial)
        assert sampled <= gi.gap(m, s).delta_mn + 1e-9


def test_gap_sampling_oracle_converges_for_lines(rng):
    # every unit vector of a 1-dim subspace attains the sup distance
    for trial in range(5):
        m = families.random_subspace(rng, 5, 1)
        s = families.random_subspace(rng, 5, 3)
        sampled = gi.gap_sampling_oracle(m, s, 10_000, trial)
        assert sampled == pytest.approx(gi.gap(m, s).delta_mn, abs=1e-6)


def test_direct_sum_check_examples():
    ok, margin = gi.direct_sum_check(line(1, 0), line(0, 1))
    assert ok and margin == pytest.approx(1.0)
    ok, margin = gi.direct_sum_check(line(1, 0), line(1, 0))
    assert not ok and margin == pytest.approx(0.0, abs=1e-12)
    theta = 0.3
    ok, margin = gi.direct_sum_check(line(1, 0), line(np.cos(theta), np.sin(theta)))
    assert ok
    assert margin == pytest.approx(np.sin(theta / 2) * np.sqrt(2.0), abs=1e-12)


def test_direct_sum_dimension_mismatch_fails():
    ok, _ = gi.direct_sum_check(gi.full_subspace(3), line(1, 0, 0))
    assert not ok


def test_ambient_mismatch_rejected():
    with pytest.raises(InputError):
        gi.gap(line(1, 0), line(1, 0, 0))
