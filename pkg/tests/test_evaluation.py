import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotor_bss.errors import ValidationError
from rotor_bss.evaluation import corr_coeff, match_sources


def test_identical_is_exactly_one(rng):
    a = rng.standard_normal(500)
    assert corr_coeff(a, a) == 1.0


def test_independent_noise_uncorrelated():
    r = np.random.default_rng(77)
    assert abs(corr_coeff(r.standard_normal(100_000), r.standard_normal(100_000))) <= 0.02


def test_affine_anticorrelation(rng):
    a = rng.standard_normal(300)
    assert corr_coeff(a, -2 * a + 3) == pytest.approx(-1.0, abs=1e-12)


def test_matches_numpy(rng):
    a, b = rng.standard_normal((2, 400))
    assert corr_coeff(a, b) == pytest.approx(np.corrcoef(a, b)[0, 1], abs=1e-14)


def test_errors():
    with pytest.raises(ValidationError):
        corr_coeff([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValidationError):
        corr_coeff([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValidationError):
        corr_coeff([1.0], [1.0])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3), st.floats(-1e3, 1e3))
def test_symmetry_and_affine_invariance(seed, alpha, beta):
    a, b = np.random.default_rng(seed).standard_normal((2, 64))
    assert corr_coeff(a, b) == pytest.approx(corr_coeff(b, a), abs=1e-14)
    assert corr_coeff(alpha * a + beta, b) == pytest.approx(np.sign(alpha) * corr_coeff(a, b), abs=1e-12)


def test_match_identity(rng):
    ref = rng.standard_normal((3, 200))
    rep = match_sources(ref, ref)
    assert rep.permutation == (0, 1, 2)
    np.testing.assert_array_equal(rep.matched_coeffs, 1.0)
    assert rep.mean_matched == 1.0


def test_match_swapped_and_negated(rng):
    ref = rng.standard_normal((2, 200))
    est = np.vstack([-ref[1], ref[0]])
    rep = match_sources(est, ref)
    assert rep.permutation == (1, 0)
    np.testing.assert_allclose(rep.matched_coeffs, 1.0, atol=1e-15)
    assert rep.corr_matrix[0, 1] == pytest.approx(-1.0)


def test_match_beats_greedy():
    # greedy on row 0 would grab column 0 (0.9) and leave row 1 with 0.1
    mag = np.array([[0.9, 0.85], [0.8, 0.1]])
    r = np.random.default_rng(0)
    ref = r.standard_normal((2, 50_000))
    ref -= ref.mean(axis=1, keepdims=True)
    est = np.empty_like(ref)
    for i in range(2):
        est[i] = mag[i] @ ref + 0.05 * r.standard_normal(50_000)
    rep = match_sources(est, ref)
    assert rep.permutation == (1, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.permutations([0, 1, 2]), st.lists(st.sampled_from([-1.0, 1.0]), min_size=3, max_size=3),
       st.lists(st.floats(0.1, 10), min_size=3, max_size=3))
def test_match_invariances(seed, perm, signs, scales):
    r = np.random.default_rng(seed)
    ref = r.standard_normal((3, 300))
    est = ref + 0.5 * r.standard_normal((3, 300))
    base = match_sources(est, ref)
    moved = (np.array(signs) * np.array(scales))[:, None] * est[list(perm)]
    rep = match_sources(moved, ref)
    np.testing.assert_allclose(np.sort(rep.matched_coeffs), np.sort(base.matched_coeffs), atol=1e-12)
    assert np.all(np.abs(rep.corr_matrix) <= 1 + 1e-12)
    assert sorted(rep.permutation) == [0, 1, 2]
    for i, j in enumerate(rep.permutation):
        assert rep.matched_coeffs[i] == abs(rep.corr_matrix[i, j])


def test_match_errors(rng):
    with pytest.raises(ValidationError):
        match_sources(rng.standard_normal((2, 10)), rng.standard_normal((2, 11)))
    flat = rng.standard_normal((2, 10))
    flat[1] = 3.0
    with pytest.raises(ValidationError, match="channel 1"):
        match_sources(flat, rng.standard_normal((2, 10)))
