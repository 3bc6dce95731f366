import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose, assert_array_equal
from scipy import stats

from meanineq.errors import ConfigurationError
from meanineq.linalg import singular_values
from meanineq.montecarlo import sample_values
from meanineq.sampling import (
    BLOCK_SIZE,
    InvariantMeasureSpec,
    SeededStream,
    haar_batch,
    invariant_sl_batch,
    random_sl_weights,
    sample_haar_orthogonal,
    sample_haar_unitary,
    sample_invariant_sl,
    sample_sphere,
    sphere_batch,
)

N = 100_000


def within_3se(x, target):
    se = np.std(x, ddof=1) / np.sqrt(x.size)
    return abs(np.mean(x) - target) <= 3 * se


def test_o1_is_plus_minus_one():
    X = haar_batch(1, SeededStream(0), 10_000)[:, 0, 0]
    assert set(np.unique(X)) == {-1.0, 1.0}
    assert abs(np.mean(X > 0) - 0.5) < 3 * 0.5 / np.sqrt(X.size)


def test_u1_is_unit_phase():
    Z = haar_batch(1, SeededStream(0), 10_000, "U")[:, 0, 0]
    assert_allclose(np.abs(Z), 1, atol=1e-15)
    # phase uniform on the circle
    assert stats.kstest(np.angle(Z), stats.uniform(-np.pi, 2 * np.pi).cdf).pvalue > 0.01


@given(st.integers(0, 2**64 - 1), st.integers(1, 8), st.sampled_from(["O", "SO", "U"]))
def test_orthogonality_residual(seed, n, group):
    X = haar_batch(n, SeededStream(seed), 3, group)
    G = np.einsum("mji,mjk->mik", X.conj(), X)
    assert np.max(np.abs(G - np.eye(n))) < 1e-12


def test_determinant_components_balanced():
    det = np.linalg.det(haar_batch(3, SeededStream(7), 20_000))
    assert_allclose(np.abs(det), 1, atol=1e-12)
    assert abs(np.mean(det > 0) - 0.5) < 3 * 0.5 / np.sqrt(det.size)
    det_so = np.linalg.det(haar_batch(3, SeededStream(7), 2000, "SO"))
    assert np.all(det_so > 0)


@pytest.mark.parametrize("n", [2, 4])
def test_first_moment_orthogonal(n):
    X = haar_batch(n, SeededStream(11), N)
    assert within_3se(X[:, 0, 0] ** 2, 1 / n)


def test_first_moment_unitary():
    X = haar_batch(3, SeededStream(12), N, "U")
    assert within_3se(np.abs(X[:, 0, 0]) ** 2, 1 / 3)


def test_uncorrected_qr_is_not_haar():
    # the classic pitfall: without the sign fix the diagonal of Q is biased
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.standard_normal((20_000, 3, 3)))
    assert abs(np.mean(Q[:, 0, 0])) > 0.3
    X = haar_batch(3, SeededStream(0), 20_000)
    assert abs(np.mean(X[:, 0, 0])) < 3 * np.std(X[:, 0, 0]) / np.sqrt(20_000)


def test_left_right_invariance_ks():
    s = SeededStream(99)
    P = haar_batch(4, s.child(2), 1)[0]
    X = haar_batch(4, s.child(0), N)
    Y = haar_batch(4, s.child(1), N)
    tr_px = np.trace(P @ X, axis1=1, axis2=2)
    tr_xp = np.trace(X @ P, axis1=1, axis2=2)
    tr_y = np.trace(Y, axis1=1, axis2=2)
    assert stats.ks_2samp(tr_px, tr_y).pvalue > 0.01
    assert stats.ks_2samp(tr_xp, tr_y).pvalue > 0.01


def test_sample_i_depends_only_on_seed_and_index():
    s = SeededStream(5)
    full = haar_batch(3, s, 3 * BLOCK_SIZE + 17)
    for start, count in [(0, 1), (BLOCK_SIZE - 3, 10), (2 * BLOCK_SIZE + 5, BLOCK_SIZE)]:
        assert_array_equal(haar_batch(3, s.at(start), count), full[start:start + count])
    assert_array_equal(sample_haar_orthogonal(3, s.at(42)), full[42])


def test_streams_are_independent():
    s = SeededStream(5)
    a = sphere_batch(3, s.child(0), 100)
    b = sphere_batch(3, s.child(1), 100)
    assert not np.allclose(a, b)
    assert not np.allclose(sphere_batch(3, SeededStream(6), 100), sphere_batch(3, s, 100))


def test_thread_count_does_not_change_samples():
    s = SeededStream(17)

    def integrand(offset, count):
        return haar_batch(3, s.at(offset), count)[:, 0, 0]

    one = sample_values(integrand, 70_000, threads=1)
    four = sample_values(integrand, 70_000, threads=4)
    assert_array_equal(one, four)


def test_seed_validation():
    with pytest.raises(ConfigurationError):
        SeededStream(-1)
    with pytest.raises(ConfigurationError):
        SeededStream(2**64)


def test_sphere_examples():
    u = sphere_batch(1, SeededStream(3), 1000)[:, 0]
    assert set(np.unique(u)) == {-1.0, 1.0}
    U = sphere_batch(5, SeededStream(4), N)
    assert np.max(np.abs(np.linalg.norm(U, axis=1) - 1)) < 1e-14
    assert within_3se(U[:, 0] ** 2, 1 / 5)
    assert within_3se(U[:, 0] * U[:, 1], 0.0)
    assert np.linalg.norm(sample_sphere(4, SeededStream(1))) == pytest.approx(1, abs=1e-14)


def test_unitary_single_sample():
    Z = sample_haar_unitary(3, SeededStream(2))
    assert np.max(np.abs(Z.conj().T @ Z - np.eye(3))) < 1e-12


def test_invariant_fixed_identity_spectrum_is_orthogonal():
    spec = InvariantMeasureSpec(3, "fixed", spectrum=(1, 1, 1))
    Y = invariant_sl_batch(spec, SeededStream(0), 50)
    for y in Y:
        assert_allclose(singular_values(y), 1, atol=1e-12)
    assert_allclose(np.linalg.det(Y), 1, atol=1e-12)


def test_invariant_fixed_spectrum_preserved():
    spec = InvariantMeasureSpec(3, "fixed", spectrum=(2, 1, 0.5))
    Y, sig = invariant_sl_batch(spec, SeededStream(1), 100, return_spectrum=True)
    assert_allclose(sig, np.tile([2, 1, 0.5], (100, 1)))
    for y in Y:
        assert_allclose(singular_values(y), [2, 1, 0.5], atol=1e-8)


@pytest.mark.parametrize("field", ["real", "complex"])
def test_invariant_loguniform_is_sl(field):
    spec = InvariantMeasureSpec(3, "loguniform", half_width=1.0, field=field)
    Y = invariant_sl_batch(spec, SeededStream(2), 200)
    assert_allclose(np.linalg.det(Y), 1, atol=1e-8)
    assert sample_invariant_sl(spec, SeededStream(2)).shape == (3, 3)


def test_invariant_spec_validation():
    with pytest.raises(ConfigurationError):
        InvariantMeasureSpec(3, "fixed", spectrum=(2, 1, 1))
    with pytest.raises(ConfigurationError):
        InvariantMeasureSpec(3, "loguniform", half_width=-1)
    with pytest.raises(ConfigurationError):
        InvariantMeasureSpec(3, "cauchy")


def test_random_sl_weights():
    w = random_sl_weights(4, SeededStream(0), 30, 0.5, 2.0)
    assert_allclose(np.prod(w, axis=1), 1, rtol=1e-12)
    L = np.max(np.abs(np.log(w)), axis=1)
    assert np.all((L >= 0.5 - 1e-12) & (L <= 2 + 1e-12))
