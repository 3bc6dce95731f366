import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from meanineq.errors import DegenerateEigenvalueError, DomainError, OutOfRegimeError
from meanineq.linalg import DiagonalSpec, spectral_radius
from meanineq.perturbation import (
    EigenPair,
    check_eigenvalue_containment,
    construct_x0,
    derivative_check,
    eigenpair,
    exp_family_derivative,
    exp_family_log_derivative,
    fd_eigen_derivative,
    gershgorin_disks,
    kato_derivative,
    local_derivative_inequality,
    perturbed_radius_bounds,
    random_simple_instances,
)
from meanineq.sampling import SeededStream, random_traceless_directions

cplx = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def test_disks_example():
    A = np.array([[4.0, 1, -2], [0.5, -3, 0], [0, 1j, 1]])
    disks = gershgorin_disks(A)
    rows = [(d.center, d.radius) for d in disks if d.variant == "row"]
    cols = [(d.center, d.radius) for d in disks if d.variant == "column"]
    assert rows == [(4, 3.0), (-3, 0.5), (1, 1.0)]
    assert cols == [(4, 0.5), (-3, 2.0), (1, 2.0)]


def test_containment_diagonal_is_degenerate_disks():
    res = check_eigenvalue_containment(np.diag([1.0, 2.0, -5.0]))
    assert res.contained
    assert all(d.radius == 0 for d in res.disks)
    assert sorted(w.row for w in res.witnesses) == [0, 1, 2]


def test_containment_boundary_case():
    # eigenvalues 0 and 2 sit exactly on the boundary of both disks
    res = check_eigenvalue_containment(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert res.contained
    for w in res.witnesses:
        assert w.row is not None and w.column is not None


@given(st.integers(1, 6).flatmap(lambda n: arrays(np.complex128, (n, n), elements=cplx)))
def test_containment_random(A):
    res = check_eigenvalue_containment(A)
    assert res.contained
    assert len(res.witnesses) == A.shape[0]


def test_containment_to_dict():
    doc = check_eigenvalue_containment(np.array([[1.0, 2], [0, 3]])).to_dict()
    assert doc["contained"] is True
    assert len(doc["disks"]) == 4 and len(doc["witnesses"]) == 2


def test_bracket_examples():
    d = np.array([3.0, 1.0, 1 / 3])
    b = perturbed_radius_bounds(d, np.zeros((3, 3)), 0.1)
    assert b.actual == pytest.approx(3.0) and b.holds
    assert b.lower == pytest.approx(3 * (1 - 0.6)) and b.upper == pytest.approx(3 * 1.2)
    M = np.full((3, 3), 1 / 3)
    b = perturbed_radius_bounds(d, M, 0.1)
    assert b.lower <= b.actual <= b.upper


def test_bracket_random(rng):
    for _ in range(300):
        n = int(rng.integers(3, 6))
        d = np.sort(np.exp(rng.uniform(-2, 2, n)))[::-1]
        M = rng.uniform(-1, 1, (n, n))
        M /= np.maximum(np.abs(M).sum(axis=1, keepdims=True), 1)
        t = rng.uniform(0, 1 / (2 * n))
        assert perturbed_radius_bounds(d, M, t).holds


def test_bracket_needs_row_sum_norm():
    # with a max-entry reading of the norm the upper bound would fail
    n, t = 3, 0.1 / 6
    ones = np.ones((n, n))
    rho = spectral_radius(np.eye(n) + t * ones)
    assert rho == pytest.approx(1 + n * t)
    assert rho > 1 + 2 * t
    with pytest.raises(DomainError):
        perturbed_radius_bounds(np.ones(n), ones, t)


def test_bracket_regime_and_domain():
    with pytest.raises(OutOfRegimeError):
        perturbed_radius_bounds(np.ones(3), np.zeros((3, 3)), 1 / 6)
    with pytest.raises(DomainError):
        perturbed_radius_bounds([1.0, 2.0], np.zeros((2, 2)), 0.01)
    with pytest.raises(DomainError):
        perturbed_radius_bounds([1.0, 1.0], np.zeros((3, 3)), 0.01)


def test_kato_diagonal_examples():
    T = np.diag([3.0, 1.0])
    pair = eigenpair(T, 3.0)
    assert pair.value == pytest.approx(3)
    assert kato_derivative(T, np.diag([1.0, 0.0]), pair) == pytest.approx(1)
    assert kato_derivative(T, np.diag([0.0, 1.0]), pair) == pytest.approx(0, abs=1e-15)
    assert kato_derivative(T, np.array([[0.0, 1], [1, 0]]), pair) == pytest.approx(0, abs=1e-15)


def test_kato_non_normal_uses_left_vector():
    T = np.array([[2.0, 5.0], [0.0, 1.0]])
    D = np.array([[0.0, 0.0], [1.0, 0.0]])
    pair = eigenpair(T, 2.0)
    fd = fd_eigen_derivative(lambda x: T + x * D, 2.0)
    # exact value 5; central differences carry an O(h^2) error of about 2.5e-6 here
    assert kato_derivative(T, D, pair) == pytest.approx(5)
    assert abs(fd - 5) < 1e-5
    # a missing left vector is recomputed from T^H
    bare = EigenPair(pair.value, pair.vector, pair.gap)
    assert kato_derivative(T, D, bare) == pytest.approx(5)
    # using the right vector in place of the left one is wrong for non-normal T
    naive = EigenPair(pair.value, pair.vector, pair.gap, pair.vector)
    assert abs(kato_derivative(T, D, naive) - 5) > 1


def test_kato_matches_fd_random_nonnormal(rng):
    for _ in range(50):
        T = rng.standard_normal((4, 4))
        pair = eigenpair(T)
        if pair.gap < 0.1:
            continue
        D = rng.standard_normal((4, 4))
        fd = fd_eigen_derivative(lambda x: T + x * D, pair.value)
        assert abs(kato_derivative(T, D, pair) - fd) <= 1e-6 * (1 + abs(pair.value))


def test_expvar_matches_kato_nonnormal(rng):
    T = rng.standard_normal((5, 5))
    pair = eigenpair(T)
    d = rng.uniform(-1, 1, 5)
    chk = derivative_check(d, T, pair)
    assert chk.consistency_error < 1e-12
    assert chk.fd_error < 1e-6
    assert exp_family_derivative(d, T, pair) == pytest.approx(chk.kato)


def test_expvar_real_for_orthogonal():
    for d, T, pair in random_simple_instances(4, SeededStream(0), 30):
        logd = exp_family_log_derivative(d, T, pair)
        assert abs(logd.imag) <= 1e-12
        assert logd.real == pytest.approx(np.sum(d * np.abs(pair.vector) ** 2), abs=1e-12)


def test_degenerate_eigenvalue_rejected():
    with pytest.raises(DegenerateEigenvalueError):
        kato_derivative(np.eye(3), np.eye(3), eigenpair(np.eye(3), 1.0))
    with pytest.raises(DegenerateEigenvalueError):
        exp_family_log_derivative(np.ones(2), np.eye(2), eigenpair(np.eye(2), 1.0))


def test_random_simple_instances_gap():
    for _, _, pair in random_simple_instances(5, SeededStream(1), 20, min_gap=0.3, group="U"):
        assert pair.gap >= 0.3


def test_projection_is_idempotent(rng):
    T = rng.standard_normal((4, 4))
    P = eigenpair(T).projection()
    assert_allclose(P @ P, P, atol=1e-10)
    assert np.trace(P) == pytest.approx(1)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_x0_construction(n):
    X0, pair = construct_x0(n)
    assert_allclose(X0.T @ X0, np.eye(n), atol=1e-15)
    assert_allclose(X0 @ pair.vector, pair.value * pair.vector, atol=1e-15)
    assert abs(pair.value) == 1
    vals = scipy.linalg.eigvals(X0)
    others = vals[np.abs(vals - pair.value) > 1e-12]
    assert others.size == n - 1
    assert pair.value == (1 if n % 2 else 1j)


def test_x0_needs_n3():
    with pytest.raises(DomainError):
        construct_x0(2)


def test_local_derivative_examples():
    r = local_derivative_inequality(3, (1.0, 0.0, -1.0))
    assert r.derivative == pytest.approx(1) and r.floor == pytest.approx(0.25) and r.holds
    # equality case of the floor for n = 4
    r = local_derivative_inequality(4, (1.0, -1 / 3, -1 / 3, -1 / 3))
    assert r.derivative == pytest.approx(1 / 3) and r.floor == pytest.approx(1 / 3) and r.holds
    r = local_derivative_inequality(4, (1.0, 1.0, -1.0, -1.0))
    assert r.derivative == pytest.approx(1)
    assert r.imag == 0


@pytest.mark.parametrize("n", range(3, 9))
def test_local_derivative_random(n):
    for spec in random_traceless_directions(n, SeededStream(n), 100):
        r = local_derivative_inequality(n, spec)
        assert r.holds
        assert abs(r.derivative - r.exact) <= 1e-10


def test_local_derivative_matches_fd():
    n = 4
    spec = DiagonalSpec((1.0, 0.2, -0.5, -0.7), traceless=True, normalized=True)
    X0, pair = construct_x0(n)
    d = np.asarray(spec.exponents)
    fd = fd_eigen_derivative(lambda x: np.exp(d * x)[:, None] * X0, pair.value)
    assert (fd / pair.value).real == pytest.approx(local_derivative_inequality(n, spec).derivative,
                                                   abs=1e-8)


def test_local_derivative_rejects_bad_d():
    with pytest.raises(DomainError):
        local_derivative_inequality(3, (1.0, 0.5, 0.0))
    with pytest.raises(DomainError):
        local_derivative_inequality(4, (1.0, 0.0, -1.0))
