import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanineq.dim2 import (
    ArcGapMeasure,
    Dim2Config,
    build_counterexample,
    closed_form_average_2d,
    exact_average_2d,
    exact_average_o2,
    integrate_log_rho,
    is_elliptic,
    log_rho_sl2,
    measure_average_2d,
    probe_angles,
    rho_2x2,
    rho_rotation,
)
from meanineq.errors import DomainError, OutOfRegimeError
from meanineq.linalg import rotation, spectral_radius

# scipy.integrate.quad over the rotation and reflection components, frozen
O2_ORACLE = {2.0: 0.33775326479183, 10.0: 1.67340553169851}


def test_rho_rotation_examples():
    assert rho_rotation(Dim2Config(2.0, 0.0)) == pytest.approx(2.0)
    assert rho_rotation(Dim2Config(2.0, np.pi)) == pytest.approx(2.0)
    assert rho_rotation(Dim2Config(2.0, np.pi / 2)) == 1.0
    assert rho_rotation(Dim2Config(1.0, 0.3)) == 1.0


def test_rho_rotation_parabolic():
    # t cos(theta) = 1.25 * 0.8 = 1: a double eigenvalue at 1
    cfg = Dim2Config(2.0, np.arccos(0.8))
    assert rho_rotation(cfg) == pytest.approx(1.0, abs=1e-7)
    assert spectral_radius(cfg.matrix()) == pytest.approx(1.0, abs=1e-7)


def test_is_elliptic():
    assert is_elliptic(Dim2Config(2.0, np.pi / 2))
    assert not is_elliptic(Dim2Config(2.0, 0.1))
    assert not is_elliptic(Dim2Config(1.0, 0.0))  # identity: |cos| = 1/t exactly


@given(st.floats(0.05, 20), st.floats(0, 2 * np.pi))
def test_rho_rotation_matches_eigensolver(a, theta):
    cfg = Dim2Config(a, theta)
    x = abs(cfg.trace_half * np.cos(theta))
    # eigenvalues are ill-conditioned near the parabolic transition
    tol = 1e-7 if abs(x - 1) < 1e-6 else 1e-10
    assert rho_rotation(cfg) == pytest.approx(spectral_radius(cfg.matrix()), abs=tol, rel=tol)


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_rho_2x2_matches_eigensolver(a, b, c, d):
    M = np.array([[a, b], [c, d]])
    ref = spectral_radius(M)
    assert rho_2x2(M) == pytest.approx(ref, rel=1e-6, abs=1e-6)


def test_log_rho_sl2():
    assert log_rho_sl2(0.0) == 0.0
    assert log_rho_sl2(2.0) == 0.0
    assert log_rho_sl2(-2.5) == pytest.approx(np.log(2))


@pytest.mark.parametrize("a", [1.1, 2.0, 5.0, 10.0])
def test_quadrature_matches_closed_form(a):
    assert exact_average_2d(a) == pytest.approx(closed_form_average_2d(a), abs=1e-8)


def test_closed_form_examples():
    assert closed_form_average_2d(2.0) == pytest.approx(np.log(1.25))
    assert closed_form_average_2d(10.0) == pytest.approx(np.log(5.05))
    assert closed_form_average_2d(1.0) == 0.0


@pytest.mark.parametrize("a", sorted(O2_ORACLE))
def test_full_o2_average_differs(a):
    assert exact_average_o2(a) == pytest.approx(O2_ORACLE[a], abs=1e-9)
    assert exact_average_o2(a) > exact_average_2d(a)


def test_critical_point_at_identity():
    q = [exact_average_2d(np.exp(h)) / h for h in (1e-1, 1e-2, 1e-3)]
    assert q[0] > q[1] > q[2]
    assert q[2] < 1e-2
    # log cosh(h) / h ~ h / 2
    assert q[2] == pytest.approx(5e-4, rel=1e-3)


def test_exact_average_validation():
    with pytest.raises(DomainError):
        exact_average_2d(-1.0)
    with pytest.raises(DomainError):
        exact_average_2d(2.0, n_nodes=16)
    with pytest.raises(DomainError):
        integrate_log_rho(np.diag([2.0, 2.0]), 0, 1)


def test_integrate_log_rho_additive():
    A = np.diag([3.0, 1 / 3]) @ rotation(0.4)
    whole = integrate_log_rho(A, 0.0, 2 * np.pi)
    parts = integrate_log_rho(A, 0.0, 1.0) + integrate_log_rho(A, 1.0, 2 * np.pi)
    assert whole == pytest.approx(parts, abs=1e-10)
    # right multiplication by a rotation shifts the angle
    assert whole / (2 * np.pi) == pytest.approx(closed_form_average_2d(3.0), abs=1e-10)


def test_counterexample_default():
    ce = build_counterexample(0.2, 0.6)
    assert ce.s == pytest.approx(0.2) and ce.c == pytest.approx(0.4)
    assert ce.certificate_max_deviation <= 1e-12
    assert ce.eigensolver_max_deviation <= 1e-8
    assert ce.beta + 1 / ce.beta < 2 * ce.alpha
    assert abs(np.linalg.det(ce.A) - 1) < 1e-12
    # hyperbolic at the center of the gap and at its antipode
    assert ce.certificate(ce.c) > 1
    assert ce.certificate(ce.c + np.pi) > 1


def test_counterexample_beta_range():
    ce = build_counterexample(1.0, 1.5, beta=1.0)
    assert ce.certificate_max_deviation == 0
    with pytest.raises(DomainError):
        build_counterexample(1.0, 1.5, beta=10.0)
    with pytest.raises(DomainError):
        build_counterexample(1.0, 1.5, beta=-1.0)


def test_counterexample_regime():
    with pytest.raises(OutOfRegimeError):
        build_counterexample(0.0, np.pi)
    with pytest.raises(DomainError):
        build_counterexample(1.0, 1.0)


def test_counterexample_wrapping_gap():
    ce = build_counterexample(6.0, 0.3)
    assert ce.s == pytest.approx((0.3 - 6.0 + 2 * np.pi) / 2)
    assert ce.certificate_max_deviation <= 1e-12


def test_probe_angles_avoid_gap():
    c, s = 1.0, 0.3
    theta = probe_angles(c, s, 1000)
    assert theta.size == 1000
    mu = ArcGapMeasure(gap=(c - s, c + s), atoms=(c + np.pi / 2,), weights=(1.0,))
    # endpoints of the closed complement touch the gap boundary
    x = (theta - c + s) % np.pi
    inner = theta[(x > 2 * s + 1e-9) & (x < np.pi - 1e-9)]
    assert inner.size >= 996
    assert not any(mu.in_gap(x) for x in inner)


def test_measure_average_zero_off_gap(rng):
    ce = build_counterexample(2.0, 2.8)
    comp = probe_angles(ce.c, ce.s, 400)[1:-1]
    atoms = tuple(rng.choice(comp, 7, replace=False))
    w = rng.dirichlet(np.ones(7))
    mu = ArcGapMeasure(gap=(2.0, 2.8), atoms=atoms, weights=tuple(w / w.sum()))
    assert measure_average_2d(ce.A, mu) == 0.0


def test_measure_average_uniform_cells():
    A = np.diag([2.0, 0.5])
    cells = tuple((k * np.pi / 4, (k + 1) * np.pi / 4, 1 / 8) for k in range(8))
    mu = ArcGapMeasure(cells=cells)
    assert measure_average_2d(A, mu) == pytest.approx(np.log(1.25), abs=1e-10)


def test_measure_average_atoms_match_eigensolver():
    A = np.diag([3.0, 1 / 3]) @ rotation(0.2)
    atoms = (0.0, 0.7, 2.0)
    mu = ArcGapMeasure(atoms=atoms, weights=(0.5, 0.25, 0.25))
    ref = sum(w * np.log(spectral_radius(A @ rotation(t))) for t, w in zip(atoms, mu.weights))
    assert measure_average_2d(A, mu) == pytest.approx(ref, abs=1e-12)


def test_arc_gap_measure_validation():
    with pytest.raises(DomainError):
        ArcGapMeasure(gap=(0.0, 4.0), atoms=(5.0,), weights=(1.0,))
    with pytest.raises(DomainError):
        ArcGapMeasure(gap=(0.0, 1.0), atoms=(0.5,), weights=(1.0,))
    with pytest.raises(DomainError):
        # the antipode of the gap is excluded as well
        ArcGapMeasure(gap=(0.0, 1.0), atoms=(np.pi + 0.5,), weights=(1.0,))
    with pytest.raises(DomainError):
        ArcGapMeasure(atoms=(0.1,), weights=(0.5,))
    with pytest.raises(DomainError):
        ArcGapMeasure()
    with pytest.raises(DomainError):
        ArcGapMeasure(gap=(0.0, 1.0), cells=((0.5, 2.0, 1.0),))


def test_measure_average_domain():
    mu = ArcGapMeasure(atoms=(0.0,), weights=(1.0,))
    with pytest.raises(DomainError):
        measure_average_2d(np.diag([2.0, 2.0]), mu)
    with pytest.raises(DomainError):
        measure_average_2d(np.eye(3), mu)
