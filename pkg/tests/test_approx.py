import math

import numpy as np
import pytest

from eigenapprox import (
    ConfigError,
    DirichletLaplacian,
    Interval,
    ModeIndex,
    SpectralField,
    Torus,
    TorusLaplacian,
    TorusStokes,
    c_gamma,
    enumerate_modes,
    fractional_norm,
    phi,
    pi_theta,
    pi_theta_error_norm,
    pi_theta_gap_norm,
    random_field,
    semigroup_apply,
    smoothing_bound,
    subtract,
)


def test_pi_theta_strict_cutoff():
    op = DirichletLaplacian(Interval(math.pi))  # eigenvalues k^2 exactly
    f = SpectralField(op, {(1,): 1.0 + 0j, (2,): 1.0 + 0j, (3,): 1.0 + 0j})
    g = pi_theta(f, 0.5)  # cutoff lambda < 4, strict: keeps k=1 only
    kept = dict(g.items_sorted())
    assert list(kept) == [ModeIndex((1,))]
    assert complex(kept[ModeIndex((1,))]) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_pi_theta_empty_when_theta_large():
    op = DirichletLaplacian(Interval(math.pi))
    f = SpectralField(op, {(1,): 1.0 + 0j})
    g = pi_theta(f, 1.0)  # cutoff lambda < 1; lambda_1 = 1 is dropped
    assert not g.coefficients


def test_pi_theta_is_a_contraction_in_every_fractional_norm():
    rng = np.random.default_rng(0)
    op = TorusLaplacian(Torus(2))
    for _ in range(25):
        f = random_field(op, 60.0, rng, n_modes=12)
        theta = float(rng.uniform(0.05, 1.0))
        alpha = float(rng.uniform(0.0, 2.0))
        assert fractional_norm(pi_theta(f, theta), alpha) <= fractional_norm(f, alpha) + 1e-15


def test_fractional_norm_single_mode():
    op = DirichletLaplacian(Interval(1.0))
    f = SpectralField(op, {(3,): 2.0 + 0j})
    lam = op.eigenvalue(ModeIndex((3,)))
    for a in (0.0, 0.5, 1.3):
        assert fractional_norm(f, a) == pytest.approx(2.0 * lam**a, rel=1e-14)


def test_semigroup_apply_single_mode():
    op = DirichletLaplacian(Interval(math.pi))
    f = SpectralField(op, {(2,): 1.0 + 0j})
    g = semigroup_apply(f, 0.3)
    assert complex(g.coefficients[ModeIndex((2,))]) == pytest.approx(math.exp(-0.3 * 4.0), rel=1e-15)
    assert semigroup_apply(f, 0.0).coefficients[ModeIndex((2,))] == 1.0 + 0j


def test_c_gamma_values():
    assert c_gamma(0.0) == 1.0
    assert c_gamma(1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert c_gamma(2.0) == pytest.approx(4.0 * math.exp(-2.0), rel=1e-15)
    # sup_{x>=0} x^g e^{-x} attained at x=g: check by dense scan
    for g in (0.3, 1.7):
        xs = np.linspace(0.0, 40.0, 400001)
        brute = float(np.max(xs**g * np.exp(-xs)))
        assert c_gamma(g) == pytest.approx(brute, rel=1e-9)
        assert c_gamma(g) >= brute


def test_smoothing_bound_both_branches():
    rng = np.random.default_rng(1)
    op = TorusLaplacian(Torus(2))
    lam1 = 1.0  # smallest positive eigenvalue of the 2-torus
    for _ in range(200):
        f = random_field(op, 80.0, rng, n_modes=10, include_mean=False)
        alpha = float(rng.uniform(0.0, 1.5))
        beta = float(rng.uniform(0.0, 1.5))
        theta = float(rng.uniform(0.01, 2.0))
        lhs = fractional_norm(semigroup_apply(f, theta), alpha)
        if alpha >= beta:
            bound = c_gamma(alpha - beta) * theta ** -(alpha - beta) * fractional_norm(f, beta)
        else:
            bound = math.exp(-lam1 * theta) * lam1 ** (alpha - beta) * fractional_norm(f, beta)
        assert lhs <= bound * (1.0 + 1e-12)
        assert smoothing_bound(theta, alpha, beta, lam1) == pytest.approx(bound / fractional_norm(f, beta), rel=1e-13)


def test_phi_closed_form_matches_brute_force():
    # phi(theta, kappa) = sup over the dropped set lambda >= theta^-2 of lambda^kappa e^{-sqrt(lambda)}
    for theta, kappa in [(0.5, 1.0), (0.2, 0.0), (0.9, -0.5), (0.05, 2.0), (0.9, 3.0)]:
        lo = theta**-2
        lams = np.linspace(lo, lo + 400.0, 2_000_001)
        brute = float(np.max(lams**kappa * np.exp(-np.sqrt(lams))))
        assert phi(theta, kappa) >= brute
        assert phi(theta, kappa) == pytest.approx(brute, rel=1e-6)


def test_phi_examples():
    assert phi(1.0, 0.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    # kappa = 2, theta = 1: interior max at lambda = 16, value 16^2 e^{-4}
    assert phi(1.0, 2.0) == pytest.approx(256.0 * math.exp(-4.0), rel=1e-15)
    # kappa = 1, small theta: boundary value theta^-2 e^{-1/theta}
    assert phi(0.1, 1.0) == pytest.approx(100.0 * math.exp(-10.0), rel=1e-15)
    assert phi(0.25, 1.0) == pytest.approx(16.0 * math.exp(-4.0), rel=1e-15)


def test_pi_theta_error_vs_gap_norm():
    op = DirichletLaplacian(Interval(math.pi))
    f = SpectralField(op, {(1,): 1.0 + 0j, (3,): 1.0 + 0j})
    theta = 0.4  # cutoff 6.25: keeps lambda=1, drops lambda=9
    # distance to the field itself: kept-mode damping plus full dropped mass
    want_err = math.sqrt((1.0 - math.exp(-0.4)) ** 2 + 1.0)
    assert pi_theta_error_norm(f, theta, 0.0) == pytest.approx(want_err, rel=1e-14)
    # distance to the semigroup: kept modes cancel, only the damped tail is left
    want_gap = math.exp(-0.4 * 9.0)
    assert pi_theta_gap_norm(f, theta, 0.0) == pytest.approx(want_gap, rel=1e-14)
    direct = subtract(pi_theta(f, theta), semigroup_apply(f, theta))
    assert fractional_norm(direct, 0.0) == pytest.approx(want_gap, rel=1e-13)


def test_gap_norm_zero_when_nothing_dropped():
    op = DirichletLaplacian(Interval(math.pi))
    f = SpectralField(op, {(1,): 1.0 + 0j})
    assert pi_theta_gap_norm(f, 0.5, 1.0) == 0.0


def test_key_estimate_random_sweep():
    # || (Pi_theta - e^{-theta A}) f ||_alpha <= phi(theta, alpha - beta) ||f||_beta
    rng = np.random.default_rng(2)
    for op in (TorusLaplacian(Torus(2)), TorusStokes(Torus(2)), DirichletLaplacian(Interval(1.0))):
        for _ in range(100):
            f = random_field(op, 90.0, rng, n_modes=8, include_mean=False)
            theta = float(rng.uniform(0.05, 1.2))
            alpha = float(rng.uniform(0.0, 1.5))
            beta = float(rng.uniform(0.0, 1.5))
            lhs = pi_theta_gap_norm(f, theta, alpha)
            rhs = phi(theta, alpha - beta) * fractional_norm(f, beta)
            assert lhs <= rhs * (1.0 + 1e-12)


def test_mode_counts():
    t2 = TorusLaplacian(Torus(2))
    assert len(enumerate_modes(t2, 4.0)) == 13  # k with |k|^2 <= 4, mean included
    assert len(enumerate_modes(t2, 1.9)) == 5
    st = TorusStokes(Torus(2))
    assert len(enumerate_modes(st, 1.9)) == 4  # k = 0 carries no divergence-free mode
    d1 = DirichletLaplacian(Interval(math.pi))
    assert len(enumerate_modes(d1, 9.0)) == 3


def test_invalid_arguments():
    op = DirichletLaplacian(Interval(1.0))
    f = SpectralField(op, {(1,): 1.0 + 0j})
    with pytest.raises(ConfigError):
        pi_theta(f, 0.0)
    with pytest.raises(ConfigError):
        pi_theta(f, -1.0)
    with pytest.raises(ConfigError):
        semigroup_apply(f, -0.1)
    with pytest.raises(ConfigError):
        phi(0.0, 1.0)
    with pytest.raises(ConfigError):
        c_gamma(-0.5)
    with pytest.raises(ConfigError):
        pi_theta_gap_norm(f, 0.0, 1.0)
