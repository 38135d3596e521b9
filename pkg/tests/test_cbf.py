import math

import numpy as np
import pytest

from eigenapprox import (
    AccuracyError,
    AliasingError,
    CBFParams,
    CBFState,
    ConfigError,
    MollifierSpec,
    SpectralField,
    Torus,
    TorusLaplacian,
    TorusStokes,
    Trajectory,
    cbf_rhs,
    divergence_residual,
    energy_ledger,
    from_spectral_field,
    load_trajectory,
    random_divergence_free_state,
    save_trajectory,
    scale,
    simulate,
    space_mollify,
    state_divergence_residual,
    state_energy,
    state_enstrophy,
    step,
    subtract,
    taylor_green,
    time_mollify,
    to_spectral_field,
)

TWO_PI2 = 2.0 * math.pi**2


def _params(**kw):
    base = dict(mu=0.1, dim=2, resolution=16, dt=2e-3, t_final=0.1, snapshot_every=10)
    base.update(kw)
    return CBFParams(**base)


def test_params_validation():
    for bad in (
        dict(mu=0.0),
        dict(mu=-1.0),
        dict(beta=-0.1),
        dict(r=-1.0),
        dict(dim=4),
        dict(resolution=15),
        dict(resolution=6),
        dict(dt=0.0),
        dict(t_final=0.0),
        dict(snapshot_every=0),
    ):
        with pytest.raises(ConfigError):
            _params(**bad)


def test_dealias_cutoff_tightens_with_absorption():
    assert _params(resolution=16).dealias_kmax == 5  # 2/3 rule
    assert _params(resolution=16, beta=1.0).dealias_kmax == 3  # 1/2 rule for the cubic term


def test_taylor_green_invariants():
    p = _params()
    s = taylor_green(p)
    assert state_energy(s, p) == pytest.approx(TWO_PI2, rel=1e-14)
    assert state_enstrophy(s, p) == pytest.approx(2.0 * TWO_PI2, rel=1e-14)
    assert state_divergence_residual(s) < 1e-14
    with pytest.raises(ConfigError):
        taylor_green(CBFParams(mu=0.1, dim=3, resolution=16, dt=1e-3, t_final=0.1))


def test_taylor_green_rhs_is_purely_viscous():
    # the advection term of this vortex is a gradient, so the projection
    # removes it and the rhs reduces to -mu |k|^2 u with |k|^2 = 2
    p = _params()
    s = taylor_green(p)
    rhs = cbf_rhs(s, p)
    lin = scale(to_spectral_field(s), -2.0 * p.mu)
    assert subtract(rhs, lin).l2() < 1e-13


def test_zero_state_rhs_is_zero():
    p = _params()
    z = CBFState(0.0, np.zeros((2, 16, 9), dtype=complex))
    assert cbf_rhs(z, p).l2() == 0.0


def test_taylor_green_exact_decay():
    # the integrating factor handles the viscous term exactly and the
    # projected nonlinearity vanishes, so the decay is exact to roundoff
    p = _params()
    traj = simulate(taylor_green(p), p)
    for t, s in zip(traj.times, traj.states):
        want = TWO_PI2 * math.exp(-4.0 * p.mu * t)
        assert state_energy(s, p) == pytest.approx(want, rel=1e-12)
        assert state_divergence_residual(s) < 1e-14


def test_step_keeps_support_and_structure():
    p = _params(beta=1.0)
    s = random_divergence_free_state(p, kmax_init=2, amplitude=1.0, seed=1)
    s1 = step(s, p)
    assert s1.time == pytest.approx(p.dt)
    assert state_divergence_residual(s1) < 1e-13
    f = to_spectral_field(s1)
    assert divergence_residual(f) < 1e-13
    kmax = p.dealias_kmax
    assert all(max(abs(ki) for ki in idx.k) <= kmax for idx in f.coefficients)


def test_blow_up_guard():
    p = CBFParams(mu=1e-6, dim=2, resolution=16, dt=5.0, t_final=5.0, snapshot_every=1)
    s = random_divergence_free_state(p, kmax_init=3, amplitude=50.0, seed=0)
    with pytest.raises(AccuracyError, match="blow-up"):
        step(s, p)


def test_simulate_guards():
    p = _params(dt=0.3, t_final=1.0)
    s = CBFState(0.0, np.zeros((2, 16, 9), dtype=complex))
    with pytest.raises(ConfigError, match="integer multiple"):
        simulate(s, p)
    with pytest.raises(ConfigError, match="does not match"):
        simulate(CBFState(0.0, np.zeros((2, 8, 5), dtype=complex)), _params())


def test_energy_ledger_without_absorption():
    p = _params()
    traj = simulate(taylor_green(p), p)
    led = energy_ledger(traj, 0.0, 0.1)
    assert led.absorption == 0.0  # beta = 0: the term is absent, not just small
    assert led.kinetic0 == pytest.approx(TWO_PI2, rel=1e-14)
    assert led.kinetic1 < led.kinetic0
    assert led.dissipation > 0.0
    assert abs(led.residual) < 1e-8 * led.kinetic0


def test_energy_ledger_with_absorption():
    p = CBFParams(mu=0.05, beta=1.0, r=2.0, dim=2, resolution=16, dt=1e-3, t_final=0.1, snapshot_every=10)
    s = random_divergence_free_state(p, kmax_init=2, amplitude=1.0, seed=3)
    traj = simulate(s, p)
    led = energy_ledger(traj, 0.0, 0.1)
    assert led.absorption > 0.0
    assert abs(led.residual) < 1e-9 * led.kinetic0
    row = led.csv_row()
    assert len(row) == len(led.CSV_HEADER) == 7
    assert row[-1] == led.residual


def test_energy_ledger_guards():
    p = _params()
    traj = simulate(taylor_green(p), p)
    with pytest.raises(ConfigError, match="t0 < t1"):
        energy_ledger(traj, 0.1, 0.0)
    with pytest.raises(ConfigError, match="snapshot times"):
        energy_ledger(traj, 0.013, 0.1)
    short = Trajectory(p, traj.times[:2], traj.states[:2])
    with pytest.raises(ConfigError, match="3 snapshots"):
        energy_ledger(short, traj.times[0], traj.times[1])


def _constant_trajectory(p, base, t_end=0.2, spacing=0.01):
    times = [round(i * spacing, 10) for i in range(int(round(t_end / spacing)) + 1)]
    return Trajectory(p, times, [CBFState(t, base.coeffs.copy()) for t in times])


def test_mollifier_density_normalized():
    spec = MollifierSpec(0.05)
    s = np.linspace(-0.06, 0.06, 200001)
    assert np.trapezoid(spec.density(s), s) == pytest.approx(1.0, abs=1e-12)
    assert np.all(spec.density(np.array([-0.05, 0.05, 0.2])) == 0.0)
    assert spec.density(0.01) == spec.density(-0.01)
    with pytest.raises(ConfigError):
        MollifierSpec(0.0)


def test_time_mollify_reproduces_constants():
    p = _params(dt=1e-2, snapshot_every=1, t_final=0.2)
    base = taylor_green(p)
    traj = _constant_trajectory(p, base)
    f0 = to_spectral_field(base)
    got = time_mollify(traj, MollifierSpec(0.05), 0.1)
    assert subtract(got, f0).l2() < 1e-10
    # at the window edge only half the bump mass is inside the data range
    edge = time_mollify(traj, MollifierSpec(0.05), 0.0)
    assert subtract(edge, scale(f0, 0.5)).l2() < 1e-10


def test_time_mollify_reproduces_linear_growth():
    # an even kernel has zero first moment, so linear-in-time data pass through
    p = _params(dt=1e-2, snapshot_every=1, t_final=0.2)
    base = taylor_green(p)
    times = [round(i * 0.01, 10) for i in range(21)]
    traj = Trajectory(p, times, [CBFState(t, (1.0 + t) * base.coeffs) for t in times])
    got = time_mollify(traj, MollifierSpec(0.05), 0.1)
    assert subtract(got, scale(to_spectral_field(base), 1.1)).l2() < 1e-10


def test_time_mollify_guards():
    p = _params(dt=1e-2, snapshot_every=1, t_final=0.2)
    traj = _constant_trajectory(p, taylor_green(p))
    with pytest.raises(ConfigError, match="under-resolves"):
        time_mollify(traj, MollifierSpec(0.005), 0.1)
    with pytest.raises(ConfigError, match="outside"):
        time_mollify(traj, MollifierSpec(0.05), 0.5)


def test_space_mollify_damps_and_converges_to_identity():
    p = _params()
    s = taylor_green(p)  # all modes on the |k|^2 = 2 shell
    damped = space_mollify(s, 4.0, p)
    assert state_energy(damped, p) / state_energy(s, p) == pytest.approx(math.exp(-1.0), rel=1e-13)
    near_id = space_mollify(s, 1e12, p)
    assert np.max(np.abs(near_id.coeffs - s.coeffs)) < 1e-10 * np.max(np.abs(s.coeffs))
    assert state_divergence_residual(damped) < 1e-14
    with pytest.raises(ConfigError):
        space_mollify(s, 0.0, p)


def test_state_field_round_trip():
    p = _params(beta=1.0)
    s = random_divergence_free_state(p, kmax_init=3, amplitude=2.0, seed=7)
    f = to_spectral_field(s)
    assert f.l2() == pytest.approx(math.sqrt(state_energy(s, p)), rel=1e-12)
    back = from_spectral_field(f, p, time=s.time)
    assert np.max(np.abs(back.coeffs - s.coeffs)) < 1e-12 * np.max(np.abs(s.coeffs))


def test_random_state_is_seeded_and_normalized():
    p = _params()
    a = random_divergence_free_state(p, kmax_init=2, amplitude=3.0, seed=5)
    b = random_divergence_free_state(p, kmax_init=2, amplitude=3.0, seed=5)
    assert np.array_equal(a.coeffs, b.coeffs)
    assert state_energy(a, p) == pytest.approx(9.0, rel=1e-12)
    assert state_divergence_residual(a) < 1e-13
    with pytest.raises(ConfigError):
        random_divergence_free_state(p, kmax_init=0)
    with pytest.raises(ConfigError):
        random_divergence_free_state(p, kmax_init=99)


def test_from_spectral_field_gates():
    p = _params()
    op = TorusStokes(Torus(2))
    k_out = p.dealias_kmax + 1
    outside = SpectralField(op, {(k_out, 0): np.array([0.0, 1.0]), (-k_out, 0): np.array([0.0, 1.0])})
    with pytest.raises(AliasingError):
        from_spectral_field(outside, p)
    with_mean = SpectralField(op, {(0, 0): np.array([1.0, 0.0])})
    with pytest.raises(ConfigError, match="zero-mean"):
        from_spectral_field(with_mean, p)
    asym = SpectralField(op, {(1, 0): np.array([0.0, 1.0 + 1.0j])})
    with pytest.raises(ConfigError, match="conjugate"):
        from_spectral_field(asym, p)
    scalar = SpectralField(TorusLaplacian(Torus(2)), {(1, 0): 1.0 + 0j})
    with pytest.raises(ConfigError):
        from_spectral_field(scalar, p)


def test_checkpoint_round_trip_npz(tmp_path):
    p = _params(t_final=0.02)
    traj = simulate(taylor_green(p), p)
    d = tmp_path / "ck"
    save_trajectory(traj, str(d), fmt="npz")
    back = load_trajectory(str(d))
    assert back.params == p
    assert back.times == traj.times
    for a, b in zip(traj.states, back.states):
        assert np.array_equal(a.coeffs, b.coeffs)


def test_checkpoint_round_trip_csv(tmp_path):
    p = _params(t_final=0.02)
    traj = simulate(taylor_green(p), p)
    d = tmp_path / "ck"
    save_trajectory(traj, str(d), fmt="csv")
    back = load_trajectory(str(d))
    for a, b in zip(traj.states, back.states):
        assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-12
    with pytest.raises(ConfigError):
        save_trajectory(traj, str(tmp_path / "x"), fmt="hdf5")
