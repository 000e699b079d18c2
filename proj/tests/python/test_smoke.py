"""End-to-end smoke of the python bindings on very small experiments."""

import math

import pytest

import relaxflow as rf


def tiny_config():
    cfg = rf.ExperimentConfig()
    cfg.cells = [32, 1, 1]
    cfg.t_end = 0.01
    cfg.snapshots = 3
    return cfg


def test_params_and_eos():
    p = rf.PhysParams()
    assert p.valid()
    assert rf.pressure(2.0, p) == pytest.approx(4.0)  # A rho^gamma, A=1, gamma=2
    assert rf.phi(2.0, p) == pytest.approx(2.0)
    assert rf.phi(1.0, p) == 0.0
    s = rf.RelaxState()
    s.rho = 1.0
    s.mom = [1.0, 0.0, 0.0]
    s.tau2 = 1.0
    e = rf.entropy(s, p)
    assert e.kinetic_part == pytest.approx(2.0)
    assert e.tau2_part == pytest.approx(2.0)


def test_dev_sym_frozen_value():
    grad = [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    d = rf.dev_sym(grad)
    assert d.xx == pytest.approx(4.0 / 3.0)
    assert d.yy == pytest.approx(-2.0 / 3.0)
    assert d.zz() == pytest.approx(-2.0 / 3.0)
    assert d.xy == 0.0


def test_parse_config_round_trip_and_errors():
    cfg = rf.parse_config("cells = 48\nnu = 0.5\nreconstruction = muscl-minmod\n")
    assert cfg.cells == [48, 1, 1]
    assert cfg.nu == 0.5
    with pytest.raises(ValueError):
        rf.parse_config("frobble = 1\n")
    with pytest.raises(ValueError):
        rf.parse_config("cfl = 2.0\n")


def test_source_decay():
    p = rf.PhysParams()
    p.eps1 = 0.1
    p.eps2 = 0.1
    tau1, tau2 = rf.relax_source_exact(
        rf.SymTraceless3(0.5, 0.0, 0.0, 0.0, 0.0), 1.0, 0.01, p
    )
    assert tau1.xx == pytest.approx(0.5 * math.exp(-1.0), rel=1e-14)
    assert tau2 == pytest.approx(math.exp(-1.0), rel=1e-14)


def test_simulate_dissipates_entropy():
    traj = rf.simulate(tiny_config())
    assert traj.ok()
    assert len(traj.snapshots) == 3
    h = traj.entropy_history
    assert len(h) == len(traj.step_times)
    assert all(b <= a + 1e-15 for a, b in zip(h, h[1:]))
    rho = traj.snapshots[-1].component("rho")
    assert len(rho) == 32
    assert all(r > 0 for r in rho)


def test_compare_returns_error_series():
    series = rf.compare(tiny_config())
    assert series.sup_total > 0.0
    assert math.isfinite(series.sup_total)
    assert series.rows[0].time == 0.0
    assert max(r.err_total for r in series.rows) == pytest.approx(
        series.sup_total
    )


def test_structure_check_and_its_negative_control():
    p = rf.PhysParams()
    good = rf.check_structure(10, 7, p)
    assert good.passed
    assert good.worst_min_eig > 0.0
    bad = rf.check_structure(10, 7, p, corrupt=1.0)
    assert not bad.passed


def test_fit_rate_recovers_exact_power_law():
    pts = [rf.RatePoint(e, 0.37 * e**2) for e in (0.1, 0.05, 0.025, 0.0125)]
    fit = rf.fit_rate(pts)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert math.exp(fit.intercept) == pytest.approx(0.37, rel=1e-12)
