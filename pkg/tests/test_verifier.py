import math

import numpy as np
import pytest

from nswp import (GaugeFunction, Grid1D, NswpSolution, PhysicalConstants,
                  Rest, SampledShape, Sinusoid, StaticPotential, analytic_psi,
                  classical_motion_check, decomposition_report,
                  energy_split_check, htilde_residual,
                  infinitesimal_evolution_check, lowest_eigenpairs,
                  no_nswp_for_time_dependent_frequency, shift_field)
from nswp.constructor import gauge_sho_case

CONSTS = PhysicalConstants()
OMEGA = 1.0
PERIOD = 2.0 * math.pi / OMEGA


@pytest.fixture(scope="module")
def sho_sol():
    grid = Grid1D(-8.0, 8.0, 4096)
    v = StaticPotential.harmonic(OMEGA)
    pair = lowest_eigenpairs(v, grid, CONSTS, 1)[0]
    traj = Sinusoid(amplitude=2.0, omega=OMEGA)
    sol = NswpSolution(SampledShape.from_eigenpair(pair), traj,
                       gauge_sho_case(OMEGA, traj, CONSTS), consts=CONSTS)
    return sol, v, grid, pair


def test_htilde_residual_sho(sho_sol):
    sol, v, grid, pair = sho_sol
    t = 0.37 * PERIOD
    psi = analytic_psi(sol, grid, t)
    r = htilde_residual(psi, v, sol.trajectory, CONSTS, pair.energy, t)
    assert r < 1e-4


def test_htilde_rest_reduces_to_eigen_residual(sho_sol):
    _, v, grid, pair = sho_sol
    r = htilde_residual(pair.shape, v, Rest(), CONSTS, pair.energy, 0.0)
    assert r < 1e-4


def test_htilde_detects_off_trajectory_shape(sho_sol):
    sol, v, grid, pair = sho_sol
    t = 0.2 * PERIOD
    corrupted = shift_field(analytic_psi(sol, grid, t), 0.1)
    r = htilde_residual(corrupted, v, sol.trajectory, CONSTS, pair.energy, t)
    assert r > 1e-2


def test_infinitesimal_evolution_second_order(sho_sol):
    sol = sho_sol[0]
    t = 0.9
    e1 = infinitesimal_evolution_check(sol, sho_sol[2], t, 1e-3)
    e2 = infinitesimal_evolution_check(sol, sho_sol[2], t, 5e-4)
    ratio = e1 / e2
    assert 4.0 * 0.75 < ratio < 4.0 * 1.25


def test_infinitesimal_evolution_rest(sho_sol):
    _, _, grid, pair = sho_sol
    sol = NswpSolution(SampledShape.from_eigenpair(pair), Rest(),
                       GaugeFunction.zero(), consts=CONSTS)
    err = infinitesimal_evolution_check(sol, grid, 0.8, 1e-3)
    assert err < 1e-9


def test_dropping_force_factor_degrades_to_first_order(sho_sol):
    sol, _, grid, _ = sho_sol
    t = 0.9
    e1 = infinitesimal_evolution_check(sol, grid, t, 1e-3, drop_force_factor=True)
    e2 = infinitesimal_evolution_check(sol, grid, t, 5e-4, drop_force_factor=True)
    ratio = e1 / e2
    assert 2.0 * 0.8 < ratio < 2.0 * 1.2


def test_decomposition_report_fields(sho_sol):
    sol, v, grid, pair = sho_sol
    t = 1.1
    rep = decomposition_report(sol, v, grid, t)
    d, d_dot, d_ddot = sol.trajectory.eval(t)
    assert rep.e_tilde == pytest.approx(pair.energy - 0.5 * d_dot**2)
    assert rep.hc_velocity == pytest.approx(d_dot)
    assert rep.hc_force == pytest.approx(-d_ddot)
    assert rep.hc_gauge == pytest.approx(sol.gauge(t))
    assert rep.htilde_residual < 1e-4
    assert rep.shift_check_error < 1e-5


def test_classical_motion_sho_run(sho_result):
    checks = classical_motion_check(sho_result.report, sho_result.solution.trajectory,
                                    CONSTS)
    assert all(c.passed for c in checks)


def test_classical_motion_detects_wrong_trajectory(sho_result):
    wrong = Sinusoid(amplitude=2.1, omega=1.0)
    checks = classical_motion_check(sho_result.report, wrong, CONSTS)
    assert not all(c.passed for c in checks)


def test_energy_split_sho_run(sho_result):
    v = StaticPotential.harmonic(1.0)
    checks = energy_split_check(sho_result.report, sho_result.solution, v, CONSTS)
    assert all(c.passed for c in checks)
    # <H> = E_0 + m A^2 omega^2 / 2 = E_0 + 2
    e0 = sho_result.extras["energy"]
    assert np.mean(sho_result.report.energy_mean) == pytest.approx(e0 + 2.0, abs=1e-3)


def test_check_result_serialization(sho_result):
    d = sho_result.checks[0].to_dict()
    assert set(d) == {"name", "value", "tolerance", "pass", "note"}


def test_negative_claim_record(timedep_modulated, timedep_control):
    record = no_nswp_for_time_dependent_frequency(
        timedep_modulated.report, timedep_control.report,
        t_limit=timedep_modulated.extras["t_end"])
    assert record["pass"]
    assert record["spread_detected"]
    assert record["control_ok"]
    assert record["first_exceed_time"] is not None
    assert record["first_exceed_time"] < timedep_modulated.extras["t_end"]
    assert record["modulated_max_deviation"] > 1e-2
    assert record["control_max_deviation"] < 5e-4
