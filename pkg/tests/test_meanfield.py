import math

import numpy as np
import pytest

from cavityspt.constants import inverse_temperature, kelvin_to_angular
from cavityspt.meanfield import (MeanFieldProblem, dicke_equilibrium,
                                 free_energy_per_spin, solve_selfconsistent)
from cavityspt.models import CavitySpec, GiantSpinModel, IsingChainModel
from cavityspt.response import dicke_critical_coupling


def _dicke_problem(omega_z, Omega, lam, T, **kwargs):
    model = IsingChainModel.uniform(1, omega_z, 0.0, lam)
    cavity = CavitySpec(Omega=Omega, lambda_bar=lam)
    return MeanFieldProblem(model=model, cavity=cavity, T=T, **kwargs)


def test_subcritical_is_paramagnetic():
    omega_z = Omega = 1.4e9
    lam = 0.5 * dicke_critical_coupling(omega_z, Omega, 0.5, 0.0)
    sol = solve_selfconsistent(_dicke_problem(omega_z, Omega, lam, 0.0))
    assert abs(sol.m_uniform) < 1e-8
    assert sol.sz == pytest.approx(-1.0, abs=1e-10)
    assert sol.photons_per_spin == pytest.approx(0.0, abs=1e-16)


def test_supercritical_closed_form():
    """T = 0 Dicke order parameter: <sigma_z> = -(lambda_c/lambda)^2."""
    omega_z = Omega = 1.4e9
    lam_c = dicke_critical_coupling(omega_z, Omega, 0.5, 0.0)
    for factor in (1.5, 2.0, 4.0):
        lam = factor * lam_c
        sol = solve_selfconsistent(_dicke_problem(omega_z, Omega, lam, 0.0))
        sz_expected = -1.0 / factor ** 2
        sx_expected = math.sqrt(1.0 - sz_expected ** 2)
        assert sol.sz == pytest.approx(sz_expected, rel=1e-8)
        assert 2 * sol.m_uniform == pytest.approx(sx_expected, rel=1e-8)
        # Photon condensate: alpha/sqrt(N) = (2 lambda / Omega) |m|
        assert sol.alpha_per_sqrtN == pytest.approx(
            2 * lam * abs(sol.m_uniform) / Omega, rel=1e-12)
        assert sol.photons_per_spin == pytest.approx(
            sol.alpha_per_sqrtN ** 2, rel=1e-12)


def test_finite_temperature_self_consistency():
    """The returned m satisfies m = (1/2) h/|h| tanh(beta |h| / 2) exactly."""
    omega_z = Omega = 1.0e9
    lam = 1.1e9
    T = 2e-3
    sol = solve_selfconsistent(_dicke_problem(omega_z, Omega, lam, T))
    m = sol.m_uniform
    assert m > 0
    beta = inverse_temperature(T)
    j_eff = 4 * lam ** 2 / Omega
    field = 2 * j_eff * m  # transverse field 2 J_eff m on sigma_x / 2
    eps = math.hypot(omega_z, field)
    expected = 0.5 * (field / eps) * math.tanh(beta * eps / 2)
    assert m == pytest.approx(expected, rel=1e-7)


def test_symmetry_of_branches():
    omega_z = Omega = 1.0
    lam = 2.0 * dicke_critical_coupling(omega_z, Omega, 0.5, 0.0)
    problem = _dicke_problem(omega_z, Omega, lam, 0.0)
    sol = solve_selfconsistent(problem)
    f_plus = free_energy_per_spin(problem, [sol.m_uniform])
    f_minus = free_energy_per_spin(problem, [-sol.m_uniform])
    assert f_plus == pytest.approx(f_minus, rel=1e-12)
    assert sol.m_uniform >= 0  # deterministic tie-break


def test_ordered_branch_has_lower_free_energy():
    omega_z = Omega = 1.0
    lam = 2.0 * dicke_critical_coupling(omega_z, Omega, 0.5, 0.0)
    problem = _dicke_problem(omega_z, Omega, lam, 0.0)
    sol = solve_selfconsistent(problem)
    f_zero = free_energy_per_spin(problem, [0.0])
    assert sol.free_energy_per_spin < f_zero


def test_staggered_order_for_antiferromagnetic_exchange():
    model = IsingChainModel.uniform(2, 1.0, -8.0, 0.0)
    problem = MeanFieldProblem(model=model, T=0.0, sublattices="two")
    sol = solve_selfconsistent(problem)
    assert abs(sol.m_stag) > 0.4
    assert abs(sol.m_uniform) < 1e-8


def test_uniform_order_for_ferromagnetic_exchange():
    model = IsingChainModel.uniform(2, 1.0, 8.0, 0.0)
    problem = MeanFieldProblem(model=model, T=0.0, sublattices="two")
    sol = solve_selfconsistent(problem)
    assert abs(sol.m_uniform) > 0.4
    assert abs(sol.m_stag) < 1e-8


def test_dicke_equilibrium_interface():
    omega_z = Omega = 1.4e9
    sz, sx, sol = dicke_equilibrium(omega_z, Omega, Omega, 0.0)
    assert sz == pytest.approx(-0.25, abs=1e-8)
    assert abs(sx) == pytest.approx(math.sqrt(15.0) / 4.0, rel=1e-8)
    assert sol.converged


def test_giant_spin_orders_below_tc():
    model = GiantSpinModel(S=10, D=kelvin_to_angular(0.294),
                           E=kelvin_to_angular(0.046),
                           J=kelvin_to_angular(2.85e-3))
    cold = solve_selfconsistent(MeanFieldProblem(model=model, T=0.3))
    hot = solve_selfconsistent(MeanFieldProblem(model=model, T=1.0))
    assert abs(cold.m_uniform) > 9.0
    assert abs(hot.m_uniform) < 1e-6


def test_problem_validation():
    model = IsingChainModel.uniform(1, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        MeanFieldProblem(model=model, damping=0.0)
    with pytest.raises(ValueError):
        MeanFieldProblem(model=model, sublattices="three")
    with pytest.raises(ValueError):
        MeanFieldProblem(model=model, tol=-1.0)
    with pytest.raises(ValueError):
        MeanFieldProblem(model=model, sublattices="two", init=((0.1,),))
