import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavityspt.constants import angular_to_kelvin, inverse_temperature
from cavityspt.models import IsingChainModel, build_chain_hamiltonian
from cavityspt.response import (dicke_critical_coupling,
                                lambda_bar_from_material, rms_reduce,
                                static_response,
                                zero_temperature_response_krylov)
from cavityspt.spectra import Spectrum, dense_eigh


def _free_spin_spectrum(omega_z=1.0, lam=1.0, n=1):
    model = IsingChainModel.uniform(n, omega_z, 0.0, lam)
    H, O = build_chain_hamiltonian(model)
    return dense_eigh(H.toarray()), O


def test_two_level_zero_temperature():
    lam, omega_z = 0.7, 1.3
    spec, O = _free_spin_spectrum(omega_z, lam)
    res = static_response(spec, O, 0.0, 1.0)
    assert res.R == pytest.approx(-2 * lam ** 2 / omega_z, rel=1e-12)


def test_two_level_finite_temperature():
    lam, omega_z = 0.4, 1.0
    spec, O = _free_spin_spectrum(omega_z, lam)
    for ratio in (0.2, 1.0, 5.0):
        T = ratio * angular_to_kelvin(omega_z)
        beta = inverse_temperature(T)
        expected = -(2 * lam ** 2 / omega_z) * math.tanh(beta * omega_z / 2)
        res = static_response(spec, O, T, 1.0)
        assert res.R == pytest.approx(expected, rel=1e-10)


def test_response_is_extensive_in_sites():
    """Uniform free spins: R is independent of N (coupling carries 1/sqrt(N))."""
    results = []
    for n in (1, 2, 3):
        spec, O = _free_spin_spectrum(1.0, 0.5, n)
        results.append(static_response(spec, O, 0.3 * angular_to_kelvin(1.0),
                                       1.0).R)
    assert results[1] == pytest.approx(results[0], rel=1e-10)
    assert results[2] == pytest.approx(results[0], rel=1e-10)


def test_degenerate_ground_manifold_diverges():
    # omega_z = 0: O connects states inside the degenerate thermal block
    spec, O = _free_spin_spectrum(0.0, 1.0)
    res = static_response(spec, O, 0.0, 1.0)
    assert res.R == -math.inf
    assert res.superradiant


def test_superradiant_flag_threshold():
    lam, omega_z, Omega = 0.7, 1.0, 1.0
    spec, O = _free_spin_spectrum(omega_z, lam)
    res = static_response(spec, O, 0.0, Omega)
    # |R| = 2 lam^2 / omega_z = 0.98 >= Omega/2
    assert res.margin == pytest.approx(1.96, rel=1e-12)
    assert res.superradiant


def test_continuity_near_level_crossing():
    rng = np.random.default_rng(3)
    O = rng.standard_normal((4, 4))
    O = (O + O.T) / 2
    T = 0.5 * angular_to_kelvin(1.0)

    def response_for(evals):
        spec = Spectrum(eigenvalues=np.asarray(evals, dtype=float),
                        eigenvectors=np.eye(4),
                        residuals=np.zeros(4))
        return static_response(spec, O, T, 1.0).R

    base = response_for([0.0, 0.3, 0.3, 1.0])
    for eps in (1e-9, -1e-9):
        perturbed = response_for([0.0, 0.3, 0.3 + eps, 1.0])
        assert abs(perturbed - base) < 1e-6 * abs(base)


def test_dicke_closed_form_zero_temperature():
    assert dicke_critical_coupling(1.0, 1.0, 0.5, 0.0) == pytest.approx(
        0.5, rel=1e-12)
    assert dicke_critical_coupling(2.0, 3.0, 0.5, 0.0) == pytest.approx(
        math.sqrt(6.0) / 2, rel=1e-12)
    assert dicke_critical_coupling(1.0, 1.0, 10, 0.0) == pytest.approx(
        math.sqrt(1.0 / 80.0), rel=1e-12)


def test_dicke_high_temperature_curie_limit():
    omega_z, Omega, S = 1.0, 1.0, 1.5
    T = 1e4 * angular_to_kelvin(omega_z)
    beta = inverse_temperature(T)
    expected_sq = 3.0 * Omega / (8.0 * beta * S * (S + 1))
    lam_c = dicke_critical_coupling(omega_z, Omega, S, T)
    assert lam_c ** 2 == pytest.approx(expected_sq, rel=1e-2)


def test_dicke_monotone_in_temperature():
    temps = np.geomspace(1e-4, 1e2, 40) * angular_to_kelvin(1.0)
    values = [dicke_critical_coupling(1.0, 1.0, 0.5, t) for t in temps]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[0] >= dicke_critical_coupling(1.0, 1.0, 0.5, 0.0) - 1e-12


def test_dicke_validation():
    with pytest.raises(ValueError):
        dicke_critical_coupling(-1.0, 1.0, 0.5, 0.0)
    with pytest.raises(ValueError):
        dicke_critical_coupling(1.0, 1.0, 0.4, 0.0)
    with pytest.raises(ValueError):
        dicke_critical_coupling(1.0, 1.0, 0.5, -1.0)


def test_criterion_flips_at_closed_form():
    omega_z = Omega = 1.0
    spec, O = _free_spin_spectrum(omega_z, 1.0)
    for ratio in (0.0, 0.5, 2.0):
        T = ratio * angular_to_kelvin(omega_z)
        r_unit = abs(static_response(spec, O, T, Omega).R)
        crossing = math.sqrt((Omega / 2) / r_unit)
        assert crossing == pytest.approx(
            dicke_critical_coupling(omega_z, Omega, 0.5, T), rel=1e-10)


def test_material_coupling_regression():
    lam = lambda_bar_from_material(5.1e26, 1.0, 1.4e9)
    assert lam == pytest.approx(604879022.6061993, rel=1e-12)
    assert lambda_bar_from_material(5.1e26, 0.0, 1.4e9) == 0.0
    ratio = lambda_bar_from_material(5.1e26, 0.25, 1.4e9) / lam
    assert ratio == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(ValueError):
        lambda_bar_from_material(-1.0, 0.5, 1.4e9)
    with pytest.raises(ValueError):
        lambda_bar_from_material(1e26, 1.5, 1.4e9)


@settings(deadline=None, max_examples=50)
@given(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=1,
                max_size=16))
def test_rms_reduce_bounds(lams):
    lambda_bar, gap = rms_reduce(lams)
    mean = sum(lams) / len(lams)
    assert gap >= 0.0
    assert lambda_bar ** 2 >= mean ** 2 - 1e-9 * max(1.0, mean ** 2)


def test_rms_reduce_uniform_has_no_gap():
    lambda_bar, gap = rms_reduce([0.3, 0.3, 0.3])
    assert lambda_bar == pytest.approx(0.3, rel=1e-14)
    assert gap == pytest.approx(0.0, abs=1e-16)
    with pytest.raises(ValueError):
        rms_reduce([])
    with pytest.raises(ValueError):
        rms_reduce([-0.1])


def test_krylov_zero_temperature_matches_dense():
    model = IsingChainModel.uniform(6, 1.0, 0.25, 1.0)
    H, O = build_chain_hamiltonian(model)
    spec = dense_eigh(H.toarray())
    dense_res = static_response(spec, O, 0.0, 1.0)
    ground = [spec.eigenvectors[:, 0]]
    krylov_res = zero_temperature_response_krylov(
        H, O, ground, spec.eigenvalues[0], 1.0, krylov_dim=60)
    assert krylov_res.R == pytest.approx(dense_res.R, rel=1e-8)


def test_krylov_detects_in_manifold_element():
    model = IsingChainModel.uniform(2, 0.0, 0.0, 1.0)
    H, O = build_chain_hamiltonian(model)
    ground = [np.eye(4)[:, i] for i in range(4)]
    res = zero_temperature_response_krylov(H, O, ground, 0.0, 1.0)
    assert res.R == -math.inf
