"""Generates real primary-CLI artifacts once per session for the render tests."""

import pytest

from cavityspt import cli as primary_cli

ISING_CONFIG = """\
[experiment]
name = "ising-phase-diagram"

[spins]
omega_z_per_s = 1.0e9

[cavity]
Omega_per_s = 1.0e9

[temperature]
T_K = 0.0

[grid]
J_min_per_s = 0.0
J_max_per_s = 4.0e8
n_J = 3
lambda_min_per_s = 1.0e8
lambda_max_per_s = 1.0e9
n_lambda = 4

[numerics]
bisection_tol = 1e-3
"""

# lambda range entirely below the boundary: no transition anywhere
ISING_EMPTY_CONFIG = ISING_CONFIG.replace(
    "J_max_per_s = 4.0e8", "J_max_per_s = 1.0e8").replace(
    "lambda_max_per_s = 1.0e9", "lambda_max_per_s = 1.5e8")

FE8_CONFIG = """\
[experiment]
name = "fe8-boundary"

[spins]
S = 10.0
D_K = 0.294
E_K = 0.046
J_K = 2.85e-3
phi_deg = 68.0

[cavity]
Omega_per_s = 1.4e9
rho_per_cm3 = 5.1e20
nu_values = [0.0, 0.25]

[grid]
T_values_K = [0.2, 0.4]
B_max_T = 4.0
Tc_max_K = 2.0

[numerics]
bisection_tol = 1e-2
"""

TRANSMISSION_CONFIG = """\
[experiment]
name = "transmission-map"

[cavity]
Omega_per_s = 1.4e9
rho_per_cm3 = 5.1e20
nu = 0.25

[drive]
kappa_per_s = 3.5e7
gamma_per_s = 3.5e7

[temperature]
T_K = {T_K}

[grid]
omega_min_per_s = 2.8e7
omega_max_per_s = 2.24e9
n_omega = 40
omega_z_min_per_s = 1.0e8
omega_z_max_per_s = 2.8e9
n_omega_z = 12
"""


def _run(tmp_path_factory, name, config_text):
    workdir = tmp_path_factory.mktemp(name)
    config = workdir / "config.toml"
    config.write_text(config_text)
    prefix = workdir / "run"
    primary_cli.run(str(config), str(prefix))
    return prefix


@pytest.fixture(scope="session")
def ising_run(tmp_path_factory):
    return _run(tmp_path_factory, "ising", ISING_CONFIG)


@pytest.fixture(scope="session")
def ising_empty_run(tmp_path_factory):
    return _run(tmp_path_factory, "ising_empty", ISING_EMPTY_CONFIG)


@pytest.fixture(scope="session")
def fe8_run(tmp_path_factory):
    return _run(tmp_path_factory, "fe8", FE8_CONFIG)


@pytest.fixture(scope="session")
def tm_cold_run(tmp_path_factory):
    return _run(tmp_path_factory, "tm_cold",
                TRANSMISSION_CONFIG.format(T_K="2e-4"))


@pytest.fixture(scope="session")
def tm_hot_run(tmp_path_factory):
    return _run(tmp_path_factory, "tm_hot",
                TRANSMISSION_CONFIG.format(T_K="2e-3"))
