"""Equilibrium superradiance of spin ensembles in a single-mode cavity.

Library layout:

- :mod:`cavityspt.constants`  — CODATA constants and unit conversions
- :mod:`cavityspt.spins`      — spin-S operator algebra
- :mod:`cavityspt.models`     — Hamiltonian builders (chains, giant spin, cavity)
- :mod:`cavityspt.spectra`    — dense and Lanczos eigensolvers
- :mod:`cavityspt.response`   — static response and the superradiance criterion
- :mod:`cavityspt.meanfield`  — self-consistent thermal mean field
- :mod:`cavityspt.phase`      — phase-boundary tracing by bisection
- :mod:`cavityspt.transmission` — input-output transmission maps
- :mod:`cavityspt.cli`        — config-driven experiment runner
"""

__version__ = "0.1.0"

from .constants import (CONSTANTS, PhysicalConstants, angular_to_kelvin,
                        angular_to_tesla, inverse_temperature,
                        kelvin_to_angular, tesla_to_angular)
from .meanfield import (MeanFieldProblem, MeanFieldSolution, dicke_equilibrium,
                        solve_selfconsistent)
from .models import (ALL_TO_ALL, NEAREST_NEIGHBOR_PBC, CavitySpec,
                     GiantSpinModel, IsingChainModel, ResourceLimitError,
                     build_chain_hamiltonian, build_effective_hamiltonian,
                     build_full_hamiltonian)
from .phase import BoundaryPoint, PhaseBoundary, SweepSpec, trace_boundary
from .response import (ResponseResult, dicke_critical_coupling,
                       lambda_bar_from_material, rms_reduce, static_response,
                       zero_temperature_response_krylov)
from .spectra import Spectrum, dense_eigh, lanczos
from .spins import SpinOperatorSet, spin_matrices
from .transmission import TransmissionGrid, transmission_map, transmission_point

__all__ = [
    "ALL_TO_ALL", "BoundaryPoint", "CONSTANTS", "CavitySpec", "GiantSpinModel",
    "IsingChainModel", "MeanFieldProblem", "MeanFieldSolution",
    "NEAREST_NEIGHBOR_PBC", "PhaseBoundary", "PhysicalConstants",
    "ResourceLimitError", "ResponseResult", "SpinOperatorSet", "Spectrum",
    "SweepSpec", "TransmissionGrid", "angular_to_kelvin", "angular_to_tesla",
    "build_chain_hamiltonian", "build_effective_hamiltonian",
    "build_full_hamiltonian", "dense_eigh", "dicke_critical_coupling",
    "dicke_equilibrium", "inverse_temperature", "kelvin_to_angular", "lanczos",
    "lambda_bar_from_material", "rms_reduce", "solve_selfconsistent",
    "spin_matrices", "static_response", "tesla_to_angular", "trace_boundary",
    "transmission_map", "transmission_point",
    "zero_temperature_response_krylov",
]
