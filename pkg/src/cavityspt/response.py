"""Superradiance criterion machinery.

The static response R(T) of the bare spin model to the cavity coupling
operator O decides the transition: the coupled system is superradiant when
|R| >= Omega / 2 (hbar = 1).  For free spins the crossing reproduces the
closed-form critical coupling of the Dicke model, which is also provided, as
is the collective rms coupling determined by material parameters.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS, inverse_temperature
from .spectra import Spectrum, _as_operator, _tridiagonalize

# relative energy window treated as a degenerate/diagonal block (f -> beta limit)
_DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class ResponseResult:
    """Static response R (<= 0, rad/s) and the superradiance verdict."""

    R: float
    T: float
    margin: float
    superradiant: bool
    truncation_warning: bool = False

    @classmethod
    def from_response(cls, R, T, Omega, truncation_warning=False):
        margin = abs(R) / (Omega / 2)
        return cls(R=R, T=T, margin=margin, superradiant=margin >= 1.0,
                   truncation_warning=truncation_warning)


def _stable_weight_kernel(evals, beta):
    """G[m, n] = exp(-beta (e_m - e0)) * (exp(beta (e_m - e_n)) - 1) / (e_m - e_n).

    Evaluated in the overflow-free combined form (w_n - w_m) / (e_m - e_n),
    with the analytic limit beta * w_m on (near-)degenerate pairs.
    """
    shifted = evals - evals[0]
    w = np.exp(-beta * shifted)
    delta = shifted[:, None] - shifted[None, :]          # e_m - e_n
    small = np.abs(beta * delta) < 1e-7
    safe_delta = np.where(small, 1.0, delta)
    G = (w[None, :] - w[:, None]) / safe_delta
    bd = beta * delta
    limit = w[:, None] * beta * (1.0 + bd / 2.0 + bd * bd / 6.0)
    return np.where(small, limit, G), w


def _ground_manifold(evals):
    spread = max(abs(evals[0]), abs(evals[-1]), 1e-300)
    return np.flatnonzero(evals - evals[0] <= _DEGENERACY_RTOL * spread)


def static_response(spectrum: Spectrum, O, T, Omega):
    """R(T) of the spin model with spectrum `spectrum` to the operator O.

    T in Kelvin; R in rad/s.  T = 0 dispatches to the zero-temperature sum
    over the (possibly degenerate) ground manifold; a diverging response
    (nonzero O matrix element inside a degenerate thermal block) is reported
    as R = -inf.
    """
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if spectrum.eigenvectors is None or spectrum.eigenvectors.size == 0:
        raise ValueError("static_response needs eigenvectors")
    evals = spectrum.eigenvalues
    V = spectrum.eigenvectors
    Odense = O.toarray() if hasattr(O, "toarray") else np.asarray(O)
    M = V.conj().T @ Odense @ V
    M2 = np.abs(M) ** 2

    if T == 0:
        ground = _ground_manifold(evals)
        g0 = evals[0]
        inner = M2[np.ix_(ground, ground)]
        if np.max(inner) > 0 and np.max(inner) > 1e-24 * max(np.max(M2), 1e-300):
            return ResponseResult.from_response(-math.inf, T, Omega)
        excited = np.setdiff1d(np.arange(len(evals)), ground)
        total = 0.0
        for g in ground:
            total += 2.0 * np.sum(M2[excited, g] / (evals[excited] - g0))
        R = -total / len(ground)
        warn = not spectrum.is_complete
        return ResponseResult.from_response(R, T, Omega, truncation_warning=warn)

    beta = inverse_temperature(T)
    G, w = _stable_weight_kernel(evals, beta)
    R = -float(np.sum(M2 * G)) / float(np.sum(w))
    warn = (not spectrum.is_complete) and (w[-1] > 1e-12)
    return ResponseResult.from_response(R, T, Omega, truncation_warning=warn)


def zero_temperature_response_krylov(H, O, ground, ground_energy, Omega,
                                     krylov_dim=60):
    """T = 0 response evaluated in a Krylov space seeded with O|ground>.

    `ground` is a list of (degenerate) ground vectors of the bare spin
    Hamiltonian H.  The excited-state sum 2 sum_m |<m|O|g>|^2 / (e_m - e0) is
    obtained from the Lanczos tridiagonalization of H started at O|g>, which
    converges like a Gauss quadrature of the spectral measure.  A nonzero
    matrix element of O inside the ground manifold means a diverging response
    (already-ordered phase), reported as R = -inf.
    """
    op = _as_operator(H)
    Oop = _as_operator(O)
    ground = [g / np.linalg.norm(g) for g in ground]
    total = 0.0
    for g in ground:
        w = Oop.matvec(g.astype(complex))
        overlaps = np.array([gp.conj() @ w for gp in ground])
        wnorm = np.linalg.norm(w)
        if wnorm == 0:
            continue
        if np.max(np.abs(overlaps)) > 1e-8 * wnorm:
            return ResponseResult.from_response(-math.inf, 0.0, Omega)
        for gp, ov in zip(ground, overlaps):
            w = w - ov * gp
        nrm = np.linalg.norm(w)
        if nrm == 0:
            continue
        alphas, betas, V = _tridiagonalize(op, w, krylov_dim, deflate=ground)
        theta, s = np.linalg.eigh(np.diag(alphas) + np.diag(betas, 1)
                                  + np.diag(betas, -1))
        weights = nrm ** 2 * np.abs(s[0, :]) ** 2
        gaps = theta - ground_energy
        if np.any(gaps <= 0):
            keep = gaps > 1e-12 * max(1.0, abs(ground_energy))
            weights, gaps = weights[keep], gaps[keep]
        total += 2.0 * float(np.sum(weights / gaps))
    R = -total / len(ground)
    return ResponseResult.from_response(R, 0.0, Omega)


def dicke_critical_coupling(omega_z, Omega, S, T):
    """Critical collective coupling of the spin-S Dicke model at temperature T.

    lambda_c^2 = (omega_z Omega / 4) / [(2S+1) coth(beta omega_z (2S+1)/2)
                                        - coth(beta omega_z / 2)],
    with the bracket -> 2S at T = 0.  T in Kelvin, frequencies in rad/s.
    """
    if omega_z <= 0 or Omega <= 0:
        raise ValueError("omega_z and Omega must be positive")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    two_s = 2 * S
    if two_s <= 0 or abs(two_s - round(two_s)) > 1e-12:
        raise ValueError("S must be a positive half-integer")
    if T == 0:
        bracket = two_s
    else:
        x = inverse_temperature(T) * omega_z / 2
        bracket = (two_s + 1) / math.tanh(x * (two_s + 1)) - 1.0 / math.tanh(x)
    return math.sqrt(omega_z * Omega / (4.0 * bracket))


def lambda_bar_from_material(rho, nu, Omega, constants=CONSTANTS):
    """Collective rms coupling from spin density rho (spins/m^3) and filling nu.

    lambda_bar^2 = g_e^2 mu_B^2 mu_0 rho nu Omega / (8 hbar).
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")
    if Omega <= 0:
        raise ValueError("Omega must be positive")
    lam2 = (constants.g_e ** 2 * constants.mu_B ** 2 * constants.mu_0
            / (8 * constants.hbar) * rho * nu * Omega)
    return math.sqrt(lam2)


def rms_reduce(site_couplings):
    """(rms coupling, Cauchy-Schwarz gap) of a list of site couplings.

    The gap lambda_bar^2 - (mean lambda)^2 >= 0 quantifies how much the rms
    approximation over-weights the couplings relative to the arithmetic mean.
    """
    lams = np.asarray(site_couplings, dtype=float)
    if lams.size == 0:
        raise ValueError("site_couplings must be non-empty")
    if np.any(lams < 0):
        raise ValueError("site couplings must be non-negative")
    lambda_bar = math.sqrt(float(np.mean(lams ** 2)))
    gap = lambda_bar ** 2 - float(np.mean(lams)) ** 2
    return lambda_bar, max(gap, 0.0)
