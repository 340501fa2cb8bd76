"""Input-output transmission through the cavity coupled to the spin ensemble.

The probe transmission is

    t(omega) = -i kappa / [(omega - Omega) + i kappa + 4 lambda_bar^2 chi(omega)]

with the transverse spin susceptibility

    chi(omega) = omega_z <sigma_z>_0
                 / [(omega - i gamma)^2 - omega_z^2
                    - 16 lambda_bar^4 <sigma_x>_0^2 / Omega^2].

The equilibrium Pauli expectations come from the spin-1/2 Dicke mean field;
the normalization is fixed by the empty-cavity limit |t(Omega)| = 1 at
lambda_bar = 0.
"""

from dataclasses import dataclass, field

import numpy as np

from .meanfield import dicke_equilibrium
from .response import dicke_critical_coupling


@dataclass(frozen=True)
class TransmissionGrid:
    omega_grid: np.ndarray
    omega_z_grid: np.ndarray
    T: float
    kappa: float
    gamma: float
    t: np.ndarray = field(repr=False)      # shape (len(omega_z), len(omega))
    sz0: np.ndarray = None                 # per omega_z column
    sx0: np.ndarray = None
    superradiant: np.ndarray = None        # bool per column
    omega_z_c: float = None                # boundary position, None if outside grid
    warnings: tuple = ()


def transmission_point(omega, omega_z, Omega, lambda_bar, kappa, gamma, sz0, sx0):
    """Complex t at probe frequency omega (vectorized over omega)."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if not -1.0 - 1e-9 <= sz0 <= 1e-9:
        raise ValueError("sz0 must lie in [-1, 0]")
    if not -1.0 - 1e-9 <= sx0 <= 1.0 + 1e-9:
        raise ValueError("sx0 must lie in [-1, 1]")
    omega = np.asarray(omega, dtype=float)
    chi_den = ((omega - 1j * gamma) ** 2 - omega_z ** 2
               - 16.0 * lambda_bar ** 4 * sx0 ** 2 / Omega ** 2)
    chi = omega_z * sz0 / chi_den
    den = (omega - Omega) + 1j * kappa + 4.0 * lambda_bar ** 2 * chi
    if np.any(den == 0):
        raise ValueError("transmission denominator vanished (kappa = gamma = 0?)")
    return -1j * kappa / den


def critical_omega_z(lambda_bar, Omega, T, lo, hi, rtol=1e-10):
    """omega_z at which the Dicke boundary crosses lambda_bar, or None.

    The superradiant region is omega_z < omega_z_c (lambda_c grows with
    omega_z), so the bracket [lo, hi] must straddle the crossing.
    """
    if lambda_bar == 0:
        return None

    def sub(omega_z):
        return lambda_bar < dicke_critical_coupling(omega_z, Omega, 0.5, T)

    if sub(lo) or not sub(hi):
        return None
    while (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        if sub(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def transmission_map(omega_grid, omega_z_grid, T, cavity, kappa, gamma,
                     mf_tol=None, mf_max_iter=10000):
    """|t| map over (omega_z, omega) with per-column Dicke equilibrium inputs."""
    omega_grid = np.asarray(omega_grid, dtype=float)
    omega_z_grid = np.asarray(omega_z_grid, dtype=float)
    for g, name in ((omega_grid, "omega"), (omega_z_grid, "omega_z")):
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValueError(f"{name} grid must be strictly increasing")
    lam = cavity.lambda_bar
    Omega = cavity.Omega

    t = np.empty((omega_z_grid.size, omega_grid.size), dtype=complex)
    sz0 = np.empty(omega_z_grid.size)
    sx0 = np.empty(omega_z_grid.size)
    flags = np.empty(omega_z_grid.size, dtype=bool)
    warnings = []
    for i, omega_z in enumerate(omega_z_grid):
        kwargs = {"max_iter": mf_max_iter}
        if mf_tol is not None:
            kwargs["tol"] = mf_tol
        sz, sx, sol = dicke_equilibrium(omega_z, Omega, lam, T, **kwargs)
        if not sol.converged:
            warnings.append(f"mean field unconverged at omega_z={omega_z:g}; "
                            "using the symmetric branch")
            sz, sx, _ = dicke_equilibrium(omega_z, Omega, 0.0, T)
            sx = 0.0
        sz0[i], sx0[i] = np.clip(sz, -1.0, 0.0), np.clip(sx, -1.0, 1.0)
        flags[i] = (lam >= dicke_critical_coupling(omega_z, Omega, 0.5, T)
                    if lam > 0 else False)
        t[i] = transmission_point(omega_grid, omega_z, Omega, lam, kappa, gamma,
                                  sz0[i], sx0[i])
    wzc = critical_omega_z(lam, Omega, T, omega_z_grid[0], omega_z_grid[-1]) \
        if omega_z_grid.size > 1 else None
    return TransmissionGrid(
        omega_grid=omega_grid, omega_z_grid=omega_z_grid, T=T,
        kappa=kappa, gamma=gamma, t=t, sz0=sz0, sx0=sx0,
        superradiant=flags, omega_z_c=wzc, warnings=tuple(warnings))
