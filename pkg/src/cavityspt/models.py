"""Hamiltonian builders: spin chains coupled to a single cavity mode.

The coupling operator throughout is

    O = sum_j (lambda_j / sqrt(N)) (exp(i theta_j) S+_j + h.c.)

which for spin-1/2 sites with theta_j = 0 reduces to (lambda/sqrt(N)) sum_j sigma_x^j.
Tracing out the photon mode yields H_eff = H_S - O^2 / Omega (hbar = 1), and the
joint spin-boson Hamiltonian with a truncated Fock space is available for
cross-checks of that reduction.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import LinearOperator

from .constants import CONSTANTS
from .spins import spin_matrices

NEAREST_NEIGHBOR_PBC = "nearest-neighbor-pbc"
ALL_TO_ALL = "all-to-all-normalized"

DEFAULT_SITE_CAP = 24


class ResourceLimitError(RuntimeError):
    """Raised when a requested Hilbert space exceeds the configured cap."""


@dataclass(frozen=True)
class IsingChainModel:
    """Transverse-field Ising chain of spin-1/2 sites.

    H_S = (omega_z / 2) sum_j sigma_z^j - (J/2) sum_{i<j} sigma_x^i sigma_x^j
    where the pair sum runs over nearest-neighbor bonds (PBC) or over all pairs
    with the coupling normalized to J/N (extensive all-to-all model).

    site_couplings holds one (lambda_j, theta_j) pair per site, in rad/s / rad.
    """

    n_sites: int
    omega_z: float
    J: float
    geometry: str = NEAREST_NEIGHBOR_PBC
    site_couplings: tuple = ()

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.geometry not in (NEAREST_NEIGHBOR_PBC, ALL_TO_ALL):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.site_couplings and len(self.site_couplings) != self.n_sites:
            raise ValueError("site_couplings length must equal n_sites")

    @classmethod
    def uniform(cls, n_sites, omega_z, J, lambda_bar, geometry=NEAREST_NEIGHBOR_PBC):
        """Chain with identical couplings lambda_j = lambda_bar, theta_j = 0."""
        couplings = tuple((lambda_bar, 0.0) for _ in range(n_sites))
        return cls(n_sites=n_sites, omega_z=omega_z, J=J,
                   geometry=geometry, site_couplings=couplings)


@dataclass(frozen=True)
class GiantSpinModel:
    """Single giant spin with uniaxial/transverse anisotropy and a tilted field.

    H = -D S_x^2 + E (S_z^2 - S_y^2) - (g_e mu_B / hbar) B . S
    with the easy axis along x and B = B_mag (0, sin phi, -cos phi).
    The mean-field exchange J multiplies -2 J <S_x> S_x + J <S_x>^2.
    D, E, J in rad/s; B_mag in Tesla; phi in rad.
    """

    S: float
    D: float
    E: float
    B_mag: float = 0.0
    phi: float = 0.0
    J: float = 0.0

    def __post_init__(self):
        if self.D <= 0:
            raise ValueError("D must be positive (easy axis along x)")

    @property
    def dim(self):
        return int(round(2 * self.S + 1))


@dataclass(frozen=True)
class CavitySpec:
    """Single cavity mode with a collective rms coupling.

    If material inputs (rho in spins/m^3, nu in [0,1]) are supplied,
    lambda_bar is computed from them; a stored lambda_bar must then agree
    to 1e-12 relative.
    """

    Omega: float
    lambda_bar: float = None
    rho: float = None
    nu: float = None

    def __post_init__(self):
        if self.Omega <= 0:
            raise ValueError("Omega must be positive")
        if (self.rho is None) != (self.nu is None):
            raise ValueError("rho and nu must be given together")
        if self.rho is not None:
            from .response import lambda_bar_from_material
            computed = lambda_bar_from_material(self.rho, self.nu, self.Omega)
            if self.lambda_bar is None:
                object.__setattr__(self, "lambda_bar", computed)
            elif computed > 0 and abs(self.lambda_bar - computed) > 1e-12 * computed:
                raise ValueError(
                    f"stored lambda_bar {self.lambda_bar} disagrees with the "
                    f"material value {computed}")
            elif computed == 0 and self.lambda_bar != 0:
                raise ValueError("nu = 0 requires lambda_bar = 0")
        if self.lambda_bar is None:
            raise ValueError("either lambda_bar or (rho, nu) must be given")
        if self.lambda_bar < 0:
            raise ValueError("lambda_bar must be non-negative")


# single-site spin-1/2 operators, used by the Kronecker-product builders
_HALF = spin_matrices(0.5)
_SZ = sparse.csr_matrix(2 * _HALF.sz.real)        # sigma_z
_SP = sparse.csr_matrix(_HALF.splus.real)         # sigma^+
_SX = sparse.csr_matrix(2 * _HALF.sx.real)        # sigma_x
_ID = sparse.identity(2, format="csr")


def _site_operator(op, j, n):
    """Embed a single-site operator at site j of an n-site chain."""
    mats = [_ID] * n
    mats[j] = op
    out = mats[0]
    for m in mats[1:]:
        out = sparse.kron(out, m, format="csr")
    return out


def build_chain_hamiltonian(model, site_cap=DEFAULT_SITE_CAP):
    """Return (H_S, O) for an Ising chain, both hermitian sparse matrices.

    H_S is the bare spin Hamiltonian of the model, O the cavity coupling
    operator sum_j (lambda_j/sqrt(N)) (exp(i theta_j) sigma^+_j + h.c.).
    """
    n = model.n_sites
    if n > site_cap:
        raise ResourceLimitError(
            f"n_sites = {n} exceeds the cap of {site_cap} (dim 2^{n})")
    dim = 2 ** n
    H = sparse.csr_matrix((dim, dim), dtype=float)
    for j in range(n):
        H = H + (model.omega_z / 2) * _site_operator(_SZ, j, n)
    if model.J != 0 and n > 1:
        if model.geometry == NEAREST_NEIGHBOR_PBC:
            bonds = [(j, (j + 1) % n) for j in range(n)]
            if n == 2:
                bonds = [(0, 1)]  # avoid double-counting the single PBC bond
            coupling = model.J / 2
        else:
            bonds = [(i, j) for i in range(n) for j in range(i + 1, n)]
            coupling = model.J / (2 * n)
        sx_ops = [_site_operator(_SX, j, n) for j in range(n)]
        for i, j in bonds:
            H = H - coupling * (sx_ops[i] @ sx_ops[j])

    couplings = model.site_couplings or tuple((0.0, 0.0) for _ in range(n))
    O = sparse.csr_matrix((dim, dim), dtype=complex)
    for j, (lam, theta) in enumerate(couplings):
        if lam == 0:
            continue
        site = np.exp(1j * theta) * _SP + np.exp(-1j * theta) * _SP.conj().T
        O = O + (lam / np.sqrt(n)) * _site_operator(sparse.csr_matrix(site), j, n)
    O = O.tocsr()
    imag = O.imag
    if O.nnz == 0 or imag.nnz == 0 or np.max(np.abs(imag.data)) == 0.0:
        O = O.real
    return H.tocsr(), O.tocsr()


def build_effective_hamiltonian(H_S, O, Omega):
    """Matrix-free operator for H_eff = H_S - O^2 / Omega (hbar = 1)."""
    if Omega <= 0:
        raise ValueError("Omega must be positive")
    if H_S.shape != O.shape:
        raise ValueError(f"dimension mismatch: {H_S.shape} vs {O.shape}")
    dtype = np.result_type(H_S.dtype, O.dtype, float)

    def matvec(v):
        return H_S @ v - (O @ (O @ v)) / Omega

    return LinearOperator(shape=H_S.shape, matvec=matvec, dtype=dtype)


def build_full_hamiltonian(H_S, O, Omega, n_fock):
    """Joint spin-boson Hamiltonian with the Fock space truncated at n_fock photons.

    H = H_S (x) I + Omega I (x) a^dag a + O (x) (a^dag + a),
    boson dimension n_fock + 1 (levels 0 .. n_fock).
    """
    if n_fock < 1:
        raise ValueError("n_fock must be >= 1")
    if H_S.shape != O.shape:
        raise ValueError(f"dimension mismatch: {H_S.shape} vs {O.shape}")
    nb = n_fock + 1
    number = sparse.diags(np.arange(nb, dtype=float))
    a = sparse.diags(np.sqrt(np.arange(1, nb, dtype=float)), 1)
    x = a + a.T
    eye_s = sparse.identity(H_S.shape[0], format="csr")
    eye_b = sparse.identity(nb, format="csr")
    H = (sparse.kron(H_S, eye_b) + Omega * sparse.kron(eye_s, number)
         + sparse.kron(O, x))
    return H.tocsr()


def full_log_partition_function(H_S, O, Omega, beta, tail=1e-10, n_fock_start=8,
                                n_fock_max=4096):
    """log Z = log Tr exp(-beta H) for the joint system, adaptive Fock truncation.

    Doubles n_fock until the Boltzmann tail above the truncation (estimated
    from the free-boson ladder) drops below `tail`.  Returns (logZ, n_fock).
    """
    from scipy.special import logsumexp

    n_fock = n_fock_start
    while np.exp(-beta * Omega * n_fock) >= tail and n_fock < n_fock_max:
        n_fock *= 2
    H = build_full_hamiltonian(H_S, O, Omega, n_fock)
    evals = np.linalg.eigvalsh(H.toarray())
    return logsumexp(-beta * evals), n_fock


def effective_log_partition_function(H_S, O, Omega, beta):
    """log Zbar = log Tr_S exp(-beta H_eff) by dense diagonalization."""
    from scipy.special import logsumexp

    H_eff = (H_S - (O @ O) / Omega).toarray()
    evals = np.linalg.eigvalsh(H_eff)
    return logsumexp(-beta * evals)
