"""Self-consistent thermal mean field for cavity-dressed spin models.

The order parameter is m = <S_x> per sublattice.  In the S-operator
convention the exchange enters the site Hamiltonian as -2 J_eff m S_x (plus
the constant +J_eff m^2 restored in the free energy), where

    J_eff = J + 4 lambda_bar^2 / Omega.

The cavity shift 4 lambda_bar^2 / Omega follows from the mean-field
decoupling of -O^2/Omega with O = (lambda_bar/sqrt(N)) sum_j (S+_j + S-_j);
it reproduces the closed-form Dicke critical coupling for every spin S, at
zero and finite temperature.  The intrinsic exchange field on one sublattice
is produced by the order parameter of the other (bipartite decomposition),
which reduces to the uniform model when both coincide and supports staggered
order for J < 0.
"""

from dataclasses import dataclass, field

import numpy as np

from .constants import inverse_temperature
from .models import CavitySpec, GiantSpinModel, IsingChainModel
from .spins import spin_matrices


@dataclass(frozen=True)
class MeanFieldProblem:
    model: object                 # IsingChainModel or GiantSpinModel
    cavity: CavitySpec = None     # None means lambda_bar = 0
    T: float = 0.0                # Kelvin
    sublattices: str = "one"      # "one" | "two"
    init: tuple = ()              # extra initial order parameters
    damping: float = 0.5
    tol: float = None             # default 1e-10 * S
    max_iter: int = 10000

    def __post_init__(self):
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.sublattices not in ("one", "two"):
            raise ValueError("sublattices must be 'one' or 'two'")
        if self.tol is not None and self.tol <= 0:
            raise ValueError("tol must be positive")
        n_sub = 1 if self.sublattices == "one" else 2
        for m0 in self.init:
            if np.ndim(m0) == 0:
                if n_sub != 1:
                    raise ValueError("two-sublattice inits need two components")
            elif len(m0) != n_sub:
                raise ValueError("init length must match sublattice count")

    @property
    def spin(self):
        if isinstance(self.model, GiantSpinModel):
            return self.model.S
        return 0.5

    @property
    def effective_tol(self):
        return self.tol if self.tol is not None else 1e-10 * self.spin

    @property
    def j_cavity(self):
        if self.cavity is None or self.cavity.lambda_bar == 0:
            return 0.0
        return 4.0 * self.cavity.lambda_bar ** 2 / self.cavity.Omega

    @property
    def j_intrinsic(self):
        return self.model.J


@dataclass(frozen=True)
class MeanFieldSolution:
    m: tuple                      # <S_x> per sublattice
    m_stag: float
    sz: float                     # <sigma_z> (spin-1/2) or <S_z>
    free_energy_per_spin: float   # rad/s
    alpha_per_sqrtN: float
    photons_per_spin: float
    converged: bool
    iterations: int
    residual: float

    @property
    def m_uniform(self):
        return float(np.mean(self.m))


def _site_operators(problem):
    """(h0, Sx, Sz, sz_scale): bare single-site Hamiltonian and spin matrices."""
    model = problem.model
    if isinstance(model, GiantSpinModel):
        ops = spin_matrices(model.S)
        from .constants import tesla_to_angular
        b = tesla_to_angular(model.B_mag)
        h0 = (-model.D * ops.sx @ ops.sx
              + model.E * (ops.sz @ ops.sz - ops.sy @ ops.sy)
              - b * (np.sin(model.phi) * ops.sy - np.cos(model.phi) * ops.sz))
        return h0, ops.sx, ops.sz, 1.0
    if isinstance(model, IsingChainModel):
        ops = spin_matrices(0.5)
        h0 = model.omega_z * ops.sz  # (omega_z/2) sigma_z
        return h0, ops.sx, ops.sz, 2.0  # report <sigma_z> = 2 <S_z>
    raise TypeError(f"unsupported model type {type(model).__name__}")


def site_hamiltonian(problem, m):
    """Per-sublattice dense site Hamiltonians for order parameters m.

    The exchange field on sublattice i is -2 (J m_partner + J_cav m_mean) S_x;
    the constant +J_eff m^2 bookkeeping lives in :func:`free_energy_per_spin`.
    """
    m = np.atleast_1d(np.asarray(m, dtype=float))
    if not np.all(np.isfinite(m)):
        raise ValueError("order parameters must be finite")
    h0, sx, _, _ = _site_operators(problem)
    j = problem.j_intrinsic
    jc = problem.j_cavity
    m_mean = float(np.mean(m))
    hams = []
    for i in range(len(m)):
        partner = m[len(m) - 1 - i] if len(m) == 2 else m[i]
        hams.append(h0 - 2.0 * (j * partner + jc * m_mean) * sx)
    return hams


def thermal_expectation(H, O, T):
    """Tr(O exp(-beta H)) / Tr(exp(-beta H)); ground-manifold average at T = 0."""
    H = np.asarray(H)
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.max(np.abs(H - H.conj().T)) > 1e-10 * scale:
        raise ValueError("site Hamiltonian is not hermitian")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    evals, evecs = np.linalg.eigh(H)
    diag = np.real(np.einsum("ij,ik,kj->j", evecs.conj(), O, evecs))
    if T == 0:
        spread = max(abs(evals[0]), abs(evals[-1]), 1e-300)
        ground = evals - evals[0] <= 1e-12 * spread
        return float(np.mean(diag[ground]))
    beta = inverse_temperature(T)
    w = np.exp(-beta * (evals - evals[0]))
    return float(np.sum(w * diag) / np.sum(w))


def free_energy_per_spin(problem, m):
    """F/N = -(1/beta) mean_i ln Tr exp(-beta H_i) + J m_A m_B + J_cav m_mean^2."""
    m = np.atleast_1d(np.asarray(m, dtype=float))
    hams = site_hamiltonian(problem, m)
    m_mean = float(np.mean(m))
    pair = m[0] * m[-1]
    const = problem.j_intrinsic * pair + problem.j_cavity * m_mean ** 2
    if problem.T == 0:
        return float(np.mean([np.linalg.eigvalsh(h)[0] for h in hams])) + const
    beta = inverse_temperature(problem.T)
    logz = []
    for h in hams:
        evals = np.linalg.eigvalsh(h)
        logz.append(np.log(np.sum(np.exp(-beta * (evals - evals[0]))))
                    - beta * evals[0])
    return -float(np.mean(logz)) / beta + const


def _iterate(problem, m0):
    _, sx, _, _ = _site_operators(problem)
    d = problem.damping
    tol = problem.effective_tol
    m = np.atleast_1d(np.asarray(m0, dtype=float)).copy()
    residual = np.inf
    for it in range(1, problem.max_iter + 1):
        hams = site_hamiltonian(problem, m)
        m_new = np.array([thermal_expectation(h, sx, problem.T) for h in hams])
        residual = float(np.max(np.abs(m_new - m)))
        m = (1 - d) * m + d * m_new
        if residual <= tol:
            return m, True, it, residual
    return m, False, problem.max_iter, residual


def _candidate_inits(problem):
    s = problem.spin
    tiny = 1e-3 * s
    if problem.sublattices == "one":
        inits = [(tiny,), (s,), (-s,)]
    else:
        inits = [(tiny, tiny), (s, s), (-s, -s),
                 (tiny, -tiny), (s, -s), (-s, s)]
    for m0 in problem.init:
        inits.append(tuple(np.atleast_1d(m0)))
    return inits


def solve_selfconsistent(problem):
    """Damped fixed-point iteration from several inits; lowest-free-energy branch.

    Never raises on non-convergence: the branch is returned with
    converged=False and its last iterate.  The symmetric m = 0 branch is always
    included in the free-energy comparison, so the result can only improve on
    it.  Ties between +/-m branches resolve to the one reached from the
    positive init.
    """
    _, sx, sz_op, sz_scale = _site_operators(problem)
    branches = []
    for order, m0 in enumerate(_candidate_inits(problem)):
        m, ok, iters, res = _iterate(problem, m0)
        f = free_energy_per_spin(problem, m)
        branches.append((f, order, m, ok, iters, res))
    # explicit symmetric branch for the free-energy guarantee
    zero = np.zeros(1 if problem.sublattices == "one" else 2)
    branches.append((free_energy_per_spin(problem, zero), len(branches),
                     zero, True, 0, 0.0))

    fmin = min(b[0] for b in branches)
    scale = max(abs(fmin), 1e-300)
    near = [b for b in branches if (b[0] - fmin) <= 1e-10 * scale]
    # deterministic tie-break: prefer converged, then non-negative leading m,
    # then the earliest init (positive inits come first)
    near.sort(key=lambda b: (not b[3], float(b[2][0]) < -problem.effective_tol,
                             b[1]))
    f, _, m, ok, iters, res = near[0]

    hams = site_hamiltonian(problem, m)
    sz = float(np.mean([sz_scale * thermal_expectation(h, sz_op, problem.T)
                        for h in hams]))
    m_mean = float(np.mean(m))
    m_stag = float((m[0] - m[-1]) / 2) if len(m) == 2 else 0.0
    lam = problem.cavity.lambda_bar if problem.cavity is not None else 0.0
    Omega = problem.cavity.Omega if problem.cavity is not None else 1.0
    alpha = (2.0 * lam / Omega) * abs(m_mean) if lam > 0 else 0.0
    return MeanFieldSolution(
        m=tuple(float(x) for x in m),
        m_stag=m_stag,
        sz=sz,
        free_energy_per_spin=f,
        alpha_per_sqrtN=alpha,
        photons_per_spin=alpha ** 2,
        converged=ok,
        iterations=iters,
        residual=res,
    )


def dicke_equilibrium(omega_z, Omega, lambda_bar, T, **kwargs):
    """(sz0, sx0, solution) for the spin-1/2 Dicke model: Pauli expectations.

    sz0 = <sigma_z>_0 in [-1, 0], sx0 = <sigma_x>_0 = 2 <S_x>.
    """
    model = IsingChainModel.uniform(1, omega_z, 0.0, lambda_bar)
    cavity = CavitySpec(Omega=Omega, lambda_bar=lambda_bar)
    problem = MeanFieldProblem(model=model, cavity=cavity, T=T, **kwargs)
    sol = solve_selfconsistent(problem)
    return sol.sz, 2.0 * sol.m_uniform, sol
