"""Eigensolvers: dense diagonalization and a matrix-free Lanczos routine.

The Lanczos solver keeps the full Krylov basis and reorthogonalizes every
new vector against all previous ones (and against already-converged
eigenvectors), which suppresses ghost eigenvalues at the modest dimensions
used here (<= 2^24, typically 2^14).  Degenerate subspaces are resolved by
restarting with fresh random seeds while deflating converged vectors.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, aslinearoperator

DENSE_DIM_CAP = 4096


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending), matching eigenvector columns and residuals."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    method: str = "dense"
    krylov_dim: int = 0
    converged: np.ndarray = field(default=None, repr=False)
    space_dim: int = 0

    def __post_init__(self):
        if self.converged is None:
            object.__setattr__(self, "converged",
                               np.ones(len(self.eigenvalues), dtype=bool))
        if self.space_dim == 0:
            object.__setattr__(self, "space_dim", self.eigenvectors.shape[0])

    @property
    def is_complete(self):
        return len(self.eigenvalues) == self.space_dim


def hermiticity_defect(H):
    """max |H - H^dag| entrywise, for a dense array."""
    return float(np.max(np.abs(H - H.conj().T)))


def dense_eigh(H, dim_cap=DENSE_DIM_CAP):
    """Full spectrum of a dense hermitian matrix.

    The hermiticity check is relative to the largest matrix entry, so that
    operators stored in rad/s pass with ordinary floating-point symmetry.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if H.shape[0] > dim_cap:
        raise ValueError(f"dimension {H.shape[0]} exceeds dense cap {dim_cap}")
    scale = max(1.0, float(np.max(np.abs(H))))
    if hermiticity_defect(H) > 1e-10 * scale:
        raise ValueError("matrix is not hermitian")
    evals, evecs = np.linalg.eigh(H)
    resid = np.linalg.norm(H @ evecs - evecs * evals, axis=0)
    return Spectrum(eigenvalues=evals, eigenvectors=evecs, residuals=resid,
                    method="dense", space_dim=H.shape[0])


def _as_operator(H):
    if isinstance(H, LinearOperator):
        return H
    return aslinearoperator(H)


def _tridiagonalize(op, v0, krylov_dim, deflate=(), breakdown=1e-13):
    """One Lanczos pass with full reorthogonalization.

    Returns (alphas, betas, basis columns).  Every Krylov vector is kept
    orthogonal to the columns in `deflate` as well as to the whole basis.
    """
    n = op.shape[0]
    V = np.zeros((n, krylov_dim), dtype=complex)
    alphas, betas = [], []
    v = v0.astype(complex)
    for d in deflate:
        v = v - d * (d.conj() @ v)
    nrm = np.linalg.norm(v)
    if nrm < breakdown:
        return np.array([]), np.array([]), V[:, :0]
    v /= nrm
    for k in range(krylov_dim):
        V[:, k] = v
        w = op.matvec(v)
        alpha = np.real(v.conj() @ w)
        alphas.append(alpha)
        w = w - alpha * v
        if k > 0:
            w = w - betas[-1] * V[:, k - 1]
        # full reorthogonalization, twice, against basis and deflated vectors
        for _ in range(2):
            w = w - V[:, :k + 1] @ (V[:, :k + 1].conj().T @ w)
            for d in deflate:
                w = w - d * (d.conj() @ w)
        beta = np.linalg.norm(w)
        if beta < breakdown * max(1.0, abs(alpha)):
            return np.array(alphas), np.array(betas), V[:, :k + 1]
        if k + 1 < krylov_dim:
            betas.append(beta)
            v = w / beta
    return np.array(alphas), np.array(betas), V


def lanczos(H, n_eigenpairs, krylov_dim, seed=0, tol=1e-8, max_restarts=8):
    """Lowest eigenpairs of a hermitian operator, deterministic for a fixed seed.

    Converged pairs (residual <= tol, in units of the spectral scale) are
    deflated and the iteration restarts from a new seeded random vector, which
    also resolves degenerate subspaces.  Pairs that never converge are
    returned flagged rather than dropped.
    """
    if krylov_dim < n_eigenpairs:
        raise ValueError("krylov_dim must be >= n_eigenpairs")
    op = _as_operator(H)
    n = op.shape[0]
    if n_eigenpairs > n:
        raise ValueError("more eigenpairs requested than the space dimension")
    rng = np.random.default_rng(seed)

    found_vals, found_vecs, found_res = [], [], []
    spare = None  # best unconverged candidates from the last pass
    scale = 1.0
    verified = False  # complement probed once the count is reached
    for restart in range(max_restarts):
        if len(found_vals) >= n or (len(found_vals) >= n_eigenpairs
                                    and verified):
            break
        if spare:
            # thick restart: continue from the best unconverged Ritz vector
            v0 = spare[0][1]
        else:
            v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        alphas, betas, V = _tridiagonalize(op, v0, krylov_dim,
                                           deflate=found_vecs)
        if len(alphas) == 0:
            # the deflated start vector vanished: complement exhausted
            verified = True
            continue
        theta, s = np.linalg.eigh(np.diag(alphas) + np.diag(betas, 1)
                                  + np.diag(betas, -1))
        scale = max(1.0, float(np.max(np.abs(theta))), scale)
        spare = []
        added = 0
        for i in np.argsort(theta):
            x = V @ s[:, i]
            x /= np.linalg.norm(x)
            r = float(np.linalg.norm(op.matvec(x) - theta[i] * x))
            if r <= tol * scale:
                # accept while short of the target, or when the deflated
                # complement still holds an eigenvalue below the current
                # n-th (a missed degenerate copy)
                if len(found_vals) < n_eigenpairs:
                    accept = True
                else:
                    kth = sorted(found_vals)[n_eigenpairs - 1]
                    accept = theta[i] < kth - tol * scale
                if not accept:
                    # only a pass that deflated every found vector from the
                    # start can certify that nothing below the n-th remains
                    verified = added == 0
                    break
                found_vals.append(theta[i])
                found_vecs.append(x)
                found_res.append(r)
                added += 1
            else:
                spare.append((theta[i], x, r))
                break  # higher Ritz pairs are even less reliable; restart

    vals = list(found_vals)
    vecs = list(found_vecs)
    res = list(found_res)
    conv = [True] * len(vals)
    while len(vals) < n_eigenpairs and spare:
        theta_i, x, r = spare.pop(0)
        vals.append(theta_i)
        vecs.append(x)
        res.append(r)
        conv.append(False)
    if len(vals) < n_eigenpairs:
        raise RuntimeError(
            f"Lanczos found only {len(vals)} of {n_eigenpairs} eigenpairs")

    order = np.argsort(vals)[:n_eigenpairs]
    return Spectrum(
        eigenvalues=np.array(vals)[order],
        eigenvectors=np.column_stack(vecs)[:, order],
        residuals=np.array(res)[order],
        method="lanczos",
        krylov_dim=krylov_dim,
        converged=np.array(conv)[order],
        space_dim=n,
    )
