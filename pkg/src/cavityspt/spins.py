"""Dense spin-S operator algebra (hbar = 1)."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpinOperatorSet:
    """Dense matrices S_x, S_y, S_z, S+ and S- for a spin S.

    Basis ordering is descending magnetic quantum number m = S, S-1, ..., -S,
    so ``sz`` is diagonal with entries S ... -S.
    """

    S: float
    sx: np.ndarray = field(repr=False)
    sy: np.ndarray = field(repr=False)
    sz: np.ndarray = field(repr=False)
    splus: np.ndarray = field(repr=False)
    sminus: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return int(round(2 * self.S + 1))


def spin_matrices(S):
    """Build the spin operators for spin quantum number S (2S must be integer).

    The matrices satisfy [S_x, S_y] = i S_z (and cyclic) and
    S_x^2 + S_y^2 + S_z^2 = S(S+1) I.
    """
    two_s = 2 * S
    if two_s <= 0 or abs(two_s - round(two_s)) > 1e-12:
        raise ValueError(f"S must be a positive half-integer, got {S}")
    S = round(two_s) / 2.0
    dim = int(round(2 * S + 1))
    m = S - np.arange(dim)
    sz = np.diag(m).astype(complex)
    # <m+1| S+ |m> = sqrt(S(S+1) - m(m+1))
    raising = np.sqrt(S * (S + 1) - m[1:] * (m[1:] + 1))
    splus = np.zeros((dim, dim), dtype=complex)
    splus[np.arange(dim - 1), np.arange(1, dim)] = raising
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    return SpinOperatorSet(S=S, sx=sx, sy=sy, sz=sz, splus=splus, sminus=sminus)
