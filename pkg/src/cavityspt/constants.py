"""Physical constants and unit conversions.

Internally every energy is stored as an angular frequency (rad/s), i.e.
hbar = 1 inside the numerics.  Conversions from laboratory units (Kelvin,
Tesla) happen only at the I/O boundary, through the helpers below.
"""

from dataclasses import dataclass

# CODATA 2018
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23      # J / K
MU_B = 9.2740100783e-24  # J / T
MU_0 = 1.25663706212e-6  # T^2 m^3 / J
G_E = 2.0               # Lande factor of an electron spin


@dataclass(frozen=True)
class PhysicalConstants:
    """Constants table; all entries strictly positive."""

    hbar: float = HBAR
    k_B: float = K_B
    mu_B: float = MU_B
    mu_0: float = MU_0
    g_e: float = G_E

    def __post_init__(self):
        for name in ("hbar", "k_B", "mu_B", "mu_0", "g_e"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


CONSTANTS = PhysicalConstants()


def kelvin_to_angular(T, constants=CONSTANTS):
    """Temperature in K -> thermal energy k_B T / hbar in rad/s."""
    return constants.k_B * T / constants.hbar


def angular_to_kelvin(omega, constants=CONSTANTS):
    """Energy in rad/s -> hbar omega / k_B in K."""
    return constants.hbar * omega / constants.k_B


def tesla_to_angular(B, constants=CONSTANTS):
    """Magnetic field in T -> Zeeman energy per unit spin g_e mu_B B / hbar in rad/s."""
    return constants.g_e * constants.mu_B * B / constants.hbar


def angular_to_tesla(omega, constants=CONSTANTS):
    """Inverse of :func:`tesla_to_angular`."""
    return constants.hbar * omega / (constants.g_e * constants.mu_B)


def inverse_temperature(T, constants=CONSTANTS):
    """beta in seconds (conjugate to rad/s energies) for a temperature in K.

    Returns ``inf`` at T = 0; callers that need the zero-temperature limit
    should branch on T == 0 before exponentiating.
    """
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if T == 0:
        return float("inf")
    return constants.hbar / (constants.k_B * T)
