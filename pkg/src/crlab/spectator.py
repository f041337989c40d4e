"""Static-ZZ spectator physics and its suppression by the rotary echo.

Pauli ordering in this module is target (x) spectator: "XI" is X on the
target, "IZ" is Z on the spectator, and the entangling rates of interest are
nu~_YZ (target Y, spectator Z) and nu~_ZZ.

The always-on coupling rate is

    xi = J^2 (delta_1 + delta_2) / ((Delta + delta_1)(Delta - delta_2)),

and driving the target with a resonant tone of amplitude Omega that flips
sign between the two echo halves turns the static xi ZZ/2 interaction into
entangling rates that decay as 1/Omega:

    nu~_YZ ~ xi (1 - cos(Omega t)) / (Omega t),
    nu~_ZZ ~ xi sin(Omega t) / (Omega t),

vanishing together whenever Omega t is a multiple of 2 pi.  The numeric
route composes R = R_- R_+ from the two half-pulse generators and extracts
the full generating Hamiltonian, which is the first-order claim's oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NearResonanceError
from .pauli import PauliDecomposition, generating_hamiltonian, mat_exp, pauli_matrix

_ZZ = pauli_matrix("ZZ")
_XI = pauli_matrix("XI")
_IZ = pauli_matrix("IZ")
_ZI = pauli_matrix("ZI")

POLE_GUARD_FACTOR = 1e-3


@dataclass(frozen=True)
class SpectatorParams:
    """Circuit-level parameters of a coupled target-spectator pair (rad/s, s)."""

    j_coupling: float
    delta1: float
    delta2: float
    detuning: float
    omega_rotary: float = 0.0
    t: float = 206.22e-9

    def __post_init__(self):
        if self.t <= 0:
            raise InvalidInputError("t must be positive")
        static_zz(self.j_coupling, self.delta1, self.delta2, self.detuning)  # pole check

    @property
    def xi(self) -> float:
        return static_zz(self.j_coupling, self.delta1, self.delta2, self.detuning)


def static_zz(j_coupling: float, delta1: float, delta2: float, detuning: float) -> float:
    """Always-on ZZ rate from exchange coupling and anharmonicities.

    Raises :class:`NearResonanceError` when either denominator factor is
    within ``POLE_GUARD_FACTOR * |J|`` of a resonance collision.
    """
    if j_coupling == 0.0:
        return 0.0
    pole1 = detuning + delta1
    pole2 = detuning - delta2
    guard = POLE_GUARD_FACTOR * abs(j_coupling)
    if abs(pole1) < guard or abs(pole2) < guard:
        raise NearResonanceError(
            f"detuning sits within {POLE_GUARD_FACTOR:g}|J| of a resonance pole "
            f"(Delta+delta1 = {pole1:.3e}, Delta-delta2 = {pole2:.3e} rad/s)"
        )
    return j_coupling**2 * (delta1 + delta2) / (pole1 * pole2)


def rotary_suppression(xi: float, omega: float, t: float) -> tuple[float, float]:
    """First-order entangling rates (nu~_YZ, nu~_ZZ) of the +-Omega echo.

    The Omega -> 0 limit returns (0, xi): the echo alone does not touch the
    static target-spectator ZZ.
    """
    if t <= 0:
        raise InvalidInputError("t must be positive")
    u = omega * t
    if abs(u) < 1e-9:
        # series: (1 - cos u)/u -> u/2, sin(u)/u -> 1
        return xi * u / 2.0, xi * (1.0 - u * u / 6.0)
    return xi * (1.0 - math.cos(u)) / u, xi * math.sin(u) / u


def spectator_numeric(
    xi: float,
    omega: float,
    t: float,
    extra_iz: float = 0.0,
    extra_zi: float = 0.0,
) -> PauliDecomposition:
    """Generating Hamiltonian of R = R_- R_+ with half-pulse generators

        H(+-) = xi ZZ/2 +- omega XI/2 + extra_zi ZI/2 + extra_iz IZ/2

    (target slot first).  The diagonal extras model drive-even higher-order
    shifts and keep their sign in both halves.  Rates are returned for the
    full duration 2t, so with xi = 0 every entangling coefficient vanishes.
    """
    if t <= 0:
        raise InvalidInputError("t must be positive")
    h_base = 0.5 * (xi * _ZZ + extra_zi * _ZI + extra_iz * _IZ)
    h_plus = h_base + 0.5 * omega * _XI
    h_minus = h_base - 0.5 * omega * _XI
    r = mat_exp(h_minus, t) @ mat_exp(h_plus, t)
    gen = generating_hamiltonian(r, t)
    return PauliDecomposition(
        n=2, coeffs={label: 2.0 * val.real for label, val in gen.items()}
    )


def suppression_envelope(
    xi: float, omega: float, t: float, samples: int = 1024
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Per-period peaks of the entangling rates around rotary amplitude Omega.

    Scans one full rotary period centred on ``Omega t`` and returns
    ``((omega_yz, peak_yz), (omega_zz, peak_zz))``: the location (rad/s, at
    the argmax) and height of the largest |nu~_YZ| and |nu~_ZZ| in the
    window.  Plotting peak height against peak location exhibits the
    1/Omega envelope decay.
    """
    if omega * t <= math.pi:
        raise InvalidInputError("envelope needs Omega t > pi for a full centred period")
    u0 = omega * t
    us = np.linspace(u0 - math.pi, u0 + math.pi, samples)
    yz = np.abs(xi * (1.0 - np.cos(us)) / us)
    zz = np.abs(xi * np.sin(us) / us)
    i_yz = int(np.argmax(yz))
    i_zz = int(np.argmax(zz))
    return (us[i_yz] / t, float(yz[i_yz])), (us[i_zz] / t, float(zz[i_zz]))
