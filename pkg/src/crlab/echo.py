"""Closed-form and numeric analysis of the two-pulse echoed CR unitary.

The echoed gate built from one tone of duration ``t`` per half is

    U = XI . exp(-i H(-) t) . XI . exp(-i H(+) t),

where H(+-) are the single-tone Hamiltonians for the two drive signs.  Since
every term of H has I or Z on the control, U is block diagonal in the control
basis and expands as

    U = A_II II + A_IX IX + A_IY IY + A_IZ IZ
      + A_ZX ZX + A_ZY ZY + A_ZZ ZZ          (A_ZI = 0),

with closed-form A coefficients in terms of the tone coefficients and the
two block rotation rates

    A = eta_+ = sqrt((nu_IX+nu_ZX)^2 + (nu_IY+nu_ZY)^2 + (nu_IZ+nu_ZZ)^2),
    B = eta_- = sqrt((nu_IX-nu_ZX)^2 + (nu_IY-nu_ZY)^2 + (nu_IZ-nu_ZZ)^2).

The generating Hamiltonian of the full sequence, H_eff = i log(U) / (2t),
has Pauli rates nu~_P = i B_P / (2t) where the B coefficients follow from
the A's through the two branch norms

    M1 = sqrt((A_IX+A_ZX)^2 + (A_IY+A_ZY)^2 + (A_IZ+A_ZZ)^2),
    M2 = sqrt((A_IX-A_ZX)^2 + (A_IY-A_ZY)^2 + (A_IZ-A_ZZ)^2),

using principal square roots and logarithms.  When the gate is calibrated to
a quarter-cycle conditional rotation (block angle pi/2), M1 = M2 = i/sqrt(2)
and B_P = (pi/sqrt(2)) A_P for every non-identity P.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.optimize import brentq

from . import channels
from .cr_hamiltonian import CoefficientModel, CrCoefficients, build_hamiltonian, negate_drive
from .errors import DegenerateNormError, InvalidInputError, UnsupportedModeError
from .pauli import (
    ATOL_ALGEBRA,
    PauliDecomposition,
    decompose,
    generating_hamiltonian,
    is_unitary,
    mat_exp,
    pauli_matrix,
)

ECHO_LABELS = ("II", "IX", "IY", "IZ", "ZX", "ZY", "ZZ")

_XI = pauli_matrix("XI")
_ZX = pauli_matrix("ZX")

# Ideal quarter-cycle conditional rotations, both handednesses.
ZX_HALF_PI = mat_exp(0.5 * _ZX, math.pi / 2)          # exp(-i pi/4 ZX)
ZX_MINUS_HALF_PI = mat_exp(0.5 * _ZX, -math.pi / 2)   # exp(+i pi/4 ZX)


@dataclass(frozen=True)
class EchoNorms:
    """Block rotation rates (rad/s) and unitary branch norms of the echo."""

    a_norm: float
    b_norm: float
    m1: complex
    m2: complex


@dataclass(frozen=True)
class EchoReport:
    """A/B coefficients, generating-Hamiltonian rates, and norms of one echo."""

    a_coeffs: PauliDecomposition
    b_coeffs: dict[str, complex]
    nu_tilde: dict[str, float]
    norms: EchoNorms
    t_half: float


def echo_unitary(c_pos: CrCoefficients, t: float) -> np.ndarray:
    """Brute-force echoed unitary from the two half-pulses and control echoes."""
    if t <= 0:
        raise InvalidInputError("t must be positive")
    h_pos = build_hamiltonian(c_pos)
    h_neg = build_hamiltonian(negate_drive(c_pos))
    return _XI @ mat_exp(h_neg, t) @ _XI @ mat_exp(h_pos, t)


def echo_norms(c: CrCoefficients) -> tuple[float, float]:
    """(A, B) block rotation rates for the positive-tone coefficients."""
    a = math.sqrt(
        (c.nu_ix + c.nu_zx) ** 2 + (c.nu_iy + c.nu_zy) ** 2 + (c.nu_iz + c.nu_zz) ** 2
    )
    b = math.sqrt(
        (c.nu_ix - c.nu_zx) ** 2 + (c.nu_iy - c.nu_zy) ** 2 + (c.nu_iz - c.nu_zz) ** 2
    )
    return a, b


def _a_coefficients(c: CrCoefficients, t: float) -> dict[str, complex]:
    a, b = echo_norms(c)
    if a == 0.0 or b == 0.0:
        raise DegenerateNormError(
            "block rotation rate A or B vanishes; use echo_report_numeric()"
        )
    sa, ca = math.sin(a * t / 2), math.cos(a * t / 2)
    sb, cb = math.sin(b * t / 2), math.cos(b * t / 2)
    ss = sa * sb / (a * b)
    sc = sa * cb / a  # sin(At/2)cos(Bt/2)/A
    cs = ca * sb / b  # cos(At/2)sin(Bt/2)/B
    ix, iy, iz = c.nu_ix, c.nu_iy, c.nu_iz
    zx, zy, zz = c.nu_zx, c.nu_zy, c.nu_zz
    return {
        "II": ca * cb + ((ix**2 + iy**2 - iz**2) - (zx**2 + zy**2 - zz**2)) * ss,
        "IX": 2j * (iy * iz - zy * zz) * ss,
        "IY": -2j * (ix * iz - zx * zz) * ss,
        "IZ": -1j * ((iz - zz) * cs + (iz + zz) * sc),
        "ZX": -1j * ((ix + zx) * sc - (ix - zx) * cs),
        "ZY": -1j * ((iy + zy) * sc - (iy - zy) * cs),
        "ZZ": -2j * (iy * zx - ix * zy) * ss,
    }


def _b_coefficients(a_coeffs: dict[str, complex]) -> tuple[dict[str, complex], complex, complex]:
    """B coefficients and branch norms (M1, M2) from the A coefficients."""
    a_ii = a_coeffs["II"]
    plus = {ax: a_coeffs["I" + ax] + a_coeffs["Z" + ax] for ax in "XYZ"}
    minus = {ax: a_coeffs["I" + ax] - a_coeffs["Z" + ax] for ax in "XYZ"}
    m1 = cmath.sqrt(sum(v * v for v in plus.values()))
    m2 = cmath.sqrt(sum(v * v for v in minus.values()))
    if abs(m1) < 1e-300 or abs(m2) < 1e-300:
        raise DegenerateNormError("branch norm M1 or M2 vanishes; use echo_report_numeric()")
    l1 = cmath.log(a_ii + m1) - cmath.log(a_ii - m1)
    l2 = cmath.log(a_ii + m2) - cmath.log(a_ii - m2)
    b: dict[str, complex] = {
        "II": 0.5 * (cmath.log(a_ii - m2) + cmath.log(a_ii + m2))
        + 0.5 * (cmath.log(a_ii - m1) + cmath.log(a_ii + m1)),
        "ZI": 0.0,
    }
    for ax in "XYZ":
        half_plus = plus[ax] * l1 / (2.0 * m1)
        half_minus = minus[ax] * l2 / (2.0 * m2)
        b["I" + ax] = half_plus + half_minus
        b["Z" + ax] = half_plus - half_minus
    return b, m1, m2


def echo_coefficients_analytic(c_pos: CrCoefficients, t: float) -> EchoReport:
    """Closed-form A and B coefficients of the echoed gate.

    Raises :class:`DegenerateNormError` when A or B (or a branch norm)
    vanishes; those cases are served by :func:`echo_report_numeric`.
    """
    if t <= 0:
        raise InvalidInputError("t must be positive")
    a_map = _a_coefficients(c_pos, t)
    b_map, m1, m2 = _b_coefficients(a_map)
    nu_tilde = _nu_tilde_from_b(b_map, t)
    a_norm, b_norm = echo_norms(c_pos)
    a_dec = PauliDecomposition(
        n=2, coeffs={**{lbl: a_map[lbl] for lbl in ECHO_LABELS}, "ZI": 0.0}
    )
    return EchoReport(
        a_coeffs=a_dec,
        b_coeffs=b_map,
        nu_tilde=nu_tilde,
        norms=EchoNorms(a_norm=a_norm, b_norm=b_norm, m1=m1, m2=m2),
        t_half=t,
    )


def _nu_tilde_from_b(b_map: dict[str, complex], t: float) -> dict[str, float]:
    out = {}
    scale = max(1.0, max(abs(v) for v in b_map.values()))
    for label, b_val in b_map.items():
        nu = 1j * b_val / (2.0 * t)
        if abs(nu.imag) > 1e-9 * max(scale / (2.0 * t), 1.0):
            raise InvalidInputError(f"nu~_{label} = {nu} is not real to tolerance")
        out[label] = float(nu.real)
    return out


def echo_report_numeric(c_pos: CrCoefficients, t: float) -> EchoReport:
    """Matrix-log fallback: decompose the brute-force unitary and its generator."""
    u = echo_unitary(c_pos, t)
    a_dec = decompose(u)
    gen = generating_hamiltonian(u, t)
    nu_tilde = {label: 2.0 * c.real for label, c in gen.items()}  # H = sum nu P/2
    a_map = {label: a_dec[label] for label in ECHO_LABELS}
    b_map = {label: -2j * t * complex(nu) for label, nu in nu_tilde.items()}
    try:
        _, m1, m2 = _b_coefficients({**a_map, "ZI": a_dec["ZI"]})
    except DegenerateNormError:
        m1 = m2 = 0.0j
    a_norm, b_norm = echo_norms(c_pos)
    return EchoReport(
        a_coeffs=a_dec,
        b_coeffs=b_map,
        nu_tilde=nu_tilde,
        norms=EchoNorms(a_norm=a_norm, b_norm=b_norm, m1=m1, m2=m2),
        t_half=t,
    )


def chi0(c: CrCoefficients) -> float:
    """chi_0 = nu_IX nu_IZ - nu_ZX nu_ZZ, the commutator-pair imbalance, (rad/s)^2."""
    return c.nu_ix * c.nu_iz - c.nu_zx * c.nu_zz


def nu_tilde_iy_closed_form(c_pos: CrCoefficients, t: float) -> tuple[float, float]:
    """(exact, approximate) nu~_IY of a calibrated quarter-cycle echo.

    exact  = (pi / (sqrt(2) t)) (chi_0 / (eta+ eta-)) sin(eta+ t/2) sin(eta- t/2)
    approx = (pi chi_0 / (sqrt(2) t)) (cos(nu_IX t) - cos(nu_ZX t)) / (nu_IX^2 + nu_ZX^2)

    Both assume the quarter-cycle proportionality B = (pi/sqrt(2)) A, which
    holds once the gate is calibrated; see :func:`calibrate_zx`.
    """
    eta_p, eta_m = echo_norms(c_pos)
    if eta_p == 0.0 or eta_m == 0.0:
        raise DegenerateNormError("eta_+ or eta_- vanishes")
    x0 = chi0(c_pos)
    exact = (
        (math.pi / (math.sqrt(2.0) * t))
        * (x0 / (eta_p * eta_m))
        * math.sin(eta_p * t / 2.0)
        * math.sin(eta_m * t / 2.0)
    )
    denom = c_pos.nu_ix**2 + c_pos.nu_zx**2
    if denom == 0.0:
        approx = 0.0
    else:
        approx = (
            (math.pi * x0 / (math.sqrt(2.0) * t))
            * (math.cos(c_pos.nu_ix * t) - math.cos(c_pos.nu_zx * t))
            / denom
        )
    return exact, approx


@dataclass(frozen=True)
class IyRoot:
    """One zero of nu~_IY(x) with its vanishing-class diagnosis."""

    x: float
    kind: Literal["chi0", "chi1", "chi2"]
    chi0: float
    chi1_n: int
    chi1: float
    chi2_n: int
    chi2: float


@dataclass(frozen=True)
class ZeroClassReport:
    roots: tuple[IyRoot, ...]
    identically_zero: bool
    x_min: float
    x_max: float
    grid_points: int


def _nearest_chi(norm: float, omega: float) -> tuple[int, float]:
    """Nearest (n, norm - 2 pi n / t) with n >= 1; omega = 2 pi / t."""
    n = max(1, int(round(norm / omega)))
    return n, norm - n * omega


def find_iy_zeros(
    model: CoefficientModel,
    x_range: tuple[float, float],
    t: float,
    grid_points: int = 2001,
) -> ZeroClassReport:
    """Bracketed roots of nu~_IY(x) on a dense grid, classified by vanishing chi.

    Classification compares the dimensionless residuals |chi0|/scale0,
    |A - 2 pi n/t|/omega and |B - 2 pi n/t|/omega at each root and picks the
    smallest; scale0 is the typical size of the chi0 products.
    """
    if model.mode != "phenomenological":
        raise UnsupportedModeError("find_iy_zeros requires a phenomenological model")
    x_lo, x_hi = float(x_range[0]), float(x_range[1])
    if not x_lo < x_hi:
        raise InvalidInputError("x_range must satisfy lo < hi")
    xs = np.linspace(x_lo, x_hi, grid_points)

    def nu_iy(x: float) -> float:
        return echo_coefficients_analytic(model.coefficients(float(x)), t).nu_tilde["IY"]

    values = np.array([nu_iy(x) for x in xs])
    scale = np.max(np.abs(values))
    omega = 2.0 * math.pi / t
    if scale <= 1e-12 * omega:
        return ZeroClassReport(
            roots=(), identically_zero=True, x_min=x_lo, x_max=x_hi, grid_points=grid_points
        )
    roots: list[IyRoot] = []
    for i in range(len(xs) - 1):
        v0, v1 = values[i], values[i + 1]
        if v0 == 0.0 and i > 0:
            continue
        if v0 * v1 > 0.0:
            continue
        x_root = brentq(nu_iy, xs[i], xs[i + 1], xtol=1e-12 * max(1.0, abs(x_hi - x_lo)))
        c = model.coefficients(float(x_root))
        a_norm, b_norm = echo_norms(c)
        x0 = chi0(c)
        scale0 = max(abs(c.nu_ix * c.nu_iz), abs(c.nu_zx * c.nu_zz), omega**2)
        n1, chi1 = _nearest_chi(a_norm, omega)
        n2, chi2 = _nearest_chi(b_norm, omega)
        residuals = {
            "chi0": abs(x0) / scale0,
            "chi1": abs(chi1) / omega,
            "chi2": abs(chi2) / omega,
        }
        kind = min(residuals, key=residuals.get)
        roots.append(
            IyRoot(
                x=float(x_root), kind=kind, chi0=x0, chi1_n=n1, chi1=chi1, chi2_n=n2, chi2=chi2
            )
        )
    return ZeroClassReport(
        roots=tuple(roots), identically_zero=False, x_min=x_lo, x_max=x_hi,
        grid_points=grid_points,
    )


CalibrationObjective = Literal["zx_rate", "angle"]


def calibrate_zx(
    model: CoefficientModel,
    x: float,
    t: float,
    objective: CalibrationObjective = "zx_rate",
    tol: float = 1e-9,
    max_iter: int = 80,
) -> CoefficientModel:
    """Scale the ZX term until the echo implements a quarter-cycle conditional rotation.

    ``objective="zx_rate"`` drives nu~_ZX * 2t to pi/2 (matching the sign of
    the uncalibrated gate); ``objective="angle"`` drives the block rotation
    angle to pi/2 exactly, i.e. A_II to cos(pi/4), which is the condition
    under which M1 = M2 = i/sqrt(2) and B = (pi/sqrt(2)) A hold. The two
    targets agree when ZX is the only term and differ at second order in the
    error terms.  Scalar secant iteration on the ZX scale factor.
    """
    base_report = echo_coefficients_analytic(model.coefficients(x), t)
    zx_sign = 1.0 if base_report.nu_tilde["ZX"] >= 0 else -1.0

    def residual(scale: float) -> float:
        trial = model.scale_term("ZX", scale)
        rep = echo_coefficients_analytic(trial.coefficients(x), t)
        if objective == "zx_rate":
            return rep.nu_tilde["ZX"] * 2.0 * t - zx_sign * math.pi / 2.0
        if objective == "angle":
            return float(rep.a_coeffs["II"].real) - math.cos(math.pi / 4.0)
        raise InvalidInputError(f"unknown calibration objective {objective!r}")

    s0, s1 = 1.0, 1.05
    f0, f1 = residual(s0), residual(s1)
    for _ in range(max_iter):
        if abs(f1) < tol:
            return model.scale_term("ZX", s1)
        if f1 == f0:
            break
        s0, s1, f0 = s1, s1 - f1 * (s1 - s0) / (f1 - f0), f1
        f1 = residual(s1)
    if abs(f1) < tol:
        return model.scale_term("ZX", s1)
    raise InvalidInputError(
        f"ZX calibration did not converge (objective {objective}, residual {f1:.3e})"
    )


@dataclass(frozen=True)
class EpgBreakdown:
    coherent_epg: float
    coherence_limit: float
    total: float


def epg_estimate(
    u_actual: np.ndarray,
    noise: "channels.NoiseParams | None",
    t_gate: float,
    u_ideal: np.ndarray | None = None,
) -> EpgBreakdown:
    """Error per gate of ``u_actual`` against the ideal quarter-cycle gate.

    coherent_epg uses the average-gate-fidelity trace formula
    ``1 - (|tr(U_ideal^dag U)|^2 + d) / (d (d + 1))`` with d = 4; the
    coherence limit is one minus the average fidelity of the two-qubit
    amplitude+phase damping channel over ``t_gate``; the two combine as
    ``total = 1 - (1 - coherent)(1 - limit)``.
    """
    u_actual = np.asarray(u_actual, dtype=complex)
    if not is_unitary(u_actual, atol=ATOL_ALGEBRA):
        raise InvalidInputError("epg_estimate requires a unitary gate matrix")
    if u_ideal is None:
        u_ideal = ZX_HALF_PI
    d = u_actual.shape[0]
    overlap = abs(np.trace(u_ideal.conj().T @ u_actual)) ** 2
    coherent = 1.0 - (overlap + d) / (d * (d + 1.0))
    coherent = max(0.0, coherent)
    limit = 0.0
    if noise is not None:
        ptm = noise.damping_ptm(t_gate)
        limit = 1.0 - channels.average_gate_fidelity_ptm(ptm)
    total = 1.0 - (1.0 - coherent) * (1.0 - limit)
    return EpgBreakdown(coherent_epg=coherent, coherence_limit=limit, total=total)


@dataclass(frozen=True)
class SweepPoint:
    """One rotary amplitude in a sweep: generating rates (rad/s) and EPG."""

    x: float
    nu_tilde: dict[str, float]
    epg: EpgBreakdown | None


def sweep_rotary(
    model: CoefficientModel,
    x_grid: Sequence[float],
    t: float | None = None,
    noise: "channels.NoiseParams | None" = None,
    reconstructor: Callable[[np.ndarray, float], dict[str, float]] | None = None,
) -> list[SweepPoint]:
    """Evaluate nu~ error rates (and optionally EPG) across rotary amplitudes.

    By default uses the closed-form coefficients; pass ``reconstructor`` (for
    example a HEAT round trip, signature ``(U, t) -> nu_tilde map``) to route
    through a simulated measurement instead.
    """
    t = model.t_pulse if t is None else t
    points = []
    for x in x_grid:
        c = model.coefficients(float(x))
        if reconstructor is None:
            try:
                nu_tilde = echo_coefficients_analytic(c, t).nu_tilde
            except DegenerateNormError:
                nu_tilde = echo_report_numeric(c, t).nu_tilde
        else:
            nu_tilde = reconstructor(echo_unitary(c, t), t)
        epg = None
        if noise is not None:
            u = echo_unitary(c, t)
            ideal = ZX_HALF_PI if nu_tilde.get("ZX", 0.0) >= 0 else ZX_MINUS_HALF_PI
            epg = epg_estimate(u, noise, 2.0 * t, u_ideal=ideal)
        points.append(SweepPoint(x=float(x), nu_tilde=dict(nu_tilde), epg=epg))
    return points
