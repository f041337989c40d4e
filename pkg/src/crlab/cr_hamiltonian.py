"""Single-tone effective cross-resonance Hamiltonians on the two-qubit subspace.

The effective Hamiltonian of one CR(+rotary+crosstalk) tone is

    H = nu_IX IX/2 + nu_IY IY/2 + nu_IZ IZ/2 + nu_ZI ZI/2
      + nu_ZX ZX/2 + nu_ZY ZY/2 + nu_ZZ ZZ/2,

with all ``nu`` in rad/s and control-first tensor ordering.  Reversing the
drive sign flips exactly the drive-odd coefficients (target X/Y quadratures:
IX, IY, ZX, ZY) and preserves the diagonal ones (IZ, ZI, ZZ).

Closed forms nu(amplitude) are out of scope here; coefficients come either
directly or from a phenomenological model quadratic in the applied rotary
amplitude ``x``, with half-angles theta(x) = theta0 + theta1 x + theta2 x^2
per Pauli term and the drive-sign parity carried as a flag.  Half-angles
relate to rates via ``nu = -2 theta / t`` for a pulse of duration ``t``
(the phenomenological unitary convention is ``U = exp(+i sum theta P)``).
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping

import numpy as np

from .errors import InvalidInputError, UnsupportedModeError
from .pauli import pauli_matrix

# Default half-pulse duration (seconds).
DEFAULT_T_PULSE_S = 206.22e-9

CR_LABELS = ("IX", "IY", "IZ", "ZI", "ZX", "ZY", "ZZ")
DRIVE_ODD_LABELS = frozenset({"IX", "IY", "ZX", "ZY"})

# Expected large-rotary asymptotics of each coefficient (no-crosstalk phase
# conventions, phi_C = phi_R = 0).
LARGE_ROTARY_EXPECTED: dict[str, str] = {
    "IX": "grows",
    "IY": "constant",
    "IZ": "grows",
    "ZI": "constant",
    "ZX": "constant",
    "ZY": "zero",
    "ZZ": "grows",
}


@dataclass(frozen=True)
class CrCoefficients:
    """The seven single-tone coefficients, rad/s."""

    nu_ix: float = 0.0
    nu_iy: float = 0.0
    nu_iz: float = 0.0
    nu_zi: float = 0.0
    nu_zx: float = 0.0
    nu_zy: float = 0.0
    nu_zz: float = 0.0

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not math.isfinite(value):
                raise InvalidInputError(f"coefficient {name} is not finite: {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "IX": self.nu_ix,
            "IY": self.nu_iy,
            "IZ": self.nu_iz,
            "ZI": self.nu_zi,
            "ZX": self.nu_zx,
            "ZY": self.nu_zy,
            "ZZ": self.nu_zz,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "CrCoefficients":
        unknown = set(d) - set(CR_LABELS)
        if unknown:
            raise InvalidInputError(f"unknown coefficient labels: {sorted(unknown)}")
        return cls(
            nu_ix=float(d.get("IX", 0.0)),
            nu_iy=float(d.get("IY", 0.0)),
            nu_iz=float(d.get("IZ", 0.0)),
            nu_zi=float(d.get("ZI", 0.0)),
            nu_zx=float(d.get("ZX", 0.0)),
            nu_zy=float(d.get("ZY", 0.0)),
            nu_zz=float(d.get("ZZ", 0.0)),
        )


def build_hamiltonian(c: CrCoefficients) -> np.ndarray:
    """4x4 Hermitian matrix ``sum nu_P P/2`` for the given coefficients."""
    h = np.zeros((4, 4), dtype=complex)
    for label, nu in c.as_dict().items():
        if nu != 0.0:
            h += 0.5 * nu * pauli_matrix(label)
    return h


def negate_drive(c: CrCoefficients) -> CrCoefficients:
    """Coefficients of the sign-reversed tone (drive-odd terms flip)."""
    return replace(c, nu_ix=-c.nu_ix, nu_iy=-c.nu_iy, nu_zx=-c.nu_zx, nu_zy=-c.nu_zy)


@dataclass(frozen=True)
class DriveConfig:
    """Raw tone parameters: amplitudes in rad/s, phases in rad, time in s."""

    omega_cr: float = 0.0
    omega_rotary: float = 0.0
    omega_xtalk: float = 0.0
    phi_c: float = 0.0
    phi_r: float = 0.0
    phi_t: float = 0.0
    t_pulse: float = DEFAULT_T_PULSE_S

    def __post_init__(self):
        if self.t_pulse <= 0:
            raise InvalidInputError("t_pulse must be positive")


def combine_tones(cfg: DriveConfig) -> tuple[float, float]:
    """Collapse the crosstalk and rotary tones on the target into one cosine.

    Returns ``(omega_eff, phi_eff)`` with

        omega_eff^2 = W_T^2 + W_R^2 + 2 W_T W_R cos(phi_T + phi_R)

    and ``phi_eff`` the quadrant-correct phase of the phasor sum
    ``W_T e^{-i phi_T} + W_R e^{i phi_R}``.  Both amplitudes zero returns
    (0, 0) by convention.
    """
    z = cfg.omega_xtalk * cmath.exp(-1j * cfg.phi_t) + cfg.omega_rotary * cmath.exp(1j * cfg.phi_r)
    if z == 0:
        return 0.0, 0.0
    return abs(z), cmath.phase(z)


def target_drive_quadratures(cfg: DriveConfig) -> tuple[float, float]:
    """(nu_IX, nu_IY) pickup on the target from the combined tone.

    Quadrature convention: ``nu_IX = W cos(phi)``, ``nu_IY = +W sin(phi)``,
    fixed so the crosstalk-only limit is nu_IY = -W_T sin(phi_T).  Because
    the phasor sum is linear in the tones, nu_IY keeps exactly that value at
    any rotary amplitude when phi_R = 0: the rotary tone does not move the
    out-of-phase pickup.
    """
    omega_eff, phi_eff = combine_tones(cfg)
    return omega_eff * math.cos(phi_eff), omega_eff * math.sin(phi_eff)


@dataclass(frozen=True)
class TermPolynomial:
    """Quadratic half-angle model for one Pauli term: theta(x) = t0 + t1 x + t2 x^2."""

    theta0: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    odd: bool = False

    def theta(self, x: float) -> float:
        return self.theta0 + self.theta1 * x + self.theta2 * x * x


@dataclass(frozen=True)
class CoefficientModel:
    """Coefficients as a function of the applied rotary amplitude ``x``.

    ``mode`` is ``"phenomenological"`` (per-term quadratic half-angles) or
    ``"direct"`` (explicit coefficients stored per grid point, no
    interpolation).
    """

    mode: Literal["direct", "phenomenological"]
    t_pulse: float = DEFAULT_T_PULSE_S
    terms: Mapping[str, TermPolynomial] = field(default_factory=dict)
    direct_points: Mapping[float, CrCoefficients] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("direct", "phenomenological"):
            raise InvalidInputError(f"unknown model mode {self.mode!r}")
        if self.t_pulse <= 0:
            raise InvalidInputError("t_pulse must be positive")
        unknown = set(self.terms) - set(CR_LABELS)
        if unknown:
            raise InvalidInputError(f"unknown model terms: {sorted(unknown)}")
        for label, term in self.terms.items():
            expected_odd = label in DRIVE_ODD_LABELS
            if term.odd != expected_odd:
                raise InvalidInputError(
                    f"term {label}: odd={term.odd} contradicts the drive-sign "
                    f"parity rule (expected odd={expected_odd})"
                )

    def coefficients(self, x: float, sign: int = +1) -> CrCoefficients:
        """Coefficients at rotary amplitude ``x`` for drive sign +1/-1."""
        if sign not in (+1, -1):
            raise InvalidInputError("sign must be +1 or -1")
        if self.mode == "direct":
            if x not in self.direct_points:
                raise InvalidInputError(f"direct model has no point at x={x!r}")
            c = self.direct_points[x]
            return c if sign == +1 else negate_drive(c)
        values = {}
        for label, term in self.terms.items():
            theta = term.theta(x)
            if term.odd and sign == -1:
                theta = -theta
            values[label] = -2.0 * theta / self.t_pulse
        return CrCoefficients.from_dict(values)

    def scale_term(self, label: str, factor: float) -> "CoefficientModel":
        """New model with one term's polynomial multiplied by ``factor``."""
        if self.mode != "phenomenological":
            raise UnsupportedModeError("scale_term requires a phenomenological model")
        term = self.terms.get(label, TermPolynomial(odd=label in DRIVE_ODD_LABELS))
        scaled = TermPolynomial(
            theta0=term.theta0 * factor,
            theta1=term.theta1 * factor,
            theta2=term.theta2 * factor,
            odd=term.odd,
        )
        new_terms = dict(self.terms)
        new_terms[label] = scaled
        return replace(self, terms=new_terms)

    def to_json(self) -> dict:
        doc: dict = {"mode": self.mode, "t_pulse_ns": self.t_pulse * 1e9}
        if self.mode == "phenomenological":
            doc["terms"] = {
                label: {
                    "theta0": t.theta0,
                    "theta1": t.theta1,
                    "theta2": t.theta2,
                    "odd": t.odd,
                }
                for label, t in sorted(self.terms.items())
            }
        else:
            doc["points"] = [
                {"x": x, **{f"nu_{k.lower()}_khz": v / (2e3 * math.pi) for k, v in c.as_dict().items()}}
                for x, c in sorted(self.direct_points.items())
            ]
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "CoefficientModel":
        mode = doc.get("mode")
        t_pulse = float(doc.get("t_pulse_ns", DEFAULT_T_PULSE_S * 1e9)) * 1e-9
        if mode == "phenomenological":
            terms = {
                label: TermPolynomial(
                    theta0=float(spec.get("theta0", 0.0)),
                    theta1=float(spec.get("theta1", 0.0)),
                    theta2=float(spec.get("theta2", 0.0)),
                    odd=bool(spec.get("odd", label in DRIVE_ODD_LABELS)),
                )
                for label, spec in doc.get("terms", {}).items()
            }
            return cls(mode="phenomenological", t_pulse=t_pulse, terms=terms)
        if mode == "direct":
            points = {}
            for row in doc.get("points", []):
                x = float(row["x"])
                values = {
                    k.removeprefix("nu_").removesuffix("_khz").upper(): 2e3 * math.pi * float(v)
                    for k, v in row.items()
                    if k != "x"
                }
                points[x] = CrCoefficients.from_dict(values)
            return cls(mode="direct", t_pulse=t_pulse, direct_points=points)
        raise InvalidInputError(f"unknown model mode {mode!r}")

    @classmethod
    def from_json_text(cls, text: str) -> "CoefficientModel":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class LargeRotaryCheck:
    label: str
    expected: str
    observed: str
    ok: bool


@dataclass(frozen=True)
class LargeRotaryReport:
    checks: tuple[LargeRotaryCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def violations(self) -> list[LargeRotaryCheck]:
        return [c for c in self.checks if not c.ok]


def _classify_trend(values: np.ndarray, x: np.ndarray, scale: float) -> str:
    """Classify |values(x)| on the grid as zero / constant / grows."""
    mags = np.abs(values)
    if mags.max() <= 1e-10 * max(scale, 1e-300):
        return "zero"
    order = np.argsort(np.abs(x))
    k = max(1, len(x) // 10)
    inner = mags[order[:k]].max()
    outer = mags[order[-k:]].max()
    if outer >= 3.0 * max(inner, 1e-12 * scale):
        return "grows"
    if outer <= 1.3 * inner + 1e-12 * scale:
        return "constant"
    return "indeterminate"


def large_rotary_checks(model: CoefficientModel, x_grid) -> LargeRotaryReport:
    """Check the seven large-rotary asymptotics on the supplied grid."""
    if model.mode != "phenomenological":
        raise UnsupportedModeError("large_rotary_checks requires a phenomenological model")
    x = np.asarray(list(x_grid), dtype=float)
    if x.size < 4:
        raise InvalidInputError("need at least 4 grid points")
    table = {label: np.empty_like(x) for label in CR_LABELS}
    for i, xi in enumerate(x):
        coeffs = model.coefficients(float(xi)).as_dict()
        for label in CR_LABELS:
            table[label][i] = coeffs[label]
    scale = max(np.abs(v).max() for v in table.values())
    checks = []
    for label in CR_LABELS:
        observed = _classify_trend(table[label], x, scale)
        expected = LARGE_ROTARY_EXPECTED[label]
        ok = observed == expected or (expected == "constant" and observed == "zero")
        checks.append(LargeRotaryCheck(label=label, expected=expected, observed=observed, ok=ok))
    return LargeRotaryReport(checks=tuple(checks))
