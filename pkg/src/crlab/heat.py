"""Error-amplification tomography for the echoed gate and its subsystems.

Sequence construction
---------------------
One repetition is the gate under test followed by an ideal pi echo on the
measured (target) qubit: a Y_pi echo for the "y" sequence kind, a Z_pi echo
for the "z" kind.  The conditioning qubit (control, or spectator in the
target-spectator case) is prepared in |0> or |1>, the target starts in |+>,
and after N repetitions the target expectations <Z> and <Y> are read out.

Writing the conditional target evolution as U_|j> = exp(-i theta_j/2 n_j.sigma),
two consecutive repetitions compose the gate with its pi-echo conjugate, which
cancels the nominal rotation at any angle and, to first order in the
transverse axis components, leaves per pair

    y kind:  exp(-i [2 sin(theta) n_y Y - 2 (1-cos theta) n_x n_y Z] / 2)
    z kind:  exp(-i [2 sin(theta) n_z Z + 2 (1-cos theta) n_x n_z Y] / 2)

so for even N the kicks accumulate coherently and

    Y_err = <Z>  ~  -N n_y sin(theta) / |n_x| ,
    Z_err = <Y>  ~  +N n_z sin(theta) / |n_x| ,

with no y/z mixing; odd N leaves an unpaired repetition that mixes the two
components, so odd N is refused.  The inversion formulas below consume these
even-N records.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping

import numpy as np

from .errors import IncompleteRecordError, InvalidInputError
from .pauli import decompose, generating_hamiltonian, is_unitary, mat_exp, pauli_matrix

SequenceKind = Literal["y", "z"]
KINDS: tuple[SequenceKind, ...] = ("y", "z")

_Y = pauli_matrix("Y")
_Z = pauli_matrix("Z")
_ECHO = {
    "y": mat_exp(0.5 * _Y, math.pi),  # exp(-i pi Y/2): pi rotation about Y
    "z": mat_exp(0.5 * _Z, math.pi),  # exp(-i pi Z/2): pi rotation about Z
}
_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class HeatConfig:
    """Which cells to run: repetition counts (even), preps, kinds, shot mode."""

    reps: tuple[int, ...] = (2, 4, 8, 16)
    preps: tuple[int, ...] = (0, 1)
    kinds: tuple[SequenceKind, ...] = KINDS
    shots: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.reps:
            raise InvalidInputError("reps must be non-empty")
        for n in self.reps:
            if n <= 0 or n % 2 != 0:
                raise InvalidInputError(
                    f"N = {n}: only even repetition counts are supported (odd N mixes "
                    "the y and z error components)"
                )
        if any(p not in (0, 1) for p in self.preps):
            raise InvalidInputError("preps must be 0 or 1")
        if any(k not in KINDS for k in self.kinds):
            raise InvalidInputError("kinds must be 'y' or 'z'")
        if self.shots is not None and self.shots < 1:
            raise InvalidInputError("shots must be >= 1 when given")


@dataclass(frozen=True)
class HeatCell:
    y_err: float  # <Z> on the target after N reps
    z_err: float  # <Y> on the target after N reps
    shots: int | None
    seed: int | None


@dataclass(frozen=True)
class HeatRecord:
    """Measured expectations per (N, prep, kind) cell."""

    system: str
    cells: Mapping[tuple[int, int, str], HeatCell] = field(default_factory=dict)

    def cell(self, n: int, prep: int, kind: SequenceKind) -> HeatCell:
        try:
            return self.cells[(n, prep, kind)]
        except KeyError:
            raise IncompleteRecordError(
                f"record has no cell (N={n}, prep={prep}, kind={kind})"
            ) from None

    def reps(self) -> tuple[int, ...]:
        return tuple(sorted({key[0] for key in self.cells}))

    def merged(self, other: "HeatRecord") -> "HeatRecord":
        if other.system != self.system:
            raise InvalidInputError("cannot merge records from different systems")
        cells = dict(self.cells)
        cells.update(other.cells)
        return HeatRecord(system=self.system, cells=cells)

    # -- serialization ------------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("kind,prep,N,y_err,z_err,shots,seed\n")
        for (n, prep, kind), cell in sorted(self.cells.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])):
            shots = "" if cell.shots is None else str(cell.shots)
            seed = "" if cell.seed is None else str(cell.seed)
            buf.write(f"{kind},{prep},{n},{cell.y_err:.17g},{cell.z_err:.17g},{shots},{seed}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, system: str = "2q") -> "HeatRecord":
        cells = {}
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        header = lines[0].split(",")
        if header[:5] != ["kind", "prep", "N", "y_err", "z_err"]:
            raise InvalidInputError("unexpected HEAT CSV header")
        for ln in lines[1:]:
            kind, prep, n, y, z, shots, seed = (ln.split(",") + ["", ""])[:7]
            cells[(int(n), int(prep), kind)] = HeatCell(
                y_err=float(y),
                z_err=float(z),
                shots=int(shots) if shots else None,
                seed=int(seed) if seed else None,
            )
        return cls(system=system, cells=cells)

    def to_json(self) -> str:
        rows = [
            {
                "kind": kind,
                "prep": prep,
                "N": n,
                "y_err": cell.y_err,
                "z_err": cell.z_err,
                "shots": cell.shots,
                "seed": cell.seed,
            }
            for (n, prep, kind), cell in sorted(
                self.cells.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])
            )
        ]
        return json.dumps({"system": self.system, "cells": rows}, indent=2)


@dataclass(frozen=True)
class AxisAngle:
    """Rotation angle (in [0, pi]) and unit axis of a conditional target unitary."""

    theta: float
    axis: tuple[float, float, float]
    prep_label: int


# ---------------------------------------------------------------------------
# simulation


def _sequence_expectations(
    u: np.ndarray,
    init: np.ndarray,
    echo_full: np.ndarray,
    obs_z: np.ndarray,
    obs_y: np.ndarray,
    n_reps: int,
) -> tuple[float, float]:
    psi = init
    for _ in range(n_reps):
        psi = echo_full @ (u @ psi)
    ez = float(np.real(psi.conj() @ (obs_z @ psi)))
    ey = float(np.real(psi.conj() @ (obs_y @ psi)))
    return ez, ey


def _embed_on_target(op: np.ndarray, n_qubits: int, target_index: int) -> np.ndarray:
    mats = [np.eye(2, dtype=complex)] * n_qubits
    mats[target_index] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _basis_state(n_qubits: int, target_index: int, prep_index: int | None, prep: int) -> np.ndarray:
    kets = []
    for q in range(n_qubits):
        if q == target_index:
            kets.append(_PLUS)
        elif prep_index is not None and q == prep_index:
            kets.append(np.array([1.0, 0.0] if prep == 0 else [0.0, 1.0], dtype=complex))
        else:
            kets.append(np.array([1.0, 0.0], dtype=complex))
    out = kets[0]
    for k in kets[1:]:
        out = np.kron(out, k)
    return out


def _run_heat(
    u: np.ndarray,
    cfg: HeatConfig,
    n_qubits: int,
    target_index: int,
    prep_index: int | None,
    system: str,
) -> HeatRecord:
    if not is_unitary(u):
        raise InvalidInputError("gate under test must be unitary")
    obs_z = _embed_on_target(_Z, n_qubits, target_index)
    obs_y = _embed_on_target(_Y, n_qubits, target_index)
    echo_ops = {k: _embed_on_target(_ECHO[k], n_qubits, target_index) for k in KINDS}
    seed_root = np.random.SeedSequence(cfg.seed)
    cells: dict[tuple[int, int, str], HeatCell] = {}
    preps = cfg.preps if prep_index is not None else (0,)
    children = seed_root.spawn(len(cfg.reps) * len(preps) * len(cfg.kinds))
    i = 0
    for kind in cfg.kinds:
        for prep in preps:
            init = _basis_state(n_qubits, target_index, prep_index, prep)
            for n in cfg.reps:
                ez, ey = _sequence_expectations(u, init, echo_ops[kind], obs_z, obs_y, n)
                child = children[i]
                i += 1
                if cfg.shots is None:
                    cells[(n, prep, kind)] = HeatCell(y_err=ez, z_err=ey, shots=None, seed=None)
                else:
                    rng = np.random.default_rng(child)
                    pz = min(max((1.0 + ez) / 2.0, 0.0), 1.0)
                    py = min(max((1.0 + ey) / 2.0, 0.0), 1.0)
                    ez_hat = 2.0 * rng.binomial(cfg.shots, pz) / cfg.shots - 1.0
                    ey_hat = 2.0 * rng.binomial(cfg.shots, py) / cfg.shots - 1.0
                    cells[(n, prep, kind)] = HeatCell(
                        y_err=ez_hat, z_err=ey_hat, shots=cfg.shots,
                        seed=int(child.generate_state(1)[0]),
                    )
    return HeatRecord(system=system, cells=cells)


def run_heat_2q(u: np.ndarray, cfg: HeatConfig) -> HeatRecord:
    """HEAT on a 4x4 echoed control-target gate (control conditions, target measured)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise InvalidInputError("run_heat_2q expects a 4x4 unitary")
    return _run_heat(u, cfg, n_qubits=2, target_index=1, prep_index=0, system="2q")


def project_control_zero(u3: np.ndarray) -> np.ndarray:
    """Extract the target-spectator block of an 8x8 C-T-S unitary with control |0>.

    The gate must be block diagonal in the control (no control flips)."""
    u3 = np.asarray(u3, dtype=complex)
    if u3.shape != (8, 8):
        raise InvalidInputError("expected an 8x8 control-target-spectator unitary")
    blocks = u3.reshape(2, 4, 2, 4)
    off = max(np.max(np.abs(blocks[0, :, 1, :])), np.max(np.abs(blocks[1, :, 0, :])))
    if off > 1e-9:
        raise InvalidInputError(
            f"unitary is not block diagonal in the control (off-block norm {off:.2e})"
        )
    return np.array(blocks[0, :, 0, :])


def run_heat_spectator(u: np.ndarray, cfg: HeatConfig) -> HeatRecord:
    """HEAT on the target-spectator pair (target slot first, spectator second).

    Accepts the 4x4 target (x) spectator block directly, or the 8x8
    control-target-spectator unitary, in which case the control is prepared
    in |0> and projected out.  The spectator conditions the sequence; the
    target carries the echoes and the measurement.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape == (8, 8):
        u_ts = project_control_zero(u)
    elif u.shape == (4, 4):
        u_ts = u
    else:
        raise InvalidInputError("run_heat_spectator expects a 4x4 or 8x8 unitary")
    return _run_heat(u_ts, cfg, n_qubits=2, target_index=0, prep_index=1, system="spectator")


def run_heat_1q(u: np.ndarray, cfg: HeatConfig) -> HeatRecord:
    """Single-qubit HEAT (no conditioning qubit; cells are stored under prep 0)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidInputError("run_heat_1q expects a 2x2 unitary")
    return _run_heat(u, cfg, n_qubits=1, target_index=0, prep_index=None, system="1q")


# ---------------------------------------------------------------------------
# reconstruction


@dataclass(frozen=True)
class Heat2qReconstruction:
    axis0: AxisAngle
    axis1: AxisAngle
    a_coeffs: dict[str, complex]
    nu_tilde: dict[str, float]
    n_used: int


def reconstruct_2q(
    record: HeatRecord,
    n: int,
    t_half: float,
    assume_zx_half_pi: bool = True,
    zx_sign: int = +1,
    thetas: tuple[float, float] | None = None,
) -> Heat2qReconstruction:
    """Invert an even-N record into axis-angle pairs and gate coefficients.

    With ``assume_zx_half_pi`` the conditional rotation angles are pinned to
    pi/2 and the measured coefficients map to generator rates through the
    quarter-cycle proportionality nu~_P = i (pi/sqrt(2)) A_P / (2 t).
    ``zx_sign`` is the handedness of the calibrated conditional rotation
    (+1 when the prep-|0> block rotates about +x, as for nu_ZX > 0);
    supply ``thetas`` to override the angles instead.
    """
    if assume_zx_half_pi:
        theta0 = theta1 = math.pi / 2.0
    elif thetas is not None:
        theta0, theta1 = thetas
    else:
        raise InvalidInputError(
            "either assume the calibrated pi/2 angles or supply thetas=(theta0, theta1)"
        )
    if zx_sign not in (+1, -1):
        raise InvalidInputError("zx_sign must be +1 or -1")

    y0 = record.cell(n, 0, "y").y_err
    z0 = record.cell(n, 0, "z").z_err
    y1 = record.cell(n, 1, "y").y_err
    z1 = record.cell(n, 1, "z").z_err

    def components(y_err: float, z_err: float, theta: float, x_sign: float):
        sin_t = math.sin(theta)
        ry = y_err / (n * sin_t)
        rz = z_err / (n * sin_t)
        nx_mag = 1.0 / math.sqrt(1.0 + ry * ry + rz * rz)
        return x_sign * nx_mag, -ry * nx_mag, rz * nx_mag

    n0 = components(y0, z0, theta0, +float(zx_sign))
    n1 = components(y1, z1, theta1, -float(zx_sign))
    axis0 = AxisAngle(theta=theta0, axis=n0, prep_label=0)
    axis1 = AxisAngle(theta=theta1, axis=n1, prep_label=1)

    a = {}
    half0, half1 = math.sin(theta0 / 2.0), math.sin(theta1 / 2.0)
    blocks0 = {"I": math.cos(theta0 / 2.0)} | {
        ax: -1j * comp * half0 for ax, comp in zip("XYZ", n0)
    }
    blocks1 = {"I": math.cos(theta1 / 2.0)} | {
        ax: -1j * comp * half1 for ax, comp in zip("XYZ", n1)
    }
    for ax in "IXYZ":
        a["I" + ax] = 0.5 * (blocks0[ax] + blocks1[ax])
        a["Z" + ax] = 0.5 * (blocks0[ax] - blocks1[ax])
    a["II"] = 0.5 * (blocks0["I"] + blocks1["I"])

    # quarter-cycle mapping B = (pi/sqrt 2) A, nu~ = i B / (2 t)
    factor = math.pi / math.sqrt(2.0) / (2.0 * t_half)
    nu_tilde = {}
    for label in ("IX", "IY", "IZ", "ZX", "ZY", "ZZ"):
        val = 1j * factor * a[label]
        nu_tilde[label] = float(val.real)
    nu_tilde["ZI"] = 0.0
    return Heat2qReconstruction(
        axis0=axis0, axis1=axis1, a_coeffs=a, nu_tilde=nu_tilde, n_used=n
    )


SMALL_ANGLE_LIMIT_RAD = 0.5


@dataclass(frozen=True)
class SpectatorReconstruction:
    """Small-angle inversion of a target-spectator record.

    ``a_coeffs`` uses target-first labels: "YI" is Y on the target, "YZ" is Y
    on the target conditioned on the spectator Z, etc.
    """

    a_coeffs: dict[str, complex]
    sums: dict[str, complex]      # prep-|0> combinations, e.g. "Y": A_YI + A_YZ
    diffs: dict[str, complex]     # prep-|1> combinations
    a_ii: complex
    nu_tilde: dict[str, float] | None
    linearity_warning: bool
    n_used: int


def reconstruct_spectator(
    record: HeatRecord,
    n: int,
    t_half: float | None = None,
) -> SpectatorReconstruction:
    """Invert a small-angle target-spectator record.

    Uses A_Y^(prep) ~ i <Z> / (2N) and A_Z^(prep) ~ -i <Y> / (2N); the
    identity coefficient follows from cos of the implied half angle.  A
    linearity warning is attached when the amplified angle exceeds
    ``SMALL_ANGLE_LIMIT_RAD``.  When ``t_half`` is given the reconstructed
    block is converted to generator rates via the principal log.
    """
    y0 = record.cell(n, 0, "y").y_err
    z0 = record.cell(n, 0, "z").z_err
    y1 = record.cell(n, 1, "y").y_err
    z1 = record.cell(n, 1, "z").z_err
    warn = max(abs(y0), abs(z0), abs(y1), abs(z1)) > SMALL_ANGLE_LIMIT_RAD

    sum_y = 1j * y0 / (2.0 * n)    # A_YI + A_YZ
    sum_z = -1j * z0 / (2.0 * n)   # A_ZI + A_ZZ
    diff_y = 1j * y1 / (2.0 * n)   # A_YI - A_YZ
    diff_z = -1j * z1 / (2.0 * n)  # A_ZI - A_ZZ

    a = {
        "YI": 0.5 * (sum_y + diff_y),
        "YZ": 0.5 * (sum_y - diff_y),
        "ZI": 0.5 * (sum_z + diff_z),
        "ZZ": 0.5 * (sum_z - diff_z),
    }
    half0 = 1j * np.sqrt(complex(sum_y**2 + sum_z**2))
    a_ii = complex(np.cos(half0))

    nu_tilde = None
    if t_half is not None:
        u_est = a_ii * np.eye(4, dtype=complex)
        for label, coeff in a.items():
            u_est = u_est + coeff * pauli_matrix(label)
        # project the estimate back onto the unitary group before taking the log
        w, _, vh = np.linalg.svd(u_est)
        gen = generating_hamiltonian(w @ vh, t_half)
        nu_tilde = {label: 2.0 * val.real for label, val in gen.items()}
    return SpectatorReconstruction(
        a_coeffs=a,
        sums={"Y": sum_y, "Z": sum_z},
        diffs={"Y": diff_y, "Z": diff_z},
        a_ii=a_ii,
        nu_tilde=nu_tilde,
        linearity_warning=warn,
        n_used=n,
    )


@dataclass(frozen=True)
class SingleQubitReconstruction:
    a_i: complex
    a_y: complex
    a_z: complex
    linearity_warning: bool
    n_used: int


def reconstruct_1q(record: HeatRecord, n: int) -> SingleQubitReconstruction:
    """Small-angle inversion of a single-qubit record: U = A_I I + A_Y Y + A_Z Z."""
    y_err = record.cell(n, 0, "y").y_err
    z_err = record.cell(n, 0, "z").z_err
    warn = max(abs(y_err), abs(z_err)) > SMALL_ANGLE_LIMIT_RAD
    a_y = 1j * y_err / (2.0 * n)
    a_z = -1j * z_err / (2.0 * n)
    a_i = complex(np.cos(1j * np.sqrt(complex(a_y**2 + a_z**2))))
    return SingleQubitReconstruction(a_i=a_i, a_y=a_y, a_z=a_z, linearity_warning=warn, n_used=n)


def nu_tilde_from_record(
    u: np.ndarray, t_half: float, n: int = 8, zx_sign: int = +1
) -> dict[str, float]:
    """Convenience HEAT round trip: simulate at one even N and invert to rates."""
    cfg = HeatConfig(reps=(n,))
    rec = run_heat_2q(u, cfg)
    return reconstruct_2q(rec, n, t_half, zx_sign=zx_sign).nu_tilde


def decompose_echo(u: np.ndarray) -> dict[str, complex]:
    """Direct Pauli decomposition of a gate, for comparing against HEAT estimates."""
    dec = decompose(u)
    return {label: dec[label] for label in ("II", "IX", "IY", "IZ", "ZI", "ZX", "ZY", "ZZ")}


def iter_cells(record: HeatRecord) -> Iterable[tuple[int, int, str, HeatCell]]:
    for (n, prep, kind), cell in sorted(record.cells.items()):
        yield n, prep, kind, cell
