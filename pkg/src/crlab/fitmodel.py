"""Phenomenological half-angle model of the half pulses and sweep fitting.

The half-pulse propagators are parametrized directly in the computational
subspace as

    U(+-) = exp(+i sum_P theta_P(+-) sigma_P),
    theta_P(x) = theta0_P + theta1_P x + theta2_P x^2,

with ``x`` the applied rotary amplitude in calibration units.  Note the +i
sign convention, opposite to exp(-i H t); rates relate to half-angles via
``nu = -2 theta / t``.  Terms whose target letter is X or Y flip sign from
U(+) to U(-) (drive-odd); Z-type terms do not.  Labels are control-target
(2 qubits) or control-target-spectator (3 qubits), and every label must act
as I or Z on the control and spectator slots so the echoed sequence stays
block diagonal there.

The echoed gate is X_control . U(-) . X_control . U(+).  A synthesized sweep
runs simulated error-amplification tomography on that gate at each x and
records dimensionless observables:

    ct:P    generating rate of the control-target block (spectator in |0>)
            reconstructed by the two-qubit sequences, times the half-pulse
            duration (nu~_P * t);
    ts:P    same for the target-spectator block (control in |0>), labelled
            by the 3-qubit Pauli (e.g. ts:IYZ), via the small-angle
            sequences;
    half:P  conditional target X half-angles of the single U(+) pulse
            (calibration-style observables), e.g. half:IXI is the mean over
            conditioning states and half:IXZ the spectator-difference.

Fitting minimizes the weighted squared mismatch of these observables over
any subset of theta parameters with a multi-start simplex search.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .cr_hamiltonian import DEFAULT_T_PULSE_S
from .errors import FitDegenerateError, InvalidInputError
from .heat import (
    HeatConfig,
    project_control_zero,
    reconstruct_2q,
    reconstruct_spectator,
    run_heat_2q,
    run_heat_spectator,
)
from .pauli import mat_log_principal, pauli_matrix

ODD_TARGET_LETTERS = frozenset({"X", "Y"})


def label_is_drive_odd(label: str) -> bool:
    """Drive parity from the target letter: X/Y quadratures flip with the tone."""
    return label[1] in ODD_TARGET_LETTERS


@dataclass(frozen=True)
class ThetaTerm:
    theta0: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    odd: bool = False

    def theta(self, x: float) -> float:
        return self.theta0 + self.theta1 * x + self.theta2 * x * x


@dataclass(frozen=True)
class ThetaModel:
    """Half-angle quadratics per Pauli term for a 2- or 3-qubit system."""

    qubit_count: int
    terms: Mapping[str, ThetaTerm] = field(default_factory=dict)
    t_pulse: float = DEFAULT_T_PULSE_S

    def __post_init__(self):
        if self.qubit_count not in (2, 3):
            raise InvalidInputError("qubit_count must be 2 or 3")
        if self.t_pulse <= 0:
            raise InvalidInputError("t_pulse must be positive")
        for label, term in self.terms.items():
            if len(label) != self.qubit_count:
                raise InvalidInputError(f"label {label!r} does not match qubit_count")
            if label[0] not in "IZ":
                raise InvalidInputError(f"label {label!r} must be I or Z on the control")
            if self.qubit_count == 3 and label[2] not in "IZ":
                raise InvalidInputError(f"label {label!r} must be I or Z on the spectator")
            if label[1] == "I":
                raise InvalidInputError(f"label {label!r} acts trivially on the target")
            if term.odd != label_is_drive_odd(label):
                raise InvalidInputError(
                    f"term {label}: odd={term.odd} contradicts the target-letter parity rule"
                )

    def theta(self, label: str, x: float, sign: int = +1) -> float:
        term = self.terms.get(label)
        if term is None:
            return 0.0
        value = term.theta(x)
        return -value if (term.odd and sign == -1) else value

    # -- parameter vector plumbing for the fitter ---------------------------
    def get_param(self, label: str, k: int) -> float:
        term = self.terms.get(label, ThetaTerm(odd=label_is_drive_odd(label)))
        return (term.theta0, term.theta1, term.theta2)[k]

    def with_param(self, label: str, k: int, value: float) -> "ThetaModel":
        term = self.terms.get(label, ThetaTerm(odd=label_is_drive_odd(label)))
        fields = {"theta0": term.theta0, "theta1": term.theta1, "theta2": term.theta2}
        fields[("theta0", "theta1", "theta2")[k]] = value
        new_terms = dict(self.terms)
        new_terms[label] = ThetaTerm(odd=term.odd, **fields)
        return replace(self, terms=new_terms)

    # -- serialization (same document schema as CoefficientModel) -----------
    def to_json(self) -> dict:
        return {
            "mode": "phenomenological",
            "qubit_count": self.qubit_count,
            "t_pulse_ns": self.t_pulse * 1e9,
            "terms": {
                label: {
                    "theta0": t.theta0,
                    "theta1": t.theta1,
                    "theta2": t.theta2,
                    "odd": t.odd,
                }
                for label, t in sorted(self.terms.items())
            },
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ThetaModel":
        terms = {}
        for label, spec in doc.get("terms", {}).items():
            terms[label] = ThetaTerm(
                theta0=float(spec.get("theta0", 0.0)),
                theta1=float(spec.get("theta1", 0.0)),
                theta2=float(spec.get("theta2", 0.0)),
                odd=bool(spec.get("odd", label_is_drive_odd(label))),
            )
        qubit_count = int(doc.get("qubit_count", len(next(iter(terms), "XX"))))
        t_pulse = float(doc.get("t_pulse_ns", DEFAULT_T_PULSE_S * 1e9)) * 1e-9
        return cls(qubit_count=qubit_count, terms=terms, t_pulse=t_pulse)

    @classmethod
    def from_json_text(cls, text: str) -> "ThetaModel":
        return cls.from_json(json.loads(text))


def theta_unitary(model: ThetaModel, x: float, sign: int = +1) -> np.ndarray:
    """U(sign) = exp(+i sum theta_P sigma_P) at rotary amplitude x."""
    if sign not in (+1, -1):
        raise InvalidInputError("sign must be +1 or -1")
    dim = 2**model.qubit_count
    gen = np.zeros((dim, dim), dtype=complex)
    for label in model.terms:
        gen += model.theta(label, x, sign) * pauli_matrix(label)
    evals, vecs = np.linalg.eigh(gen)
    return (vecs * np.exp(1j * evals)) @ vecs.conj().T


def echoed_unitary(model: ThetaModel, x: float) -> np.ndarray:
    """Echo composition X_c . U(-) . X_c . U(+)."""
    x_control = pauli_matrix("X" + "I" * (model.qubit_count - 1))
    u_plus = theta_unitary(model, x, +1)
    u_minus = theta_unitary(model, x, -1)
    return x_control @ u_minus @ x_control @ u_plus


def project_spectator_zero(u3: np.ndarray) -> np.ndarray:
    """Control-target block of an 8x8 C-T-S unitary with the spectator in |0>."""
    u3 = np.asarray(u3, dtype=complex).reshape(2, 2, 2, 2, 2, 2)
    off = max(
        float(np.max(np.abs(u3[:, :, 0, :, :, 1]))),
        float(np.max(np.abs(u3[:, :, 1, :, :, 0]))),
    )
    if off > 1e-9:
        raise InvalidInputError(
            f"unitary is not block diagonal in the spectator (off-block norm {off:.2e})"
        )
    return u3[:, :, 0, :, :, 0].reshape(4, 4)


# ---------------------------------------------------------------------------
# sweep synthesis


@dataclass(frozen=True)
class SweepRow:
    x: float
    observable: str
    value: float
    weight: float = 1.0


@dataclass(frozen=True)
class SweepDataset:
    rows: tuple[SweepRow, ...]

    def __post_init__(self):
        if any(r.weight <= 0 for r in self.rows):
            raise InvalidInputError("row weights must be positive")

    def x_values(self) -> tuple[float, ...]:
        return tuple(sorted({r.x for r in self.rows}))

    def observables(self) -> tuple[str, ...]:
        return tuple(sorted({r.observable for r in self.rows}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,observable,value,weight\n")
        for r in sorted(self.rows, key=lambda r: (r.x, r.observable)):
            buf.write(f"{r.x:.17g},{r.observable},{r.value:.17g},{r.weight:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepDataset":
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        if lines[0] != "x,observable,value,weight":
            raise InvalidInputError("unexpected sweep CSV header")
        rows = []
        for ln in lines[1:]:
            x, obs, val, w = ln.split(",")
            rows.append(SweepRow(x=float(x), observable=obs, value=float(val), weight=float(w)))
        return cls(rows=tuple(rows))

    @classmethod
    def from_heat_csv(cls, text: str, x: float) -> "SweepDataset":
        """Import a raw tomography record as yerr/zerr observables at one x."""
        rows = []
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        for ln in lines[1:]:
            kind, prep, n, y_err, z_err = ln.split(",")[:5]
            rows.append(
                SweepRow(x=x, observable=f"yerr:{kind}:{prep}:{n}", value=float(y_err))
            )
            rows.append(
                SweepRow(x=x, observable=f"zerr:{kind}:{prep}:{n}", value=float(z_err))
            )
        return cls(rows=tuple(rows))


CT_OBSERVABLES = ("IX", "IY", "IZ", "ZX", "ZY", "ZZ")
CT_OBSERVABLES_SMALL = ("IY", "ZY", "IZ", "ZZ")
TS_OBSERVABLES_3Q = ("IYI", "IZI", "IYZ", "IZZ")
_TS_FROM_3Q = {"IYI": "YI", "IZI": "ZI", "IYZ": "YZ", "IZZ": "ZZ"}
_CT_FROM_SMALL = {"IY": "YI", "ZY": "YZ", "IZ": "ZI", "ZZ": "ZZ"}

_SWAP_2Q = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def _conditional_half_angles(model: ThetaModel, x: float) -> dict[str, float]:
    """Conditional target half-angles of the single U(+) pulse.

    The conditional 2x2 target blocks (the control and spectator slots act
    as I or Z by construction) have generators theta_x X + theta_y Y +
    theta_z Z whose components are recovered exactly by the principal log;
    the I/Z-type combinations of the X component are reported under
    ``half:`` ids and of the Z component under ``halfz:`` ids.  These are
    the calibration-style observables: the rotary amplitude sweep for the X
    quadrature, conditional phase (ZZ-rate style) measurements for Z.
    """
    u = theta_unitary(model, x, +1)
    nq = model.qubit_count
    sigma = {"X": pauli_matrix("X"), "Z": pauli_matrix("Z")}

    def block_components(b: np.ndarray) -> dict[str, float]:
        gen = mat_log_principal(b / np.sqrt(complex(np.linalg.det(b))))
        return {
            ax: float(np.real(np.trace(sigma[ax] @ gen) / (2.0 * 1j))) for ax in sigma
        }

    if nq == 2:
        blocks = u.reshape(2, 2, 2, 2)
        comp = {c: block_components(blocks[c, :, c, :]) for c in (0, 1)}
        return {
            "half:IX": 0.5 * (comp[0]["X"] + comp[1]["X"]),
            "half:ZX": 0.5 * (comp[0]["X"] - comp[1]["X"]),
            "halfz:IZ": 0.5 * (comp[0]["Z"] + comp[1]["Z"]),
            "halfz:ZZ": 0.5 * (comp[0]["Z"] - comp[1]["Z"]),
        }
    blocks = u.reshape(2, 2, 2, 2, 2, 2)
    comp = {
        (c, s): block_components(blocks[c, :, s, c, :, s]) for c in (0, 1) for s in (0, 1)
    }
    out = {}
    for ax, prefix in (("X", "half"), ("Z", "halfz")):
        vals = {cs: comp[cs][ax] for cs in comp}
        mean = 0.25 * sum(vals.values())
        ctrl = 0.25 * (vals[(0, 0)] + vals[(0, 1)] - vals[(1, 0)] - vals[(1, 1)])
        spec = 0.25 * (vals[(0, 0)] - vals[(0, 1)] + vals[(1, 0)] - vals[(1, 1)])
        out[f"{prefix}:I{ax}I"] = mean
        out[f"{prefix}:Z{ax}I"] = ctrl
        out[f"{prefix}:I{ax}Z"] = spec
    return out


def _zx_sign(model: ThetaModel) -> int:
    zx_label = "ZX" if model.qubit_count == 2 else "ZXI"
    theta_zx = model.get_param(zx_label, 0)
    # nu_zx = -2 theta / t: positive theta means negative rate, i.e. the
    # prep-|0> block rotates about -x after the echo.
    return -1 if theta_zx > 0 else +1


def synthesize_observables(
    model: ThetaModel,
    x: float,
    observables: Iterable[str],
    heat_n: int = 8,
) -> dict[str, float]:
    """Forward-model the requested observables at one rotary amplitude."""
    wanted = list(observables)
    out: dict[str, float] = {}
    need_ct = [o for o in wanted if o.startswith("ct:")]
    need_ts = [o for o in wanted if o.startswith("ts:")]
    need_half = [o for o in wanted if o.startswith(("half:", "halfz:"))]
    need_raw = [o for o in wanted if o.startswith(("yerr:", "zerr:"))]
    unknown = set(wanted) - set(need_ct) - set(need_ts) - set(need_half) - set(need_raw)
    if unknown:
        raise InvalidInputError(f"unknown observables: {sorted(unknown)}")

    u_echo = echoed_unitary(model, x) if (need_ct or need_ts or need_raw) else None
    t = model.t_pulse

    if need_ct or need_raw:
        u_ct = u_echo if model.qubit_count == 2 else project_spectator_zero(u_echo)
        if need_ct and model.qubit_count == 2:
            rec = run_heat_2q(u_ct, HeatConfig(reps=(heat_n,)))
            recon = reconstruct_2q(rec, heat_n, t, zx_sign=_zx_sign(model))
            for obs in need_ct:
                label = obs.removeprefix("ct:")
                out[obs] = recon.nu_tilde[label] * t
        elif need_ct:
            # 3-qubit reference models carry no conditional-rotation term, so
            # the control-target block is small-angle: condition on the
            # control with the same sequences used for the spectator pair
            # (block reordered to target-first).
            u_tc = _SWAP_2Q @ u_ct @ _SWAP_2Q
            rec = run_heat_spectator(u_tc, HeatConfig(reps=(heat_n,)))
            recon = reconstruct_spectator(rec, heat_n, t_half=t)
            for obs in need_ct:
                label = obs.removeprefix("ct:")
                if label not in _CT_FROM_SMALL:
                    raise InvalidInputError(
                        f"observable {obs} is not available from the small-angle "
                        "control-target reconstruction"
                    )
                out[obs] = recon.nu_tilde[_CT_FROM_SMALL[label]] * t
        if need_raw:
            if model.qubit_count != 2:
                raise InvalidInputError("raw yerr/zerr observables require a 2-qubit model")
            ns = sorted({int(o.split(":")[3]) for o in need_raw})
            rec = run_heat_2q(u_ct, HeatConfig(reps=tuple(ns)))
            for obs in need_raw:
                field_name, kind, prep, n = obs.split(":")
                cell = rec.cell(int(n), int(prep), kind)
                out[obs] = cell.y_err if field_name == "yerr" else cell.z_err
    if need_ts:
        if model.qubit_count != 3:
            raise InvalidInputError("ts observables require a 3-qubit model")
        u_ts = project_control_zero(u_echo)
        rec = run_heat_spectator(u_ts, HeatConfig(reps=(heat_n,)))
        recon = reconstruct_spectator(rec, heat_n, t_half=t)
        for obs in need_ts:
            label3 = obs.removeprefix("ts:")
            ts_label = _TS_FROM_3Q.get(label3, label3)
            out[obs] = recon.nu_tilde[ts_label] * t
    if need_half:
        angles = _conditional_half_angles(model, x)
        for obs in need_half:
            if obs not in angles:
                raise InvalidInputError(f"unknown half-pulse observable {obs}")
            out[obs] = angles[obs]
    return out


def default_observables(qubit_count: int) -> tuple[str, ...]:
    if qubit_count == 2:
        return tuple(f"ct:{p}" for p in CT_OBSERVABLES) + ("half:IX", "half:ZX")
    return (
        tuple(f"ct:{p}" for p in CT_OBSERVABLES_SMALL)
        + tuple(f"ts:{p}" for p in TS_OBSERVABLES_3Q)
        + ("half:IXI", "half:ZXI", "half:IXZ")
        + ("halfz:IZI", "halfz:ZZI", "halfz:IZZ")
    )


def synthesize_sweep(
    model: ThetaModel,
    x_grid: Sequence[float],
    observables: Sequence[str] | None = None,
    heat_n: int = 8,
) -> SweepDataset:
    """Simulate the tomography pipeline over a rotary-amplitude grid."""
    obs = tuple(observables) if observables is not None else default_observables(model.qubit_count)
    rows = []
    for x in x_grid:
        values = synthesize_observables(model, float(x), obs, heat_n=heat_n)
        for name in obs:
            rows.append(SweepRow(x=float(x), observable=name, value=values[name]))
    return SweepDataset(rows=tuple(rows))


# ---------------------------------------------------------------------------
# fitting

FreeMask = Mapping[str, tuple[bool, bool, bool]]


@dataclass(frozen=True)
class FitResult:
    model: ThetaModel
    residual: float
    covariance_proxy: np.ndarray
    converged: bool
    n_evaluations: int
    free_parameters: tuple[tuple[str, int], ...]


def fit_theta(
    data: SweepDataset,
    free_mask: FreeMask,
    init: ThetaModel,
    restarts: int = 8,
    seed: int = 0,
    heat_n: int = 8,
    objective_tol: float = 1e-10,
    max_iterations: int = 2000,
) -> FitResult:
    """Weighted least squares over the free theta parameters, multi-start simplex.

    ``free_mask`` maps label -> three booleans freeing (theta0, theta1,
    theta2).  Start 0 is the supplied ``init``; the remaining starts jitter
    the free parameters deterministically from ``seed``.  Non-convergence
    within the budget returns the best point with ``converged=False``.
    """
    free: list[tuple[str, int]] = []
    for label, flags in sorted(free_mask.items()):
        for k, flag in enumerate(flags):
            if flag:
                free.append((label, k))
    if not free:
        raise InvalidInputError("free_mask frees no parameters")
    if len(data.rows) < len(free):
        raise FitDegenerateError(
            f"{len(data.rows)} data rows cannot constrain {len(free)} parameters",
            data=data,
        )
    by_x: dict[float, list[SweepRow]] = {}
    for row in data.rows:
        by_x.setdefault(row.x, []).append(row)

    def apply_params(params: np.ndarray) -> ThetaModel:
        model = init
        for (label, k), value in zip(free, params):
            model = model.with_param(label, k, float(value))
        return model

    evaluations = 0

    def objective(params: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        model = apply_params(params)
        total = 0.0
        for x, rows in by_x.items():
            values = synthesize_observables(
                model, x, {r.observable for r in rows}, heat_n=heat_n
            )
            for r in rows:
                total += r.weight * (values[r.observable] - r.value) ** 2
        return total

    def residual_vector(params: np.ndarray) -> np.ndarray:
        model = apply_params(params)
        out = []
        for x, rows in by_x.items():
            values = synthesize_observables(
                model, x, {r.observable for r in rows}, heat_n=heat_n
            )
            out.extend(
                math.sqrt(r.weight) * (values[r.observable] - r.value) for r in rows
            )
        return np.array(out)

    x0 = np.array([init.get_param(label, k) for label, k in free])
    scale = np.maximum(np.abs(x0), 1e-2)
    rng = np.random.default_rng(seed)
    best_x, best_fun, best_success = None, math.inf, False
    for start in range(restarts):
        guess = x0 if start == 0 else x0 + scale * rng.normal(0.0, 0.3, size=len(free))
        sol = minimize(
            objective,
            np.asarray(guess, dtype=float),
            method="Nelder-Mead",
            options={
                "fatol": objective_tol,
                "xatol": 1e-10,
                "maxiter": max_iterations,
                "maxfev": max_iterations,
                "adaptive": len(free) > 4,
            },
        )
        # Gauss-Newton polish of the simplex point: the objective is smooth,
        # so a few damped least-squares steps finish what the simplex started.
        from scipy.optimize import least_squares

        polish = least_squares(
            residual_vector, sol.x, method="lm", xtol=1e-15, ftol=1e-15, max_nfev=200
        )
        evaluations += polish.nfev
        candidates = [(float(sol.fun), sol.x, bool(sol.success))]
        candidates.append(
            (float(2.0 * polish.cost), polish.x, bool(polish.status > 0))
        )
        for fun, xs, success in candidates:
            if fun < best_fun:
                best_x, best_fun, best_success = xs, fun, success
        if best_fun < objective_tol:
            break
    converged = bool(best_fun < max(objective_tol, 1e-8) or best_success)
    final_model = apply_params(best_x)

    # Gauss-Newton covariance proxy from a finite-difference Jacobian of the
    # stacked weighted residuals at the solution.
    jac = _residual_jacobian(data, free, init, best_x, heat_n)
    jtj = jac.T @ jac
    dof = max(1, len(data.rows) - len(free))
    sigma2 = best_fun / dof
    try:
        cov = sigma2 * np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov = np.full((len(free), len(free)), np.nan)
    return FitResult(
        model=final_model,
        residual=float(best_fun),
        covariance_proxy=cov,
        converged=converged,
        n_evaluations=evaluations,
        free_parameters=tuple(free),
    )


def _residual_jacobian(
    data: SweepDataset,
    free: Sequence[tuple[str, int]],
    init: ThetaModel,
    params: np.ndarray,
    heat_n: int,
    rel_step: float = 1e-6,
) -> np.ndarray:
    def residuals(p: np.ndarray) -> np.ndarray:
        model = init
        for (label, k), value in zip(free, p):
            model = model.with_param(label, k, float(value))
        out = []
        cache: dict[float, dict[str, float]] = {}
        for row in data.rows:
            if row.x not in cache:
                cache[row.x] = synthesize_observables(
                    model, row.x,
                    {r.observable for r in data.rows if r.x == row.x},
                    heat_n=heat_n,
                )
            out.append(math.sqrt(row.weight) * (cache[row.x][row.observable] - row.value))
        return np.array(out)

    base = residuals(params)
    jac = np.zeros((len(base), len(params)))
    for j in range(len(params)):
        h = rel_step * max(abs(params[j]), 1e-3)
        shifted = params.copy()
        shifted[j] += h
        jac[:, j] = (residuals(shifted) - base) / h
    return jac


def observable_jacobian(
    model: ThetaModel,
    x_grid: Sequence[float],
    parameters: Sequence[tuple[str, int]],
    observables: Sequence[str] | None = None,
    heat_n: int = 8,
    rel_step: float = 1e-6,
) -> np.ndarray:
    """Finite-difference sensitivity of the observable stack to theta parameters.

    Rows run over (x, observable) pairs, columns over ``parameters``; full
    column rank means the parameters are identifiable from the sweep.
    """
    obs = tuple(observables) if observables is not None else default_observables(model.qubit_count)

    def stack(m: ThetaModel) -> np.ndarray:
        vals = []
        for x in x_grid:
            values = synthesize_observables(m, float(x), obs, heat_n=heat_n)
            vals.extend(values[o] for o in obs)
        return np.array(vals)

    base = stack(model)
    jac = np.zeros((len(base), len(parameters)))
    for j, (label, k) in enumerate(parameters):
        v0 = model.get_param(label, k)
        h = rel_step * max(abs(v0), 1e-3)
        jac[:, j] = (stack(model.with_param(label, k, v0 + h)) - base) / h
    return jac


# ---------------------------------------------------------------------------
# reference parameter tables

TABLE_CT_2Q = ThetaModel(
    qubit_count=2,
    terms={
        "IX": ThetaTerm(theta0=-4.63e-1, theta1=1.00, odd=True),
        "IY": ThetaTerm(theta0=7.98e-3, odd=True),
        "IZ": ThetaTerm(theta0=2.55e-2, theta1=-1.23e-3, theta2=-2.69e-3),
        "ZZ": ThetaTerm(theta0=-1.59e-2, theta2=2.11e-3),
        "ZY": ThetaTerm(theta0=7.05e-3, odd=True),
        "ZX": ThetaTerm(theta0=math.pi / 8.0, odd=True),
    },
)
"""Two-qubit reference model (control-target pair, spectator dropped)."""

TABLE_CTS_3Q = ThetaModel(
    qubit_count=3,
    terms={
        "IXI": ThetaTerm(theta0=-2.97e-1, theta1=1.00, odd=True),
        "IZI": ThetaTerm(theta0=4.88e-2, theta1=-1.23e-2, theta2=-5.84e-3),
        "ZZI": ThetaTerm(theta0=-1.59e-2, theta2=2.11e-3),
        "IZZ": ThetaTerm(theta0=-2.66e-2, theta2=-3.02e-3),
        "IXZ": ThetaTerm(theta0=7.21e-2, theta1=-1.85e-2, odd=True),
    },
)
"""Three-qubit reference model (control-target-spectator, conditional
rotation zeroed as in the reference table)."""

TABLE_CT_2Q_BOLD_MASK: FreeMask = {
    "IX": (True, False, False),
    "IY": (True, False, False),
    "IZ": (True, True, True),
    "ZZ": (False, False, True),
    "ZY": (True, False, False),
}
"""Parameters that were fit (vs fixed) in the two-qubit reference table."""

TABLE_CTS_3Q_BOLD_MASK: FreeMask = {
    "IXI": (True, False, False),
    "IZI": (True, False, True),
    "ZZI": (False, False, True),
    "IZZ": (False, False, True),
    "IXZ": (True, True, False),
}
"""Parameters that were fit (vs fixed) in the three-qubit reference table."""
