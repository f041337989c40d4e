"""Request/response models for every service operation.

These double as the CLI config-file schemas: one JSON document per command,
validated strictly (unknown keys rejected), physical quantities carrying
their unit in the key name (khz, ns, us).  All requests embed
``schema_version`` for forward compatibility.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TermSpec(StrictModel):
    theta0: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    odd: Optional[bool] = None  # defaults to the target-letter parity rule


class ModelSpec(StrictModel):
    """Phenomenological half-angle model document."""

    mode: Literal["phenomenological"] = "phenomenological"
    qubit_count: int = 2
    t_pulse_ns: float = 206.22
    terms: dict[str, TermSpec] = Field(default_factory=dict)


class NoiseTimesSpec(StrictModel):
    """Per-qubit relaxation times, microseconds."""

    t1_us: list[float]
    t2_us: list[float]

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.t1_us) != len(self.t2_us):
            raise ValueError("t1_us and t2_us must have the same length")
        return self


class GridSpec(StrictModel):
    start: float
    stop: float
    num: int = Field(ge=2, le=100_000)


class BlockNoiseSpec(StrictModel):
    """Per-block error model for the heavy-output harness."""

    kind: Literal["none", "coherent_iy", "depolarizing", "damping"] = "none"
    epsilon: float = 0.0
    p: float = 0.0
    gamma_a: float = 0.0
    gamma_p: float = 0.0


# -- sweep-rotary ------------------------------------------------------------


class SweepRotaryRequest(StrictModel):
    schema_version: int = 1
    model: ModelSpec
    x_grid: GridSpec
    use_heat: bool = False
    heat_n: int = 8
    noise: Optional[NoiseTimesSpec] = None
    seed: int = 0


class SweepRotaryRow(StrictModel):
    x_amplitude: float
    nu_tilde_iy_khz: float
    nu_tilde_iz_khz: float
    nu_tilde_ix_khz: float
    nu_tilde_zy_khz: float
    nu_tilde_zz_khz: float
    nu_tilde_zx_khz: float
    epg_coherent: Optional[float] = None
    epg_coherence_limit: Optional[float] = None
    epg_total: Optional[float] = None


class RunMeta(StrictModel):
    tool_version: str
    config_sha256: str
    seed: int


class SweepRotaryResponse(StrictModel):
    meta: RunMeta
    rows: list[SweepRotaryRow]


# -- zeros -------------------------------------------------------------------


class ZerosRequest(StrictModel):
    schema_version: int = 1
    model: ModelSpec
    x_grid: GridSpec
    seed: int = 0


class ZeroRootRow(StrictModel):
    x: float
    kind: Literal["chi0", "chi1", "chi2"]
    chi0: float
    chi1_n: int
    chi1: float
    chi2_n: int
    chi2: float


class ZerosResponse(StrictModel):
    meta: RunMeta
    identically_zero: bool
    roots: list[ZeroRootRow]


# -- heat ----------------------------------------------------------------------


class HeatRequest(StrictModel):
    schema_version: int = 1
    model: ModelSpec
    x_amplitude: float = 0.0
    reps: list[int] = Field(default_factory=lambda: [2, 4, 8, 16])
    shots: Optional[int] = None
    seed: int = 0
    reconstruct_n: Optional[int] = None  # defaults to max(reps)


class HeatCellRow(StrictModel):
    kind: Literal["y", "z"]
    prep: int
    n: int
    y_err: float
    z_err: float
    shots: Optional[int] = None
    cell_seed: Optional[int] = None


class HeatResponse(StrictModel):
    meta: RunMeta
    cells: list[HeatCellRow]
    nu_tilde_khz: dict[str, float]
    axis0: list[float]
    axis1: list[float]


# -- purity RB -----------------------------------------------------------------


class PurityRbRequest(StrictModel):
    schema_version: int = 1
    n_qubits: int = Field(ge=1, le=2)
    channel: Literal["damping", "depolarizing"] = "damping"
    noise: Optional[NoiseTimesSpec] = None
    duration_ns: float = 412.44  # channel exposure per Clifford
    depolarizing_lambda: float = 0.99
    lengths: list[int] = Field(default_factory=lambda: list(range(1, 51)))
    n_sequences: int = 200
    shots: Optional[int] = None
    seed: int = 0


class PurityRbCurveRow(StrictModel):
    m: int
    mean_purity: float
    std_purity: float


class PurityRbResponse(StrictModel):
    meta: RunMeta
    curve: list[PurityRbCurveRow]
    u_hat: float
    a_offset: float
    b_scale: float
    residual: float
    u_ptm: float
    degenerate_flat: bool


# -- unitarity ----------------------------------------------------------------


class UnitarityRequest(StrictModel):
    schema_version: int = 1
    model: ModelSpec  # 3-qubit control-target-spectator model
    x_grid: GridSpec
    noise: Optional[NoiseTimesSpec] = None  # three qubits: control, target, spectator
    duration_ns: float = 412.44
    n_sequences: int = Field(default=100, ge=1, le=5000)
    seed: int = 0


class UnitarityRow(StrictModel):
    x_amplitude: float
    u_2q: float
    u_1q: float
    u_product: float
    u_full: float
    e_entanglement: float
    u_coherence_2q: float
    u_coherence_1q: float
    u_coherence_product: float
    entanglement_of_unitary: float


class UnitarityResponse(StrictModel):
    meta: RunMeta
    rows: list[UnitarityRow]


# -- fit -----------------------------------------------------------------------


class FreeMaskSpec(StrictModel):
    theta0: bool = False
    theta1: bool = False
    theta2: bool = False


class FitRequest(StrictModel):
    schema_version: int = 1
    init_model: ModelSpec
    free_mask: dict[str, FreeMaskSpec]
    data_csv: str  # sweep dataset in x,observable,value,weight form
    restarts: int = 8
    heat_n: int = 8
    max_iterations: int = 2000
    seed: int = 0


class FitResponse(StrictModel):
    meta: RunMeta
    model: ModelSpec
    residual: float
    converged: bool
    n_evaluations: int
    free_parameters: list[str]
    covariance_diag: list[float]


# -- synth (sweep-dataset generation, the fit command's dual) -------------------


class SynthRequest(StrictModel):
    schema_version: int = 1
    model: ModelSpec
    x_grid: GridSpec
    observables: Optional[list[str]] = None
    heat_n: int = 8
    seed: int = 0


class SynthResponse(StrictModel):
    meta: RunMeta
    data_csv: str


# -- spectator ------------------------------------------------------------------


class SpectatorSweepRequest(StrictModel):
    schema_version: int = 1
    xi_khz: Optional[float] = None  # give xi directly, or circuit parameters
    j_coupling_khz: Optional[float] = None
    delta1_khz: Optional[float] = None
    delta2_khz: Optional[float] = None
    detuning_khz: Optional[float] = None
    t_pulse_ns: float = 206.22
    omega_grid_khz: GridSpec = Field(
        default_factory=lambda: GridSpec(start=100.0, stop=20000.0, num=100)
    )
    extra_iz_khz: float = 0.0
    extra_zi_khz: float = 0.0
    seed: int = 0


class SpectatorSweepRow(StrictModel):
    omega_khz: float
    nu_yz_analytic_khz: float
    nu_zz_analytic_khz: float
    nu_yz_numeric_khz: float
    nu_zz_numeric_khz: float


class SpectatorSweepResponse(StrictModel):
    meta: RunMeta
    xi_khz: float
    rows: list[SpectatorSweepRow]


# -- qv ------------------------------------------------------------------------


class QvRequest(StrictModel):
    schema_version: int = 1
    width: int = Field(ge=2, le=5)
    n_circuits: int = Field(default=100, ge=1, le=10_000)
    noise: Optional[BlockNoiseSpec] = None
    shots: Optional[int] = None
    seed: int = 0


class QvResponse(StrictModel):
    meta: RunMeta
    width: int
    n_circuits: int
    mean_hop: float
    sigma: float
    threshold: float
    passed: bool
    per_circuit: list[float]


class VersionResponse(StrictModel):
    name: str
    version: str
