"""Pure request -> response handlers behind the HTTP routes and the CLI.

Each handler is deterministic in (request contents, embedded seed); the
response metadata carries the tool version and a sha256 of the canonical
request JSON so emitted artifacts can be traced back to their inputs.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .. import __version__, channels, echo, fitmodel, heat, qv
from ..cr_hamiltonian import CoefficientModel, TermPolynomial
from ..errors import InvalidInputError
from ..units import rad_s_to_khz
from . import schemas as s


def config_hash(request) -> str:
    payload = json.dumps(request.model_dump(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _meta(request) -> s.RunMeta:
    return s.RunMeta(
        tool_version=__version__,
        config_sha256=config_hash(request),
        seed=getattr(request, "seed", 0),
    )


def _grid(spec: s.GridSpec) -> np.ndarray:
    return np.linspace(spec.start, spec.stop, spec.num)


def coefficient_model_from_spec(spec: s.ModelSpec) -> CoefficientModel:
    if spec.qubit_count != 2:
        raise InvalidInputError("this command needs a 2-qubit (control-target) model")
    terms = {}
    for label, term in spec.terms.items():
        odd = term.odd
        if odd is None:
            odd = label in ("IX", "IY", "ZX", "ZY")
        terms[label] = TermPolynomial(
            theta0=term.theta0, theta1=term.theta1, theta2=term.theta2, odd=odd
        )
    return CoefficientModel(
        mode="phenomenological", t_pulse=spec.t_pulse_ns * 1e-9, terms=terms
    )


def theta_model_from_spec(spec: s.ModelSpec) -> fitmodel.ThetaModel:
    terms = {}
    for label, term in spec.terms.items():
        odd = term.odd
        if odd is None:
            odd = fitmodel.label_is_drive_odd(label)
        terms[label] = fitmodel.ThetaTerm(
            theta0=term.theta0, theta1=term.theta1, theta2=term.theta2, odd=odd
        )
    return fitmodel.ThetaModel(
        qubit_count=spec.qubit_count, terms=terms, t_pulse=spec.t_pulse_ns * 1e-9
    )


def theta_model_to_spec(model: fitmodel.ThetaModel) -> s.ModelSpec:
    return s.ModelSpec(
        qubit_count=model.qubit_count,
        t_pulse_ns=model.t_pulse * 1e9,
        terms={
            label: s.TermSpec(
                theta0=t.theta0, theta1=t.theta1, theta2=t.theta2, odd=t.odd
            )
            for label, t in sorted(model.terms.items())
        },
    )


def _noise_params(spec: s.NoiseTimesSpec | None) -> channels.NoiseParams | None:
    if spec is None:
        return None
    return channels.NoiseParams.from_times(
        [t * 1e-6 for t in spec.t1_us], [t * 1e-6 for t in spec.t2_us]
    )


# ---------------------------------------------------------------------------


def handle_sweep_rotary(req: s.SweepRotaryRequest) -> s.SweepRotaryResponse:
    model = coefficient_model_from_spec(req.model)
    noise = _noise_params(req.noise)
    reconstructor = None
    if req.use_heat:
        zx0 = model.terms.get("ZX", TermPolynomial()).theta0
        zx_sign = -1 if zx0 > 0 else +1

        def reconstructor(u, t):
            return heat.nu_tilde_from_record(u, t, n=req.heat_n, zx_sign=zx_sign)

    points = echo.sweep_rotary(
        model, _grid(req.x_grid), noise=noise, reconstructor=reconstructor
    )
    rows = []
    for p in points:
        rows.append(
            s.SweepRotaryRow(
                x_amplitude=p.x,
                nu_tilde_iy_khz=rad_s_to_khz(p.nu_tilde.get("IY", 0.0)),
                nu_tilde_iz_khz=rad_s_to_khz(p.nu_tilde.get("IZ", 0.0)),
                nu_tilde_ix_khz=rad_s_to_khz(p.nu_tilde.get("IX", 0.0)),
                nu_tilde_zy_khz=rad_s_to_khz(p.nu_tilde.get("ZY", 0.0)),
                nu_tilde_zz_khz=rad_s_to_khz(p.nu_tilde.get("ZZ", 0.0)),
                nu_tilde_zx_khz=rad_s_to_khz(p.nu_tilde.get("ZX", 0.0)),
                epg_coherent=None if p.epg is None else p.epg.coherent_epg,
                epg_coherence_limit=None if p.epg is None else p.epg.coherence_limit,
                epg_total=None if p.epg is None else p.epg.total,
            )
        )
    return s.SweepRotaryResponse(meta=_meta(req), rows=rows)


def handle_zeros(req: s.ZerosRequest) -> s.ZerosResponse:
    model = coefficient_model_from_spec(req.model)
    report = echo.find_iy_zeros(
        model,
        (req.x_grid.start, req.x_grid.stop),
        model.t_pulse,
        grid_points=req.x_grid.num,
    )
    return s.ZerosResponse(
        meta=_meta(req),
        identically_zero=report.identically_zero,
        roots=[
            s.ZeroRootRow(
                x=r.x, kind=r.kind, chi0=r.chi0, chi1_n=r.chi1_n, chi1=r.chi1,
                chi2_n=r.chi2_n, chi2=r.chi2,
            )
            for r in report.roots
        ],
    )


def handle_heat(req: s.HeatRequest) -> s.HeatResponse:
    model = coefficient_model_from_spec(req.model)
    coeffs = model.coefficients(req.x_amplitude)
    u = echo.echo_unitary(coeffs, model.t_pulse)
    cfg = heat.HeatConfig(reps=tuple(req.reps), shots=req.shots, seed=req.seed)
    record = heat.run_heat_2q(u, cfg)
    n_rec = req.reconstruct_n or max(req.reps)
    zx0 = model.terms.get("ZX", TermPolynomial()).theta0
    recon = heat.reconstruct_2q(
        record, n_rec, model.t_pulse, zx_sign=-1 if zx0 > 0 else +1
    )
    cells = [
        s.HeatCellRow(
            kind=kind, prep=prep, n=n, y_err=cell.y_err, z_err=cell.z_err,
            shots=cell.shots, cell_seed=cell.seed,
        )
        for n, prep, kind, cell in heat.iter_cells(record)
    ]
    return s.HeatResponse(
        meta=_meta(req),
        cells=cells,
        nu_tilde_khz={k: rad_s_to_khz(v) for k, v in sorted(recon.nu_tilde.items())},
        axis0=[*recon.axis0.axis],
        axis1=[*recon.axis1.axis],
    )


def handle_purity_rb(req: s.PurityRbRequest) -> s.PurityRbResponse:
    duration = req.duration_ns * 1e-9
    if req.channel == "damping":
        noise = _noise_params(req.noise)
        if noise is None or len(noise.qubits) != req.n_qubits:
            raise InvalidInputError("damping channel needs noise times for each qubit")
        noise_ptm = noise.damping_ptm(duration)
    else:
        noise_ptm = channels.ptm_depolarizing(req.depolarizing_lambda, req.n_qubits)
    fit = channels.purity_rb(
        noise_ptm,
        n_qubits=req.n_qubits,
        lengths=req.lengths,
        n_sequences=req.n_sequences,
        seed=req.seed,
        shots=req.shots,
    )
    return s.PurityRbResponse(
        meta=_meta(req),
        curve=[
            s.PurityRbCurveRow(m=m, mean_purity=p, std_purity=sd)
            for m, p, sd in zip(fit.lengths, fit.mean_purity, fit.std_purity)
        ],
        u_hat=fit.u_hat,
        a_offset=fit.a_offset,
        b_scale=fit.b_scale,
        residual=fit.residual,
        u_ptm=channels.unitarity_ptm(noise_ptm),
        degenerate_flat=fit.degenerate_flat,
    )


def _ideal_entangler(model: fitmodel.ThetaModel) -> np.ndarray:
    zx_label = "ZX" + "I" * (model.qubit_count - 2)
    term = model.terms.get(zx_label)
    if term is None:
        return np.eye(2**model.qubit_count, dtype=complex)
    ideal = fitmodel.ThetaModel(
        qubit_count=model.qubit_count,
        terms={zx_label: term},
        t_pulse=model.t_pulse,
    )
    return fitmodel.echoed_unitary(ideal, 0.0)


def handle_unitarity(req: s.UnitarityRequest) -> s.UnitarityResponse:
    model = theta_model_from_spec(req.model)
    if model.qubit_count != 3:
        raise InvalidInputError("unitarity analysis needs a 3-qubit model")
    duration = req.duration_ns * 1e-9
    noise = _noise_params(req.noise)
    if noise is not None and len(noise.qubits) != 3:
        raise InvalidInputError("unitarity analysis needs noise times for 3 qubits")
    gammas = noise.gammas(duration) if noise is not None else [(0.0, 0.0)] * 3
    gammas_a = tuple(g[0] for g in gammas)
    r_damp = noise.damping_ptm(duration) if noise is not None else np.eye(64)
    u_coh_2q = channels.unitarity_independent(gammas[:2])
    u_coh_1q = channels.unitarity_independent(gammas[2:])
    u_coh_product = channels.product_unitarity(u_coh_2q, u_coh_1q, gammas_a=gammas_a)
    ideal = _ideal_entangler(model)

    rows = []
    for x in _grid(req.x_grid):
        u3 = fitmodel.echoed_unitary(model, float(x))
        u_err = ideal.conj().T @ u3
        r_full = r_damp @ channels.ptm_from_unitary(u_err)
        u_full = channels.unitarity_ptm(r_full)
        r_ct = channels.marginal_ptm(r_full, dims=(4, 2), keep=0)
        r_s = channels.marginal_ptm(r_full, dims=(4, 2), keep=1)
        rb_ct = channels.purity_rb(
            r_ct, n_qubits=2, lengths=range(1, 26), n_sequences=req.n_sequences,
            seed=req.seed,
        )
        rb_s = channels.purity_rb(
            r_s, n_qubits=1, lengths=range(1, 26), n_sequences=req.n_sequences,
            seed=req.seed + 1,
        )
        u_product = channels.product_unitarity(rb_ct.u_hat, rb_s.u_hat, gammas_a=gammas_a)
        u_ts = heat.project_control_zero(u3)
        rec = heat.run_heat_spectator(u_ts, heat.HeatConfig(reps=(8,)))
        recon = heat.reconstruct_spectator(rec, 8, t_half=model.t_pulse)
        ent = channels.entanglement_from_heat(
            recon.nu_tilde["YZ"], recon.nu_tilde["ZZ"], 2.0 * model.t_pulse
        )
        rows.append(
            s.UnitarityRow(
                x_amplitude=float(x),
                u_2q=rb_ct.u_hat,
                u_1q=rb_s.u_hat,
                u_product=u_product,
                u_full=u_full,
                e_entanglement=u_full - u_product,
                u_coherence_2q=u_coh_2q,
                u_coherence_1q=u_coh_1q,
                u_coherence_product=u_coh_product,
                entanglement_of_unitary=ent,
            )
        )
    return s.UnitarityResponse(meta=_meta(req), rows=rows)


def handle_synth(req: s.SynthRequest) -> s.SynthResponse:
    model = theta_model_from_spec(req.model)
    data = fitmodel.synthesize_sweep(
        model,
        _grid(req.x_grid),
        observables=tuple(req.observables) if req.observables else None,
        heat_n=req.heat_n,
    )
    return s.SynthResponse(meta=_meta(req), data_csv=data.to_csv())


def handle_fit(req: s.FitRequest) -> s.FitResponse:
    data = fitmodel.SweepDataset.from_csv(req.data_csv)
    init = theta_model_from_spec(req.init_model)
    mask = {
        label: (flags.theta0, flags.theta1, flags.theta2)
        for label, flags in req.free_mask.items()
    }
    result = fitmodel.fit_theta(
        data,
        mask,
        init,
        restarts=req.restarts,
        seed=req.seed,
        heat_n=req.heat_n,
        max_iterations=req.max_iterations,
    )
    return s.FitResponse(
        meta=_meta(req),
        model=theta_model_to_spec(result.model),
        residual=result.residual,
        converged=result.converged,
        n_evaluations=result.n_evaluations,
        free_parameters=[f"{label}:theta{k}" for label, k in result.free_parameters],
        covariance_diag=[float(v) for v in np.diag(result.covariance_proxy)],
    )


def handle_spectator(req: s.SpectatorSweepRequest) -> s.SpectatorSweepResponse:
    from .. import spectator
    from ..units import khz_to_rad_s

    if req.xi_khz is not None:
        xi = khz_to_rad_s(req.xi_khz)
    else:
        missing = [
            name
            for name in ("j_coupling_khz", "delta1_khz", "delta2_khz", "detuning_khz")
            if getattr(req, name) is None
        ]
        if missing:
            raise InvalidInputError(
                f"give xi_khz or the circuit parameters (missing {missing})"
            )
        xi = spectator.static_zz(
            khz_to_rad_s(req.j_coupling_khz),
            khz_to_rad_s(req.delta1_khz),
            khz_to_rad_s(req.delta2_khz),
            khz_to_rad_s(req.detuning_khz),
        )
    t = req.t_pulse_ns * 1e-9
    rows = []
    for omega_khz in _grid(req.omega_grid_khz):
        omega = khz_to_rad_s(float(omega_khz))
        yz_a, zz_a = spectator.rotary_suppression(xi, omega, t)
        dec = spectator.spectator_numeric(
            xi, omega, t,
            extra_iz=khz_to_rad_s(req.extra_iz_khz),
            extra_zi=khz_to_rad_s(req.extra_zi_khz),
        )
        rows.append(
            s.SpectatorSweepRow(
                omega_khz=float(omega_khz),
                nu_yz_analytic_khz=rad_s_to_khz(yz_a),
                nu_zz_analytic_khz=rad_s_to_khz(zz_a),
                nu_yz_numeric_khz=rad_s_to_khz(dec["YZ"].real),
                nu_zz_numeric_khz=rad_s_to_khz(dec["ZZ"].real),
            )
        )
    return s.SpectatorSweepResponse(meta=_meta(req), xi_khz=rad_s_to_khz(xi), rows=rows)


def handle_qv(req: s.QvRequest) -> s.QvResponse:
    noise_spec = None if req.noise is None else req.noise.model_dump()
    noise = qv.noise_from_spec(noise_spec)
    circuits = qv.generate_ensemble(req.width, req.n_circuits, req.seed)
    result = qv.hop_estimate(circuits, noise=noise, shots=req.shots, seed=req.seed)
    return s.QvResponse(
        meta=_meta(req),
        width=result.width,
        n_circuits=result.n_circuits,
        mean_hop=result.mean_hop,
        sigma=result.sigma,
        threshold=result.threshold,
        passed=result.passed,
        per_circuit=list(result.per_circuit),
    )
