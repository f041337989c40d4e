import math

import numpy as np
import pytest

from crlab.errors import FitDegenerateError, InvalidInputError
from crlab.fitmodel import (
    TABLE_CT_2Q,
    TABLE_CT_2Q_BOLD_MASK,
    TABLE_CTS_3Q,
    TABLE_CTS_3Q_BOLD_MASK,
    SweepDataset,
    SweepRow,
    ThetaModel,
    ThetaTerm,
    default_observables,
    echoed_unitary,
    fit_theta,
    label_is_drive_odd,
    observable_jacobian,
    synthesize_observables,
    synthesize_sweep,
    theta_unitary,
)
from crlab.pauli import decompose, is_unitary


def test_parity_rule_from_target_letter():
    assert label_is_drive_odd("ZXI") and label_is_drive_odd("IYZ") and label_is_drive_odd("IXI")
    assert not label_is_drive_odd("ZZI") and not label_is_drive_odd("IZZ")
    assert label_is_drive_odd("ZX") and not label_is_drive_odd("IZ")


def test_theta_model_validates_parity_and_slots():
    with pytest.raises(InvalidInputError):
        ThetaModel(qubit_count=2, terms={"ZX": ThetaTerm(theta0=0.1, odd=False)})
    with pytest.raises(InvalidInputError):
        ThetaModel(qubit_count=3, terms={"XXI": ThetaTerm(theta0=0.1, odd=True)})
    with pytest.raises(InvalidInputError):
        ThetaModel(qubit_count=3, terms={"IXX": ThetaTerm(theta0=0.1, odd=True)})
    with pytest.raises(InvalidInputError):
        ThetaModel(qubit_count=2, terms={"ZI": ThetaTerm(theta0=0.1)})


def test_reference_tables_fix_exact_values():
    assert TABLE_CT_2Q.terms["ZX"].theta0 == math.pi / 8.0
    assert TABLE_CT_2Q.t_pulse == pytest.approx(206.22e-9)
    assert TABLE_CTS_3Q.terms["IXZ"].theta1 == -1.85e-2


def test_theta_unitary_zero_model_identity():
    model = ThetaModel(qubit_count=2, terms={})
    assert np.allclose(theta_unitary(model, 0.3, +1), np.eye(4))


def test_theta_unitary_sign_parity():
    model = TABLE_CT_2Q
    negated_terms = {
        lbl: ThetaTerm(
            theta0=-t.theta0 if t.odd else t.theta0,
            theta1=-t.theta1 if t.odd else t.theta1,
            theta2=-t.theta2 if t.odd else t.theta2,
            odd=t.odd,
        )
        for lbl, t in model.terms.items()
    }
    negated = ThetaModel(qubit_count=2, terms=negated_terms, t_pulse=model.t_pulse)
    for x in (0.0, 0.7, -1.2):
        assert np.allclose(
            theta_unitary(model, x, -1), theta_unitary(negated, x, +1), atol=1e-12
        )


def test_theta_unitary_is_unitary():
    assert is_unitary(theta_unitary(TABLE_CT_2Q, 0.9, +1), atol=1e-10)
    assert is_unitary(theta_unitary(TABLE_CTS_3Q, -0.8, -1), atol=1e-10)


def test_pure_conditional_rotation_echo():
    model = ThetaModel(
        qubit_count=2, terms={"ZX": ThetaTerm(theta0=math.pi / 8.0, odd=True)}
    )
    dec = decompose(echoed_unitary(model, 0.0))
    assert abs(dec["II"] - 1.0 / math.sqrt(2.0)) < 1e-12
    assert abs(dec["ZX"] - 1j / math.sqrt(2.0)) < 1e-12


def test_half_angle_conversion_consistency():
    # generating rates of the echo match the -2 theta / t mapping for the
    # surviving Z-type terms of the reference model at x = 0
    from crlab.heat import project_control_zero
    from crlab.pauli import generating_hamiltonian

    model = TABLE_CTS_3Q
    u = echoed_unitary(model, 0.0)
    gen = generating_hamiltonian(u, model.t_pulse)
    nu_izi = 2.0 * gen["IZI"].real
    # the echo doubles the surviving terms over 2t: nu = -2 theta / t at
    # leading order, with second-order corrections from the big rotary term
    expected = -2.0 * model.terms["IZI"].theta0 / model.t_pulse
    assert abs(nu_izi - expected) < 0.1 * abs(expected)


def test_synthesize_zero_model():
    model = ThetaModel(
        qubit_count=2,
        terms={"ZX": ThetaTerm(theta0=math.pi / 8.0, odd=True)},
    )
    data = synthesize_sweep(model, [0.0, 0.5], observables=("ct:IY", "ct:IZ"))
    assert all(abs(r.value) < 1e-9 for r in data.rows)


def test_reference_sweep_shapes():
    data = synthesize_sweep(TABLE_CT_2Q, np.linspace(-1.5, 1.5, 13))
    by_obs = {}
    for row in data.rows:
        by_obs.setdefault(row.observable, []).append((row.x, row.value))
    # residual target-Y rate crosses zero inside the sweep
    iy = sorted(by_obs["ct:IY"])
    signs = {v > 0 for _, v in iy if abs(v) > 1e-9}
    assert signs == {True, False}
    # conditional-phase curve is quadratic-dominated: even component grows
    zz = dict(by_obs["ct:ZZ"])
    assert abs(zz[1.5] - zz[0.0]) > 1e-4
    # the half-pulse amplitude observable tracks theta linearly
    half_ix = dict(by_obs["half:IX"])
    assert abs(half_ix[1.5] - (-0.463 + 1.5)) < 1e-9


def test_three_qubit_sweep_ixz_linear():
    data = synthesize_sweep(TABLE_CTS_3Q, [-1.0, 0.0, 1.0], observables=("half:IXZ",))
    vals = {r.x: r.value for r in data.rows}
    slope = (vals[1.0] - vals[-1.0]) / 2.0
    assert abs(slope - (-1.85e-2)) < 1e-6
    assert abs(vals[0.0] - 7.21e-2) < 1e-6


def test_three_qubit_ts_observables_track_spectator_terms():
    data = synthesize_sweep(TABLE_CTS_3Q, [0.0, 1.0], observables=("ts:IZZ", "ts:IYZ"))
    vals = {(r.x, r.observable): r.value for r in data.rows}
    # IZZ-type rate present at x = 0 (static coupling survives the echo)
    assert abs(vals[(0.0, "ts:IZZ")]) > 1e-3


def test_sweep_csv_roundtrip():
    data = synthesize_sweep(TABLE_CT_2Q, [0.0, 0.4], observables=("ct:IY", "half:IX"))
    text = data.to_csv()
    back = SweepDataset.from_csv(text)
    assert back.rows == data.rows


def test_from_heat_csv_import():
    from crlab.cr_hamiltonian import CrCoefficients
    from crlab.echo import echo_unitary
    from crlab.heat import HeatConfig, run_heat_2q

    u = echo_unitary(
        CrCoefficients(nu_zx=math.pi / (4.0 * 206.22e-9)), 206.22e-9
    )
    rec = run_heat_2q(u, HeatConfig(reps=(4, 8)))
    data = SweepDataset.from_heat_csv(rec.to_csv(), x=0.25)
    ids = {r.observable for r in data.rows}
    assert "yerr:y:0:8" in ids and "zerr:z:1:4" in ids
    assert all(r.x == 0.25 for r in data.rows)


def test_forward_model_supports_raw_observables():
    vals = synthesize_observables(
        TABLE_CT_2Q, 0.2, ("yerr:y:0:8", "zerr:z:1:8"), heat_n=8
    )
    assert set(vals) == {"yerr:y:0:8", "zerr:z:1:8"}
    assert all(abs(v) <= 1.0 for v in vals.values())


def test_identifiability_jacobian_full_rank():
    params = [("IY", 0), ("IZ", 0)]
    jac = observable_jacobian(TABLE_CT_2Q, np.linspace(-1.5, 1.5, 7), params)
    svals = np.linalg.svd(jac, compute_uv=False)
    assert svals[-1] > 1e-3 * svals[0]
    assert np.linalg.matrix_rank(jac) == 2


def test_fit_rejects_empty_mask_and_underdetermined():
    data = SweepDataset(rows=(SweepRow(x=0.0, observable="ct:IY", value=0.0),))
    with pytest.raises(InvalidInputError):
        fit_theta(data, {}, TABLE_CT_2Q)
    with pytest.raises(FitDegenerateError):
        fit_theta(
            data,
            {"IY": (True, True, True)},
            TABLE_CT_2Q,
        )


def test_single_parameter_fit_matches_linear_regression():
    # half:IX depends linearly on theta0 of IX with unit slope, so the
    # least-squares answer is available in closed form
    model = TABLE_CT_2Q
    xs = [-1.0, 0.0, 1.0]
    data_rows = []
    rng = np.random.default_rng(3)
    offsets = rng.normal(0.0, 1e-3, size=3)
    for x, off in zip(xs, offsets):
        truth = synthesize_observables(model, x, ("half:IX",))["half:IX"]
        data_rows.append(SweepRow(x=x, observable="half:IX", value=truth + off))
    data = SweepDataset(rows=tuple(data_rows))
    res = fit_theta(data, {"IX": (True, False, False)}, model, restarts=1)
    # closed form: theta0* = theta0_true + mean(offsets)
    expected = model.terms["IX"].theta0 + float(np.mean(offsets))
    assert abs(res.model.terms["IX"].theta0 - expected) < 1e-8


def test_fit_recovers_reference_2q_parameters():
    data = synthesize_sweep(TABLE_CT_2Q, np.linspace(-1.5, 1.5, 11))
    init = TABLE_CT_2Q
    rng = np.random.default_rng(5)
    for label, flags in TABLE_CT_2Q_BOLD_MASK.items():
        for k, flag in enumerate(flags):
            if flag:
                v = TABLE_CT_2Q.get_param(label, k)
                init = init.with_param(label, k, 0.6 * v + 0.01 * float(rng.normal()))
    res = fit_theta(data, TABLE_CT_2Q_BOLD_MASK, init, restarts=2, seed=1)
    assert res.converged
    for label, k in res.free_parameters:
        got = res.model.get_param(label, k)
        want = TABLE_CT_2Q.get_param(label, k)
        assert abs(got - want) <= 0.05 * abs(want)


def test_fit_idempotence_at_converged_point():
    data = synthesize_sweep(TABLE_CT_2Q, np.linspace(-1.0, 1.0, 7))
    mask = {"IY": (True, False, False), "IZ": (True, False, False)}
    res = fit_theta(data, mask, TABLE_CT_2Q, restarts=1)
    res2 = fit_theta(data, mask, res.model, restarts=1)
    for label, k in res.free_parameters:
        assert abs(res2.model.get_param(label, k) - res.model.get_param(label, k)) < 1e-6


def test_model_json_roundtrip():
    doc = TABLE_CTS_3Q.to_json()
    back = ThetaModel.from_json(doc)
    assert back.qubit_count == 3
    assert back.terms == dict(TABLE_CTS_3Q.terms)
    assert back.t_pulse == pytest.approx(TABLE_CTS_3Q.t_pulse)


def test_default_observables_by_count():
    assert "ct:ZX" in default_observables(2)
    obs3 = default_observables(3)
    assert "ts:IYZ" in obs3 and "half:IXZ" in obs3 and "halfz:ZZI" in obs3


@pytest.mark.slow
def test_fit_recovers_reference_3q_parameters():
    data = synthesize_sweep(TABLE_CTS_3Q, np.linspace(-1.5, 1.5, 9))
    init = TABLE_CTS_3Q
    rng = np.random.default_rng(7)
    for label, flags in TABLE_CTS_3Q_BOLD_MASK.items():
        for k, flag in enumerate(flags):
            if flag:
                v = TABLE_CTS_3Q.get_param(label, k)
                init = init.with_param(label, k, 0.5 * v + 0.005 * float(rng.normal()))
    res = fit_theta(data, TABLE_CTS_3Q_BOLD_MASK, init, restarts=2, seed=2)
    assert res.converged
    for label, k in res.free_parameters:
        got = res.model.get_param(label, k)
        want = TABLE_CTS_3Q.get_param(label, k)
        assert abs(got - want) <= 0.05 * abs(want)
