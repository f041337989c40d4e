"""Command-line front door.

Thin client over the service layer: every subcommand loads one JSON config
document, validates it against the same pydantic schema the HTTP API uses,
runs the handler (in process by default, or against a running server via
--server), and writes deterministic CSV/JSON artifacts.

Exit codes: 0 success, 2 finished with convergence warnings, 1 errors.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .errors import CrLabError
from .emit import provenance_line, render_csv, write_json_atomic, write_text_atomic
from .service import handlers
from .service import schemas as s

_ENDPOINTS = {
    "/sweep-rotary": (s.SweepRotaryRequest, s.SweepRotaryResponse, handlers.handle_sweep_rotary),
    "/zeros": (s.ZerosRequest, s.ZerosResponse, handlers.handle_zeros),
    "/heat": (s.HeatRequest, s.HeatResponse, handlers.handle_heat),
    "/purity-rb": (s.PurityRbRequest, s.PurityRbResponse, handlers.handle_purity_rb),
    "/unitarity": (s.UnitarityRequest, s.UnitarityResponse, handlers.handle_unitarity),
    "/synth": (s.SynthRequest, s.SynthResponse, handlers.handle_synth),
    "/fit": (s.FitRequest, s.FitResponse, handlers.handle_fit),
    "/spectator": (s.SpectatorSweepRequest, s.SpectatorSweepResponse, handlers.handle_spectator),
    "/qv": (s.QvRequest, s.QvResponse, handlers.handle_qv),
}


def _dispatch(endpoint: str, request, server: str | None):
    req_cls, resp_cls, handler = _ENDPOINTS[endpoint]
    if server:
        url = server.rstrip("/") + endpoint
        response = httpx.post(url, json=request.model_dump(), timeout=3600.0)
        if response.status_code != 200:
            raise click.ClickException(
                f"server returned {response.status_code}: {response.text}"
            )
        return resp_cls.model_validate(response.json())
    try:
        return handler(request)
    except CrLabError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}") from exc


def _load_config(path: str, overrides: dict) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    for key, value in overrides.items():
        if value is not None:
            doc[key] = value
    return doc


def _common_options(fn):
    fn = click.option("--config", "config_path", required=True, type=click.Path(exists=True),
                      help="JSON config for this command.")(fn)
    fn = click.option("--out-dir", default=".", type=click.Path(file_okay=False),
                      help="Directory for emitted artifacts.")(fn)
    fn = click.option("--seed", type=int, default=None, help="Override the config seed.")(fn)
    fn = click.option("--server", default=None,
                      help="Run against a crlab server (base URL) instead of in process.")(fn)
    return fn


def _shots_options(fn):
    fn = click.option("--shots", type=int, default=None,
                      help="Sample with this many shots per expectation value.")(fn)
    fn = click.option("--exact", "exact", is_flag=True, default=False,
                      help="Force exact-expectation mode (clears any config shots).")(fn)
    return fn


def _apply_shots(doc: dict, shots: int | None, exact: bool) -> None:
    if exact:
        doc["shots"] = None
    elif shots is not None:
        doc["shots"] = shots


@click.group()
@click.version_option(__version__, prog_name="crlab")
def main() -> None:
    """Echoed cross-resonance gate laboratory."""


@main.command("sweep-rotary")
@_common_options
@_shots_options
def cmd_sweep_rotary(config_path, out_dir, seed, server, shots, exact) -> None:
    """Rotary-amplitude sweep of the echoed gate's error rates (and EPG)."""
    doc = _load_config(config_path, {"seed": seed})
    req = s.SweepRotaryRequest.model_validate(doc)
    resp = _dispatch("/sweep-rotary", req, server)
    header = [
        "x_amplitude_khz", "nu_tilde_iy_khz", "nu_tilde_iz_khz", "nu_tilde_ix_khz",
        "nu_tilde_zy_khz", "nu_tilde_zz_khz", "epg_total",
        "nu_tilde_zx_khz", "epg_coherent", "epg_coherence_limit",
    ]
    rows = [
        [r.x_amplitude, r.nu_tilde_iy_khz, r.nu_tilde_iz_khz, r.nu_tilde_ix_khz,
         r.nu_tilde_zy_khz, r.nu_tilde_zz_khz, r.epg_total,
         r.nu_tilde_zx_khz, r.epg_coherent, r.epg_coherence_limit]
        for r in resp.rows
    ]
    out = Path(out_dir) / "sweep_rotary.csv"
    write_text_atomic(out, render_csv(header, rows, resp.meta.tool_version,
                                      resp.meta.config_sha256, resp.meta.seed))
    click.echo(f"wrote {out}")


@main.command("zeros")
@_common_options
def cmd_zeros(config_path, out_dir, seed, server) -> None:
    """Locate and classify the zeros of the residual target-Y error rate."""
    doc = _load_config(config_path, {"seed": seed})
    req = s.ZerosRequest.model_validate(doc)
    resp = _dispatch("/zeros", req, server)
    out = Path(out_dir) / "zeros.json"
    write_json_atomic(out, resp.model_dump())
    click.echo(f"wrote {out} ({len(resp.roots)} roots"
               f"{', identically zero' if resp.identically_zero else ''})")


@main.command("heat")
@_common_options
@_shots_options
def cmd_heat(config_path, out_dir, seed, server, shots, exact) -> None:
    """Simulate error-amplification sequences and invert the record."""
    doc = _load_config(config_path, {"seed": seed})
    _apply_shots(doc, shots, exact)
    req = s.HeatRequest.model_validate(doc)
    resp = _dispatch("/heat", req, server)
    header = ["kind", "prep", "N", "y_err", "z_err", "shots", "seed"]
    rows = [[c.kind, c.prep, c.n, c.y_err, c.z_err, c.shots, c.cell_seed] for c in resp.cells]
    out_csv = Path(out_dir) / "heat_record.csv"
    write_text_atomic(out_csv, render_csv(header, rows, resp.meta.tool_version,
                                          resp.meta.config_sha256, resp.meta.seed))
    out_json = Path(out_dir) / "heat_reconstruction.json"
    write_json_atomic(out_json, resp.model_dump(exclude={"cells"}))
    click.echo(f"wrote {out_csv} and {out_json}")


@main.command("purity-rb")
@_common_options
@_shots_options
def cmd_purity_rb(config_path, out_dir, seed, server, shots, exact) -> None:
    """Purity randomized benchmarking decay and unitarity fit."""
    doc = _load_config(config_path, {"seed": seed})
    _apply_shots(doc, shots, exact)
    req = s.PurityRbRequest.model_validate(doc)
    resp = _dispatch("/purity-rb", req, server)
    header = ["m", "mean_purity", "std_purity"]
    rows = [[r.m, r.mean_purity, r.std_purity] for r in resp.curve]
    out_csv = Path(out_dir) / "purity_rb.csv"
    write_text_atomic(out_csv, render_csv(header, rows, resp.meta.tool_version,
                                          resp.meta.config_sha256, resp.meta.seed))
    out_json = Path(out_dir) / "purity_rb.json"
    write_json_atomic(out_json, resp.model_dump(exclude={"curve"}))
    click.echo(f"wrote {out_csv} and {out_json} (u_hat={resp.u_hat:.6f}, u_ptm={resp.u_ptm:.6f})")


@main.command("unitarity")
@_common_options
def cmd_unitarity(config_path, out_dir, seed, server) -> None:
    """Subsystem unitarities, product unitarity, and entanglement curves."""
    doc = _load_config(config_path, {"seed": seed})
    req = s.UnitarityRequest.model_validate(doc)
    resp = _dispatch("/unitarity", req, server)
    header = [
        "x_amplitude", "u_2q", "u_1q", "u_product", "u_full", "e_entanglement",
        "u_coherence_2q", "u_coherence_1q", "u_coherence_product",
        "entanglement_of_unitary",
    ]
    rows = [
        [r.x_amplitude, r.u_2q, r.u_1q, r.u_product, r.u_full, r.e_entanglement,
         r.u_coherence_2q, r.u_coherence_1q, r.u_coherence_product,
         r.entanglement_of_unitary]
        for r in resp.rows
    ]
    out_csv = Path(out_dir) / "unitarity.csv"
    write_text_atomic(out_csv, render_csv(header, rows, resp.meta.tool_version,
                                          resp.meta.config_sha256, resp.meta.seed))
    out_json = Path(out_dir) / "unitarity.json"
    write_json_atomic(out_json, resp.model_dump())
    click.echo(f"wrote {out_csv} and {out_json}")


@main.command("synth")
@_common_options
def cmd_synth(config_path, out_dir, seed, server) -> None:
    """Synthesize a tomography sweep dataset from a half-angle model."""
    doc = _load_config(config_path, {"seed": seed})
    req = s.SynthRequest.model_validate(doc)
    resp = _dispatch("/synth", req, server)
    out = Path(out_dir) / "sweep_dataset.csv"
    text = provenance_line(resp.meta.tool_version, resp.meta.config_sha256,
                           resp.meta.seed) + "\n" + resp.data_csv
    write_text_atomic(out, text)
    click.echo(f"wrote {out}")


@main.command("fit")
@_common_options
@click.option("--data", "data_path", type=click.Path(exists=True), default=None,
              help="Sweep dataset CSV; overrides the config's inline data.")
def cmd_fit(config_path, out_dir, seed, server, data_path) -> None:
    """Fit half-angle model parameters to a sweep dataset."""
    doc = _load_config(config_path, {"seed": seed})
    if data_path is not None:
        doc["data_csv"] = Path(data_path).read_text()
    req = s.FitRequest.model_validate(doc)
    resp = _dispatch("/fit", req, server)
    out = Path(out_dir) / "fit_result.json"
    write_json_atomic(out, resp.model_dump())
    out_model = Path(out_dir) / "fit_model.json"
    write_json_atomic(out_model, resp.model.model_dump())
    click.echo(f"wrote {out} and {out_model} (residual={resp.residual:.3e}, "
               f"converged={resp.converged})")
    if not resp.converged:
        sys.exit(2)


@main.command("spectator")
@_common_options
def cmd_spectator(config_path, out_dir, seed, server) -> None:
    """Target-spectator entangling rates vs rotary amplitude (analytic + numeric)."""
    doc = _load_config(config_path, {"seed": seed})
    req = s.SpectatorSweepRequest.model_validate(doc)
    resp = _dispatch("/spectator", req, server)
    header = [
        "omega_khz", "nu_yz_analytic_khz", "nu_zz_analytic_khz",
        "nu_yz_numeric_khz", "nu_zz_numeric_khz",
    ]
    rows = [
        [r.omega_khz, r.nu_yz_analytic_khz, r.nu_zz_analytic_khz,
         r.nu_yz_numeric_khz, r.nu_zz_numeric_khz]
        for r in resp.rows
    ]
    out = Path(out_dir) / "spectator_sweep.csv"
    write_text_atomic(out, render_csv(header, rows, resp.meta.tool_version,
                                      resp.meta.config_sha256, resp.meta.seed))
    click.echo(f"wrote {out} (xi = {resp.xi_khz:.3f} kHz)")


@main.command("qv")
@click.option("--width", type=int, default=None, help="Circuit width (2-5).")
@click.option("--circuits", "n_circuits", type=int, default=None, help="Ensemble size.")
@click.option("--noise", "noise_path", type=click.Path(exists=True), default=None,
              help="JSON block-noise model file.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Full JSON config (flags override its fields).")
@click.option("--out-dir", default=".", type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=None)
@click.option("--server", default=None)
@_shots_options
def cmd_qv(width, n_circuits, noise_path, config_path, out_dir, seed, server, shots, exact) -> None:
    """Heavy-output probability of square model circuits under a noise model."""
    doc = {} if config_path is None else _load_config(config_path, {})
    if width is not None:
        doc["width"] = width
    if n_circuits is not None:
        doc["n_circuits"] = n_circuits
    if seed is not None:
        doc["seed"] = seed
    if noise_path is not None:
        with open(noise_path) as fh:
            doc["noise"] = json.load(fh)
    _apply_shots(doc, shots, exact)
    if "width" not in doc:
        raise click.UsageError("--width (or a config with width) is required")
    req = s.QvRequest.model_validate(doc)
    resp = _dispatch("/qv", req, server)
    out_json = Path(out_dir) / "qv_result.json"
    write_json_atomic(out_json, resp.model_dump(exclude={"per_circuit"}))
    header = ["circuit_index", "hop"]
    rows = [[i, h] for i, h in enumerate(resp.per_circuit)]
    out_csv = Path(out_dir) / "qv_per_circuit.csv"
    write_text_atomic(out_csv, render_csv(header, rows, resp.meta.tool_version,
                                          resp.meta.config_sha256, resp.meta.seed))
    click.echo(
        f"wrote {out_json} and {out_csv} (mean HOP {resp.mean_hop:.4f} "
        f"+- {resp.sigma:.4f}, threshold {resp.threshold:.4f}, passed={resp.passed})"
    )


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def cmd_serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
