"""Deterministic artifact emission: CSV with provenance header, atomic writes.

CSV format: '.' decimal separator, ',' field separator, LF line endings, one
leading comment line carrying the tool version, the request hash, and the
seed.  Floats render with repr-shortest precision via %.17g so identical
inputs yield byte-identical files.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def provenance_line(tool_version: str, config_sha256: str, seed: int) -> str:
    return f"# crlab {tool_version} config_sha256={config_sha256} seed={seed}"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence],
    tool_version: str,
    config_sha256: str,
    seed: int,
) -> str:
    lines = [provenance_line(tool_version, config_sha256, seed), ",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: Path, payload) -> None:
    write_text_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
