"""CSV / JSON table output with a metadata header."""

from __future__ import annotations

import io
import json
import math
from typing import Iterable, Sequence

COLUMNS = {
    "thermal": ("T", "beta", "N", "j_s", "j_p", "gamma_bits"),
    "tfim": ("N", "w", "mu", "gamma_bits", "ground_energy", "residual", "solver_iterations"),
    "planar": (
        "L", "p_x", "p_z", "n_samples", "P_e", "se_P_e", "P_m", "se_P_m",
        "pi_e", "pi_m", "gamma_lb", "se_gamma_lb", "decoder", "seed",
    ),
    "oracle": ("L", "p_x", "p_z", "gamma_exact", "gamma_bound_ml", "gamma_bound_matching", "gamma_bound_ml_confusion"),
    "verify": ("check", "status", "detail"),
}


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def render_csv(metadata: dict, columns: Sequence[str], rows: Iterable[dict]) -> str:
    out = io.StringIO()
    for key, value in metadata.items():
        out.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(format_value(row[c]) for c in columns) + "\n")
    return out.getvalue()


def render_json(metadata: dict, columns: Sequence[str], rows: Iterable[dict]) -> str:
    payload = {
        "metadata": metadata,
        "columns": list(columns),
        "rows": [{c: row[c] for c in columns} for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def render(fmt: str, metadata: dict, columns: Sequence[str], rows: Iterable[dict]) -> str:
    if fmt == "csv":
        return render_csv(metadata, columns, rows)
    if fmt == "json":
        return render_json(metadata, columns, rows)
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(text: str) -> tuple[dict, list[str], list[dict]]:
    """Parse a table written by :func:`render_csv` (values left as strings)."""
    metadata, lines = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            metadata[key] = json.loads(value)
        elif line:
            lines.append(line)
    columns = lines[0].split(",")
    rows = [dict(zip(columns, line.split(","))) for line in lines[1:]]
    return metadata, columns, rows
