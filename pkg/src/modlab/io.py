"""JSON/CSV serialization.

Matrix schema, used repo-wide:

    {"rows": n, "cols": m, "data": [[re, im], ...]}   # row-major

Floats are emitted by Python's shortest round-trip repr, so a matrix survives
a save/load cycle bit-exactly.  All file writes are atomic
(write-temp-then-rename), so interrupted runs never leave truncated output.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any, Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid input file, schema, or option combination (CLI exit code 2)."""


def matrix_to_json(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ConfigError(f"expected a 2-d array, got shape {M.shape}")
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.reshape(-1)],
    }


def matrix_from_json(obj: Any) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"not a matrix object: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise ConfigError(f"non-positive dimensions {rows}x{cols}")
    if len(data) != rows * cols:
        raise ConfigError(
            f"matrix data length {len(data)} does not match {rows}x{cols}"
        )
    flat = np.array([complex(re, im) for re, im in data])
    if not np.all(np.isfinite(flat)):
        raise ConfigError("matrix contains non-finite entries")
    return flat.reshape(rows, cols)


def algebra_to_json(dim: int, basis: Sequence[np.ndarray]) -> dict:
    return {"dim": int(dim), "basis": [matrix_to_json(b) for b in basis]}


def algebra_from_json(obj: Any) -> tuple[int, list[np.ndarray]]:
    try:
        dim = int(obj["dim"])
        basis = [matrix_from_json(b) for b in obj["basis"]]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"not an algebra object: {exc}") from exc
    for b in basis:
        if b.shape != (dim, dim):
            raise ConfigError(f"basis element shape {b.shape} != ({dim}, {dim})")
    return dim, basis


def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, no whitespace jitter."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: str, obj: Any) -> None:
    atomic_write_text(path, dump_json(obj))


def load_json(path: str) -> Any:
    if not os.path.exists(path):
        raise ConfigError(f"input file not found: {path}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def format_float(x: float) -> str:
    """Shortest round-trip decimal form; deterministic for a given double."""
    return repr(float(x))


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(x) for x in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
