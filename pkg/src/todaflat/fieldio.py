"""Field-file and config IO.

Field files are JSON objects {"N": int, "fields": {name: [[re, im], ...]}}
with each field stored row-major as N*N [re, im] pairs.  An optional "meta"
object carries plain JSON metadata (Lie type, form, conventions) so that
downstream subcommands can rebuild problems without a separate config.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A config or field file violates the documented schema.

    The message names the offending field path; the CLI maps this to exit
    code 2.
    """


def complex_field_to_pairs(f: np.ndarray) -> list:
    flat = np.asarray(f, dtype=complex).ravel()
    return [[float(v.real), float(v.imag)] for v in flat]


def pairs_to_complex_field(pairs, N: int, path: str) -> np.ndarray:
    if not isinstance(pairs, list) or len(pairs) != N * N:
        raise SchemaError(f"{path}: expected a list of {N * N} [re, im] pairs")
    out = np.empty(N * N, dtype=complex)
    for k, p in enumerate(pairs):
        if (not isinstance(p, list) or len(p) != 2
                or not all(isinstance(v, (int, float)) for v in p)):
            raise SchemaError(f"{path}[{k}]: expected an [re, im] number pair")
        out[k] = complex(p[0], p[1])
    return out.reshape(N, N)


def write_field_file(path, N: int, fields: dict, meta: dict | None = None) -> None:
    doc = {"N": int(N),
           "fields": {name: complex_field_to_pairs(f) for name, f in fields.items()}}
    if meta is not None:
        doc["meta"] = meta
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")


def read_field_file(path):
    """Return (N, fields: dict[str, complex (N, N) array], meta: dict)."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: unreadable field file ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")
    extra = set(doc) - {"N", "fields", "meta"}
    if extra:
        raise SchemaError(f"{path}: unknown top-level keys {sorted(extra)}")
    if "N" not in doc or not isinstance(doc["N"], int) or doc["N"] < 2:
        raise SchemaError(f"{path}.N: expected a positive integer grid size")
    if "fields" not in doc or not isinstance(doc["fields"], dict):
        raise SchemaError(f"{path}.fields: expected an object of named fields")
    N = doc["N"]
    fields = {name: pairs_to_complex_field(v, N, f"{path}.fields.{name}")
              for name, v in doc["fields"].items()}
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise SchemaError(f"{path}.meta: expected an object")
    return N, fields, meta


def validate_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise SchemaError(f"{where}: unknown keys {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")


def read_json(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: unreadable JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")
    return doc


def complex_pair(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, (int, float)) for v in value)):
        return complex(value[0], value[1])
    raise SchemaError(f"{where}: expected a number or [re, im] pair")
