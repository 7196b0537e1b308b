"""JSON file formats for ensembles, Gram matrices and deformation reports.

Complex numbers are written as ``[re, im]`` pairs. An ensemble file is::

    {"dim": d, "probs": [p1, ...], "states": [[[re, im], ...], ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .deform import DeformationReport
from .ensemble import Ensemble
from .errors import InvalidEnsemble, InvalidInput

PARSE_TOL = 1e-8


def _complex(x, where: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(float(x), 0.0)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(float(x[0]), float(x[1]))
    raise InvalidInput(f"{where}: expected a number or [re, im] pair, got {x!r}")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def ensemble_to_dict(ens: Ensemble) -> dict:
    return {
        "dim": ens.dim,
        "probs": [float(p) for p in ens.probs],
        "states": [[_pair(z) for z in row] for row in ens.states],
    }


def ensemble_from_dict(data) -> Ensemble:
    """Parse and validate an ensemble.

    Norms and the prior sum must be within 1e-8 of 1; inputs inside that
    band are renormalised, except that values already within 1e-12 are
    kept unchanged.
    """
    if not isinstance(data, dict):
        raise InvalidEnsemble("ensemble JSON must be an object")
    for key in ("dim", "probs", "states"):
        if key not in data:
            raise InvalidEnsemble(f"ensemble JSON is missing {key!r}")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise InvalidEnsemble(f"dim must be a positive integer, got {dim!r}")
    raw_states, raw_probs = data["states"], data["probs"]
    if not isinstance(raw_states, list) or not raw_states:
        raise InvalidEnsemble("states must be a non-empty list")
    if not isinstance(raw_probs, list) or len(raw_probs) != len(raw_states):
        raise InvalidEnsemble(f"expected {len(raw_states)} probabilities")
    states = np.zeros((len(raw_states), dim), dtype=complex)
    for i, row in enumerate(raw_states):
        if not isinstance(row, list) or len(row) != dim:
            raise InvalidEnsemble(f"state {i} must have {dim} components")
        for a, x in enumerate(row):
            states[i, a] = _complex(x, f"state {i} component {a}")
    probs = np.array([_complex(p, f"probability {i}").real for i, p in enumerate(raw_probs)])
    norms = np.linalg.norm(states, axis=1)
    for i, nrm in enumerate(norms):
        if abs(nrm - 1.0) > PARSE_TOL:
            raise InvalidEnsemble(f"state {i} has norm {nrm:.12g}; unit norm required")
    for i, p in enumerate(probs):
        if p < -PARSE_TOL:
            raise InvalidEnsemble(f"probability {i} is negative ({p:.12g})")
    if abs(probs.sum() - 1.0) > PARSE_TOL:
        raise InvalidEnsemble(f"probabilities sum to {probs.sum():.12g}; they must sum to 1")
    probs = np.clip(probs, 0.0, None)
    # leave already-normalised input bit-for-bit intact so files round-trip
    off = np.abs(norms - 1.0) > 1e-12
    states[off] /= norms[off, None]
    if abs(probs.sum() - 1.0) > 1e-12:
        probs = probs / probs.sum()
    return Ensemble(states, probs)


def matrix_from_list(rows, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidInput(f"{where} must be a list of rows")
    n = len(rows)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InvalidInput(f"{where} row {i} has {len(row)} entries, expected {n}")
        for j, x in enumerate(row):
            out[i, j] = _complex(x, f"{where}[{i}][{j}]")
    return out


def matrix_to_list(m: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def grams_from_dict(data) -> list[np.ndarray]:
    """A Gram file holds ``{"matrix": M}`` or ``{"matrices": [G, G_tilde]}``."""
    if isinstance(data, dict) and "matrix" in data:
        return [matrix_from_list(data["matrix"])]
    if isinstance(data, dict) and isinstance(data.get("matrices"), list):
        return [matrix_from_list(m, f"matrices[{k}]") for k, m in enumerate(data["matrices"])]
    raise InvalidInput("Gram JSON must contain 'matrix' or 'matrices'")


def report_to_dict(report: DeformationReport) -> dict:
    return {
        "kind": report.kind,
        "method": report.method,
        "entropy_before": report.entropy_before,
        "entropy_after": report.entropy_after,
        "overlaps_before": report.overlaps_before.tolist(),
        "overlaps_after": report.overlaps_after.tolist(),
        "source": ensemble_to_dict(report.source),
        "result": ensemble_to_dict(report.result),
        "seed": report.seed,
    }


def report_from_dict(data) -> DeformationReport:
    return DeformationReport(
        data["kind"],
        data["method"],
        ensemble_from_dict(data["source"]),
        ensemble_from_dict(data["result"]),
        float(data["entropy_before"]),
        float(data["entropy_after"]),
        data.get("seed"),
    )


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def load_ensemble(path) -> Ensemble:
    return ensemble_from_dict(load_json(path))


def save_ensemble(ens: Ensemble, path) -> None:
    Path(path).write_text(dumps(ensemble_to_dict(ens)))
