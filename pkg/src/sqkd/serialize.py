"""JSON round-trip formats for attacks, POVMs, and reports.

Complex numbers are [re, im] pairs; matrices are row-major nested
lists.  Floats go through Python's shortest round-trip repr, so parsing
a document back reproduces the binary64 values bit for bit.

Attack documents:
    {"ancilla_dim": d, "omega": [[re, im], ...],
     "v": [[[re, im], ...], ...], "u": [[[re, im], ...], ...]}

POVM documents:
    {"elements": [[[[re, im], ...], ...], ...]}
"""

import json

import numpy as np

from .povm import Povm
from .protocol import AttackModel


def _complex_to_pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _vector_to_pairs(v: np.ndarray) -> list:
    return [_complex_to_pair(z) for z in v]


def _matrix_to_pairs(m: np.ndarray) -> list:
    return [_vector_to_pairs(row) for row in m]


def _pairs_to_vector(pairs, name: str) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name}: expected [re, im] pairs ({exc})") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name}: expected a list of [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def _pairs_to_matrix(rows, name: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ValueError(f"{name}: expected a non-empty list of rows")
    return np.stack([_pairs_to_vector(row, f"{name} row {i}") for i, row in enumerate(rows)])


def attack_to_dict(attack: AttackModel) -> dict:
    return {
        "ancilla_dim": attack.ancilla_dim,
        "omega": _vector_to_pairs(attack.omega),
        "v": _matrix_to_pairs(attack.v),
        "u": _matrix_to_pairs(attack.u),
    }


def attack_from_dict(doc: dict) -> AttackModel:
    for key in ("ancilla_dim", "omega", "v", "u"):
        if key not in doc:
            raise ValueError(f"attack document is missing the {key!r} field")
    attack = AttackModel(
        ancilla_dim=int(doc["ancilla_dim"]),
        omega=_pairs_to_vector(doc["omega"], "omega"),
        v=_pairs_to_matrix(doc["v"], "v"),
        u=_pairs_to_matrix(doc["u"], "u"),
    )
    attack.validate()
    return attack


def povm_to_dict(eve_povm: Povm) -> dict:
    return {"elements": [_matrix_to_pairs(e) for e in eve_povm.elements]}


def povm_from_dict(doc: dict) -> Povm:
    if "elements" not in doc:
        raise ValueError("POVM document is missing the 'elements' field")
    elements = [
        _pairs_to_matrix(rows, f"element {i}") for i, rows in enumerate(doc["elements"])
    ]
    return Povm(tuple(elements))


def _load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    return doc


def parse_attack_file(path) -> AttackModel:
    """Load and validate an attack document; non-unitary matrices are
    rejected with the offending deviation in the message."""
    return attack_from_dict(_load_json(path))


def parse_povm_file(path) -> Povm:
    return povm_from_dict(_load_json(path))


def write_document(doc: dict, path=None) -> str:
    """Serialize deterministically (sorted keys); write to path if given."""
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def report_to_dict(report) -> dict:
    trace = report.trace
    return {
        "p_ctrl": report.p_ctrl,
        "p_sift": report.p_sift,
        "info": report.info,
        "rhs": report.rhs,
        "gap": report.gap,
        "holds": report.holds,
        "trace": {
            "lhs_overlap": trace.lhs_overlap,
            "fidelity_sum": trace.fidelity_sum,
            "p0": trace.p0.tolist(),
            "p0_marginal": trace.p0_marginal.tolist(),
            "step_slacks": {k: float(v) for k, v in trace.step_slacks.items()},
        },
    }


def check_report_dict(doc: dict) -> None:
    """Schema check for an emitted run/optimize report body."""
    required = ("p_ctrl", "p_sift", "info", "rhs", "gap", "holds", "trace")
    for key in required:
        if key not in doc:
            raise ValueError(f"report is missing the {key!r} field")
    if abs(doc["gap"] - (doc["rhs"] - doc["info"])) > 1e-12:
        raise ValueError("report gap is inconsistent with rhs - info")
    for key in ("lhs_overlap", "fidelity_sum", "p0", "p0_marginal", "step_slacks"):
        if key not in doc["trace"]:
            raise ValueError(f"report trace is missing the {key!r} field")
