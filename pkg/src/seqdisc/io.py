"""JSON interchange: matrices, states, protocols, plans and reports.

A matrix is ``{"d": d, "entries": [[[re, im], ...], ...]}`` (row-major); a
state is a list of ``[re, im]`` pairs. Floats are written with ``repr``
precision, so every value round-trips exactly.
"""

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .linalg import certify_unitary, U_TOL
from .synthesis import SequentialProtocol


def _pair(z):
    return [float(z.real), float(z.imag)]


def matrix_to_json(m):
    m = np.asarray(m, dtype=np.complex128)
    return {"d": int(m.shape[0]), "entries": [[_pair(z) for z in row] for row in m]}


def _complex(item, where):
    if not (isinstance(item, (list, tuple)) and len(item) == 2):
        raise ParseError(f"{where}: expected [re, im], got {item!r}")
    try:
        return complex(float(item[0]), float(item[1]))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from exc


def matrix_from_json(obj):
    """Parse the matrix format into a complex array (no unitarity check)."""
    if not isinstance(obj, dict) or "d" not in obj or "entries" not in obj:
        raise ParseError('matrix JSON needs keys "d" and "entries"')
    d = obj["d"]
    rows = obj["entries"]
    if not isinstance(d, int) or d < 1:
        raise ParseError(f"invalid dimension {d!r}")
    if not isinstance(rows, list) or len(rows) != d or any(not isinstance(r, list) or len(r) != d for r in rows):
        raise ParseError(f"entries must be a {d} x {d} array")
    m = np.array([[_complex(z, f"entries[{i}][{j}]") for j, z in enumerate(r)] for i, r in enumerate(rows)])
    if not np.all(np.isfinite(m)):
        raise ParseError("entries must be finite")
    return m


def state_to_json(v):
    return [_pair(z) for z in np.asarray(v, dtype=np.complex128)]


def state_from_json(items):
    if not isinstance(items, list) or not items:
        raise ParseError("state must be a non-empty list of [re, im] pairs")
    return np.array([_complex(z, f"state[{i}]") for i, z in enumerate(items)])


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_json(obj, path=None):
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_matrix(path):
    return matrix_from_json(read_json(path))


def load_unitary(path, tol=U_TOL):
    return certify_unitary(load_matrix(path), tol)


def save_matrix(m, path):
    write_json(matrix_to_json(m), path)


def protocol_to_json(p):
    return {
        "d": int(p.dim),
        "num_runs": int(p.num_runs),
        "input_state": state_to_json(p.input_state),
        "interleavers": [matrix_to_json(x.matrix) for x in p.interleavers],
        "branch_u_output": state_to_json(p.branch_u_output),
        "branch_v_output": state_to_json(p.branch_v_output),
        "candidates": {"u": matrix_to_json(p.candidate_u.matrix), "v": matrix_to_json(p.candidate_v.matrix)},
        "orth_defect": float(p.orth_defect),
        "bumped": bool(p.bumped),
    }


def protocol_from_json(obj, tol=U_TOL):
    try:
        interleavers = tuple(certify_unitary(matrix_from_json(x), tol) for x in obj["interleavers"])
        protocol = SequentialProtocol(
            num_runs=int(obj["num_runs"]),
            input_state=state_from_json(obj["input_state"]),
            interleavers=interleavers,
            branch_u_output=state_from_json(obj["branch_u_output"]),
            branch_v_output=state_from_json(obj["branch_v_output"]),
            candidate_u=certify_unitary(matrix_from_json(obj["candidates"]["u"]), tol),
            candidate_v=certify_unitary(matrix_from_json(obj["candidates"]["v"]), tol),
            orth_defect=float(obj["orth_defect"]),
            bumped=bool(obj["bumped"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed protocol JSON: {exc!r}") from exc
    if len(interleavers) != protocol.num_runs - 1 or protocol.dim != int(obj["d"]):
        raise ParseError("protocol JSON is internally inconsistent")
    return protocol


def plan_to_json(plan, valid=None):
    return {
        "total_runs": plan.total_runs,
        "copies": plan.copies,
        "parts": list(plan.parts),
        "length": plan.length,
        "valid": valid,
    }


def shots_to_json(records, seed, shots):
    return {
        "labels": [r.label for r in records],
        "probabilities": [r.probability for r in records],
        "counts": [r.counts for r in records],
        "seed": int(seed),
        "shots": int(shots),
    }


def transcript_to_json(t):
    return {
        "rounds": [
            {"pair": list(r.pair), "num_runs": r.num_runs, "outcome": r.outcome, "eliminated": r.eliminated}
            for r in t.rounds
        ],
        "survivor": t.survivor,
        "total_runs": t.total_runs,
    }


def optimality_to_json(report):
    return {
        "k": report.k,
        "chain_bound": report.chain_bound,
        "best_chain_theta": report.best_chain_theta,
        "best_orthogonality_gap": report.best_orthogonality_gap,
        "restarts": report.restarts,
        "seed": report.seed,
        "pass": report.passed,
    }
