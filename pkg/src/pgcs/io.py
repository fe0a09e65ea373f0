"""JSON reading and writing.

A problem file has integer keys ``"p"``, ``"m"``, ``"n"`` and one list per
coefficient (``"A"`` .. ``"F"``) holding ``p`` row-major 2-D arrays.
Solutions use ``"X"``, ``"Y"`` and perturbations ``"dA"`` .. ``"dF"``.
Tolerance files hold either ``"tolerances"`` as a ``p x 6`` array in the
order ``alpha, beta, gamma, zeta, tau, delta`` or one length-``p`` list per
tolerance name.

Floats are written with Python's shortest round-trip ``repr`` so numeric
fields survive a write/read cycle bit for bit. Infinite values are written
as ``Infinity``, which :func:`json.loads` accepts.
"""

import json
from dataclasses import fields, is_dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .model import (BLOCKS, TOLERANCE_NAMES, PerturbationSet, PgcsProblem,
                    PgcsSolution, ResidualSet, ToleranceSet, check)

__all__ = [
    "to_jsonable",
    "dumps",
    "write_json",
    "read_json",
    "problem_to_dict",
    "problem_from_dict",
    "solution_to_dict",
    "solution_from_dict",
    "perturbation_to_dict",
    "perturbation_from_dict",
    "tolerances_from_dict",
    "load_problem",
    "load_solution",
    "load_perturbation",
    "load_tolerances",
]


def to_jsonable(obj):
    """Convert arrays, tuples and report dataclasses to plain JSON types."""
    if isinstance(obj, PgcsProblem):
        return problem_to_dict(obj)
    if isinstance(obj, PgcsSolution):
        return solution_to_dict(obj)
    if isinstance(obj, PerturbationSet):
        return perturbation_to_dict(obj)
    if isinstance(obj, ToleranceSet):
        return {"tolerances": obj.as_array().tolist()}
    if isinstance(obj, ResidualSet):
        return {"R1": [M.tolist() for M in obj.R1], "R2": [M.tolist() for M in obj.R2]}
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2)


def write_json(obj, path):
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from exc


def _matrices(data, key, p):
    if key not in data:
        raise DataError(f"missing key {key!r}")
    mats = data[key]
    if not isinstance(mats, list) or len(mats) != p:
        raise DataError(f"{key!r} must be a list of {p} matrices")
    out = []
    for k, M in enumerate(mats):
        try:
            arr = np.array(M, dtype=float)
        except (TypeError, ValueError) as exc:
            raise DataError(f"{key}[{k + 1}] is not a numeric matrix") from exc
        if arr.ndim != 2:
            raise DataError(f"{key}[{k + 1}] must be a 2-D array")
        out.append(arr)
    return tuple(out)


def _period(data):
    p = data.get("p")
    if p is None:
        # solutions and perturbations may omit p
        for key in ("X", "dA", "A"):
            if isinstance(data.get(key), list):
                return len(data[key])
        raise DataError("cannot determine the period p")
    if not isinstance(p, int) or p < 1:
        raise DataError(f"p must be a positive integer, got {p!r}")
    return p


def problem_to_dict(problem):
    out = {"p": problem.p, "m": problem.m, "n": problem.n}
    for name in ("A", "B", "C", "D", "E", "F"):
        out[name] = [M.tolist() for M in getattr(problem, name)]
    return out


def problem_from_dict(data):
    """Build and validate a :class:`PgcsProblem`; raises :class:`DataError`."""
    if not isinstance(data, dict):
        raise DataError("problem JSON must be an object")
    p = _period(data)
    for key in ("m", "n"):
        if not isinstance(data.get(key), int):
            raise DataError(f"missing or non-integer key {key!r}")
    mats = {name: _matrices(data, name, p) for name in BLOCKS}
    problem = PgcsProblem(p, data["m"], data["n"], mats["A"], mats["B"], mats["C"],
                          mats["D"], mats["E"], mats["F"])
    return check(problem)


def solution_to_dict(solution):
    return {"X": [M.tolist() for M in solution.X], "Y": [M.tolist() for M in solution.Y]}


def solution_from_dict(data):
    p = _period(data)
    return PgcsSolution(_matrices(data, "X", p), _matrices(data, "Y", p))


def perturbation_to_dict(delta):
    return {"d" + name: [M.tolist() for M in getattr(delta, "d" + name)]
            for name in ("A", "B", "C", "D", "E", "F")}


def perturbation_from_dict(data):
    p = _period(data)
    return PerturbationSet(*[_matrices(data, "d" + name, p)
                             for name in ("A", "B", "C", "D", "E", "F")])


def tolerances_from_dict(data, p):
    if "tolerances" in data:
        arr = np.array(data["tolerances"], dtype=float)
    else:
        missing = [name for name in TOLERANCE_NAMES if name not in data]
        if missing:
            raise DataError("tolerance file lacks " + ", ".join(missing))
        arr = np.column_stack([np.array(data[name], dtype=float) for name in TOLERANCE_NAMES])
    if arr.shape != (p, 6):
        raise DataError(f"tolerances have shape {arr.shape}, expected ({p}, 6)")
    return ToleranceSet.from_array(arr)


def load_problem(path):
    return problem_from_dict(read_json(path))


def load_solution(path):
    return solution_from_dict(read_json(path))


def load_perturbation(path):
    return perturbation_from_dict(read_json(path))


def load_tolerances(path, p):
    return tolerances_from_dict(read_json(path), p)
