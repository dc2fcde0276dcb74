"""Module file I/O.

Format: ``{"field": {"kind": "Q"} | {"kind": "Fp", "p": ...},
"dims": [...], "arrows": {"eps_1": [[...]], "a_1_2_1": [[...]], ...}}``
with row-major entries written as exact strings ("3/2" is allowed over Q).
"""

from __future__ import annotations

import json

from .errors import InputError
from .fields import field_from_json, field_to_json
from .modrep import Rep
from .presentation import build_quiver


def rep_to_json(M) -> dict:
    arrows = {}
    for name, mat in sorted(M.mats.items()):
        arrows[name] = [[M.field.elem_to_str(mat[r, c])
                         for c in range(mat.shape[1])]
                        for r in range(mat.shape[0])]
    return {"field": field_to_json(M.field),
            "dims": list(M.dims),
            "arrows": arrows}


def dump_rep(M, path):
    with open(path, "w") as fh:
        json.dump(rep_to_json(M), fh, indent=1, sort_keys=True)
        fh.write("\n")


def rep_from_json(datum, data, check=True) -> Rep:
    try:
        field = field_from_json(data["field"])
        dims = [int(d) for d in data["dims"]]
        quiver = build_quiver(datum)
        mats = {}
        for name, rows in data.get("arrows", {}).items():
            if name not in quiver.arrows:
                raise InputError(f"unknown arrow name {name!r}")
            arrow = quiver.arrows[name]
            want = (dims[arrow.target - 1], dims[arrow.source - 1])
            mat = field.zeros(*want)
            if len(rows) != want[0]:
                raise InputError(f"arrow {name}: expected {want[0]} rows")
            for r, row in enumerate(rows):
                if len(row) != want[1]:
                    raise InputError(
                        f"arrow {name}, row {r}: expected {want[1]} entries")
                for c, entry in enumerate(row):
                    mat[r, c] = field.elem_from_str(str(entry))
            mats[name] = mat
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed module file: {exc}") from exc
    return Rep(datum, field, dims, mats, check=check, quiver=quiver)


def load_rep(datum, path, check=True) -> Rep:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return rep_from_json(datum, data, check=check)
