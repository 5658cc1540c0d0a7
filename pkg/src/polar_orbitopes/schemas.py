"""JSON Schemas for the file formats the CLI reads and writes.

These dictionaries are the single source of truth; the copies under
``docs/schema/v1`` are generated from them (``python -m
polar_orbitopes.schemas docs/schema/v1`` regenerates).
"""

from __future__ import annotations

SCHEMA_VERSION = "v1"

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_COMPLEX_MATRIX = {
    "type": "object",
    "required": ["re", "im"],
    "properties": {"re": _MATRIX, "im": _MATRIX},
    "additionalProperties": False,
}

FAMILY_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": f"polar-orbitopes/{SCHEMA_VERSION}/family.schema.json",
    "title": "Algebra family descriptor",
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["sl_r", "so_mn", "sl_h"]},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "sl_r"}}},
         "then": {"required": ["n"]}},
        {"if": {"properties": {"kind": {"const": "so_mn"}}},
         "then": {"required": ["m", "n"]}},
        {"if": {"properties": {"kind": {"const": "sl_h"}}},
         "then": {"required": ["m"]}},
    ],
}

POINT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": f"polar-orbitopes/{SCHEMA_VERSION}/point.schema.json",
    "title": "Family descriptor plus a point of the -1 eigenspace",
    "type": "object",
    "required": ["family", "point"],
    "properties": {
        "family": FAMILY_SCHEMA,
        "point": {
            "type": "object",
            "properties": {
                "matrix": _MATRIX,          # sl_r: full symmetric matrix
                "B": _MATRIX,               # so_mn: rectangular block (user orientation)
                "A": _COMPLEX_MATRIX,       # sl_h: Hermitian traceless block
            },
            "additionalProperties": True,   # sl_h reuses "B" with re/im parts
        },
    },
}

PENCILS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": f"polar-orbitopes/{SCHEMA_VERSION}/pencils.schema.json",
    "title": "Linear matrix inequality pencils, one per fundamental representation",
    "type": "object",
    "required": ["family", "variables", "pencils"],
    "properties": {
        "family": FAMILY_SCHEMA,
        "variables": {"type": "integer", "minimum": 1},
        "anchor": {"type": "object"},
        "pencils": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rep", "dim", "constant", "coefficients"],
                "properties": {
                    "rep": {"type": "string"},
                    "dim": {"type": "integer", "minimum": 1},
                    "constant": {"type": "number"},
                    "coefficients": {"type": "array", "items": _COMPLEX_MATRIX},
                },
            },
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": f"polar-orbitopes/{SCHEMA_VERSION}/report.schema.json",
    "title": "Verification suite report",
    "type": "object",
    "required": ["suite", "family", "seed"],
    "properties": {
        "suite": {"type": "string"},
        "family": {"type": "string"},
        "seed": {"type": "integer"},
    },
    "additionalProperties": True,
}

FACES_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": f"polar-orbitopes/{SCHEMA_VERSION}/faces.schema.json",
    "title": "Face-orbit representatives of a momentum polytope",
    "type": "object",
    "required": ["family", "anchor", "orbits", "counts_by_dim"],
    "properties": {
        "family": FAMILY_SCHEMA,
        "anchor": {"type": "array", "items": {"type": "number"}},
        "orbits": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["dim", "vertex_indices", "orbit_size"],
                "properties": {
                    "dim": {"type": "integer"},
                    "vertex_indices": {"type": "array", "items": {"type": "integer"}},
                    "vertices": _MATRIX,
                    "functional": {"type": "array", "items": {"type": "number"}},
                    "level": {"type": "number"},
                    "orbit_size": {"type": "integer"},
                },
            },
        },
        "counts_by_dim": {"type": "object"},
    },
}

ALL_SCHEMAS = {
    "family.schema.json": FAMILY_SCHEMA,
    "point.schema.json": POINT_SCHEMA,
    "pencils.schema.json": PENCILS_SCHEMA,
    "report.schema.json": REPORT_SCHEMA,
    "faces.schema.json": FACES_SCHEMA,
}


def write_schema_files(directory) -> None:
    import json
    import os

    os.makedirs(directory, exist_ok=True)
    for name, schema in ALL_SCHEMAS.items():
        with open(os.path.join(directory, name), "w") as fh:
            json.dump(schema, fh, indent=2, sort_keys=True)
            fh.write("\n")


if __name__ == "__main__":  # pragma: no cover
    import sys

    write_schema_files(sys.argv[1] if len(sys.argv) > 1 else "docs/schema/v1")
