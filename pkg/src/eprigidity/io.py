"""Matrix JSON format and small serialization helpers.

A matrix file is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with
``r * c`` row-major entries.
"""

import hashlib
import json

import numpy as np

from .exceptions import InvalidInput
from .validation import check_matrix

__all__ = ["matrix_to_json", "matrix_from_json", "load_matrix", "save_matrix", "complex_pair", "file_digest"]


def complex_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(A):
    A = check_matrix(A)
    rows, cols = A.shape
    return {"rows": rows, "cols": cols, "data": [complex_pair(z) for z in A.ravel()]}


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def matrix_from_json(obj):
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise InvalidInput("matrix JSON needs the keys 'rows', 'cols' and 'data'")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InvalidInput("'rows' and 'cols' must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise InvalidInput(f"'data' must hold rows*cols = {rows * cols} entries, got {got}")
    out = np.empty(rows * cols, dtype=complex)
    for i, pair in enumerate(data):
        if not (isinstance(pair, list) and len(pair) == 2 and all(map(_is_number, pair))):
            raise InvalidInput(f"entry {i} is not an [re, im] pair: {pair!r}")
        out[i] = complex(pair[0], pair[1])
    return check_matrix(out.reshape(rows, cols))


def load_matrix(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_json(obj)


def save_matrix(path, A):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(A), fh)
        fh.write("\n")


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()
