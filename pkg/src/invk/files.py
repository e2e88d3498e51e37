"""JSON algebra definition files.

Rationals are JSON strings such as ``"2/3"`` (integers are also accepted);
JSON floats are rejected so no floating point enters the pipeline.

Example::

    {
      "name": "sl2", "kind": "lie", "dim": 3, "basis": ["h", "e", "f"],
      "brackets": [
        {"i": 1, "j": 2, "coeffs": ["0", "2", "0"]},
        {"i": "h", "j": "f", "coeffs": {"f": "-2"}},
        {"i": 2, "j": 3, "coeffs": ["1", "0", "0"]}
      ],
      "matrices": {"dimV": 2, "W": [["1", "0"]], "q": [["0", "0"], ["0", "1"]],
                   "k": "1", "variant": "6th", "rho": {"h": [[...]], ...}}
    }

Bracket indices are 1-based integers or basis labels.  For Lie algebras a
missing (j, i) entry is filled in by antisymmetry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvkError
from .linalg import Matrix
from .scalars import as_scalar
from .structures import StructureConstants


class FileFormatError(InvkError, ValueError):
    pass


def _rational(x, where: str):
    if isinstance(x, bool) or isinstance(x, float):
        raise FileFormatError(f"{where}: rationals must be strings or integers, got {x!r}")
    try:
        return as_scalar(x)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{where}: {exc}") from None


def _matrix(rows, where: str) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FileFormatError(f"{where}: expected a list of rows")
    try:
        return Matrix([[_rational(x, where) for x in r] for r in rows])
    except ValueError as exc:
        raise FileFormatError(f"{where}: {exc}") from None


@dataclass
class RepSection:
    dimV: int
    W: tuple
    q: Matrix
    k: object
    variant: str
    rho: dict                      # generator index -> Matrix
    envelope_degree: int | None = None
    embedding: tuple | None = None  # (basis matrices, q) for the regular embedding


@dataclass
class AlgebraFile:
    name: str
    sc: StructureConstants
    path: str = ""
    matrices: RepSection | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def labels(self) -> tuple:
        return self.sc.labels


def _index(x, labels: list, where: str) -> int:
    if isinstance(x, bool):
        raise FileFormatError(f"{where}: bad index {x!r}")
    if isinstance(x, int):
        if not 1 <= x <= len(labels):
            raise FileFormatError(f"{where}: index {x} out of range 1..{len(labels)}")
        return x
    if isinstance(x, str) and x in labels:
        return labels.index(x) + 1
    raise FileFormatError(f"{where}: unknown basis element {x!r}")


def parse_algebra(data: dict, path: str = "") -> AlgebraFile:
    if not isinstance(data, dict):
        raise FileFormatError("top level must be a JSON object")
    kind = data.get("kind")
    if kind not in ("lie", "leibniz"):
        raise FileFormatError("'kind' must be 'lie' or 'leibniz'")
    dim = data.get("dim")
    labels = data.get("basis") or ([f"x{i}" for i in range(1, dim + 1)] if isinstance(dim, int) else None)
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError("'dim' must be a positive integer")
    if not isinstance(labels, list) or len(labels) != dim:
        raise FileFormatError("'basis' must list one label per dimension")
    if len(set(labels)) != dim:
        raise FileFormatError("basis labels must be unique")
    for lab in labels:
        if not isinstance(lab, str) or not lab.isidentifier() or lab == "q":
            raise FileFormatError(f"bad basis label {lab!r} (identifiers only, 'q' is reserved)")
    table = {}
    for n, entry in enumerate(data.get("brackets", [])):
        where = f"brackets[{n}]"
        if not isinstance(entry, dict) or not {"i", "j", "coeffs"} <= set(entry):
            raise FileFormatError(f"{where}: needs keys i, j, coeffs")
        i = _index(entry["i"], labels, where)
        j = _index(entry["j"], labels, where)
        coeffs = entry["coeffs"]
        if isinstance(coeffs, dict):
            vec = [as_scalar(0)] * dim
            for lab, c in coeffs.items():
                vec[_index(lab, labels, where) - 1] = _rational(c, where)
        elif isinstance(coeffs, list) and len(coeffs) == dim:
            vec = [_rational(c, where) for c in coeffs]
        else:
            raise FileFormatError(f"{where}: coeffs must be a list of {dim} rationals or a map")
        if (i, j) in table:
            raise FileFormatError(f"{where}: duplicate bracket ({i},{j})")
        table[(i, j)] = tuple(vec)
    sc = StructureConstants.from_brackets(dim, kind, table, labels)
    matrices = None
    if "matrices" in data:
        matrices = _parse_matrices(data["matrices"], labels)
    return AlgebraFile(str(data.get("name", Path(path).stem if path else "")), sc, path,
                       matrices, data)


def _parse_matrices(m: dict, labels: list) -> RepSection:
    if not isinstance(m, dict):
        raise FileFormatError("'matrices' must be an object")
    dimV = m.get("dimV")
    if not isinstance(dimV, int) or dimV < 1:
        raise FileFormatError("matrices.dimV must be a positive integer")
    W = tuple(tuple(_rational(x, "matrices.W") for x in v) for v in m.get("W", []))
    q = _matrix(m.get("q"), "matrices.q")
    rho = {}
    for lab, rows in (m.get("rho") or {}).items():
        rho[_index(lab, labels, "matrices.rho")] = _matrix(rows, f"matrices.rho.{lab}")
    if set(rho) != set(range(1, len(labels) + 1)):
        raise FileFormatError("matrices.rho must give a matrix for every basis element")
    embedding = None
    if "embedding" in m:
        emb = m["embedding"]
        basis = tuple(_matrix(b, "matrices.embedding.basis") for b in emb.get("basis", []))
        embedding = (basis, _matrix(emb.get("q"), "matrices.embedding.q"))
    return RepSection(dimV, W, q, _rational(m.get("k", "1"), "matrices.k"),
                      m.get("variant", "6th"), rho, m.get("envelope_degree"), embedding)


def load_algebra(path: str | Path) -> AlgebraFile:
    p = Path(path)
    with p.open() as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{p}: invalid JSON ({exc})") from None
    return parse_algebra(data, str(path))
