"""Flat-file matrix documents and run configuration.

JSON is the canonical format.  A document either stores floating entries as
[re, im] pairs or, in exact mode, each entry as {"exp": e, "denom": 2d}
meaning scale * exp(2 pi i e / (2d)); a null exact entry is zero.  CSV export
keeps only floats and is marked lossy in its header line.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np

from . import __version__
from .errors import ParseError, RangeError
from .phases import half_root

SCHEMA = 1
KINDS = ("operator", "basis", "hadamard", "overlap-report", "census-report")
DEFAULT_TOL = 1e-10


@dataclass
class RunConfig:
    tolerance: float = DEFAULT_TOL
    format: Literal["json", "csv"] = "json"
    exact: bool = False
    seed: int = 20240607

    def __post_init__(self):
        if not self.tolerance > 0:
            raise RangeError("tolerance must be positive")
        if self.format not in ("json", "csv"):
            raise RangeError(f"unknown format {self.format!r}")

    @classmethod
    def from_env(cls, tolerance: float | None = None, **kw) -> "RunConfig":
        """Explicit tolerance wins, then MUBKIT_TOL, then the default."""
        if tolerance is None:
            env = os.environ.get("MUBKIT_TOL")
            try:
                tolerance = float(env) if env else DEFAULT_TOL
            except ValueError as exc:
                raise RangeError(f"MUBKIT_TOL={env!r} is not a number") from exc
        return cls(tolerance=tolerance, **kw)


@dataclass
class MatrixDocument:
    kind: str
    dimension: int
    params: dict[str, Any]
    values: np.ndarray | None = None
    exponents: np.ndarray | None = None
    mask: np.ndarray | None = None
    scale: float = 1.0
    scale_sqrt_inverse: int | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RangeError(f"unknown document kind {self.kind!r}")
        if self.values is None and self.exponents is None and self.kind in ("operator", "basis", "hadamard"):
            raise RangeError("matrix documents need entries")
        self.metadata.setdefault("tool_version", __version__)

    @property
    def is_exact(self) -> bool:
        return self.exponents is not None

    def matrix(self) -> np.ndarray:
        if self.values is not None:
            return self.values
        d = self.dimension
        table = np.array([half_root(k, d) for k in range(2 * d)])
        out = table[np.mod(self.exponents, 2 * d)] * self.scale
        if self.mask is not None:
            out = np.where(self.mask, out, 0)
        return out

    def exact_float_agreement(self) -> float:
        """Max difference between the exact rendering and any stored floats."""
        if self.values is None or self.exponents is None:
            return 0.0
        exact = MatrixDocument(self.kind, self.dimension, self.params, exponents=self.exponents,
                               mask=self.mask, scale=self.scale).matrix()
        return float(np.max(np.abs(exact - self.values)))

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA,
            "kind": self.kind,
            "dimension": self.dimension,
            "params": self.params,
            "metadata": self.metadata,
        }
        if self.exponents is not None:
            denom = 2 * self.dimension
            mask = self.mask if self.mask is not None else np.ones(self.exponents.shape, dtype=bool)
            out["entries"] = [
                [{"exp": int(e), "denom": denom} if m else None for e, m in zip(row, mrow)]
                for row, mrow in zip(self.exponents, mask)
            ]
            out["scale"] = self.scale
            if self.scale_sqrt_inverse is not None:
                out["scale_sqrt_inverse"] = self.scale_sqrt_inverse
        elif self.values is not None:
            out["entries"] = [[[float(z.real), float(z.imag)] for z in row] for row in self.values]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1)


def _parse_entries(raw, d: int):
    if not isinstance(raw, list) or len(raw) != d or any(not isinstance(r, list) or len(r) != d for r in raw):
        raise ParseError(f"entries must be a {d}x{d} array")
    flat = [e for row in raw for e in row]
    if all(e is None or isinstance(e, dict) for e in flat):
        exps = np.zeros((d, d), dtype=np.int64)
        mask = np.zeros((d, d), dtype=bool)
        for i, row in enumerate(raw):
            for k, e in enumerate(row):
                if e is None:
                    continue
                if e.get("denom") != 2 * d or not isinstance(e.get("exp"), int):
                    raise ParseError(f"bad exact entry {e!r}")
                exps[i, k] = e["exp"]
                mask[i, k] = True
        return None, exps, mask
    try:
        vals = np.array([[complex(e[0], e[1]) for e in row] for row in raw])
    except (TypeError, IndexError, ValueError) as exc:
        raise ParseError("entries must be [re, im] pairs or exact records") from exc
    return vals, None, None


def document_from_json(text: str) -> MatrixDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise ParseError(f"unsupported or missing schema (expected {SCHEMA})")
    try:
        kind, d = data["kind"], int(data["dimension"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("document needs kind and dimension") from exc
    values = exps = mask = None
    if "entries" in data:
        values, exps, mask = _parse_entries(data["entries"], d)
    try:
        return MatrixDocument(kind, d, data.get("params", {}), values, exps, mask,
                              float(data.get("scale", 1.0)), data.get("scale_sqrt_inverse"),
                              data.get("metadata", {}))
    except RangeError as exc:
        raise ParseError(str(exc)) from exc


CSV_MARK = "# mubkit lossy-csv"


def document_to_csv(doc: MatrixDocument) -> str:
    """Floating-only export; exact exponents are not preserved."""
    buf = io.StringIO()
    header = {"kind": doc.kind, "dimension": doc.dimension, "params": doc.params, "lossy": True}
    buf.write(f"{CSV_MARK} {json.dumps(header)}\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in doc.matrix():
        w.writerow([x for z in row for x in (repr(float(z.real)), repr(float(z.imag)))])
    return buf.getvalue()


def document_from_csv(text: str) -> MatrixDocument:
    first, _, body = text.partition("\n")
    if not first.startswith(CSV_MARK):
        raise ParseError("missing lossy-csv header line")
    try:
        header = json.loads(first[len(CSV_MARK):])
        rows = [[float(x) for x in r] for r in csv.reader(io.StringIO(body)) if r]
        vals = np.array([[complex(r[2 * i], r[2 * i + 1]) for i in range(len(r) // 2)] for r in rows])
        return MatrixDocument(header["kind"], int(header["dimension"]), header.get("params", {}), vals,
                              metadata={"lossy": True})
    except (ValueError, KeyError, IndexError, RangeError) as exc:
        raise ParseError(f"malformed csv document: {exc}") from exc


def write_document(doc: MatrixDocument, path: Path, fmt: str = "json") -> Path:
    path = Path(path)
    path.write_text(doc.dumps() if fmt == "json" else document_to_csv(doc))
    return path


def read_document(path: Path) -> MatrixDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if text.startswith(CSV_MARK):
        return document_from_csv(text)
    return document_from_json(text)


def ascending_labels(d: int) -> list[int]:
    return list(range(d))


def descending_labels(d: int) -> list[int]:
    return list(range(d - 1, -1, -1))


def basis_document(basis, *, exact: bool, tag: str, params: dict) -> MatrixDocument:
    """Document for a basis: column alpha holds vector alpha, rows are labels k = 0..d-1.

    Basis vectors are stored internally over descending m; rows are flipped so
    that row k is the coefficient of |k> = |j, k - j>.
    """
    d = basis.d
    meta = {"tag": tag, "row_labels": "k=" + ",".join(map(str, ascending_labels(d))),
            "col_labels": "alpha=" + ",".join(map(str, ascending_labels(d))),
            "order": "ascending computational label k = j + m"}
    exps = getattr(basis, "exponents", None)
    if exact and exps is not None:
        return MatrixDocument("basis", d, params, exponents=exps[::-1].copy(), scale=1 / math.sqrt(d),
                              scale_sqrt_inverse=d, metadata=meta)
    if exact and np.array_equal(basis.vectors, np.eye(d)):
        return MatrixDocument("basis", d, params, exponents=np.zeros((d, d), dtype=np.int64),
                              mask=np.eye(d, dtype=bool), metadata=meta)
    if exact:
        raise RangeError("this basis has no exact phase representation")
    return MatrixDocument("basis", d, params, values=basis.vectors[::-1].copy(), metadata=meta)


def hadamard_document(h, a: int, *, exact: bool) -> MatrixDocument:
    d = h.d
    meta = {"tag": "generalized-hadamard", "row_labels": "k=" + ",".join(map(str, ascending_labels(d))),
            "col_labels": "alpha=" + ",".join(map(str, ascending_labels(d))),
            "order": "ascending computational label k"}
    params = {"d": d, "a": a}
    if exact:
        return MatrixDocument("hadamard", d, params, exponents=h.exponents.copy(), scale=h.scale, metadata=meta)
    return MatrixDocument("hadamard", d, params, values=h.to_complex(), metadata=meta)


def operator_document(name: str, matrix: np.ndarray, params: dict) -> MatrixDocument:
    d = matrix.shape[0]
    meta = {"tag": name, "row_labels": "k=" + ",".join(map(str, descending_labels(d))),
            "col_labels": "k=" + ",".join(map(str, descending_labels(d))),
            "order": "decreasing computational label k = j + m (m = j first)"}
    return MatrixDocument("operator", d, params, values=np.asarray(matrix, dtype=complex), metadata=meta)


def report_document(kind: str, d: int, params: dict, body: dict) -> MatrixDocument:
    return MatrixDocument(kind, d, params, metadata={"tag": kind, **body})
