"""Problem serialization, CSV ingestion, SDPA export, and report documents.

The JSON problem schema is strict: unknown keys are rejected and every
dimension is cross-checked, so fixture files are diff-friendly and
self-validating.  The SDPA sparse exporter emits the Schur-complement
semidefinite formulation of the epigraph distance for external
cross-checking; a minimal reader for the same format supports the
self-consistency tests.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import BadLabels, RaggedRows, SchemaError, UnsupportedBase
from .model import (
    ConeKind,
    NominalProblem,
    NonnegOrthant,
    ProductCone,
    PsdCone,
    SecondOrderCone,
    validate_problem,
)
from .svm import TrainingSet

__all__ = [
    "parse_problem",
    "serialize_problem",
    "problem_hash",
    "ingest_csv",
    "export_sdpa",
    "SdpaDocument",
    "parse_sdpa",
    "write_text_atomic",
    "canonical_json",
]

_CONE_KINDS = {"nonneg", "soc", "psd", "svm_product"}
_TOP_KEYS = {"name", "n", "m", "cone", "A", "b"}


# ---------------------------------------------------------------------------
# Problem documents.


def _cone_from_doc(doc: dict, m: int) -> ConeKind:
    if not isinstance(doc, dict):
        raise SchemaError("'cone' must be an object")
    kind = doc.get("kind")
    if kind not in _CONE_KINDS:
        raise SchemaError(f"cone.kind must be one of {sorted(_CONE_KINDS)}, got {kind!r}")
    allowed = {"kind"}
    if kind == "psd":
        allowed |= {"q"}
    elif kind == "svm_product":
        allowed |= {"s", "m_svm"}
    extra = set(doc) - allowed
    if extra:
        raise SchemaError(f"unknown cone keys: {sorted(extra)}")
    if kind == "nonneg":
        return NonnegOrthant(m)
    if kind == "soc":
        return SecondOrderCone(m)
    if kind == "psd":
        q = doc.get("q")
        if not isinstance(q, int) or q < 1:
            raise SchemaError("cone.q must be a positive integer")
        return PsdCone(q)
    s, m_svm = doc.get("s"), doc.get("m_svm")
    if not (isinstance(s, int) and isinstance(m_svm, int)) or s < 1 or m_svm < 1:
        raise SchemaError("cone.s and cone.m_svm must be positive integers")
    return ProductCone(soc_dim=s + 1, orthant_dim=m_svm)


def parse_problem(text: str) -> NominalProblem:
    """Parse a strict problem document; see serialize_problem for the shape."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise SchemaError(f"unknown keys: {sorted(extra)}")
    for key in ("n", "m", "cone", "A", "b"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    n, m = doc["n"], doc["m"]
    if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
        raise SchemaError("'n' and 'm' must be positive integers")
    rows = doc["A"]
    if not isinstance(rows, list) or len(rows) != m:
        raise SchemaError(f"'A' must be a list of {m} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"'A' row {i} must have {n} entries")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row):
            raise SchemaError(f"'A' row {i} has a non-numeric entry")
    b = doc["b"]
    if not isinstance(b, list) or len(b) != m:
        raise SchemaError(f"'b' must be a list of {m} numbers")
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in b):
        raise SchemaError("'b' has a non-numeric entry")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("'name' must be a string")
    cone = _cone_from_doc(doc["cone"], m)
    return validate_problem(NominalProblem(np.array(rows, float), np.array(b, float), cone))


def _cone_to_doc(cone: ConeKind) -> dict:
    if isinstance(cone, NonnegOrthant):
        return {"kind": "nonneg"}
    if isinstance(cone, SecondOrderCone):
        return {"kind": "soc"}
    if isinstance(cone, PsdCone):
        return {"kind": "psd", "q": cone.q}
    if isinstance(cone, ProductCone):
        return {"kind": "svm_product", "s": cone.soc_dim - 1, "m_svm": cone.orthant_dim}
    raise SchemaError(f"unknown cone {cone!r}")


def serialize_problem(p: NominalProblem, name: str | None = None) -> str:
    """Canonical JSON form; re-serializing a parsed document is idempotent."""
    doc: dict = {}
    if name is not None:
        doc["name"] = name
    doc["n"] = p.n
    doc["m"] = p.m
    doc["cone"] = _cone_to_doc(p.cone)
    doc["A"] = [[float(v) for v in row] for row in p.a_bar]
    doc["b"] = [float(v) for v in p.b_bar]
    return canonical_json(doc)


def canonical_json(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, repr floats, 2-space indent."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def problem_hash(p: NominalProblem) -> str:
    return hashlib.sha256(serialize_problem(p).encode()).hexdigest()


# ---------------------------------------------------------------------------
# Training data.


def ingest_csv(path: str) -> TrainingSet:
    """Read labeled points: one row per point, last column the +-1 label."""
    points: list[list[float]] = []
    labels: list[float] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
                if width < 2:
                    raise RaggedRows(f"line {lineno}: need at least 2 columns")
            elif len(cells) != width:
                raise RaggedRows(
                    f"line {lineno}: {len(cells)} columns, expected {width}"
                )
            try:
                vals = [float(c) for c in cells]
            except ValueError as exc:
                raise RaggedRows(f"line {lineno}: non-numeric cell") from exc
            if vals[-1] not in (-1.0, 1.0):
                raise BadLabels(f"line {lineno}: label {vals[-1]} not in {{-1, 1}}")
            points.append(vals[:-1])
            labels.append(vals[-1])
    if not points:
        raise RaggedRows("empty file")
    return TrainingSet(np.array(points), np.array(labels))


# ---------------------------------------------------------------------------
# SDPA sparse export of the Schur-complement distance program.


def export_sdpa(p: NominalProblem, name: str | None = None) -> str:
    """Emit the distance program in SDPA sparse (.dat-s) form.

    Variables are x = (z[1..n], s, t, lambda[1..m]) with objective t.
    Block 1 is the (n+2)-Schur block [[t I, 0, z], [0, t, s], [z, s, 1]];
    the base membership becomes either diagonal rows (simplex), an arrow
    block (SOC slice), or a PSD block (spectraplex); the z-equalities and
    the affine normalization are encoded as diagonal inequality pairs.
    """
    validate_problem(p)
    if isinstance(p.cone, ProductCone):
        raise UnsupportedBase("SDPA export does not cover the product base")
    n, m = p.n, p.m
    nv = n + 2 + m
    t_var = n + 2
    s_var = n + 1

    def lam_var(i: int) -> int:
        return n + 2 + i + 1  # 0-based row index i -> 1-based variable

    entries: list[tuple[int, int, int, int, float]] = []
    schur = n + 2

    # Schur block.
    entries.append((0, 1, schur, schur, -1.0))
    for k in range(1, n + 2):
        entries.append((t_var, 1, k, k, 1.0))
    for j in range(1, n + 1):
        entries.append((j, 1, j, schur, 1.0))
    entries.append((s_var, 1, n + 1, schur, 1.0))

    if isinstance(p.cone, NonnegOrthant):
        blocks = [schur, -(m + 2 + 2 * n + 1)]
        diag_blk = 2
        pos = 1
        for i in range(m):
            entries.append((lam_var(i), diag_blk, pos, pos, 1.0))
            pos += 1
        norm_positions = (pos, pos + 1)
        norm_vars = [(lam_var(i), 1.0) for i in range(m)]
        pos += 2
        desc = "lambda >= 0 (m rows), sum lambda = 1 pair, z pairs, s row"
    elif isinstance(p.cone, SecondOrderCone):
        blocks = [schur, m, -(2 + 2 * n + 1)]
        diag_blk = 3
        for k in range(1, m + 1):
            entries.append((0, 2, k, k, -1.0))
        for i in range(m - 1):
            entries.append((lam_var(i), 2, i + 1, m, 1.0))
        pos = 1
        norm_positions = (pos, pos + 1)
        norm_vars = [(lam_var(m - 1), 1.0)]
        pos += 2
        desc = "lambda_m = 1 pair, z pairs, s row; block 2 is the unit-ball arrow"
    else:
        q = p.cone.q
        blocks = [schur, q, -(2 + 2 * n + 1)]
        diag_blk = 3
        k = 0
        diag_idx = []
        for i in range(q):
            entries.append((lam_var(k), 2, i + 1, i + 1, 1.0))
            diag_idx.append(k)
            k += 1
            for j in range(i + 1, q):
                entries.append((lam_var(k), 2, i + 1, j + 1, 1.0 / math.sqrt(2.0)))
                k += 1
        pos = 1
        norm_positions = (pos, pos + 1)
        norm_vars = [(lam_var(i), 1.0) for i in diag_idx]
        pos += 2
        desc = "trace = 1 pair, z pairs, s row; block 2 is the PSD matrix"

    # Affine normalization as an inequality pair: sum - 1 >= 0, 1 - sum >= 0.
    lo, hi = norm_positions
    for var, coef in norm_vars:
        entries.append((var, diag_blk, lo, lo, coef))
        entries.append((var, diag_blk, hi, hi, -coef))
    entries.append((0, diag_blk, lo, lo, 1.0))
    entries.append((0, diag_blk, hi, hi, -1.0))

    # z = A^T lambda as inequality pairs.
    for j in range(n):
        entries.append((j + 1, diag_blk, pos, pos, 1.0))
        entries.append((j + 1, diag_blk, pos + 1, pos + 1, -1.0))
        for i in range(m):
            coef = float(p.a_bar[i, j])
            if coef != 0.0:
                entries.append((lam_var(i), diag_blk, pos, pos, -coef))
                entries.append((lam_var(i), diag_blk, pos + 1, pos + 1, coef))
        pos += 2

    # s >= -b^T lambda.
    entries.append((s_var, diag_blk, pos, pos, 1.0))
    for i in range(m):
        coef = float(p.b_bar[i])
        if coef != 0.0:
            entries.append((lam_var(i), diag_blk, pos, pos, coef))

    lines = []
    if name:
        lines.append(f"* {name}")
    lines.append("* epigraph-distance program in SDPA sparse format")
    lines.append(
        f"* variables: z[1..{n}] = 1..{n}, s = {s_var}, t = {t_var}, "
        f"lambda[1..{m}] = {n + 3}..{nv}"
    )
    lines.append(f"* objective: minimize t; diagonal rows: {desc}")
    lines.append(f"{nv}")
    lines.append(f"{len(blocks)}")
    lines.append(" ".join(str(bsz) for bsz in blocks))
    cvec = ["0.0"] * nv
    cvec[t_var - 1] = "1.0"
    lines.append(" ".join(cvec))
    for mat, blk, i, j, val in entries:
        lines.append(f"{mat} {blk} {i} {j} {val!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SdpaDocument:
    m_dim: int
    block_sizes: tuple[int, ...]
    c: tuple[float, ...]
    entries: tuple[tuple[int, int, int, int, float], ...]


def parse_sdpa(text: str) -> SdpaDocument:
    """Minimal SDPA sparse reader for self-consistency checks."""
    rows = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("*") or stripped.startswith('"'):
            continue
        rows.append(stripped.replace(",", " ").replace("{", " ").replace("}", " "))
    if len(rows) < 4:
        raise SchemaError("truncated SDPA document")
    m_dim = int(rows[0].split()[0])
    nblock = int(rows[1].split()[0])
    sizes = tuple(int(tok) for tok in rows[2].split())
    if len(sizes) != nblock:
        raise SchemaError("block size count does not match nBLOCK")
    c = tuple(float(tok) for tok in rows[3].split())
    if len(c) != m_dim:
        raise SchemaError("objective length does not match mDIM")
    entries = []
    for row in rows[4:]:
        toks = row.split()
        if len(toks) != 5:
            raise SchemaError(f"bad entry line: {row!r}")
        entries.append((int(toks[0]), int(toks[1]), int(toks[2]), int(toks[3]), float(toks[4])))
    return SdpaDocument(m_dim, sizes, c, tuple(entries))


# ---------------------------------------------------------------------------
# Atomic writes.


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
