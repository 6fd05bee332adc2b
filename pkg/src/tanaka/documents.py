"""JSON file formats and report serialization.

Indices in files are 1-based; rationals are integers or ``{"num", "den"}``
objects.  Floats and strings are rejected so that no decimal parsing is
ever involved.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from . import linalg as la
from .algebra import GradedLieAlgebra, GradedSubspace, LieAlgebra
from .linalg import Matrix, Subspace

SCHEMA_VERSION = "1.0"


class DocumentError(ValueError):
    """Malformed input document; the message carries a location when known."""


def load_json(path) -> object:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def canonical_hash(doc) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def parse_rational(x, where="value") -> Fraction:
    if isinstance(x, bool):
        raise DocumentError(f"{where}: boolean is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, dict):
        try:
            num, den = x["num"], x.get("den", 1)
        except KeyError:
            raise DocumentError(f"{where}: rational object needs 'num'") from None
        if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool):
            raise DocumentError(f"{where}: num and den must be integers")
        if den == 0:
            raise DocumentError(f"{where}: zero denominator")
        return Fraction(num, den)
    raise DocumentError(f"{where}: expected integer or {{num, den}}, got {type(x).__name__}")


def rational_str(c: Fraction) -> str:
    return str(c)


def vector_out(v) -> list:
    return [rational_str(a) for a in v]


def _field(doc, key, where, kind=None, default=...):
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in doc:
        if default is ...:
            raise DocumentError(f"{where}: missing field '{key}'")
        return default
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise DocumentError(f"{where}.{key}: expected {kind.__name__}")
    return val


def parse_algebra(doc) -> LieAlgebra:
    """AlgebraDocument -> (Graded)LieAlgebra; ungraded when ``degrees`` is absent."""
    dim = _field(doc, "dim", "algebra", int)
    if dim < 0:
        raise DocumentError("algebra.dim: must be non-negative")
    degrees = _field(doc, "degrees", "algebra", list, default=None)
    names = _field(doc, "basis_names", "algebra", list, default=None) or ()
    brackets = {}
    for n, entry in enumerate(_field(doc, "brackets", "algebra", list, default=[])):
        where = f"algebra.brackets[{n}]"
        i = _field(entry, "i", where, int)
        j = _field(entry, "j", where, int)
        if not (1 <= i < j <= dim):
            raise DocumentError(f"{where}: need 1 <= i < j <= dim, got i={i}, j={j}")
        terms = {}
        for t, term in enumerate(_field(entry, "terms", where, list)):
            k = _field(term, "k", f"{where}.terms[{t}]", int)
            if not 1 <= k <= dim:
                raise DocumentError(f"{where}.terms[{t}]: k={k} out of range")
            c = parse_rational(term, f"{where}.terms[{t}]")
            terms[k - 1] = terms.get(k - 1, Fraction(0)) + c
        if (i - 1, j - 1) in brackets:
            raise DocumentError(f"{where}: pair ({i}, {j}) repeated")
        brackets[(i - 1, j - 1)] = terms
    if degrees is None:
        return LieAlgebra(dim, brackets, tuple(names))
    if len(degrees) != dim or not all(isinstance(d, int) and not isinstance(d, bool) for d in degrees):
        raise DocumentError("algebra.degrees: need one integer per basis element")
    if any(d >= 0 for d in degrees):
        raise DocumentError("algebra.degrees: degrees must be negative")
    return GradedLieAlgebra(dim, brackets, tuple(names), tuple(degrees))


def parse_vector(raw, n, where) -> tuple:
    if not isinstance(raw, list) or len(raw) != n:
        raise DocumentError(f"{where}: expected a list of {n} rationals")
    return tuple(parse_rational(a, f"{where}[{i}]") for i, a in enumerate(raw))


def parse_subspace(doc, dim: int, where="subspace") -> Subspace:
    """``{"span": [1-based indices]}`` or ``{"vectors": [[...], ...]}``."""
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object")
    amb = doc.get("ambient_dim", dim)
    if amb != dim:
        raise DocumentError(f"{where}: ambient_dim {amb} does not match algebra dim {dim}")
    vectors = []
    for idx in doc.get("span", []):
        if not isinstance(idx, int) or not 1 <= idx <= dim:
            raise DocumentError(f"{where}.span: index {idx!r} out of range")
        vectors.append(la.unit_vector(dim, idx - 1))
    for n, raw in enumerate(doc.get("vectors", [])):
        vectors.append(parse_vector(raw, dim, f"{where}.vectors[{n}]"))
    if "span" not in doc and "vectors" not in doc:
        raise DocumentError(f"{where}: needs 'span' or 'vectors'")
    return Subspace.span(vectors, dim)


def parse_matrix(raw, rows, cols, where) -> Matrix:
    if not isinstance(raw, list) or len(raw) != rows:
        raise DocumentError(f"{where}: expected {rows} rows")
    return Matrix.from_rows([parse_vector(r, cols, f"{where}[{i}]") for i, r in enumerate(raw)], cols)


def parse_g0(doc, dim: int) -> list:
    """``{"maps": [n x n matrices]}``; entry ``[i][j]`` is the i-th coordinate of ``u(e_j)``."""
    maps = _field(doc, "maps", "g0", list)
    return [parse_matrix(m, dim, dim, f"g0.maps[{n}]") for n, m in enumerate(maps)]


def parse_hom(doc):
    from .spencer import HomSubspace

    dimV = _field(doc, "dimV", "hom", int)
    dimW = _field(doc, "dimW", "hom", int)
    basis = _field(doc, "basis", "hom", list)
    mats = [parse_matrix(m, dimW, dimV, f"hom.basis[{n}]") for n, m in enumerate(basis)]
    return HomSubspace.span(mats, dimV, dimW)


def parse_multi_index(text: str, where: str) -> tuple:
    try:
        vals = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise DocumentError(f"{where}: expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise DocumentError(f"{where}: expected non-negative integers")
    return vals


# ---------------------------------------------------------------------------
# report fragments
# ---------------------------------------------------------------------------


def subspace_out(s: Subspace) -> list:
    return [vector_out(b) for b in s.basis]


def named_span(alg: LieAlgebra, s) -> list:
    """Subspace basis written with basis names (unit vectors become plain names)."""
    space = s.space if isinstance(s, GradedSubspace) else s
    out = []
    for b in space.basis:
        nz = [(i, c) for i, c in enumerate(b) if c]
        if len(nz) == 1 and nz[0][1] == 1:
            out.append(alg.names[nz[0][0]])
        else:
            out.append(" + ".join(f"{c}*{alg.names[i]}" for i, c in nz))
    return out


def degree_table(dims: dict) -> list:
    return [{"degree": d, "dim": n} for d, n in sorted(dims.items())]


def prolongation_out(r, with_basis=False) -> dict:
    from .prolongation import a_subspace, h_slices

    out = {
        "mode": r.constraints.mode,
        "status": r.status,
        "stop_degree": r.stop_degree,
        "max_degree": r.max_degree,
        "generation_depth": r.generation_depth,
        "dims": degree_table(r.dims),
        "total_dim": r.total_dim,
    }
    if r.warnings:
        out["warnings"] = list(r.warnings)
    hs = h_slices(r)
    out["h_slices"] = degree_table(hs.dims)
    out["a_subspace_dim"] = a_subspace(r, hs).dim
    if with_basis:
        out["basis"] = [
            {"degree": c.k, "maps": [[vector_out(img) for img in u] for u in c.images]}
            for c in r.components
        ]
    return out


def certificate_out(c) -> dict:
    m = c.symbol.m
    return {
        "verdict": c.verdict,
        "generating": c.symbol.generating,
        "levi": {
            "left_kernel": named_span(m, c.levi.left),
            "right_kernel": named_span(m, c.levi.right),
            "nondegenerate": c.levi.nondegenerate,
        },
        "notes": list(c.notes),
        "prolongation": prolongation_out(c.prolongation),
    }


def write_algebra(alg: LieAlgebra, path) -> None:
    Path(path).write_text(json.dumps(alg.to_document(), indent=2) + "\n", encoding="utf-8")
