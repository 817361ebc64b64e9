"""JSON fixtures: algebra files, form files, torsion files, and reports.

Files use 1-based indices; everything in memory is 0-based.  Floats are
written with 17 significant digits so that a write/read cycle is exact.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from .errors import SchemaError, TorsionKitError
from .exterior import KForm, MAX_DIM
from .lie import MetricLieAlgebra
from .torsion import TorsionTensor


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if s in ("-0", "0"):
        return "0.0" if s == "0" else "-0.0"
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj, out: list, indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for n, (k, v) in enumerate(items):
            out.append(f"{pad}{json.dumps(str(k), ensure_ascii=False)}: ")
            _emit(v, out, indent, level + 1)
            out.append(",\n" if n + 1 < len(items) else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
        elif all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            parts = []
            for v in seq:
                buf = []
                _emit(v, buf, indent, level + 1)
                parts.append("".join(buf))
            out.append("[" + ", ".join(parts) + "]")
        else:
            out.append("[\n")
            for n, v in enumerate(seq):
                out.append(pad)
                _emit(v, out, indent, level + 1)
                out.append(",\n" if n + 1 < len(seq) else "\n")
            out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text; key order is insertion order."""
    out = []
    _emit(obj, out, indent, 0)
    return "".join(out) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def load(path: str):
    """Parse a JSON file; returns ``(object, sha256)``."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SchemaError(exc.strerror or str(exc), path) from None
    try:
        return json.loads(raw.decode("utf-8")), sha256_bytes(raw)
    except UnicodeDecodeError:
        raise SchemaError("file is not UTF-8", path) from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                          path) from None


# -- field validation ---------------------------------------------------------

def _int(v, where: str, lo: int = 0, hi: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"expected an integer, got {json.dumps(v)}", where)
    if v < lo or (hi is not None and v > hi):
        bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise SchemaError(f"value {v} out of range {bound}", where)
    return v


def _num(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SchemaError(f"expected a finite number, got {json.dumps(v)}", where)
    return float(v)


def _obj(v, where: str, required) -> dict:
    if not isinstance(v, dict):
        raise SchemaError("expected a JSON object", where)
    for key in required:
        if key not in v:
            raise SchemaError(f"missing field '{key}'", where)
    return v


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        raise SchemaError("expected a list", where)
    return v


# -- forms --------------------------------------------------------------------

def parse_form(obj, where: str = "form") -> KForm:
    obj = _obj(obj, where, ("dim", "degree", "coeffs"))
    n = _int(obj["dim"], f"{where}.dim", 0, MAX_DIM)
    k = _int(obj["degree"], f"{where}.degree", 0, n)
    coeffs = {}
    for row, entry in enumerate(_list(obj["coeffs"], f"{where}.coeffs")):
        at = f"{where}.coeffs[{row}]"
        entry = _list(entry, at)
        if len(entry) != k + 1:
            raise SchemaError(f"expected {k} indices and a value, got {len(entry)} items", at)
        idx = tuple(_int(i, f"{at}[{p}]", 1, n) - 1 for p, i in enumerate(entry[:k]))
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise SchemaError("multi-index must be strictly increasing", at)
        if idx in coeffs:
            raise SchemaError(f"duplicate multi-index {[i + 1 for i in idx]}", at)
        coeffs[idx] = _num(entry[k], f"{at}[{k}]")
    return KForm.from_coeffs(n, k, coeffs)


def form_to_obj(form: KForm) -> dict:
    rows = [[*(i + 1 for i in idx), float(v)] for idx, v in form.coeffs.items() if v != 0.0]
    return {"dim": form.dim, "degree": form.degree, "coeffs": rows}


# -- algebras -----------------------------------------------------------------

def _orthonormalize(c: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Structure constants in a basis orthonormal for ``gram`` (Gram-Schmidt order)."""
    low = np.linalg.cholesky(gram)
    p = np.linalg.inv(low).T
    pinv = np.linalg.inv(p)
    return np.einsum("ia,jb,ijk,ck->abc", p, p, c, pinv, optimize=True)


def parse_algebra(obj, where: str = "algebra") -> MetricLieAlgebra:
    """Optional ``gram`` (row-major ``dim x dim``) is the metric of the given
    basis; the algebra is then rewritten in its Gram-Schmidt orthonormalization."""
    obj = _obj(obj, where, ("dim", "c"))
    n = _int(obj["dim"], f"{where}.dim", 0, MAX_DIM)
    c = np.zeros((n, n, n))
    seen = set()
    for row, entry in enumerate(_list(obj["c"], f"{where}.c")):
        at = f"{where}.c[{row}]"
        entry = _list(entry, at)
        if len(entry) != 4:
            raise SchemaError(f"expected [i, j, k, value], got {len(entry)} items", at)
        i, j, k = (_int(v, f"{at}[{p}]", 1, n) - 1 for p, v in enumerate(entry[:3]))
        value = _num(entry[3], f"{at}[3]")
        if i == j:
            if value != 0.0:
                raise SchemaError("c_ii^k must vanish", at)
            continue
        key = (min(i, j), max(i, j), k)
        if key in seen:
            raise SchemaError(f"duplicate entry for ({i + 1}, {j + 1}, {k + 1})", at)
        seen.add(key)
        c[i, j, k] = value
        c[j, i, k] = -value
    if "gram" in obj:
        gram = np.array([[_num(v, f"{where}.gram[{r}][{s}]") for s, v in
                          enumerate(_list(line, f"{where}.gram[{r}]"))]
                         for r, line in enumerate(_list(obj["gram"], f"{where}.gram"))])
        if gram.shape != (n, n) or not np.allclose(gram, gram.T):
            raise SchemaError("gram must be a symmetric dim x dim matrix", f"{where}.gram")
        try:
            c = _orthonormalize(c, gram)
        except np.linalg.LinAlgError:
            raise SchemaError("gram is not positive definite", f"{where}.gram") from None
        c = 0.5 * (c - np.transpose(c, (1, 0, 2)))
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("expected a string", f"{where}.name")
    try:
        return MetricLieAlgebra(c, name)
    except TorsionKitError as exc:
        raise SchemaError(str(exc), where) from None


def algebra_to_obj(alg: MetricLieAlgebra) -> dict:
    n = alg.dim
    s = alg.structure
    rows = [[i + 1, j + 1, k + 1, float(s[i, j, k])]
            for i in range(n) for j in range(i + 1, n) for k in range(n) if s[i, j, k] != 0.0]
    return {"dim": n, "c": rows, "name": alg.name}


# -- torsion ------------------------------------------------------------------

def parse_torsion(obj, where: str = "torsion") -> TorsionTensor:
    """A list of ``n`` 2-form files (slice ``i`` is ``T(e_i)``), bare or under ``slices``."""
    if isinstance(obj, dict):
        obj = _obj(obj, where, ("slices",))["slices"]
        where = f"{where}.slices"
    forms = [parse_form(f, f"{where}[{i}]") for i, f in enumerate(_list(obj, where))]
    n = len(forms)
    for i, f in enumerate(forms):
        if f.degree != 2 or f.dim != n:
            raise SchemaError(f"slice must be a 2-form on R^{n}", f"{where}[{i}]")
    return TorsionTensor.from_slices(forms)


def torsion_to_obj(t: TorsionTensor) -> list:
    return [form_to_obj(f) for f in t.slices]
