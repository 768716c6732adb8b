"""JSON input documents: parsing with located diagnostics, and serialization.

Every document is one JSON object.  Rationals are JSON integers or strings of
the form ``"p"`` / ``"p/q"``.  Products are sparse lists ``[i, j, k, c]``
meaning ``mu(e_i, e_j)`` has coefficient ``c`` on ``e_k``; matrices are dense
row-major lists of rationals.

Parsing never raises: it returns either a document or a list of
:class:`ParseIssue` objects, each carrying one of the codes below.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import exactlin as el
from .bimod import CompatibleBimodule
from .cochain import CompatibleCochain
from .homalg import CompatibleHomAlgebra, MultilinearMap

E_IO = "E_IO"
E_ENCODING = "E_ENCODING"
E_JSON = "E_JSON"
E_SCHEMA = "E_SCHEMA"
E_RATIONAL = "E_RATIONAL"
E_ZERO_DENOM = "E_ZERO_DENOM"
E_INDEX = "E_INDEX"
E_DIM = "E_DIM"

KINDS = ("algebra", "bimodule", "cochain", "deformation", "extension")
MAX_DIM = 64
MAX_DEGREE = 8
MAX_ORDER = 16

_RATIONAL = re.compile(r"\s*[+-]?\d+(?:\s*/\s*\d+)?\s*\Z")


@dataclass(frozen=True)
class ParseIssue:
    code: str
    location: str
    message: str

    def to_json(self) -> dict:
        return {"code": self.code, "location": self.location, "message": self.message}

    def __str__(self):
        return f"{self.code} at {self.location or '<root>'}: {self.message}"


@dataclass
class InputDocument:
    kind: str
    payload: dict
    source: str | None = None


@dataclass
class ParseResult:
    document: InputDocument | None = None
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.document is not None and not self.issues


class _Fail(Exception):
    def __init__(self, issue: ParseIssue):
        super().__init__(str(issue))
        self.issue = issue


def _fail(code, loc, msg):
    raise _Fail(ParseIssue(code, loc, msg))


def _join(loc: str, key) -> str:
    return f"{loc}[{key}]" if isinstance(key, int) else (f"{loc}.{key}" if loc else str(key))


# -- primitive readers -------------------------------------------------------

def _rational(x, loc) -> Fraction:
    if isinstance(x, bool):
        _fail(E_RATIONAL, loc, "booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if not _RATIONAL.match(x):
            _fail(E_RATIONAL, loc, f"{x!r} is not an integer or p/q string")
        num, _, den = x.replace(" ", "").partition("/")
        if den and int(den) == 0:
            _fail(E_ZERO_DENOM, loc, f"{x!r} has a zero denominator")
        return Fraction(int(num), int(den) if den else 1)
    _fail(E_RATIONAL, loc, f"expected an integer or rational string, got {type(x).__name__}")


def _int(x, loc, lo=None, hi=None, code=E_SCHEMA) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        _fail(E_SCHEMA, loc, "expected an integer")
    if (lo is not None and x < lo) or (hi is not None and x > hi):
        _fail(code, loc, f"{x} outside the allowed range {lo}..{hi}")
    return x


def _obj(x, loc) -> dict:
    if not isinstance(x, dict):
        _fail(E_SCHEMA, loc, "expected a JSON object")
    return x


def _list(x, loc) -> list:
    if not isinstance(x, list):
        _fail(E_SCHEMA, loc, "expected a JSON array")
    return x


def _get(d: dict, key, loc, required=True):
    if key not in d:
        if required:
            _fail(E_SCHEMA, _join(loc, key), "missing field")
        return None
    return d[key]


def _dim(x, loc) -> int:
    return _int(x, loc, 1, MAX_DIM, code=E_DIM)


def _matrix(x, rows, cols, loc) -> np.ndarray:
    x = _list(x, loc)
    if len(x) != rows:
        _fail(E_DIM, loc, f"expected {rows} rows, got {len(x)}")
    out = el.zeros(rows, cols)
    for i, row in enumerate(x):
        rl = _join(loc, i)
        row = _list(row, rl)
        if len(row) != cols:
            _fail(E_DIM, rl, f"expected {cols} columns, got {len(row)}")
        for j, v in enumerate(row):
            out[i, j] = _rational(v, _join(rl, j))
    return out


def _sparse(x, dims: tuple, loc) -> MultilinearMap:
    """``dims`` lists the input dims followed by the output dim."""
    x = _list(x, loc)
    out = el.zeros(*dims)
    for n, entry in enumerate(x):
        l = _join(loc, n)
        entry = _list(entry, l)
        if len(entry) != len(dims) + 1:
            _fail(E_DIM, l, f"expected {len(dims)} indices and a coefficient")
        idx = []
        for p, (i, d) in enumerate(zip(entry[:-1], dims)):
            il = _join(l, p)
            i = _int(i, il)
            if not 0 <= i < d:
                _fail(E_INDEX, il, f"index {i} out of range 0..{d - 1}")
            idx.append(i)
        out[tuple(idx)] += _rational(entry[-1], _join(l, len(dims)))
    return MultilinearMap(out)


# -- document readers --------------------------------------------------------

def _algebra(d, loc) -> CompatibleHomAlgebra:
    d = _obj(d, loc)
    n = _dim(_get(d, "dim", loc), _join(loc, "dim"))
    if "mu1" not in d and "mu" in d:
        mu1 = _sparse(d["mu"], (n, n, n), _join(loc, "mu"))
    else:
        mu1 = _sparse(_get(d, "mu1", loc), (n, n, n), _join(loc, "mu1"))
    mu2 = (_sparse(d["mu2"], (n, n, n), _join(loc, "mu2")) if "mu2" in d
           else MultilinearMap.zero((n, n), n))
    alpha = (_matrix(d["alpha"], n, n, _join(loc, "alpha")) if "alpha" in d
             else el.identity(n))
    return CompatibleHomAlgebra(mu1, mu2, alpha, check=False)


def _bimodule(d, loc) -> CompatibleBimodule:
    d = _obj(d, loc)
    A = _algebra(_get(d, "algebra", loc), _join(loc, "algebra"))
    m = _dim(_get(d, "dim", loc), _join(loc, "dim"))
    n = A.dim
    acts = {}
    for name, dims in (("l1", (n, m, m)), ("r1", (m, n, m)), ("l2", (n, m, m)), ("r2", (m, n, m))):
        acts[name] = (_sparse(d[name], dims, _join(loc, name)) if name in d
                      else MultilinearMap(el.zeros(*dims)))
    beta = _matrix(d["beta"], m, m, _join(loc, "beta")) if "beta" in d else el.identity(m)
    return CompatibleBimodule(A, acts["l1"], acts["r1"], acts["l2"], acts["r2"], beta, check=False)


def _cochain(d, dimA, dimM, loc, degree=None) -> CompatibleCochain:
    d = _obj(d, loc)
    n = _int(_get(d, "degree", loc), _join(loc, "degree"), 1, MAX_DEGREE, code=E_DIM)
    if degree is not None and n != degree:
        _fail(E_DIM, _join(loc, "degree"), f"expected degree {degree}, got {n}")
    if dimM * dimA ** n > 10 ** 6:
        _fail(E_DIM, loc, "cochain tensor is too large")
    parts = _list(_get(d, "parts", loc), _join(loc, "parts"))
    if len(parts) != n:
        _fail(E_DIM, _join(loc, "parts"), f"a degree-{n} compatible cochain has {n} parts")
    dims = (dimA,) * n + (dimM,)
    return CompatibleCochain(tuple(_sparse(p, dims, _join(_join(loc, "parts"), i))
                                   for i, p in enumerate(parts)))


def _jet_list(x, loc, read):
    out = {}
    for n, item in enumerate(_list(x, loc)):
        l = _join(loc, n)
        item = _list(item, l)
        if len(item) != 2:
            _fail(E_SCHEMA, l, "expected [order, value]")
        k = _int(item[0], _join(l, 0), 1, MAX_ORDER, code=E_INDEX)
        if k in out:
            _fail(E_SCHEMA, _join(l, 0), f"order {k} given twice")
        out[k] = read(item[1], _join(l, 1))
    return out


def _deformation(d, loc) -> dict:
    d = _obj(d, loc)
    A = _algebra(_get(d, "base", loc), _join(loc, "base"))
    n = A.dim
    jets = _obj(_get(d, "jets", loc, required=False) or {}, _join(loc, "jets"))
    jl = _join(loc, "jets")
    read_mu = lambda v, l: _sparse(v, (n, n, n), l)
    mu1 = _jet_list(jets.get("mu1", []), _join(jl, "mu1"), read_mu)
    mu2 = _jet_list(jets.get("mu2", []), _join(jl, "mu2"), read_mu)
    alpha = _jet_list(jets.get("alpha", []), _join(jl, "alpha"), lambda v, l: _matrix(v, n, n, l))
    top = max([0, *mu1, *mu2, *alpha])
    order = d.get("order")
    if order is None:
        order = top
    else:
        order = _int(order, _join(loc, "order"), 0, MAX_ORDER, code=E_DIM)
        if order < top:
            _fail(E_DIM, _join(loc, "order"), f"jets of order {top} exceed the declared order {order}")
    z = MultilinearMap.zero((n, n), n)
    return {
        "base": A,
        "mu1": [mu1.get(k, z) for k in range(1, order + 1)],
        "mu2": [mu2.get(k, z) for k in range(1, order + 1)],
        "alpha": [alpha.get(k, el.zeros(n, n)) for k in range(1, order + 1)],
    }


def _module_for(d, loc, A):
    if "bimodule" in d:
        M = _bimodule(d["bimodule"], _join(loc, "bimodule"))
        if not _same_algebra(M.algebra, A):
            _fail(E_SCHEMA, _join(loc, "bimodule"), "bimodule is over a different algebra")
        return M
    return CompatibleBimodule.adjoint(A)


def _same_algebra(a, b) -> bool:
    return a.mu1 == b.mu1 and a.mu2 == b.mu2 and bool(np.all(a.alpha == b.alpha))


def _extension(d, loc) -> dict:
    d = _obj(d, loc)
    A = _algebra(_get(d, "algebra", loc), _join(loc, "algebra"))
    M = _module_for(d, loc, A)
    out = {"algebra": A, "bimodule": M}
    for key in ("cocycle", "compare"):
        if key in d:
            out[key] = _cochain(d[key], A.dim, M.dim, _join(loc, key), degree=2)
    if "cocycle" not in out:
        _fail(E_SCHEMA, _join(loc, "cocycle"), "missing field")
    return out


def _read_payload(kind, d) -> dict:
    if kind == "algebra":
        return {"algebra": _algebra(d, "")}
    if kind == "bimodule":
        M = _bimodule(d, "")
        return {"algebra": M.algebra, "bimodule": M}
    if kind == "cochain":
        if "bimodule" in d:
            M = _bimodule(d["bimodule"], "bimodule")
            A = M.algebra
        else:
            A = _algebra(_get(d, "algebra", ""), "algebra")
            M = CompatibleBimodule.adjoint(A)
        return {"algebra": A, "bimodule": M, "cochain": _cochain(d, A.dim, M.dim, "")}
    if kind == "deformation":
        return _deformation(d, "")
    return _extension(d, "")


def parse_text(text: str, source: str | None = None, expect: tuple | None = None) -> ParseResult:
    try:
        raw = json.loads(text)
    except (ValueError, RecursionError) as exc:
        return ParseResult(issues=[ParseIssue(E_JSON, "", f"malformed JSON: {exc}")])
    try:
        d = _obj(raw, "")
        kind = _get(d, "kind", "")
        if kind not in KINDS:
            _fail(E_SCHEMA, "kind", f"kind must be one of {', '.join(KINDS)}")
        if expect is not None and kind not in expect:
            _fail(E_SCHEMA, "kind", f"this command needs a document of kind {' or '.join(expect)}")
        return ParseResult(InputDocument(kind, _read_payload(kind, d), source))
    except _Fail as f:
        return ParseResult(issues=[f.issue])
    except RecursionError:
        return ParseResult(issues=[ParseIssue(E_SCHEMA, "", "document nested too deeply")])
    except MemoryError:
        return ParseResult(issues=[ParseIssue(E_DIM, "", "document too large")])


def parse_bytes(data: bytes, source: str | None = None, expect: tuple | None = None) -> ParseResult:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        return ParseResult(issues=[ParseIssue(E_ENCODING, "", f"input is not UTF-8: {exc.reason}")])
    return parse_text(text, source, expect)


def parse_document(path: str, expect: tuple | None = None) -> ParseResult:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        return ParseResult(issues=[ParseIssue(E_IO, "", f"cannot read {path}: {exc.strerror}")])
    return parse_bytes(data, path, expect)


# -- serialization -------------------------------------------------------------

def q(x) -> str:
    return str(Fraction(x))


def matrix_json(m) -> list:
    return [[q(x) for x in row] for row in np.asarray(m)]


def map_json(f: MultilinearMap) -> list:
    return [[*map(int, idx), q(x)] for idx, x in f.nonzero_entries()]


def cochain_json(c: CompatibleCochain) -> dict:
    return {"degree": c.degree, "parts": [map_json(p) for p in c.parts]}


def algebra_json(A: CompatibleHomAlgebra) -> dict:
    return {"kind": "algebra", "dim": A.dim, "mu1": map_json(A.mu1), "mu2": map_json(A.mu2),
            "alpha": matrix_json(A.alpha)}


def bimodule_json(M: CompatibleBimodule) -> dict:
    return {"kind": "bimodule", "algebra": algebra_json(M.algebra), "dim": M.dim,
            "l1": map_json(M.l1), "r1": map_json(M.r1), "l2": map_json(M.l2),
            "r2": map_json(M.r2), "beta": matrix_json(M.beta)}


def deformation_json(base: CompatibleHomAlgebra, mu1: list, mu2: list, alpha: list) -> dict:
    return {"kind": "deformation", "base": algebra_json(base), "order": len(mu1),
            "jets": {"mu1": [[k + 1, map_json(j)] for k, j in enumerate(mu1)],
                     "mu2": [[k + 1, map_json(j)] for k, j in enumerate(mu2)],
                     "alpha": [[k + 1, matrix_json(a)] for k, a in enumerate(alpha)]}}


def to_plain(x: Any):
    """Recursively convert Fractions and arrays into JSON-ready values."""
    if isinstance(x, Fraction):
        return q(x)
    if isinstance(x, np.ndarray):
        return to_plain(x.tolist())
    if isinstance(x, MultilinearMap):
        return map_json(x)
    if isinstance(x, CompatibleCochain):
        return cochain_json(x)
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x
