"""Reading module documents and rendering result documents.

Inputs are JSON; matrices are arrays of rows whose entries are rational
strings such as ``"3"`` or ``"-1/2"`` (plain integers are accepted, floats
are not).  Errors carry the line and column of the offending value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from json.decoder import scanstring

from .errors import DomainError, ParseError
from .fields import Field
from .linalg import Matrix
from .quiver import Arrow, Quiver, QuiverRep

_WS = " \t\r\n"


# ---------------------------------------------------------------------------
# locating values in the raw text


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def _walk(text: str, i: int, path: tuple, out: dict, decoder: json.JSONDecoder) -> int:
    i = _skip_ws(text, i)
    out[path] = i
    ch = text[i]
    if ch == "{":
        i = _skip_ws(text, i + 1)
        if text[i] == "}":
            return i + 1
        while True:
            key, i = scanstring(text, i + 1)
            i = _skip_ws(text, i) + 1  # the colon
            i = _skip_ws(text, _walk(text, i, path + (key,), out, decoder))
            if text[i] == "}":
                return i + 1
            i = _skip_ws(text, i + 1)
    if ch == "[":
        i = _skip_ws(text, i + 1)
        if text[i] == "]":
            return i + 1
        k = 0
        while True:
            i = _skip_ws(text, _walk(text, i, path + (k,), out, decoder))
            k += 1
            if text[i] == "]":
                return i + 1
            i += 1
    _, end = decoder.raw_decode(text, i)
    return end


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


@dataclass
class Document:
    """A parsed JSON document that can report where a value came from."""

    text: str
    data: object
    _offsets: dict | None = None

    def where(self, path: tuple) -> tuple[int | None, int | None]:
        if self._offsets is None:
            self._offsets = {}
            _walk(self.text, 0, (), self._offsets, json.JSONDecoder())
        while path and path not in self._offsets:
            path = path[:-1]
        off = self._offsets.get(path)
        return _line_col(self.text, off) if off is not None else (None, None)

    def error(self, message: str, path: tuple) -> ParseError:
        line, col = self.where(path)
        where = "/".join(str(p) for p in path)
        return ParseError(f"{message} at {where or 'document root'}", line, col)

    def get(self, path: tuple, default=None):
        node = self.data
        for p in path:
            try:
                node = node[p]
            except (KeyError, IndexError, TypeError):
                return default
        return node


def load_document(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    return Document(text, data)


def read_document(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8") from exc
    return load_document(text)


# ---------------------------------------------------------------------------
# matrices and representations


def parse_scalar(doc: Document, field: Field, value, path: tuple):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise doc.error(f"matrix entries must be rational strings, got {json.dumps(value)}", path)
    try:
        return field(value)
    except (DomainError, ParseError, ValueError, ZeroDivisionError) as exc:
        raise doc.error(f"bad matrix entry {value!r}: {exc}", path) from None


def parse_matrix(doc: Document, field: Field, path: tuple, ncols: int | None = None,
                 nrows: int | None = None) -> Matrix:
    raw = doc.get(path)
    if not isinstance(raw, list):
        raise doc.error("a matrix must be an array of rows", path)
    if nrows is not None and len(raw) != nrows:
        raise doc.error(f"matrix has {len(raw)} rows, expected {nrows}", path)
    rows = []
    for r, row in enumerate(raw):
        if not isinstance(row, list):
            raise doc.error(f"row {r} is not an array", path + (r,))
        if ncols is None:
            ncols = len(row)
        if len(row) != ncols:
            raise doc.error(f"row {r} has {len(row)} entries, expected {ncols}", path + (r,))
        rows.append([parse_scalar(doc, field, x, path + (r, c)) for c, x in enumerate(row)])
    if ncols is None:
        raise doc.error("an empty matrix needs its column count from the surrounding dims", path)
    return Matrix(field, rows, ncols)


def parse_dims(doc: Document, path: tuple, length: int | None = None) -> tuple[int, ...] | None:
    raw = doc.get(path)
    if raw is None:
        return None
    if not isinstance(raw, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0
                                            for x in raw):
        raise doc.error("dims must be an array of non-negative integers", path)
    if length is not None and len(raw) != length:
        raise doc.error(f"dims has {len(raw)} entries, expected {length}", path)
    return tuple(raw)


def parse_quiver(doc: Document, path: tuple) -> Quiver:
    raw = doc.get(path)
    if not isinstance(raw, dict):
        raise doc.error("quiver must be an object with 'vertices' and 'arrows'", path)
    n = raw.get("vertices")
    if not isinstance(n, int) or n < 1:
        raise doc.error("quiver 'vertices' must be a positive integer", path + ("vertices",))
    arrows = []
    for k, a in enumerate(raw.get("arrows", [])):
        p = path + ("arrows", k)
        if not isinstance(a, dict) or not {"id", "src", "dst"} <= set(a):
            raise doc.error("arrow needs 'id', 'src' and 'dst'", p)
        arrows.append(Arrow(str(a["id"]), a["src"], a["dst"]))
    try:
        return Quiver(n, tuple(arrows))
    except ValueError as exc:
        raise doc.error(str(exc), path) from None


def parse_rep(doc: Document, quiver: Quiver, field: Field, path: tuple) -> QuiverRep:
    raw = doc.get(path)
    if not isinstance(raw, dict):
        raise doc.error("a representation must be an object with 'dims' and 'mats'", path)
    dims = parse_dims(doc, path + ("dims",), quiver.vertex_count)
    if dims is None:
        raise doc.error("representation needs 'dims'", path)
    mats = raw.get("mats", {})
    if not isinstance(mats, dict):
        raise doc.error("'mats' must map arrow ids to matrices", path + ("mats",))
    out = {}
    for a in quiver.arrows:
        if a.id in mats:
            out[a.id] = parse_matrix(doc, field, path + ("mats", a.id),
                                     ncols=dims[a.source - 1], nrows=dims[a.target - 1])
    unknown = set(mats) - {a.id for a in quiver.arrows}
    if unknown:
        raise doc.error(f"unknown arrow ids {sorted(unknown)}", path + ("mats",))
    return QuiverRep.from_dict(quiver, field, dims, out)


# ---------------------------------------------------------------------------
# output


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def render_rep(rep: QuiverRep) -> dict:
    f = rep.field
    return {"dims": list(rep.dims),
            "mats": {a.id: [[f.render(x) for x in row] for row in m.rows]
                     for a, m in zip(rep.quiver.arrows, rep.mats)}}


def render_matrix(m: Matrix) -> list:
    return [[m.field.render(x) for x in row] for row in m.rows]


_LABEL_RE = re.compile(r"^\s*(P|I|R|J)(\d+)(?:\(([^)]*)\))?\s*$")
_INTERVAL_RE = re.compile(r"^\s*I\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def split_label(text: str):
    """``"R2(1/2)"`` -> ``("R", 2, "1/2")``; ``"I(2,4)"`` -> ``("interval", 2, 4)``."""
    m = _INTERVAL_RE.match(text)
    if m:
        return ("interval", int(m.group(1)), int(m.group(2)))
    m = _LABEL_RE.match(text)
    if not m:
        raise ParseError(f"cannot read label {text!r}")
    return (m.group(1), int(m.group(2)), m.group(3))
