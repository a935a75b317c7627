"""Input parsing and JSON output.

Parsers raise :class:`InputError` carrying the file, line and column of the
first malformed field.  Floating output is rounded to 12 significant
digits; network lengths are recomputed from the rounded coordinates so an
emitted file verifies against itself.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .graphs import TreeTopology
from .plane import PlaneNetwork

DIGITS = 12


class InputError(ValueError):
    def __init__(self, path, line: int | None, column: int | None, message: str):
        self.path, self.line, self.column = str(path), line, column
        where = str(path)
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


def r12(x) -> float:
    """Round to 12 significant digits."""
    x = float(x)
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{DIGITS}g}")


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(path, None, None, f"cannot read file ({exc.strerror})") from None


def _fields(line: str):
    """Comma separated fields with their 1-based starting columns."""
    out = []
    col = 1
    for part in line.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), col + lead))
        col += len(part) + 1
    return out


def _number(text: str, path, line, col, exact: bool):
    try:
        v = Fraction(text) if exact else float(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(path, line, col, f"expected a number, got {text!r}") from None
    if not exact and not math.isfinite(v):
        raise InputError(path, line, col, f"non-finite number {text!r}")
    return v


def _content_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].rstrip()
        if s.strip():
            yield i, s


def read_points(path) -> np.ndarray:
    """``x,y`` per line, or JSON ``{"points": [[x, y], ...]}``."""
    text = _read(path)
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(path, exc.lineno, exc.colno, exc.msg) from None
        pts = data.get("points") if isinstance(data, dict) else None
        if not isinstance(pts, list):
            raise InputError(path, None, None, 'expected an object with a "points" list')
        out = []
        for k, p in enumerate(pts):
            if not (isinstance(p, list) and len(p) == 2 and all(isinstance(c, (int, float)) for c in p)):
                raise InputError(path, None, None, f"point {k} is not a pair of numbers")
            out.append([float(p[0]), float(p[1])])
        arr = np.array(out, dtype=float).reshape(-1, 2)
    else:
        rows = []
        for ln, s in _content_lines(text):
            f = _fields(s)
            if len(f) != 2:
                raise InputError(path, ln, 1, f"expected 2 fields 'x,y', got {len(f)}")
            rows.append([_number(t, path, ln, c, False) for t, c in f])
        arr = np.array(rows, dtype=float).reshape(-1, 2)
    if len(arr) < 2:
        raise InputError(path, None, None, "need at least two points")
    return arr


def read_matrix(path, exact: bool = True):
    """Square distance matrix CSV with an optional label header row.

    Entries are parsed as ``Fraction`` (exact decimals) unless ``exact`` is off.
    Returns ``(rows, labels)``.
    """
    text = _read(path)
    lines = list(_content_lines(text))
    if not lines:
        raise InputError(path, None, None, "empty matrix file")
    labels = None
    first_ln, first = lines[0]
    ff = _fields(first)
    try:
        [Fraction(t) for t, _ in ff]
    except (ValueError, ZeroDivisionError):
        labels = [t for t, _ in ff]
        lines = lines[1:]
    rows = []
    for ln, s in lines:
        f = _fields(s)
        rows.append([_number(t, path, ln, c, exact) for t, c in f])
    n = len(rows)
    for (ln, s), r in zip(lines, rows):
        if len(r) != n:
            raise InputError(path, ln, None, f"row has {len(r)} entries, expected {n} (square matrix)")
    if labels is not None and len(labels) != n:
        raise InputError(path, first_ln, None, f"{len(labels)} labels for a {n}x{n} matrix")
    return rows, labels


def read_graph(path):
    """``n=<count>`` then ``u,v,weight`` lines; returns ``(n, edges)``."""
    text = _read(path)
    lines = list(_content_lines(text))
    if not lines:
        raise InputError(path, None, None, "empty graph file")
    ln, head = lines[0]
    head = head.strip()
    if not head.startswith("n="):
        raise InputError(path, ln, 1, "first line must be 'n=<count>'")
    try:
        n = int(head[2:])
    except ValueError:
        raise InputError(path, ln, 3, f"bad vertex count {head[2:]!r}") from None
    edges = []
    for ln, s in lines[1:]:
        f = _fields(s)
        if len(f) != 3:
            raise InputError(path, ln, 1, f"expected 'u,v,weight', got {len(f)} fields")
        try:
            u, v = int(f[0][0]), int(f[1][0])
        except ValueError:
            raise InputError(path, ln, f[0][1], "vertex ids must be integers") from None
        for x, (_, c) in ((u, f[0]), (v, f[1])):
            if not 0 <= x < n:
                raise InputError(path, ln, c, f"vertex {x} outside 0..{n - 1}")
        w = _number(f[2][0], path, ln, f[2][1], True)
        if w.denominator == 1:
            w = int(w)
        edges.append((u, v, w))
    return n, edges


def _load_json(path):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(path, exc.lineno, exc.colno, exc.msg) from None


def read_topology(path) -> TreeTopology:
    data = _load_json(path)
    try:
        return TreeTopology.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(path, None, None, f"bad topology: {exc}") from None


def read_network(path) -> tuple[PlaneNetwork, dict]:
    data = _load_json(path)
    try:
        verts = sorted(data["vertices"], key=lambda v: v["id"])
        ids = [v["id"] for v in verts]
        if ids != list(range(len(ids))):
            raise ValueError("vertex ids must be 0..V-1")
        terms = [v["id"] for v in verts if v["kind"] == "terminal"]
        edges = tuple((int(e["u"]), int(e["v"])) for e in data["edges"])
        topo = TreeTopology(len(verts), edges, tuple(terms))
        pos = np.array([[float(v["x"]), float(v["y"])] for v in verts])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(path, None, None, f"bad network: {exc}") from None
    return PlaneNetwork(topo, pos), data


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def network_json(network: PlaneNetwork, meta: dict | None = None) -> dict:
    """Network schema with coordinates rounded first and lengths derived from them."""
    d = network.to_dict()
    for v in d["vertices"]:
        v["x"], v["y"] = r12(v["x"]), r12(v["y"])
    xy = {v["id"]: (v["x"], v["y"]) for v in d["vertices"]}
    ws = []
    for e in d["edges"]:
        (x1, y1), (x2, y2) = xy[e["u"]], xy[e["v"]]
        w = math.hypot(x1 - x2, y1 - y2)
        ws.append(w)
        e["weight"] = r12(w)
    d["length"] = r12(math.fsum(ws))
    d["meta"] = meta or {}
    return d


def network_length_from_json(data: dict) -> float:
    xy = {v["id"]: (float(v["x"]), float(v["y"])) for v in data["vertices"]}
    ws = [math.hypot(xy[e["u"]][0] - xy[e["v"]][0], xy[e["u"]][1] - xy[e["v"]][1]) for e in data["edges"]]
    return r12(math.fsum(ws))


def number_json(x):
    """Plain JSON number; exact rationals also get a string form."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return r12(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return r12(x)


def exact_str(x) -> str | None:
    return str(x) if isinstance(x, Fraction) else None


def dump(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path:
        Path(path).write_text(text + "\n")
    return text
