"""Deterministic report serialization for the CLI.

JSON output is rendered by a small writer with pinned float formatting
(17 significant digits, lowercase exponent) and insertion-ordered keys, so
identical invocations produce byte-identical files.  Wall-clock timing is
deliberately kept out of the JSON payload for the same reason; it goes to
stderr instead.  Files are written to a temp name and atomically renamed.
"""

import math
import os
import tempfile

__all__ = ["Report", "format_float", "dump_json", "write_json", "write_csv"]

SCHEMA = "diffgeo-report/1"


def format_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    if x == int(x) and abs(x) < 1e16:
        return repr(x)  # keeps the trailing .0
    return format(x, ".17g")


def _render(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            _render(str(k), out)
            out.append(":")
            _render(v, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(obj):
    out = []
    _render(obj, out)
    return "".join(out)


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".diffgeo-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    _atomic_write(path, dump_json(obj) + "\n")


def write_csv(path, header, rows):
    """CSV with '.' decimal separator and ',' field separator regardless of
    locale; floats use the pinned 17-digit format."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append(format_float(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    _atomic_write(path, "\n".join(lines) + "\n")


class Report:
    """Accumulates records and suite summaries in deterministic order."""

    def __init__(self, command, shape_desc):
        self.command = command
        self.shape_desc = shape_desc
        self.records = []
        self.suites = []
        self.summary = {}

    def add_record(self, point, quantity, value, status="ok"):
        self.records.append({"point": point, "quantity": quantity,
                             "value": value, "status": status})

    def add_suite(self, name, max_residual, tol, passed, detail=""):
        self.suites.append({"suite": name, "max_residual": max_residual,
                            "tol": tol, "passed": passed, "detail": detail})

    def sort_records(self):
        # row-major grid order is preserved by insertion; quantities sort
        # lexicographically within a point
        self.records.sort(key=lambda r: (r["point"], r["quantity"]))

    def to_obj(self):
        obj = {"schema": SCHEMA, "command": self.command,
               "shape": self.shape_desc}
        if self.records:
            obj["records"] = self.records
        if self.suites:
            obj["suites"] = self.suites
            obj["passed"] = all(s["passed"] for s in self.suites)
            obj["max_residual"] = max(s["max_residual"] for s in self.suites)
        if self.summary:
            obj["summary"] = self.summary
        return obj
