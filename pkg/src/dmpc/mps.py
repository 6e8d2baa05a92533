"""Fixed-format MPS export and a matching reader.

The writer emits the classic eight-column layout (fields at columns 2-3,
5-12, 15-22, 25-36, 40-47 and 50-61), one coefficient per line, with
integer columns wrapped in INTORG/INTEND markers and additionally marked
BV in the BOUNDS section. Values are printed with ``repr``, the shortest
string that parses back to the identical float, so a round trip through
any whitespace-tolerant reader reproduces coefficients exactly. A value
whose shortest form overflows its field widens that field; downstream
readers treat the format as whitespace-delimited anyway.

Row names are R0000001... in emission order, columns C0000001... in
column order; an objective constant is stored negated as the RHS of the
objective row, per the usual convention.
"""

from __future__ import annotations

import io
import math

import numpy as np

from .milp import MilpProblem, Relation

__all__ = ["export_mps", "read_mps"]

_ROW_TYPE = {Relation.LE: "L", Relation.EQ: "E"}


def _fmt(v: float) -> str:
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") and "e" not in r and "E" not in r else r


def _line(f1: str = "", f2: str = "", f3: str = "", f4: str = "",
          f5: str = "", f6: str = "") -> str:
    s = f" {f1:<2} {f2:<8}  {f3:<8}  {f4:<12}   {f5:<8}  {f6:<12}"
    return s.rstrip()


def _row_name(i: int) -> str:
    return f"R{i + 1:07d}"


def _col_name(j: int) -> str:
    return f"C{j + 1:07d}"


def export_mps(problem: MilpProblem, destination) -> None:
    """Write the problem to a path or text file object."""
    diagnostics = problem.validate()
    if diagnostics:
        raise ValueError("invalid problem: " + "; ".join(diagnostics))

    m, n = problem.n_rows, problem.n_vars
    out = io.StringIO()
    w = out.write

    w("NAME          DMPC\n")
    w("ROWS\n")
    w(" N  OBJ\n")
    for i in range(m):
        w(f" {_ROW_TYPE[Relation(int(problem.relations[i]))]}  {_row_name(i)}\n")

    w("COLUMNS\n")
    in_int = False
    marker = 0
    for j in range(n):
        if bool(problem.is_int[j]) != in_int:
            tag = "'INTORG'" if not in_int else "'INTEND'"
            w(_line("", f"MARK{marker:04d}", "'MARKER'", "", tag) + "\n")
            in_int = not in_int
            marker += 1
        name = _col_name(j)
        wrote = False
        if problem.c[j] != 0.0:
            w(_line("", name, "OBJ", _fmt(problem.c[j])) + "\n")
            wrote = True
        for i in np.flatnonzero(problem.A[:, j]):
            w(_line("", name, _row_name(int(i)), _fmt(problem.A[int(i), j])) + "\n")
            wrote = True
        if not wrote:
            # declare otherwise-empty columns so no reader drops them
            w(_line("", name, "OBJ", "0") + "\n")
    if in_int:
        w(_line("", f"MARK{marker:04d}", "'MARKER'", "", "'INTEND'") + "\n")

    w("RHS\n")
    if problem.obj_const != 0.0:
        w(_line("", "RHS", "OBJ", _fmt(-problem.obj_const)) + "\n")
    for i in range(m):
        if problem.b[i] != 0.0:
            w(_line("", "RHS", _row_name(i), _fmt(problem.b[i])) + "\n")

    w("RANGES\n")

    w("BOUNDS\n")
    for j in range(n):
        name = _col_name(j)
        lo, hi = float(problem.lb[j]), float(problem.ub[j])
        if problem.is_int[j] and lo == 0.0 and hi == 1.0:
            w(_line("BV", "BND", name) + "\n")
            continue
        lo_tag, hi_tag = ("LI", "UI") if problem.is_int[j] else ("LO", "UP")
        if lo == hi:
            w(_line("FX", "BND", name, _fmt(lo)) + "\n")
            continue
        if lo == -math.inf:
            w(_line("MI", "BND", name) + "\n")
        elif lo != 0.0 or problem.is_int[j]:
            w(_line(lo_tag, "BND", name, _fmt(lo)) + "\n")
        if hi != math.inf:
            w(_line(hi_tag, "BND", name, _fmt(hi)) + "\n")

    w("ENDATA\n")

    text = out.getvalue()
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)


def read_mps(source) -> MilpProblem:
    """Parse an MPS file (path or text file object) into a MilpProblem.

    Tokenizing is whitespace-based, so both fixed and free layouts load.
    Supports N/L/G/E rows, INTORG/INTEND markers, RHS (including an
    objective-row constant), RANGES on L/G/E rows and the usual BOUNDS
    keys. G rows are negated into <= form; ranged rows contribute an
    extra mirrored row appended after the base rows.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source) as fh:
            lines = fh.read().splitlines()

    section = None
    obj_row = None
    row_order: list = []          # names, ROWS order, objective excluded
    row_type: dict = {}
    col_order: list = []
    col_entries: dict = {}        # name -> {row name: value}
    obj_coef: dict = {}
    col_int: dict = {}
    rhs: dict = {}
    obj_const = 0.0
    ranges: dict = {}
    bounds: dict = {}             # name -> [lo, hi]
    in_int = False

    def touch_col(name):
        if name not in col_entries:
            col_order.append(name)
            col_entries[name] = {}
            col_int[name] = in_int

    for raw in lines:
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if raw[0] not in (" ", "\t"):
            tok = raw.split()
            section = tok[0].upper()
            if section == "ENDATA":
                break
            continue
        tok = raw.split()
        if section == "OBJSENSE":
            if tok[0].upper() not in ("MIN", "MINIMIZE"):
                raise ValueError("only minimization is supported")
        elif section == "ROWS":
            t, name = tok[0].upper(), tok[1]
            if t == "N":
                if obj_row is None:
                    obj_row = name
            elif t in ("L", "G", "E"):
                row_order.append(name)
                row_type[name] = t
            else:
                raise ValueError(f"unknown row type {t!r}")
        elif section == "COLUMNS":
            if len(tok) >= 3 and tok[1] == "'MARKER'":
                if "'INTORG'" in tok:
                    in_int = True
                elif "'INTEND'" in tok:
                    in_int = False
                continue
            name = tok[0]
            touch_col(name)
            for k in range(1, len(tok) - 1, 2):
                row, val = tok[k], float(tok[k + 1])
                if row == obj_row:
                    obj_coef[name] = obj_coef.get(name, 0.0) + val
                elif row in row_type:
                    d = col_entries[name]
                    d[row] = d.get(row, 0.0) + val
                else:
                    raise ValueError(f"coefficient for unknown row {row!r}")
        elif section == "RHS":
            for k in range(1, len(tok) - 1, 2):
                row, val = tok[k], float(tok[k + 1])
                if row == obj_row:
                    obj_const = -val
                elif row in row_type:
                    rhs[row] = val
                else:
                    raise ValueError(f"rhs for unknown row {row!r}")
        elif section == "RANGES":
            for k in range(1, len(tok) - 1, 2):
                ranges[tok[k]] = float(tok[k + 1])
        elif section == "BOUNDS":
            btype = tok[0].upper()
            name = tok[2]
            touch_col(name)
            lo_hi = bounds.setdefault(name, [0.0, math.inf])
            if btype in ("UP", "UI"):
                lo_hi[1] = float(tok[3])
            elif btype in ("LO", "LI"):
                lo_hi[0] = float(tok[3])
            elif btype == "FX":
                lo_hi[0] = lo_hi[1] = float(tok[3])
            elif btype == "MI":
                lo_hi[0] = -math.inf
            elif btype == "PL":
                lo_hi[1] = math.inf
            elif btype == "BV":
                lo_hi[0], lo_hi[1] = 0.0, 1.0
                col_int[name] = True
            else:
                raise ValueError(f"unknown bound type {btype!r}")
            if btype in ("UI", "LI"):
                col_int[name] = True

    if obj_row is None:
        raise ValueError("no objective (N) row found")

    n = len(col_order)
    col_index = {name: j for j, name in enumerate(col_order)}

    rows: list = []
    rels: list = []
    bvec: list = []
    row_labels: list = []

    def dense(name):
        row = np.zeros(n)
        for cname in col_order:
            v = col_entries[cname].get(name)
            if v is not None:
                row[col_index[cname]] = v
        return row

    extras: list = []
    for name in row_order:
        t = row_type[name]
        row = dense(name)
        b = rhs.get(name, 0.0)
        r = ranges.get(name)
        if t == "L":
            rows.append(row), rels.append(Relation.LE), bvec.append(b)
            row_labels.append(name)
            if r is not None:
                extras.append((-row, Relation.LE, -(b - abs(r)), name + "#r"))
        elif t == "G":
            rows.append(-row), rels.append(Relation.LE), bvec.append(-b)
            row_labels.append(name)
            if r is not None:
                extras.append((row, Relation.LE, b + abs(r), name + "#r"))
        else:
            if r is None:
                rows.append(row), rels.append(Relation.EQ), bvec.append(b)
                row_labels.append(name)
            else:
                lo, hi = (b, b + r) if r >= 0 else (b + r, b)
                rows.append(row), rels.append(Relation.LE), bvec.append(hi)
                row_labels.append(name)
                extras.append((-row, Relation.LE, -lo, name + "#r"))
    for row, rel, b, name in extras:
        rows.append(row), rels.append(rel), bvec.append(b)
        row_labels.append(name)

    lb = np.zeros(n)
    ub = np.full(n, math.inf)
    is_int = np.zeros(n, dtype=bool)
    c = np.zeros(n)
    for name, j in col_index.items():
        c[j] = obj_coef.get(name, 0.0)
        is_int[j] = col_int.get(name, False)
        if name in bounds:
            lb[j], ub[j] = bounds[name]
        elif is_int[j]:
            lb[j], ub[j] = 0.0, 1.0

    return MilpProblem(
        c=c,
        obj_const=obj_const,
        A=(np.array(rows).reshape(len(rows), n) if rows else np.zeros((0, n))),
        relations=np.array([int(r) for r in rels], dtype=np.int8),
        b=np.array(bvec, dtype=float),
        lb=lb,
        ub=ub,
        is_int=is_int,
        labels=list(col_order),
        row_labels=row_labels,
    )
