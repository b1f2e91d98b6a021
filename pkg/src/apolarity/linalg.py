"""Sparse-row front end to flint's exact echelon routines.

Vectors are dicts ``{column: nonzero scalar}``.  Every routine here is a thin
wrapper that densifies, calls flint, and sparsifies the answer again.
"""
from __future__ import annotations

from .fields import FieldSpec

Vec = dict


def _dense(field: FieldSpec, rows, ncols, colpos=None):
    flat = [0] * (len(rows) * ncols)
    for r, row in enumerate(rows):
        base = r * ncols
        if colpos is None:
            for c, v in row.items():
                flat[base + c] = v
        else:
            for c, v in row.items():
                flat[base + colpos[c]] = v
    return field.matrix(len(rows), ncols, flat)


def _sparse_rows(mat, nrows, ncols, cols=None):
    ent = mat.entries()
    out = []
    for r in range(nrows):
        base = r * ncols
        row = {}
        for j in range(ncols):
            v = ent[base + j]
            if v != 0:
                row[j if cols is None else cols[j]] = v
        out.append(row)
    return out


def rref(field: FieldSpec, rows: list[Vec], ncols: int, order: list[int] | None = None):
    """Reduced echelon basis of the row span.

    ``order`` lists the columns by pivot priority (first = most preferred);
    default is the natural order.  Returns ``(basis, pivots)`` in original
    column indices; ``basis[k]`` has a 1 at ``pivots[k]``.
    """
    if not rows:
        return [], []
    colpos = None
    if order is not None:
        colpos = [0] * ncols
        for pos, c in enumerate(order):
            colpos[c] = pos
    m = _dense(field, rows, ncols, colpos)
    red, rk = m.rref()
    ent = red.entries()
    basis, pivots = [], []
    for r in range(rk):
        base = r * ncols
        row = {}
        piv = None
        for j in range(ncols):
            v = ent[base + j]
            if v != 0:
                c = j if order is None else order[j]
                row[c] = v
                if piv is None:
                    piv = c
        basis.append(row)
        pivots.append(piv)
    return basis, pivots


def rank(field: FieldSpec, rows: list[Vec], ncols: int) -> int:
    if not rows:
        return 0
    return _dense(field, rows, ncols).rank()


def nullspace_of_dense(field: FieldSpec, mat, nrows: int, ncols: int) -> list[Vec]:
    """Basis of {x : mat * x = 0} as sparse vectors over the column indices."""
    red, rk = mat.rref()
    ent = red.entries()
    pivots = []
    for r in range(rk):
        base = r * ncols
        for j in range(ncols):
            if ent[base + j] != 0:
                pivots.append(j)
                break
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = {free: field.one}
        for r, pc in enumerate(pivots):
            e = ent[r * ncols + free]
            if e != 0:
                v[pc] = -e
        out.append(v)
    return out


def left_kernel(field: FieldSpec, rows: list[Vec], ncols: int) -> list[Vec]:
    """Basis of {x : sum_r x[r] * rows[r] = 0}, vectors indexed by row number."""
    nrows = len(rows)
    if nrows == 0:
        return []
    flat = [0] * (ncols * nrows)
    for r, row in enumerate(rows):
        for c, v in row.items():
            flat[c * nrows + r] = v
    return nullspace_of_dense(field, field.matrix(ncols, nrows, flat), ncols, nrows)


def combine(field: FieldSpec, coeffs: Vec, rows: list[Vec]) -> Vec:
    out: dict = {}
    for r, a in coeffs.items():
        for c, v in rows[r].items():
            out[c] = out.get(c, 0) + a * v
    return {c: v for c, v in out.items() if v != 0}


def solve_left(field: FieldSpec, rows: list[Vec], ncols: int, target: Vec) -> Vec | None:
    """Some x with sum_r x[r] * rows[r] = target, or None.

    Pivots are taken greedily in row order, so earlier rows are preferred
    and free rows get coefficient zero.
    """
    nrows = len(rows)
    width = nrows + 1
    flat = [0] * (ncols * width)
    for r, row in enumerate(rows):
        for c, v in row.items():
            flat[c * width + r] = v
    for c, v in target.items():
        flat[c * width + nrows] = v
    red, rk = field.matrix(ncols, width, flat).rref()
    ent = red.entries()
    x = {}
    for r in range(rk):
        base = r * width
        for j in range(width):
            if ent[base + j] != 0:
                if j == nrows:
                    return None
                v = ent[base + nrows]
                if v != 0:
                    x[j] = v
                break
    return x


def reduce_against(vec: Vec, basis: list[Vec], pivots: list[int]) -> Vec:
    """Remainder of ``vec`` modulo a reduced echelon basis."""
    out = dict(vec)
    for row, p in zip(basis, pivots):
        a = out.get(p)
        if a is None or a == 0:
            continue
        for c, v in row.items():
            w = out.get(c, 0) - a * v
            if w == 0:
                out.pop(c, None)
            else:
                out[c] = w
    return out


def intersect(field: FieldSpec, a: list[Vec], b: list[Vec], ncols: int) -> list[Vec]:
    """Spanning set of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    stacked = list(a) + [{c: -v for c, v in row.items()} for row in b]
    ker = left_kernel(field, stacked, ncols)
    na = len(a)
    out = []
    for k in ker:
        part = {r: v for r, v in k.items() if r < na}
        if part:
            vec = combine(field, part, a)
            if vec:
                out.append(vec)
    return out
