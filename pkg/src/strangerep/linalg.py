"""Generic exact row-reduction over any field-like scalars.

Works for gmpy2.mpq and for Scalar; elements only need +, -, *, /,
truthiness for the zero test, and construction of 0/1 via `one`.
"""

from __future__ import annotations


def rref(rows, one):
    """Reduced row echelon form. Returns (rref_rows, pivot_cols); input unchanged."""
    mat = [list(r) for r in rows]
    pivots = []
    out = []
    if not mat:
        return out, pivots
    ncols = len(mat[0])
    col = 0
    while mat and col < ncols:
        piv = None
        for i, row in enumerate(mat):
            if row[col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        row = mat.pop(piv)
        inv = one / row[col]
        row = [v * inv for v in row]
        for other in mat:
            c = other[col]
            if c:
                for j in range(col, ncols):
                    if row[j]:
                        other[j] = other[j] - c * row[j]
        for other in out:
            c = other[col]
            if c:
                for j in range(col, ncols):
                    if row[j]:
                        other[j] = other[j] - c * row[j]
        out.append(row)
        pivots.append(col)
        col += 1
    return out, pivots


def rank(rows, one) -> int:
    return len(rref(rows, one)[1])


def solve_coords(basis_rows, target, one):
    """Coordinates of target in span(basis_rows), or None.

    basis_rows need not be reduced but must be linearly independent.
    """
    if not basis_rows:
        return [] if not any(target) else None
    width = len(target)
    aug = [list(row) + [one * 0] * i + [one] + [one * 0] * (len(basis_rows) - 1 - i) for i, row in enumerate(basis_rows)]
    reduced, pivots = rref(aug, one)
    coords = [one * 0] * len(basis_rows)
    residual = list(target)
    for row, piv in zip(reduced, pivots):
        if piv >= width:
            return None  # dependent input rows
        c = residual[piv]
        if c:
            for j in range(len(residual)):
                if row[j]:
                    residual[j] = residual[j] - c * row[j]
            for i in range(len(basis_rows)):
                if row[width + i]:
                    coords[i] = coords[i] + c * row[width + i]
    if any(residual):
        return None
    return coords


def nullspace(rows, one):
    """Basis of the right kernel {v : rows @ v = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    reduced, pivots = rref(rows, one)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    zero = one * 0
    for j in free:
        vec = [zero] * ncols
        vec[j] = one
        for row, piv in zip(reduced, pivots):
            if row[j]:
                vec[piv] = -row[j]
        basis.append(vec)
    return basis


class RREFBuilder:
    """Incremental RREF maintenance for closure fixpoints.

    Rows are kept fully reduced with unit pivots; insertion returns the
    reduced vector when it enlarges the span, else None.
    """

    __slots__ = ("one", "zero", "rows", "pivots")

    def __init__(self, one):
        self.one = one
        self.zero = one * 0
        self.rows = []
        self.pivots = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec):
        """Residual of vec modulo the current span (fresh list)."""
        vec = list(vec)
        for row, piv in zip(self.rows, self.pivots):
            c = vec[piv]
            if c:
                for j in range(len(vec)):
                    if row[j]:
                        vec[j] = vec[j] - c * row[j]
        return vec

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def insert(self, vec):
        """Insert vec; returns the normalized new row or None if dependent."""
        red = self.reduce(vec)
        piv = None
        for j, v in enumerate(red):
            if v:
                piv = j
                break
        if piv is None:
            return None
        inv = self.one / red[piv]
        red = [v * inv for v in red]
        for row in self.rows:
            c = row[piv]
            if c:
                for j in range(len(row)):
                    if red[j]:
                        row[j] = row[j] - c * red[j]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < piv:
            at += 1
        self.rows.insert(at, red)
        self.pivots.insert(at, piv)
        return red
