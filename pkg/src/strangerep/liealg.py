"""Matrix model of gl(n|n) and the distinguished subalgebras.

Elements are sparse 2n x 2n rational matrices with the block Z2-grading:
even = the two diagonal n x n blocks, odd = the two off-diagonal blocks.
Bases carry their own Cartan list so downstream weight bookkeeping always
uses operators that act diagonally on monomials.
"""

from __future__ import annotations

from gmpy2 import mpq

from .linalg import rank, solve_coords

_MPQ1 = mpq(1)


class AlgebraElement:
    """Sparse element of gl(n|n); entries indexed 1..2n."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries=None):
        clean = {}
        if entries:
            for (i, j), c in entries.items():
                if not (1 <= i <= 2 * n and 1 <= j <= 2 * n):
                    raise IndexError(f"entry ({i},{j}) outside 1..{2 * n}")
                c = mpq(c)
                if c:
                    clean[(i, j)] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @staticmethod
    def unit(n: int, i: int, j: int, coeff=1) -> "AlgebraElement":
        return AlgebraElement(n, {(i, j): coeff})

    @staticmethod
    def identity(n: int) -> "AlgebraElement":
        return AlgebraElement(n, {(i, i): 1 for i in range(1, 2 * n + 1)})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("size mismatch")

    def __add__(self, other):
        self._check(other)
        entries = dict(self.entries)
        for pos, c in other.entries.items():
            entries[pos] = entries.get(pos, 0) + c
        return AlgebraElement(self.n, entries)

    def __sub__(self, other):
        self._check(other)
        entries = dict(self.entries)
        for pos, c in other.entries.items():
            entries[pos] = entries.get(pos, 0) - c
        return AlgebraElement(self.n, entries)

    def __neg__(self):
        return AlgebraElement(self.n, {p: -c for p, c in self.entries.items()})

    def scale(self, coeff) -> "AlgebraElement":
        return AlgebraElement(self.n, {p: c * coeff for p, c in self.entries.items()})

    def matmul(self, other) -> "AlgebraElement":
        self._check(other)
        by_row: dict = {}
        for (i, j), c in other.entries.items():
            by_row.setdefault(i, []).append((j, c))
        entries: dict = {}
        for (i, k), c1 in self.entries.items():
            for j, c2 in by_row.get(k, ()):
                pos = (i, j)
                entries[pos] = entries.get(pos, 0) + c1 * c2
        return AlgebraElement(self.n, entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.entries.items())))

    def _entry_parity(self, i: int, j: int) -> int:
        return (i > self.n) ^ (j > self.n)

    def even_part(self) -> "AlgebraElement":
        return AlgebraElement(
            self.n,
            {p: c for p, c in self.entries.items() if not self._entry_parity(*p)},
        )

    def odd_part(self) -> "AlgebraElement":
        return AlgebraElement(
            self.n,
            {p: c for p, c in self.entries.items() if self._entry_parity(*p)},
        )

    def parity(self) -> int | None:
        """0/1 when homogeneous, None when mixed, 0 for zero."""
        par = None
        for pos in self.entries:
            p = self._entry_parity(*pos)
            if par is None:
                par = p
            elif par != p:
                return None
        return 0 if par is None else par

    def to_json(self) -> dict:
        triples = [
            [i, j, str(c)] for (i, j), c in sorted(self.entries.items())
        ]
        return {"n": self.n, "entries": triples}

    @staticmethod
    def from_json(data: dict) -> "AlgebraElement":
        return AlgebraElement(
            data["n"], {(i, j): mpq(c) for i, j, c in data["entries"]}
        )

    def __repr__(self):
        body = " + ".join(
            f"{'' if c == 1 else str(c) + '*'}E[{i},{j}]"
            for (i, j), c in sorted(self.entries.items())
        )
        return body or "0"


def superbracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """[a,b] = ab - (-1)^{|a||b|} ba, extended bilinearly over parity parts."""
    a._check(b)
    out = AlgebraElement(a.n)
    for ap, pa in ((a.even_part(), 0), (a.odd_part(), 1)):
        if ap.is_zero():
            continue
        for bp, pb in ((b.even_part(), 0), (b.odd_part(), 1)):
            if bp.is_zero():
                continue
            term = ap.matmul(bp)
            if pa and pb:
                out = out + term + bp.matmul(ap)
            else:
                out = out + term - bp.matmul(ap)
    return out


class AlgebraBasis:
    """Ordered list of independent elements with labels and a Cartan list."""

    __slots__ = ("name", "n", "elements", "labels", "cartan", "_flat")

    def __init__(self, name, n, elements, labels, cartan):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "cartan", tuple(cartan))
        object.__setattr__(self, "_flat", None)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraBasis is immutable")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, idx):
        return self.elements[idx]

    def _coordinate_rows(self):
        """Flattened coordinate rows over all entry positions in the basis."""
        if self._flat is None:
            positions = sorted({p for el in self.elements for p in el.entries})
            index = {p: i for i, p in enumerate(positions)}
            rows = []
            for el in self.elements:
                row = [mpq(0)] * len(positions)
                for p, c in el.entries.items():
                    row[index[p]] = c
                rows.append(row)
            object.__setattr__(self, "_flat", (positions, index, rows))
        return self._flat

    def dim(self) -> int:
        """Rank of the spanning list (verifies independence)."""
        _, _, rows = self._coordinate_rows()
        return rank(rows, _MPQ1)


def span_membership(v: AlgebraElement, basis: AlgebraBasis):
    """Exact coordinates of v in span(basis), or None if outside."""
    if v.n != basis.n:
        raise ValueError("size mismatch")
    positions, index, rows = basis._coordinate_rows()
    target = [mpq(0)] * len(positions)
    for p, c in v.entries.items():
        if p not in index:
            return None
        target[index[p]] = c
    return solve_coords(rows, target, _MPQ1)


def closed_under_bracket(basis: AlgebraBasis) -> bool:
    """Every pairwise super-bracket stays in the span."""
    for x in basis.elements:
        for y in basis.elements:
            if span_membership(superbracket(x, y), basis) is None:
                return False
    return True


# -- distinguished bases -------------------------------------------------------------


def _require_n(n: int):
    if n < 3:
        raise ValueError("standing assumption n >= 3")


def _E(n, i, j):
    return AlgebraElement.unit(n, i, j)


def cartan_P(n: int) -> AlgebraBasis:
    """H = span of E_{i,i}-E_{i+1,i+1}-E_{n+i,n+i}+E_{n+i+1,n+i+1}."""
    _require_n(n)
    elems, labels = [], []
    for i in range(1, n):
        elems.append(
            _E(n, i, i) - _E(n, i + 1, i + 1) - _E(n, n + i, n + i) + _E(n, n + i + 1, n + i + 1)
        )
        labels.append(f"hP{i}")
    return AlgebraBasis("CARTAN_P", n, elems, labels, elems)


def cartan_Q(n: int) -> AlgebraBasis:
    """Diagonal even elements E_{i,i}+E_{n+i,n+i} of Q~(n-1)."""
    _require_n(n)
    elems = [_E(n, i, i) + _E(n, n + i, n + i) for i in range(1, n + 1)]
    labels = [f"hQ{i}" for i in range(1, n + 1)]
    return AlgebraBasis("CARTAN_Q", n, elems, labels, elems)


def basis_gl(n: int) -> AlgebraBasis:
    _require_n(n)
    elems, labels = [], []
    for i in range(1, 2 * n + 1):
        for j in range(1, 2 * n + 1):
            elems.append(_E(n, i, j))
            labels.append(f"E{i},{j}")
    cartan = [_E(n, i, i) for i in range(1, 2 * n + 1)]
    return AlgebraBasis("GL", n, elems, labels, cartan)


def basis_P(n: int) -> AlgebraBasis:
    """Spanning list of P(n-1): Cartan, even raising, even lowering, odd families."""
    _require_n(n)
    h = cartan_P(n)
    elems = list(h.elements)
    labels = list(h.labels)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            elems.append(_E(n, i, j) - _E(n, n + j, n + i))
            labels.append(f"E{i},{j}-E{n + j},{n + i}")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            elems.append(_E(n, j, i) - _E(n, n + i, n + j))
            labels.append(f"E{j},{i}-E{n + i},{n + j}")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            elems.append(_E(n, n + i, j) - _E(n, n + j, i))
            labels.append(f"E{n + i},{j}-E{n + j},{i}")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            elems.append(_E(n, i, n + j) + _E(n, j, n + i))
            labels.append(f"E{i},{n + j}+E{j},{n + i}")
    for j in range(1, n + 1):
        elems.append(_E(n, j, n + j))
        labels.append(f"E{j},{n + j}")
    return AlgebraBasis("P", n, elems, labels, h.elements)


def basis_P_even(n: int) -> AlgebraBasis:
    """P(n-1)_0: Cartan plus E_{i,j}-E_{n+j,n+i} for i != j."""
    _require_n(n)
    h = cartan_P(n)
    elems = list(h.elements)
    labels = list(h.labels)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                elems.append(_E(n, i, j) - _E(n, n + j, n + i))
                labels.append(f"E{i},{j}-E{n + j},{n + i}")
    return AlgebraBasis("P_EVEN", n, elems, labels, h.elements)


def basis_P_even_pos(n: int) -> AlgebraBasis:
    """Positive part: E_{i,j}-E_{n+j,n+i} for i < j."""
    _require_n(n)
    h = cartan_P(n)
    elems, labels = [], []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            elems.append(_E(n, i, j) - _E(n, n + j, n + i))
            labels.append(f"E{i},{j}-E{n + j},{n + i}")
    return AlgebraBasis("P_EVEN_POS", n, elems, labels, h.elements)


def basis_Q(n: int, variant: str = "s3") -> AlgebraBasis:
    """Spanning list of Q~(n-1), dimension 2n^2-1, containing I_{2n}.

    variant "s3" is the form that closes under the super-bracket (even part
    E_{i,j}+E_{n+i,n+j}); variant "s1" is the other printed form (even part
    E_{i,j}+E_{n+j,n+i}), kept so the closure comparison stays reproducible.
    """
    _require_n(n)
    if variant not in ("s3", "s1"):
        raise ValueError("variant must be 's3' or 's1'")
    h = cartan_Q(n)
    elems, labels = [], []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if variant == "s3":
                elems.append(_E(n, i, j) + _E(n, n + i, n + j))
                labels.append(f"E{i},{j}+E{n + i},{n + j}")
            else:
                elems.append(_E(n, i, j) + _E(n, n + j, n + i))
                labels.append(f"E{i},{j}+E{n + j},{n + i}")
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            if variant == "s3":
                elems.append(_E(n, i, n + j) + _E(n, n + i, j))
                labels.append(f"E{i},{n + j}+E{n + i},{j}")
            else:
                elems.append(_E(n, i, n + j) + _E(n, n + j, i))
                labels.append(f"E{i},{n + j}+E{n + j},{i}")
    for i in range(1, n):
        elems.append(
            _E(n, i, n + i) + _E(n, n + i, i) - _E(n, i + 1, n + i + 1) - _E(n, n + i + 1, i + 1)
        )
        labels.append(f"E{i},{n + i}+E{n + i},{i}-E{i + 1},{n + i + 1}-E{n + i + 1},{i + 1}")
    return AlgebraBasis("Q_TILDE", n, elems, labels, h.elements)


def basis_Q_even(n: int) -> AlgebraBasis:
    _require_n(n)
    h = cartan_Q(n)
    elems, labels = [], []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            elems.append(_E(n, i, j) + _E(n, n + i, n + j))
            labels.append(f"E{i},{j}+E{n + i},{n + j}")
    return AlgebraBasis("Q_EVEN", n, elems, labels, h.elements)


def basis_Q_even_pos(n: int) -> AlgebraBasis:
    _require_n(n)
    h = cartan_Q(n)
    elems, labels = [], []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            elems.append(_E(n, i, j) + _E(n, n + i, n + j))
            labels.append(f"E{i},{j}+E{n + i},{n + j}")
    return AlgebraBasis("Q_EVEN_POS", n, elems, labels, h.elements)


def basis_L(n: int, r: int) -> AlgebraBasis:
    """L_1 + L_2: the even generators preserving the r-split of indices."""
    _require_n(n)
    if not 1 <= r <= n - 1:
        raise ValueError("need 1 <= r <= n-1")
    h = cartan_P(n)
    elems, labels = [], []
    for lo, hi, tag in ((1, r, "L1"), (r + 1, n, "L2")):
        for i in range(lo, hi):
            elems.append(
                _E(n, i, i) - _E(n, n + i, n + i) - _E(n, i + 1, i + 1) + _E(n, n + i + 1, n + i + 1)
            )
            labels.append(f"{tag}:h{i}")
        for i in range(lo, hi + 1):
            for j in range(lo, hi + 1):
                if i != j:
                    elems.append(_E(n, i, j) - _E(n, n + j, n + i))
                    labels.append(f"{tag}:E{i},{j}-E{n + j},{n + i}")
    return AlgebraBasis(f"L(r={r})", n, elems, labels, h.elements)


def basis_L_pos(n: int, r: int) -> AlgebraBasis:
    """L_1^+ + L_2^+: raising operators inside each index block."""
    _require_n(n)
    if not 1 <= r <= n - 1:
        raise ValueError("need 1 <= r <= n-1")
    h = cartan_P(n)
    elems, labels = [], []
    for lo, hi in ((1, r), (r + 1, n)):
        for i in range(lo, hi + 1):
            for j in range(i + 1, hi + 1):
                elems.append(_E(n, i, j) - _E(n, n + j, n + i))
                labels.append(f"E{i},{j}-E{n + j},{n + i}")
    return AlgebraBasis(f"L_POS(r={r})", n, elems, labels, h.elements)


def q_variant_survey(n: int) -> dict:
    """Which printed Q~ variant closes under the super-bracket."""
    return {
        variant: closed_under_bracket(basis_Q(n, variant=variant))
        for variant in ("s1", "s3")
    }


_BASIS_FACTORIES = {
    "GL": basis_gl,
    "P": basis_P,
    "Q_TILDE": basis_Q,
    "P_EVEN": basis_P_even,
    "P_EVEN_POS": basis_P_even_pos,
    "Q_EVEN": basis_Q_even,
    "Q_EVEN_POS": basis_Q_even_pos,
    "CARTAN_P": cartan_P,
    "CARTAN_Q": cartan_Q,
}


def basis_by_name(name: str, n: int, r: int | None = None) -> AlgebraBasis:
    if name in _BASIS_FACTORIES:
        return _BASIS_FACTORIES[name](n)
    if name == "L":
        return basis_L(n, r)
    if name == "L_POS":
        return basis_L_pos(n, r)
    raise KeyError(f"unknown basis {name!r}")
