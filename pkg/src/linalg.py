from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .exactfield import FiniteField

Vector = List[int]


def rref(rows: Sequence[Sequence[int]], F: FiniteField) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            s = F.inv(lead)
            m[r] = [F.mul(s, x) for x in m[r]]
        top = m[r]
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f:
                m[i] = [F.sub(x, F.mul(f, y)) if y else x for x, y in zip(m[i], top)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], F: FiniteField) -> int:
    return len(rref(rows, F)[1])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, F: FiniteField) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    reduced, pivots = rref(rows, F)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for row, pc in zip(reduced, pivots):
            if row[free]:
                vec[pc] = F.neg(row[free])
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], F: FiniteField) -> Optional[Vector]:
    """One solution of A x = rhs (free variables set to 0), or None."""
    if not rows:
        return None if any(rhs) else []
    ncols = len(rows[0])
    reduced, pivots = rref([list(r) + [b] for r, b in zip(rows, rhs)], F)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


def transpose(rows: Sequence[Sequence[int]]) -> List[Vector]:
    return [list(col) for col in zip(*rows)]


def left_nullspace(columns: Sequence[Sequence[int]], F: FiniteField) -> List[Vector]:
    """Vectors alpha with alpha . col == 0 for every given column vector."""
    if not columns:
        return []
    return nullspace(columns, len(columns[0]), F)


class SparseEchelon:
    """Incremental row-echelon basis of sparse vectors ({column: value}).

    Each stored row is monic with its pivot at its smallest column, so
    reducing a vector only ever introduces larger columns.
    """

    def __init__(self, F: FiniteField):
        self.F = F
        self.rows: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Dict[int, int]) -> Dict[int, int]:
        F = self.F
        v = {c: x for c, x in vec.items() if x}
        while v:
            c = min(v)
            row = self.rows.get(c)
            if row is None:
                break
            f = v[c]
            for col, x in row.items():
                nx = F.sub(v.get(col, 0), F.mul(f, x))
                if nx:
                    v[col] = nx
                else:
                    v.pop(col, None)
        return v

    def add(self, vec: Dict[int, int]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        s = self.F.inv(v[c])
        self.rows[c] = {col: self.F.mul(s, x) for col, x in v.items()}
        return True

    def contains(self, vec: Dict[int, int]) -> bool:
        return not self.reduce(vec)
