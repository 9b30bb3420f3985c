from hypothesis import given
from hypothesis import strategies as st

from src.exactfield import make_field
from src.linalg import SparseEchelon, left_nullspace, nullspace, rank, rref, solve, transpose

F7 = make_field(7)

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def _dot(u, v):
    acc = 0
    for x, y in zip(u, v):
        acc = F7.add(acc, F7.mul(x, y))
    return acc


def test_rref_small():
    rows, pivots = rref([[2, 4], [1, 2]], F7)
    assert rows == [[1, 2]]
    assert pivots == [0]
    assert rank([[1, 0], [0, 3]], F7) == 2
    assert rank([], F7) == 0


def test_solve_and_inconsistency():
    assert solve([[1, 1], [1, 6]], [2, 0], F7) == [1, 1]
    assert solve([[1, 1], [2, 2]], [1, 3], F7) is None
    assert solve([], [], F7) == []


@given(matrices)
def test_rank_nullity(rows):
    ncols = len(rows[0])
    basis = nullspace(rows, ncols, F7)
    assert rank(rows, F7) + len(basis) == ncols
    for vec in basis:
        assert all(_dot(r, vec) == 0 for r in rows)


@given(matrices)
def test_left_nullspace_annihilates_columns(cols):
    for alpha in left_nullspace(cols, F7):
        assert all(_dot(alpha, c) == 0 for c in cols)
    assert rank(transpose(cols), F7) == rank(cols, F7)


@given(matrices)
def test_sparse_echelon_agrees_with_dense_rank(rows):
    ech = SparseEchelon(F7)
    for r in rows:
        ech.add({i: x for i, x in enumerate(r) if x})
    assert ech.rank == rank(rows, F7)
    for r in rows:
        assert ech.contains({i: x for i, x in enumerate(r)})
