import pickle

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import DivisionByZero, EvenCharacteristic, FieldMismatch, NonPrime, ReducibleMinPoly, SchemaError
from src.exactfield import (
    enumerate_field,
    enumerate_projective,
    extension,
    least_non_residue,
    make_field,
    normalize_projective,
    projective_blocks,
    projective_count,
    scalar_arith,
    square_roots,
)


def test_prime_field_basics():
    F = make_field(13)
    assert F.q == 13 and F.k == 1
    assert F.name == "F13"
    assert make_field(13) is F


def test_default_quadratic_extension_uses_least_non_residue():
    F = make_field(13, 2)
    assert least_non_residue(13) == 2
    assert F.desc.min_poly == (1, 0, 11)
    assert F.q == 169
    assert F.name == "F13^2"


def test_explicit_min_poly_is_checked():
    F = make_field(3, 2, [1, 0, 1])
    assert F.q == 9
    with pytest.raises(ReducibleMinPoly):
        make_field(3, 2, [1, 0, 2])  # t^2 - 1
    with pytest.raises(SchemaError):
        make_field(3, 2, [2, 0, 1])


@pytest.mark.parametrize("p,exc", [(4, NonPrime), (1, NonPrime), (15, NonPrime), (2, EvenCharacteristic)])
def test_bad_characteristic(p, exc):
    with pytest.raises(exc):
        make_field(p)


def test_scalar_arith_examples():
    F = make_field(13)
    assert scalar_arith(F, "inv", 5) == 8
    assert scalar_arith(F, "add", 2, 12) == 1
    assert scalar_arith(F, "pow", 2, -1) == 7
    with pytest.raises(DivisionByZero):
        scalar_arith(F, "inv", 0)
    with pytest.raises(DivisionByZero):
        make_field(13, 2).inv(0)
    with pytest.raises(FieldMismatch):
        scalar_arith(F, "add", 13, 1)
    with pytest.raises(SchemaError):
        scalar_arith(F, "sqrt", 4)


def test_division_by_zero_is_also_zero_division_error():
    with pytest.raises(ZeroDivisionError):
        make_field(7).div(3, 0)


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (13, 1), (3, 2), (5, 2), (7, 2), (3, 3)])
def test_field_axioms_exhaustive(p, k):
    F = make_field(p, k)
    elems = list(enumerate_field(F))
    assert len(elems) == F.q
    for a in elems:
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    for a in elems[:9]:
        for b in elems:
            assert F.mul(a, b) == F.mul(b, a)
            assert F.add(a, b) == F.add(b, a)
            for c in elems[:4]:
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@given(st.integers(0, 12), st.integers(0, 12))
def test_prime_field_matches_integers(a, b):
    F = make_field(13)
    assert F.add(a, b) == (a + b) % 13
    assert F.mul(a, b) == (a * b) % 13


def test_square_roots_examples():
    assert square_roots(make_field(13), 12) == (5, 8)
    assert square_roots(make_field(13), 0) == (0,)
    assert square_roots(make_field(5), 2) == ()


@pytest.mark.parametrize("p,k", [(5, 1), (13, 1), (3, 2), (13, 2)])
def test_square_roots_contain_root(p, k):
    F = make_field(p, k)
    for c in range(F.q):
        roots = F.square_roots(F.mul(c, c))
        assert c in roots
        assert len(roots) <= 2


def test_every_base_element_is_square_in_quadratic_extension():
    F, G = make_field(13), make_field(13, 2)
    emb = F.embedding_into(G)
    assert all(G.is_square(emb[c]) for c in range(13))
    assert not F.is_square(2)


def test_embedding_is_a_ring_map():
    F, G = make_field(5), make_field(5, 2)
    emb = F.embedding_into(G)
    for a in range(5):
        for b in range(5):
            assert emb[F.add(a, b)] == G.add(emb[a], emb[b])
            assert emb[F.mul(a, b)] == G.mul(emb[a], emb[b])


def test_extension_of_extension_embeds():
    F9 = make_field(3, 2)
    F81 = extension(F9, 2)
    assert F81.q == 81
    emb = F9.embedding_into(F81)
    assert len(set(emb)) == 9
    for a in range(9):
        for b in range(9):
            assert emb[F9.mul(a, b)] == F81.mul(emb[a], emb[b])
    with pytest.raises(FieldMismatch):
        F9.embedding_into(make_field(5, 2))


def test_enumerate_field_orders():
    assert list(enumerate_field(make_field(3))) == [0, 1, 2]
    nine = list(enumerate_field(make_field(3, 2)))
    assert len(nine) == 9 and nine[0] == 0
    assert list(enumerate_field(make_field(13)))[-1] == 12


def test_enumerate_projective_examples():
    F3 = make_field(3)
    assert list(enumerate_projective(F3, 2)) == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert sum(1 for _ in enumerate_projective(make_field(13), 4)) == 2380
    assert list(enumerate_projective(make_field(5), 1)) == [(1,)]


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_enumeration_is_complete_and_sorted(q, n):
    F = make_field(3, 2) if q == 9 else make_field(q)
    points = list(enumerate_projective(F, n))
    assert len(points) == projective_count(q, n)
    assert points == sorted(points)
    assert {normalize_projective(F, p) for p in points} == set(points)


def test_projective_blocks_cover_in_order():
    F = make_field(5)
    blocks = projective_blocks(F, 3)
    assert blocks[0] == ((0, 0, 1), 0)
    assert blocks[1] == ((0, 1, 0), 0)
    assert blocks[-1] == ((1, 4), 1)


def test_parse_and_dump_scalars():
    F, G = make_field(13), make_field(13, 2)
    assert F.parse(-1) == 12
    assert F.dump(12) == 12
    assert G.parse([3, 1]) == 3 + 13
    assert G.dump(G.parse([3, 1])) == [3, 1]
    with pytest.raises(SchemaError):
        G.parse([1, 2, 3], "/mu/0/1")
    with pytest.raises(SchemaError):
        F.parse(True)


def test_fields_survive_pickling():
    G = make_field(13, 2)
    assert pickle.loads(pickle.dumps(G)) == G
