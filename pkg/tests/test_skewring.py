from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import MuConstraintViolation, SchemaError
from src.exactfield import make_field
from src.skewring import (
    MuMatrix,
    SkewPoly,
    check_normalizing_sequence,
    graded_ideal_piece,
    is_normal_element,
    monomials,
    normal_form_word,
)


def z(mu, i):
    return SkewPoly.generator(mu, i - 1)


def test_mu_matrix_constraints(F13):
    with pytest.raises(MuConstraintViolation) as exc:
        MuMatrix(F13, ((1, 2), (2, 1)))
    assert exc.value.pointer == "/mu/1/0"
    with pytest.raises(MuConstraintViolation):
        MuMatrix(F13, ((2, 1), (1, 1)))
    with pytest.raises(MuConstraintViolation):
        MuMatrix.from_upper(F13, 2, {(0, 1): 0})
    with pytest.raises(SchemaError):
        MuMatrix.from_upper(F13, 2, {(1, 0): 3})
    mu = MuMatrix.from_upper(F13, 3, {(0, 2): 7})
    assert mu(2, 0) == 2 and mu(0, 1) == 1
    assert not mu.is_identity()
    assert MuMatrix.identity(F13, 3).is_identity()


def test_normal_form_word_examples(F13):
    mu = MuMatrix.from_upper(F13, 3, {(0, 1): 2, (0, 2): 7, (1, 2): 5})
    assert normal_form_word([2, 0], 1, mu) == SkewPoly(mu, {(1, 0, 1): 7})
    assert normal_form_word([2, 1, 0], 1, mu) == SkewPoly(mu, {(1, 1, 1): 2 * 7 * 5 % 13})
    assert normal_form_word([0, 1], 1, mu) == SkewPoly(mu, {(1, 1, 0): 1})
    with pytest.raises(SchemaError):
        normal_form_word([3], 1, mu)


def test_square_from_two_factorizations(plane13):
    z1, z2 = z(plane13, 1), z(plane13, 2)
    two = SkewPoly.constant(plane13, 2)
    square = (z1 + two * z2) * (z1 + two * z2)
    other = (z1 + z2) * (z1 + SkewPoly.constant(plane13, 4) * z2)
    assert square == other
    assert square.render() == "z1^2 + 6*z1*z2 + 4*z2^2"
    assert SkewPoly.constant(plane13, 1) * square == square


def test_generators_skew_commute(plane13):
    z1, z2 = z(plane13, 1), z(plane13, 2)
    assert z2 * z1 == (z1 * z2).scale(2)
    assert (z2 * z1 * z1) == (z1 * z1 * z2).scale(4)


def test_powers_and_degrees(plane13):
    z1 = z(plane13, 1)
    assert (z1 ** 3).degree == 3
    assert (z1 + SkewPoly.constant(plane13, 1)).degree is None
    assert SkewPoly(plane13).render() == "0"


polys = st.dictionaries(
    st.sampled_from(monomials(3, 1) + monomials(3, 2)), st.integers(1, 12), max_size=4
)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
def test_multiplication_is_associative(f, g, h, m12, m13, m23):
    F = make_field(13)
    mu = MuMatrix.from_upper(F, 3, {(0, 1): m12, (0, 2): m13, (1, 2): m23})
    a, b, c = SkewPoly(mu, f), SkewPoly(mu, g), SkewPoly(mu, h)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("n,d", [(1, 3), (2, 4), (3, 3), (4, 2), (4, 4)])
def test_graded_piece_dimension(n, d):
    assert len(monomials(n, d)) == comb(n + d - 1, d)


def test_graded_ideal_piece_examples(plane13):
    z1, z2 = z(plane13, 1), z(plane13, 2)
    assert len(graded_ideal_piece([z1 * z1], 3, plane13)) == 2
    assert graded_ideal_piece([], 3, plane13) == []
    assert len(graded_ideal_piece([z1 * z2], 2, plane13)) == 1
    assert len(graded_ideal_piece([z1 * z1, z2 * z2], 3, plane13)) == 4


def test_normality_examples(F13, plane13):
    z1, z2 = z(plane13, 1), z(plane13, 2)
    cert = is_normal_element(z1 * z1, [])
    assert cert.normal
    assert set(cert.right_to_left) == {0, 1}
    bad = is_normal_element(z1 * z1 + z1 * z2, [])
    assert not bad.normal
    assert bad.reason.startswith("qz_not_in_span")

    comm = MuMatrix.identity(F13, 2)
    assert is_normal_element(z(comm, 1) * z(comm, 1) + z(comm, 1) * z(comm, 2), []).normal


def test_normalizing_sequences(plane13):
    z1, z2 = z(plane13, 1), z(plane13, 2)
    report = check_normalizing_sequence([z1 * z1, z2 * z2], "given")
    assert report.normalizing and report.order == (0, 1)
    assert len(report.certificates) == 2

    forms = [z1 * z1 + z1 * z2, z1 * z1]
    given_order = check_normalizing_sequence(forms, "given")
    assert not given_order.normalizing
    assert given_order.reason.startswith("q1_not_normal")
    searched = check_normalizing_sequence(forms, "search")
    assert searched.normalizing and searched.order == (1, 0)

    with pytest.raises(SchemaError):
        check_normalizing_sequence(forms, "random")


def test_poly_json_and_vector(plane13):
    z1, z2 = z(plane13, 1), z(plane13, 2)
    q = z1 * z1 + (z1 * z2).scale(3)
    assert q.as_json() == {"z1^2": 1, "z1*z2": 3}
    assert q.vector(2) == [1, 3, 0]
    assert SkewPoly.from_vector(plane13, 2, [1, 3, 0]) == q
    with pytest.raises(SchemaError):
        q.vector(3)
