import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import BudgetExceeded, NotMuSymmetric
from src.exactfield import make_field
from src.quadforms import (
    MU_RANK_UNKNOWN,
    Factorization,
    MuSymMatrix,
    QuadraticForm,
    classical_rank,
    factorizations,
    factorizations_sweep,
    mu_rank,
    pairs,
    phi,
    product_form,
    tau,
    tau_inv,
)
from src.skewring import MuMatrix, SkewPoly


def form(mu, coeffs):
    """Coefficients keyed by 1-based pairs, e.g. {(1, 1): 1, (1, 2): 6}."""
    lookup = {(i - 1, j - 1): c % mu.field.q for (i, j), c in coeffs.items()}
    return QuadraticForm(mu, tuple(lookup.get(p, 0) for p in pairs(mu.n)))


def canonical(F, a, b):
    """Scale (a, b) to (a / lead, b * lead) so a starts with 1."""
    lead = next(x for x in a if x)
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in a), tuple(F.mul(lead, x) for x in b)


def test_pairs_follow_monomial_order():
    assert pairs(3) == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def test_tau_examples(F13, plane13):
    E11 = MuSymMatrix(plane13, ((1, 0), (0, 0)))
    assert tau(E11).render() == "z1^2"
    M = MuSymMatrix(plane13, ((0, 2), (1, 0)))
    assert tau(M).render() == "4*z1*z2"
    assert tau(MuSymMatrix(plane13, ((0, 0), (0, 0)))).is_zero()


def test_tau_inv_examples(plane13):
    Q = form(plane13, {(1, 1): 1, (1, 2): 6, (2, 2): 4})
    assert tau_inv(Q).entries == ((1, 3), (8, 4))
    assert tau_inv(form(plane13, {(1, 1): 1})).entries == ((1, 0), (0, 0))
    assert tau_inv(QuadraticForm.zero(plane13)).entries == ((0, 0), (0, 0))


def test_mu_symmetry_is_enforced(plane13):
    with pytest.raises(NotMuSymmetric) as exc:
        MuSymMatrix(plane13, ((0, 1), (1, 0)))
    assert exc.value.pointer == "/0/1"


def test_phi_examples(F5, plane5, plane13):
    assert phi((1, 0), (0, 1), plane13).entries == ((0, 1), (7, 0))
    assert phi((1, 2), (1, 1), plane5).entries == ((2, 0), (0, 4))
    assert phi((1, 0), (1, 0), plane13).entries == ((2, 0), (0, 0))
    target = tau_inv(form(plane5, {(1, 1): 1, (2, 2): 2}))
    assert phi((1, 2), (1, 1), plane5).entries == tuple(tuple(F5.mul(2, x) for x in r) for r in target.entries)


def test_factorizations_of_the_double_square(plane13):
    Q = form(plane13, {(1, 1): 1, (1, 2): 6, (2, 2): 4})
    fs = factorizations(Q)
    assert fs.factorizations == (Factorization((1, 1), (1, 4)), Factorization((1, 2), (1, 2)))
    assert fs.mu_rank_label == 1
    assert mu_rank(Q) == 1
    assert factorizations_sweep(Q) == fs


def test_factorizations_over_f5(plane5):
    fs = factorizations(form(plane5, {(1, 1): 1, (2, 2): 2}))
    assert fs.factorizations == (Factorization((1, 2), (1, 1)), Factorization((1, 3), (1, 4)))
    assert fs.mu_rank_label == 2
    none = factorizations(form(plane5, {(1, 1): 1, (2, 2): 1}))
    assert len(none) == 0
    assert none.mu_rank_label == MU_RANK_UNKNOWN
    assert mu_rank(form(plane5, {(1, 1): 1, (2, 2): 1}), max_ext=1) == MU_RANK_UNKNOWN


def test_unique_and_swapped_factorizations(vvw_doc):
    mu = vvw_doc.mu
    fs = factorizations(form(mu, {(4, 4): 1}))
    assert fs.factorizations == (Factorization((0, 0, 0, 1), (0, 0, 0, 1)),)
    swapped = factorizations(form(mu, {(2, 3): 1}))
    assert swapped.factorizations == (
        Factorization((0, 0, 1, 0), (0, 12, 0, 0)),
        Factorization((0, 1, 0, 0), (0, 0, 1, 0)),
    )
    assert factorizations_sweep(form(mu, {(2, 3): 1})) == swapped


def test_mu_rank_examples(F13):
    anti = MuMatrix.from_upper(F13, 2, {(0, 1): 12})
    assert mu_rank(QuadraticForm.zero(anti)) == 0
    assert mu_rank(form(anti, {(1, 2): 1})) == 2


def test_classical_rank_examples(F13):
    assert classical_rank([[1, 0, 0], [0, 2, 0], [0, 0, 0]], F13) == 2
    assert classical_rank([[0, 0], [0, 0]], F13) == 0
    comm = MuMatrix.identity(F13, 3)
    assert classical_rank(phi((1, 0, 2), (0, 1, 5), comm)) == 2


@pytest.mark.parametrize("p", [3, 5])
def test_engine_matches_sweep_exhaustively_on_the_plane(p):
    F = make_field(p)
    for m12 in range(1, p):
        mu = MuMatrix.from_upper(F, 2, {(0, 1): m12})
        for coeffs in product(range(p), repeat=3):
            Q = QuadraticForm(mu, coeffs)
            fast, slow = factorizations(Q), factorizations_sweep(Q)
            assert fast == slow, Q.render()
            assert len(fast) <= 2


mus3 = st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
coeffs3 = st.tuples(*[st.integers(0, 4)] * 6)


@settings(max_examples=400, deadline=None)
@given(mus3, coeffs3)
def test_engine_matches_sweep_in_three_variables(m, coeffs):
    F = make_field(5)
    mu = MuMatrix.from_upper(F, 3, {(0, 1): m[0], (0, 2): m[1], (1, 2): m[2]})
    Q = QuadraticForm(mu, coeffs)
    assert factorizations(Q) == factorizations_sweep(Q)


@settings(max_examples=60, deadline=None)
@given(mus3, st.tuples(*[st.integers(0, 4)] * 3), st.tuples(*[st.integers(0, 4)] * 3))
def test_every_product_factors(m, a, b):
    F = make_field(5)
    mu = MuMatrix.from_upper(F, 3, {(0, 1): m[0], (0, 2): m[1], (1, 2): m[2]})
    if not any(a) or not any(b):
        return
    Q = QuadraticForm(mu, product_form(a, b, mu))
    fs = factorizations(Q)
    assert len(fs) >= 1
    assert Factorization(*canonical(F, a, b)) in fs.factorizations
    assert all(product_form(f.left, f.right, mu) == Q.coeffs for f in fs.factorizations)
    assert mu_rank(Q, max_ext=1) in (1, 2)


@pytest.mark.slow
def test_engine_matches_sweep_on_many_random_forms():
    rng = random.Random(20240611)
    F = make_field(5)
    for _ in range(10_000):
        mu = MuMatrix.from_upper(F, 3, {(0, 1): rng.randrange(1, 5), (0, 2): rng.randrange(1, 5), (1, 2): rng.randrange(1, 5)})
        Q = QuadraticForm(mu, tuple(rng.randrange(5) for _ in range(6)))
        assert factorizations(Q) == factorizations_sweep(Q)


def test_twisted_form_factors_four_ways():
    F = make_field(3)
    mu = MuMatrix.from_upper(F, 3, {(1, 2): 2})
    Q = form(mu, {(1, 1): 1, (2, 2): 2, (3, 3): 2})
    fs = factorizations(Q)
    assert [f.left for f in fs.factorizations] == [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2)]
    for f in fs.factorizations:
        assert SkewPoly.linear(mu, f.left) * SkewPoly.linear(mu, f.right) == Q.poly()
    assert fs == factorizations_sweep(Q)
    assert fs.mu_rank_label == 2


def test_sum_of_signed_squares_factors_four_ways(F13):
    mu = MuMatrix.from_upper(F13, 3, {(1, 2): 12})
    fs = factorizations(form(mu, {(1, 1): 1, (2, 2): -1, (3, 3): -1}))
    assert len(fs) == 4
    assert {f.left[1:] for f in fs.factorizations} == {(1, 1), (1, 12), (12, 1), (12, 12)}


COMMUTATIVE_CASES =[(3, 2), (3, 3), (5, 2), (5, 3)]


@pytest.mark.parametrize("p,n", COMMUTATIVE_CASES)
def test_commutative_count_follows_rank(p, n):
    # over F_{p^2} every binary form splits, so rank r <= 2 means exactly r factorizations
    F, G = make_field(p), make_field(p, 2)
    mu = MuMatrix.identity(F, n)
    seen = set()
    for coeffs in product(range(p), repeat=len(pairs(n))):
        Q = QuadraticForm(mu, coeffs)
        key = Q.normalized()
        if key is None or key in seen:
            continue
        seen.add(key)
        r = classical_rank(tau_inv(Q))
        n_facts = len(factorizations(Q, G))
        assert n_facts == (r if r <= 2 else 0), (Q.render(), r)
        if r <= 2:
            assert mu_rank(Q, max_ext=2) == r


@settings(max_examples=80, deadline=None)
@given(mus3, coeffs3)
def test_tau_round_trip(m, coeffs):
    F = make_field(5)
    mu = MuMatrix.from_upper(F, 3, {(0, 1): m[0], (0, 2): m[1], (1, 2): m[2]})
    Q = QuadraticForm(mu, coeffs)
    assert tau(tau_inv(Q)) == Q
    M = tau_inv(Q)
    assert tau_inv(tau(M)) == M


@settings(max_examples=60, deadline=None)
@given(mus3, st.tuples(*[st.integers(0, 4)] * 3), st.tuples(*[st.integers(0, 4)] * 3))
def test_phi_is_twice_the_product_form(m, a, b):
    F = make_field(5)
    mu = MuMatrix.from_upper(F, 3, {(0, 1): m[0], (0, 2): m[1], (1, 2): m[2]})
    assert tau(phi(a, b, mu)).coeffs == tuple(F.mul(2, c) for c in product_form(a, b, mu))


def test_sweep_respects_budget(F13):
    mu = MuMatrix.identity(F13, 4)
    with pytest.raises(BudgetExceeded):
        factorizations_sweep(form(mu, {(1, 1): 1}), budget=100)


def test_factorizations_over_an_extension(plane5):
    G = make_field(5, 2)
    Q = form(plane5, {(1, 1): 1, (2, 2): 1})
    fs = factorizations(Q, G)
    assert len(fs) == 2
    assert fs == factorizations_sweep(Q, G)
