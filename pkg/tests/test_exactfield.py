import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictau.exactfield import (
    QQ,
    FieldError,
    PrimeField,
    UnivariatePoly,
    automorphisms,
    extend_field,
    factor_univariate,
    is_prime,
    parse_field,
)


def upoly(K, ints):
    return UnivariatePoly.from_ints(K, ints)


def expand(facs, K):
    out = UnivariatePoly(K, [K.one])
    for g, e in facs:
        out = out * g ** e
    return out


def test_prime_field_rejects_composite():
    with pytest.raises(FieldError):
        PrimeField(6)


def test_difference_of_squares():
    facs = factor_univariate(upoly(QQ, [-1, 0, 1]))
    assert sorted(g.coeffs for g, _ in facs) == sorted([[QQ.from_int(-1), QQ.one], [QQ.one, QQ.one]])


def test_x2_x_1_irreducible_over_f2():
    F2 = PrimeField(2)
    f = upoly(F2, [1, 1, 1])
    assert all(f(a) != 0 for a in F2.elements())
    facs = factor_univariate(f)
    assert len(facs) == 1 and facs[0][0].deg == 2


def test_x3_plus_1_over_q():
    facs = factor_univariate(upoly(QQ, [1, 0, 0, 1]))
    degs = sorted(g.deg for g, _ in facs)
    assert degs == [1, 2]
    quad = next(g for g, _ in facs if g.deg == 2)
    # rational root test: only +-1 are candidates
    assert quad(Fraction(1)) != 0 and quad(Fraction(-1)) != 0


def test_sqrt2_extension_and_automorphisms():
    L = extend_field(QQ, upoly(QQ, [-2, 0, 1]))
    assert L.degree == 2
    auts = automorphisms(L)
    assert len(auts) == 2
    images = sorted(L.format(s(L.gen)) for s in auts)
    assert images == sorted([L.format(L.gen), L.format(L.neg(L.gen))])


def test_cube_root_two_has_trivial_automorphism_group():
    L = extend_field(QQ, upoly(QQ, [-2, 0, 0, 1]))
    assert len(automorphisms(L)) == 1


def test_f4_multiplicative_group_and_frobenius():
    F2 = PrimeField(2)
    F4 = extend_field(F2, upoly(F2, [1, 1, 1]))
    nonzero = [a for a in F4.elements() if not F4.is_zero(a)]
    assert len(nonzero) == 3
    assert all(F4.pow(a, 3) == F4.one for a in nonzero)
    auts = automorphisms(F4)
    assert len(auts) == 2
    frob = [s for s in auts if s(F4.gen) != F4.gen]
    assert frob and frob[0](F4.gen) == F4.pow(F4.gen, 2)


def test_reducible_minpoly_rejected():
    with pytest.raises(FieldError):
        extend_field(QQ, upoly(QQ, [-1, 0, 1]))


@pytest.mark.parametrize("text", ["Q", "Fp 7", "ext(Q; y^2-2)", "ext(Fp 3; y^2+1)"])
def test_descriptor_round_trip(text):
    K = parse_field(text)
    assert K.descriptor() == text
    assert parse_field(K.descriptor()).descriptor() == text


def test_automorphisms_form_a_group():
    F3 = PrimeField(3)
    L = extend_field(F3, upoly(F3, [1, 2, 0, 1]))  # x^3 + 2x + 1
    auts = automorphisms(L)
    assert len(auts) == 3
    imgs = {L.format(s(L.gen)) for s in auts}
    for a in auts:
        for b in auts:
            assert L.format(a.compose(b)(L.gen)) in imgs
    assert any(s.is_identity() for s in auts)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=5), st.lists(st.integers(-3, 3), min_size=1, max_size=7))
def test_factorization_reproduces_polynomial(pi, ints):
    p = [2, 3, 5, 7, 11, 13][pi]
    K = PrimeField(p)
    f = upoly(K, ints + [1])
    facs = factor_univariate(f, seed=1)
    assert expand(facs, K) == f.monic()
    for g, _ in facs:
        if g.deg <= 3:
            assert g.deg == 1 or all(g(a) != 0 for a in K.elements())


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_factorization_over_q_reproduces_polynomial(ints):
    f = upoly(QQ, ints + [1])
    assert expand(factor_univariate(f), QQ) == f.monic()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3, 5, 7]))
def test_extension_field_axioms(seed, p):
    K = PrimeField(p)
    L = extend_field(K, upoly(K, {2: [1, 1, 1], 3: [1, 0, 1], 5: [2, 0, 1], 7: [1, 0, 1]}[p]))
    rng = random.Random(seed)
    a, b, c = (L.random_element(rng) for _ in range(3))
    assert L.mul(a, L.add(b, c)) == L.add(L.mul(a, b), L.mul(a, c))
    assert L.mul(a, b) == L.mul(b, a)
    if not L.is_zero(a):
        assert L.mul(a, L.inv(a)) == L.one


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
