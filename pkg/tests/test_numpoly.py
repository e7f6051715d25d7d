import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictau.exactfield import QQ
from pictau.groebner import Ideal
from pictau.multipoly import PolyRing
from pictau.numpoly import (
    NotAHilbertPolynomial,
    NumericalPolynomial,
    ParameterError,
    fiber_hilbert_poly,
    gotzmann_number,
    gotzmann_rep,
    phi_of_scheme,
    pipeline_params,
)

from oracles import hilbert_poly_hypersurface

S = NumericalPolynomial


def points_Q(d, r):
    return S.projective_space(r) - S([d])


def hypersurface_P(d, r):
    return S.projective_space(r) - S.projective_space(r).shift(-d)


def test_rep_of_3s():
    rep = gotzmann_rep(S([0, 3]))
    assert rep.a == (1, 1, 1) and rep.psi == 3
    assert rep.format() == "C(s+1,1)+C(s,1)+C(s-1,1)"


def test_rep_of_constant():
    assert gotzmann_rep(S([4])).a == (0, 0, 0, 0)


def test_rep_of_projective_plane():
    rep = gotzmann_rep(S.projective_space(2))
    assert rep.a == (2,) and rep.psi == 1


def test_gotzmann_binomial_form_example():
    assert gotzmann_rep(S([2, 1])).format() == "C(s+1,1)+C(s-1,0)"


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("d", range(1, 7))
def test_points(d, r):
    assert gotzmann_number(points_Q(d, r), r) == d


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("d", range(1, 6))
def test_hypersurfaces(d, r):
    P = hypersurface_P(d, r)
    for s in range(d, d + 6):
        assert P(s) == hilbert_poly_hypersurface(d, r, s)
    assert gotzmann_number(S.projective_space(r) - P, r) == d


def test_empty_scheme():
    assert gotzmann_number(S.projective_space(3), 3) == 0


def test_monotonicity():
    for r in (1, 2, 3):
        vals = [gotzmann_number(points_Q(d, r), r) for d in range(1, 7)]
        assert vals == sorted(set(vals))
        vals = [gotzmann_number(S.projective_space(r) - hypersurface_P(d, r), r) for d in range(1, 6)]
        assert vals == sorted(set(vals))


def test_phi_of_schemes():
    R = PolyRing(QQ, ["x0", "x1", "x2"])
    x0, x1, x2 = R.gens()
    assert phi_of_scheme(Ideal([x0 ** 3 + x1 ** 3 + x2 ** 3], R)) == 3
    assert phi_of_scheme(Ideal([x0, x1], R)) == 1
    assert phi_of_scheme(Ideal([], PolyRing(QQ, ["x0", "x1"]))) == 1


def test_not_a_hilbert_polynomial():
    with pytest.raises(NotAHilbertPolynomial):
        gotzmann_rep(S([0, -1]))
    assert gotzmann_number(S.projective_space(2) - S([0, -1]), 2) == float("inf")


def test_pipeline_params_p1():
    p = pipeline_params(S([1, 1]), 1, 1, 0, 1)
    assert (p.nu, p.m, p.t) == (0, 1, 2)


def test_pipeline_params_plane_cubic():
    p = pipeline_params(S([0, 3]), 2, 3, 1, 3)
    assert (p.nu, p.m, p.t) == (2, 6, 36)


def test_downward_override_rejected():
    with pytest.raises(ParameterError):
        pipeline_params(S([1, 1]), 1, 1, 0, 1, override_m=0)
    with pytest.raises(ParameterError):
        pipeline_params(S([1, 1]), 1, 1, 0, 1, override_t=1)
    p = pipeline_params(S([1, 1]), 1, 1, 0, 1, override_m=2)
    assert (p.m, p.t) == (2, 4)


def test_fiber_polynomials():
    P1 = S([1, 1])
    assert fiber_hilbert_poly(P1, 1, 2) == S([1, 2])
    assert fiber_hilbert_poly(P1, 1, 3) == S([1, 3])
    assert fiber_hilbert_poly(S([1]), 1, 2) == S([1])
    Phi = fiber_hilbert_poly(P1, 2, 4)
    assert all(Phi(s) == comb(3 * s + 2, 2) for s in range(10))


@pytest.mark.parametrize("m,t", [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6)])
def test_fiber_degree_and_leading_coefficient(m, t):
    P1 = S([1, 1])
    Phi = fiber_hilbert_poly(P1, m, t)
    b, a = int(P1(m)), int(P1(t - m))
    assert Phi.degree == b - 1
    assert Phi.leading_coefficient() == Fraction(a ** (b - 1), factorial(b - 1))


def _random_valid(rng):
    k = rng.randint(1, 8)
    top = rng.randint(0, 3)
    a = sorted((rng.randint(0, top) for _ in range(k)), reverse=True)
    return tuple(a)


def test_reconstruction_on_seeded_polynomials():
    rng = random.Random(20240501)
    for _ in range(50):
        a = _random_valid(rng)
        P = S([])
        for i, ai in enumerate(a):
            P = P + S.binom(ai - i, ai)
        rep = gotzmann_rep(P)
        assert rep.a == a
        assert rep.polynomial() == P


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=10))
def test_reconstruction_identity(raw):
    a = tuple(sorted(raw, reverse=True))
    P = S([])
    for i, ai in enumerate(a):
        P = P + S.binom(ai - i, ai)
    rep = gotzmann_rep(P)
    assert rep.a == a and rep.polynomial() == P
    r = max(a) + 1
    Q = S.projective_space(r) - P
    assert P + Q == S.projective_space(r)
    assert gotzmann_number(Q, r) == len(a)
