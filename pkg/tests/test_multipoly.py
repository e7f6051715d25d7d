from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictau.exactfield import QQ, PrimeField
from pictau.groebner import Ideal
from pictau.linalg import rank
from pictau.multipoly import MonomialOrder, PolyError, PolyRing, graded_basis, multiply_into_degree


def ring(n, K=QQ, order=None):
    R = PolyRing(K, [f"x{i}" for i in range(n)])
    return R.with_order(order) if order else R


def test_free_piece_p1_degree_2():
    R = ring(2)
    piece = graded_basis(R, None, 2)
    assert piece.dim == 3
    assert sorted(piece.basis) == sorted([(2, 0), (1, 1), (0, 2)])


def test_conic_quotient_degree_2():
    R = ring(3)
    x0, x1, x2 = R.gens()
    assert graded_basis(R, Ideal([x0 * x2 - x1 ** 2], R), 2).dim == 5


def test_plane_cubic_quotient_degree_4():
    R = ring(3)
    x0, x1, x2 = R.gens()
    assert graded_basis(R, Ideal([x0 ** 3 + x1 ** 3 + x2 ** 3], R), 4).dim == 12


def test_multiply_into_degree_unit_entries():
    R = ring(2)
    x0, x1 = R.gens()
    M, piece = multiply_into_degree([x0, x1], [x0])
    assert len(M) == 3 and len(M[0]) == 2
    assert sorted(v for row in M for v in row) == [0, 0, 0, 0, 1, 1]


def test_multiply_into_degree_fills_s2():
    R = ring(2)
    x0, x1 = R.gens()
    M, _ = multiply_into_degree([x0, x1], [x0, x1])
    assert len(M) == 3 and len(M[0]) == 4
    assert rank(M, QQ) == 3


def test_zero_polynomial_rejected():
    R = ring(2)
    with pytest.raises(PolyError):
        multiply_into_degree([R.gen(0)], [R.zero()])


@pytest.mark.parametrize("r", range(0, 5))
def test_free_dimensions(r):
    R = ring(r + 1)
    for t in range(0, 13 if r < 4 else 9):
        assert R.dim_free(t) == comb(t + r, r)


def test_basis_dimension_independent_of_order():
    for order in (MonomialOrder("lex"), MonomialOrder("grevlex")):
        R = ring(4, order=order)
        x0, x1, x2, x3 = R.gens()
        I = Ideal([x0 * x2 - x1 ** 2, x1 * x3 - x2 ** 2, x0 * x3 - x1 * x2], R)
        assert [graded_basis(R, I, t).dim for t in range(6)] == [3 * t + 1 for t in range(6)]


def test_parse_format_round_trip():
    R = ring(3)
    f = R.parse("3/2*x0^2*x1 - x2^3")
    assert R.parse(f.format()) == f
    assert f.is_homogeneous() and f.total_degree() == 3


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=4))
def test_multiply_into_degree_symmetric_column_space(fa, ga):
    K = PrimeField(5)
    R = PolyRing(K, ["x0", "x1", "x2"])

    def form(data):
        # homogeneous of degree 2 from (i, j, c) triples
        f = R.zero()
        for i, j, c in data:
            f = f + R.gen(i) * R.gen(j) * R.const(K.from_int(c))
        return f

    f, g = form(fa), form(ga)
    if f.is_zero() or g.is_zero():
        return
    M1, _ = multiply_into_degree([f], [g])
    M2, _ = multiply_into_degree([g], [f])
    assert rank(M1, K) == rank(M2, K) == rank([a + b for a, b in zip(M1, M2)], K)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6), st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_ring_axioms(a, b):
    R = ring(2)
    mons = R.monomials_of_degree(2)
    f = R.poly({m: QQ.from_int(c) for m, c in zip(mons, a[:3])})
    g = R.poly({m: QQ.from_int(c) for m, c in zip(mons, a[3:])})
    h = R.poly({m: QQ.from_int(c) for m, c in zip(mons, b[:3])})
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert (f - f).is_zero()
