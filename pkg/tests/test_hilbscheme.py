import itertools

import pytest

from pictau.errors import BudgetExceeded, ContractViolation
from pictau.exactfield import QQ, PrimeField
from pictau.grassmann import enumerate_subspaces, stiefel_point_to_plucker
from pictau.groebner import Ideal
from pictau.hilbscheme import (
    EmbeddedScheme,
    Factor,
    MorphismGraph,
    fiber_morphism_graph,
    ik_equations,
    projective_space_ring,
    raise_degree,
    restrict_to_X,
)
from pictau.linalg import rank
from pictau.multipoly import PolyRing
from pictau.numpoly import NumericalPolynomial as S


def twisted_cubic(K=QQ):
    R = projective_space_ring(3, K)
    x0, x1, x2, x3 = R.gens()
    return EmbeddedScheme(Ideal([x0 * x2 - x1 ** 2, x1 * x3 - x2 ** 2, x0 * x3 - x1 * x2], R))


def plane_cubic(K=QQ):
    R = projective_space_ring(2, K)
    x0, x1, x2 = R.gens()
    return EmbeddedScheme(Ideal([x0 ** 3 + x1 ** 3 + x2 ** 3], R))


def test_hilbert_polynomials_and_complements():
    for X, P in [(twisted_cubic(), S([1, 3])), (plane_cubic(), S([0, 3]))]:
        assert X.P == P
        assert X.P + X.Q == S.projective_space(X.r)
    assert plane_cubic().phi == 3


def test_p1_parameters():
    X = EmbeddedScheme(Ideal([], projective_space_ring(1, QQ)))
    p = X.params()
    assert (p.m, p.t, p.nu) == (1, 2, 0)


def test_plane_cubic_parameters():
    p = plane_cubic().params()
    assert (p.nu, p.m, p.t) == (2, 6, 36)


def test_non_homogeneous_rejected():
    R = projective_space_ring(1, QQ)
    with pytest.raises(ContractViolation):
        EmbeddedScheme(Ideal([R.gen(0) - R.one()], R))


def test_two_points_on_p1_is_all_of_gr13():
    K = PrimeField(3)
    Q = S.projective_space(1) - S([2])
    model = ik_equations(Q, 2, 1, K)
    assert model.omega_hat_shape == (4, 2)
    assert model.minor_size == 3 and model.minor_count == 0
    assert not model.stiefel_ideal().gens
    # every line in S_2 is (I_Z)_2 for a length-two divisor Z
    pts = list(enumerate_subspaces(1, 3, K))
    assert len(pts) == 13 and all(model.ik_holds_at(S_) for S_ in pts)


def test_one_point_in_p2_single_determinant():
    K = PrimeField(3)
    Q = S.projective_space(2) - S([1])
    model = ik_equations(Q, 1, 2, K)
    assert model.omega_hat_shape == (6, 6) and model.minor_size == 6 and model.minor_count == 1
    assert not model.stiefel_ideal().gens  # the determinant vanishes identically
    assert all(model.ik_holds_at(S_) for S_ in enumerate_subspaces(2, 3, K))


def test_t_below_gotzmann_rejected():
    Q = S.projective_space(2) - S([3])
    with pytest.raises(ContractViolation):
        ik_equations(Q, 2, 2, QQ)


def test_minor_cap():
    Q = S.projective_space(2) - S([2])
    model = ik_equations(Q, 2, 2, PrimeField(2), cap_minor_count=10)
    with pytest.raises(BudgetExceeded):
        model.stiefel_ideal()


def _s1_times(M, model, K):
    """``dim S_1 * M`` directly from products of forms."""
    R = model.ring
    up = R.monomials_of_degree(model.t + 1)
    idx = {e: i for i, e in enumerate(up)}
    rows = []
    for j in range(model.r + 1):
        for col in zip(*M):
            v = [K.zero] * len(up)
            for c, m in zip(col, model.monomials):
                e = list(m)
                e[j] += 1
                v[idx[tuple(e)]] = K.add(v[idx[tuple(e)]], c)
            rows.append(v)
    return rank(rows, K)


def test_persistence_agreement_two_points_in_p2():
    K = PrimeField(2)
    Q = S.projective_space(2) - S([2])
    model = ik_equations(Q, 2, 2, K)
    q3 = Q(3)
    count = 0
    for M in enumerate_subspaces(4, 6, K):
        dim = _s1_times(M, model, K)
        assert model.ik_holds_at(M) == (dim <= q3)
        if model.ik_holds_at(M):
            assert dim == q3
            count += 1
    assert count == 49


def test_restrict_to_conic_point_sets():
    K = PrimeField(2)
    R = projective_space_ring(2, K)
    x0, x1, x2 = R.gens()
    X = EmbeddedScheme(Ideal([x0 * x2 - x1 ** 2], R))
    Q = S.projective_space(2) - S([2])
    model = restrict_to_X(ik_equations(Q, 2, 2, K), X)
    U = X.ideal_piece(2)
    lin = model.linear_section
    inside = 0
    for M in enumerate_subspaces(4, 6, K):
        direct = rank([list(r) for r in zip(*M)] + U, K) == 4
        pt = stiefel_point_to_plucker(M, K)
        assert direct == all(K.is_zero(g.evaluate(pt, K)) for g in lin.gens)
        if model.contains_point(M):
            assert direct and model.ik_holds_at(M)
            inside += 1
    # the conic is P^1 with 3 rational points: C(3,2) rational pairs, one conjugate pair
    # from P^1(F_4), and 3 double points; together |P^2(F_2)| = 7
    assert inside == 3 + 1 + 3
    assert model.small_grassmannian == (3, 5)


def test_restrict_needs_large_t():
    X = plane_cubic(PrimeField(5))
    Q = S.projective_space(2) - S([1])
    with pytest.raises(ContractViolation, match="phi"):
        restrict_to_X(ik_equations(Q, 2, 2, PrimeField(5)), X)


def test_constant_family_graph():
    K = PrimeField(3)
    T = PolyRing(K, ["x0", "x1", "b0", "b1"], grading=[[1, 1, 0, 0], [0, 0, 1, 1]])
    Y = Ideal([T.gen("x1")], T)
    B = Ideal([], PolyRing(K, ["b0", "b1"]))
    G = fiber_morphism_graph(B, ["b0", "b1"], Y, ["x0", "x1"], S([1]), 1)
    # [pt] = span(x1) in S_1 = <x0, x1>: Pluecker coordinates (0 : 1)
    for b in [(1, 0), (0, 1), (1, 1), (1, 2)]:
        assert G.contains([b, (0, 1)])
        assert not G.contains([b, (1, 0)])
    img = G.project(["B"])
    assert not any(not g.is_zero() for g in img.ideal.gens)


def test_graph_projection_veronese():
    K = QQ
    fx = Factor("X", ("x0", "x1"))
    fy = Factor("Y", ("y0", "y1", "y2"))
    T = PolyRing(K, ["x0", "x1", "y0", "y1", "y2"], grading=[[1, 1, 0, 0, 0], [0, 0, 1, 1, 1]])
    x0, x1, y0, y1, y2 = T.gens()
    img = [x0 ** 2, x0 * x1, x1 ** 2]
    ys = [y0, y1, y2]
    gens = [ys[i] * img[j] - ys[j] * img[i] for i, j in itertools.combinations(range(3), 2)]
    G = MorphismGraph([fx, fy], Ideal(gens, T))
    E = G.project(["Y"]).ideal
    R = E.ring
    conic = R.gen(0) * R.gen(2) - R.gen(1) ** 2
    assert E.contains(conic)
    assert Ideal([conic], R).contains_ideal(E)


def test_raise_degree():
    R = PolyRing(QQ, ["x0", "x1"])
    out = raise_degree([R.gen(0)], ["x0", "x1"], 3, R)
    assert len(out) == 3 and all(g.total_degree() == 3 for g in out)
