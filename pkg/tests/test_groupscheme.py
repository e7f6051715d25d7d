import numpy as np
import pytest

from pictau.errors import ContractViolation
from pictau.exactfield import QQ, PrimeField
from pictau.groebner import Ideal
from pictau.groupscheme import (
    cartier_dual,
    division_polynomial,
    elliptic_curve,
    global_sections,
    hopf_structure,
    mu_n,
    points_with_galois,
    torsion_kernel,
)
from pictau.multipoly import PolyRing


def p1_ring(K=QQ):
    return PolyRing(K, ["x0", "x1"])


def test_sections_of_p1_are_constants():
    R = p1_ring()
    A = global_sections(Ideal([], R)).algebra
    assert A.N == 1 and A.is_reduced()


def test_sections_of_two_points():
    R = p1_ring()
    x0, x1 = R.gens()
    A = global_sections(Ideal([x0 * x1], R)).algebra
    assert A.N == 2 and A.is_reduced() and A.is_commutative() and A.is_associative()
    L, pts = A.points()
    assert L == QQ and len(pts) == 2


def test_sections_of_double_point():
    R = p1_ring(PrimeField(5))
    x0 = R.gen(0)
    A = global_sections(Ideal([x0 ** 2], R)).algebra
    assert A.N == 2 and not A.is_reduced()
    assert len(A.points()[1]) == 1


def test_section_degree_bound():
    R = p1_ring()
    x0, x1 = R.gens()
    with pytest.raises(ContractViolation):
        global_sections(Ideal([x0 ** 3 - x1 ** 3], R), t=1)


@pytest.mark.parametrize("n,K", [(2, QQ), (3, QQ), (3, PrimeField(3)), (5, PrimeField(7))])
def test_mu_n_hopf_axioms(n, K):
    H = hopf_structure(mu_n(n, K))
    assert H.N == n
    assert all(H.check_axioms().values())
    assert H.is_reduced() == (K.characteristic != n)


def test_mu3_points_and_dual_over_q():
    H = hopf_structure(mu_n(3))
    P = points_with_galois(H)
    assert P.order == 3 and P.field.degree == 2 and all(P.checks.values())
    # complex conjugation swaps the two primitive roots
    assert sorted(sorted(p) for p in P.action) == [[0, 1, 2], [0, 1, 2]]
    assert any(perm[P.identity] == P.identity and perm != list(range(3)) for perm in P.action)
    D = points_with_galois(cartier_dual(H))
    assert D.order == 3 and D.field == QQ


def test_dual_is_an_involution():
    H = hopf_structure(mu_n(4, PrimeField(5)))
    DD = cartier_dual(cartier_dual(H))
    for a, b in [(H.mult, DD.mult), (H.comult, DD.comult), (H.antipode, DD.antipode),
                 (H.unit, DD.unit), (H.counit, DD.counit)]:
        assert np.array_equal(np.asarray(a, dtype=object), np.asarray(b, dtype=object))
    assert all(cartier_dual(H).check_axioms().values())


def test_division_polynomials_degrees():
    K = QQ
    # psi_2 = 2y, so the even factor f_2 is constant
    assert division_polynomial(2, -1, 0, K).deg == 0
    for n in (3, 5, 7):
        assert division_polynomial(n, -1, 0, K).deg == (n * n - 1) // 2
    assert division_polynomial(4, -1, 0, K).deg == 6
    # psi_3 = 3x^4 + 6ax^2 + 12bx - a^2
    f = division_polynomial(3, 2, 5, PrimeField(101))
    assert [int(c) for c in f.coeffs] == [(-4) % 101, 60, 12, 0, 3]


def test_two_torsion_split_and_nonsplit():
    E = elliptic_curve(-1, 0)
    P = points_with_galois(torsion_kernel(E, 2))
    assert P.order == 4 and P.field == QQ and all(P.checks.values())
    E2 = elliptic_curve(0, 1)
    P2 = points_with_galois(torsion_kernel(E2, 2))
    assert P2.order == 4 and P2.field.degree == 2 and all(P2.checks.values())
    assert any(perm != list(range(4)) for perm in P2.action)


def test_group_order_divides_dimension():
    for G in [mu_n(5, PrimeField(5)), mu_n(6, PrimeField(7)), torsion_kernel(elliptic_curve(0, 1, PrimeField(7)), 2)]:
        H = hopf_structure(G)
        assert H.N % points_with_galois(H).order == 0


def test_identity_must_lie_on_group():
    E = elliptic_curve(-1, 0)
    with pytest.raises(ContractViolation):
        E.restrict(Ideal([E.ring.gen(1)], E.ring), "bad")


def test_singular_cubic_rejected():
    with pytest.raises(ContractViolation):
        elliptic_curve(0, 0)
