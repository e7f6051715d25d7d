import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictau.errors import ContractViolation
from pictau.exactfield import QQ, PrimeField
from pictau.groupscheme import elliptic_curve, mu_n
from pictau.homology import (
    FinAbGroup,
    GaloisModule,
    IntegrityError,
    h1_etale,
    h1_fppf_mu_n,
    ns_torsion,
    p_rank,
    pi1_ab_mod_n,
    pi1_ab_structure,
    pontryagin_dual,
    smith_normal_form,
    trivial_group,
)

from oracles import invariant_factors


def matmul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]


def test_snf_example():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    U, D, V = smith_normal_form(A)
    assert [D[i][i] for i in range(3)] == [2, 6, 12]
    assert matmul(matmul(U, A), V) == D


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_against_determinantal_divisors(A):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    diag = [abs(D[i][i]) for i in range(min(len(D), len(D[0])))]
    nz = [d for d in diag if d]
    assert nz == invariant_factors(A)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def product_table(a, b):
    elems = list(itertools.product(range(a), range(b)))
    idx = {e: i for i, e in enumerate(elems)}
    return [[idx[((x[0] + y[0]) % a, (x[1] + y[1]) % b)] for y in elems] for x in elems]


def test_fin_ab_from_tables():
    G, coords = FinAbGroup.from_table(cyclic_table(6), 0)
    assert G.invariants == (6,) and len(set(coords)) == 6
    G, _ = FinAbGroup.from_table(product_table(2, 3), 0)
    assert G.invariants == (6,)
    G, _ = FinAbGroup.from_table(product_table(2, 4), 0)
    assert G.invariants == (2, 4) and G.format() == "Z/2 x Z/4"
    assert FinAbGroup(()).format() == "0" and FinAbGroup((1, 3)).invariants == (3,)
    with pytest.raises(ContractViolation):
        FinAbGroup((4, 2))


def test_non_group_table_rejected():
    bad = [[0, 1, 2], [1, 1, 0], [2, 0, 1]]
    with pytest.raises(IntegrityError):
        FinAbGroup.from_table(bad, 0)


def test_dual_of_z2_z4_with_swapping_action():
    # the automorphism (a, b) -> (a + b mod 2, b) of Z/2 x Z/4 in invariant coordinates
    G = FinAbGroup((2, 4))
    M = GaloisModule(G, QQ, [[[1, 1], [0, 1]]], label="T")
    assert M.acts_by_automorphisms() and not M.is_trivial_action()
    D = pontryagin_dual(M)
    assert D.group.invariants == (2, 4) and D.label == "T^" and D.acts_by_automorphisms()
    DD = pontryagin_dual(D)
    assert DD._reduce(DD.matrices[0]) == M._reduce(M.matrices[0]) and DD.label == "T"


def test_profinite_descriptions():
    assert pi1_ab_structure(1).format() == "Zhat^2"
    assert pi1_ab_structure(0).format() == "0"
    assert pi1_ab_structure(1, char=5, alb_p_points=5).format() == "(prod_{l!=5} Z_l^2) x Z_5^1"
    assert pi1_ab_structure(1, char=5, alb_p_points=1).format() == "(prod_{l!=5} Z_l^2)"
    assert pi1_ab_structure(0, FinAbGroup((3,))).format() == "Z/3"
    with pytest.raises(IntegrityError):
        p_rank(10, 5, 1)
    with pytest.raises(IntegrityError):
        p_rank(25, 5, 1)
    with pytest.raises(ContractViolation):
        pi1_ab_structure(1, char=5)


def test_point_has_trivial_homology():
    G = trivial_group(QQ)
    assert pi1_ab_mod_n(G, 2).order == 1
    assert h1_etale(G, 3).group.format() == "0"
    assert ns_torsion(G).N == 1


def test_mu3_over_q():
    M = pi1_ab_mod_n(mu_n(3), 3)
    assert M.group.invariants == (3,) and M.field == QQ


def test_split_two_torsion():
    E = elliptic_curve(-1, 0)
    for M in (pi1_ab_mod_n(E, 2), h1_etale(E, 2), h1_fppf_mu_n(E, 2)):
        assert M.group.invariants == (2, 2) and M.is_trivial_action()
    assert ns_torsion(E).N == 1


def test_nonsplit_two_torsion_swaps():
    M = h1_fppf_mu_n(elliptic_curve(0, 1), 2)
    assert M.group.invariants == (2, 2)
    assert M.format().splitlines()[4] == "field Q(sqrt(-3))"
    assert not M.is_trivial_action() and M.acts_by_automorphisms()


def test_mu5_in_characteristic_5():
    K = PrimeField(5)
    assert pi1_ab_mod_n(mu_n(5, K), 5).group.invariants == (5,)
    assert h1_fppf_mu_n(mu_n(5, K), 5).order == 1
