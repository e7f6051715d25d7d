import itertools

import pytest

from pictau.errors import BudgetExceeded, ContractViolation
from pictau.exactfield import QQ, PrimeField
from pictau.groebner import Ideal
from pictau.hilbscheme import EmbeddedScheme, projective_space_ring
from pictau.numpoly import NumericalPolynomial as S
from pictau.picard import (
    DivPoint,
    addition_graph_div,
    certify_reduced,
    check_parameters,
    group_law,
    identify_div_component,
    is_cartier_divisor,
    is_numerically_mH,
    linear_equivalence_relation,
    linearly_equivalent,
    picard_quotient,
)


def p1(K):
    return EmbeddedScheme(Ideal([], projective_space_ring(1, K)))


def plane_cubic(K):
    R = projective_space_ring(2, K)
    x0, x1, x2 = R.gens()
    return EmbeddedScheme(Ideal([x0 ** 3 + x1 ** 3 + x2 ** 3], R))


@pytest.fixture(scope="module")
def div_p1():
    div = identify_div_component(p1(PrimeField(3)), 1, 2)
    certify_reduced(div)
    return div


def test_cartier_on_p1_and_cubic():
    X = p1(QQ)
    R = X.ring
    x0, x1 = R.gens()
    assert is_cartier_divisor(Ideal([x0], R), X)
    assert is_cartier_divisor(Ideal([x0 * x1 ** 2], R), X)
    assert not is_cartier_divisor(Ideal([x0, x1], R), X)
    C = plane_cubic(QQ)
    y0, y1, y2 = C.ring.gens()
    assert is_cartier_divisor(Ideal([y0 + y1, y2], C.ring), C)
    assert is_cartier_divisor(Ideal([y0, y1 ** 3 + y2 ** 3], C.ring), C)
    with pytest.raises(ContractViolation):
        is_cartier_divisor(Ideal([y0, y1], C.ring), C)


def test_numerically_mH_degrees():
    X = p1(QQ)
    R = X.ring
    x0, x1 = R.gens()
    D = Ideal([x0 ** 2], R)
    assert is_numerically_mH(D, X, 2) and not is_numerically_mH(D, X, 1)
    C = plane_cubic(QQ)
    y0 = C.ring.gen(0)
    Z = Ideal(C.ideal.gens + [y0], C.ring)
    assert is_numerically_mH(Z, C, 1) and not is_numerically_mH(Z, C, 2)
    with pytest.raises(ContractViolation):
        is_numerically_mH(Z, C, 1, N=0)


def test_parameter_bounds():
    X = p1(PrimeField(3))
    with pytest.raises(ContractViolation):
        check_parameters(X, 0, 2)
    with pytest.raises(ContractViolation):
        check_parameters(X, 1, 1)
    assert check_parameters(X, 2, 5).t == 5


def test_div_p1_is_conic(div_p1):
    assert div_p1.accepted_in_full
    assert div_p1.provenance["reduced_certificate"]
    # degree-one divisors on P^1 over F_3: the points of P^1 itself
    assert len(div_p1.points()) == 4
    assert div_p1.ideal.hilbert_polynomial() == S([1, 2])


def test_linear_equivalence_is_total_on_p1(div_p1):
    pts = div_p1.points()
    assert all(linearly_equivalent(div_p1, D, E) for D, E in itertools.product(pts, repeat=2))
    L = linear_equivalence_relation(div_p1)
    # only the two copies of the Div equations survive
    assert len(L.ideal.gens) == 2


def test_degree_two_divisors_on_p1():
    div = identify_div_component(p1(PrimeField(3)), 2, 4, symbolic=False)
    pts = div.points()
    # Sym^2 P^1 = P^2, so |P^2(F_3)| = 13 rational points, all linearly equivalent
    assert len(pts) == 13
    assert all(linearly_equivalent(div, pts[0], E) for E in pts)
    assert linearly_equivalent(div, div.mH_point(), pts[5])


def test_pic_p1_one_reduced_point(div_p1):
    pic = picard_quotient(div_p1, u=2)
    assert len(pic.points) == 1 and pic.points[0][2] == 4
    assert pic.reduced and pic.Phi == S([1, 2])
    assert pic.provenance["u_bound"] == 2


def test_group_law_trivial(div_p1):
    pic = picard_quotient(div_p1, u=2)
    div2 = identify_div_component(div_p1.X, 2, 4, symbolic=False)
    law = group_law(pic, div2)
    assert law.size == 1 and law.table == [[0]] and all(law.checks.values())


def test_addition_needs_doubled_parameters(div_p1):
    D = div_p1.points()[0]
    with pytest.raises(ContractViolation):
        addition_graph_div(div_p1, div_p1, D, D)
    div2 = identify_div_component(div_p1.X, 2, 4, symbolic=False)
    s = addition_graph_div(div_p1, div2, D, D)
    assert isinstance(s, DivPoint) and len(s.rows) == div2.d


def test_budget_refusal_before_equations():
    with pytest.raises(BudgetExceeded) as e:
        identify_div_component(plane_cubic(PrimeField(7)), 6, 36)
    assert e.value.sizes["grassmannian"] == "Gr(90,108)"
    assert e.value.sizes["binomial"] == "C(108,90)"
