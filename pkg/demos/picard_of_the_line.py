"""The whole divisor-to-Picard pipeline on P^1 over F_3, and why a plane cubic is out of reach."""
from pictau.errors import BudgetExceeded
from pictau.exactfield import PrimeField
from pictau.groebner import Ideal
from pictau.hilbscheme import EmbeddedScheme, projective_space_ring
from pictau.picard import (
    certify_reduced,
    group_law,
    identify_div_component,
    linear_equivalence_relation,
    picard_quotient,
)


def main():
    K = PrimeField(3)
    X = EmbeddedScheme(Ideal([], projective_space_ring(1, K)))
    p = X.params()
    print(f"P^1: m = {p.m}, t = {p.t}")

    div = identify_div_component(X, p.m, p.t)
    print(div.format())
    print(f"reduced: {certify_reduced(div)}")
    print(f"rational points of Div: {len(div.points())}")

    L = linear_equivalence_relation(div)
    print(f"linear equivalence adds {len(L.ideal.gens) - 2} equations beyond Div x Div")

    pic = picard_quotient(div, L, u=2, symbolic_graph=True)
    print(pic.format())
    law = group_law(pic, identify_div_component(X, 2 * p.m, 2 * p.t, symbolic=False))
    print(law.format())
    print()

    R = projective_space_ring(2, PrimeField(7))
    x0, x1, x2 = R.gens()
    C = EmbeddedScheme(Ideal([x0 ** 3 + x1 ** 3 + x2 ** 3], R))
    q = C.params()
    print(f"plane cubic: m = {q.m}, t = {q.t}")
    try:
        identify_div_component(C, q.m, q.t)
    except BudgetExceeded as exc:
        print(exc.report())


if __name__ == "__main__":
    main()
