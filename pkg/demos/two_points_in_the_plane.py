"""Length-two subschemes of P^2 over F_2 seen as 4-dimensional spaces of quadrics."""
from collections import Counter

from pictau.exactfield import PrimeField
from pictau.grassmann import enumerate_subspaces
from pictau.hilbscheme import ik_equations
from pictau.numpoly import NumericalPolynomial as S
from pictau.numpoly import gotzmann_number


def main():
    K = PrimeField(2)
    Q = S.projective_space(2) - S([2])
    print(f"Hilbert polynomial of the ideal of two points: {Q.format_power()}")
    print(f"Gotzmann number {gotzmann_number(Q, 2)}, so t = 2 suffices")
    model = ik_equations(Q, 2, 2, K)
    rows, cols = model.omega_hat_shape
    print(f"rank condition on a {rows} x {cols} matrix, minors of size {model.minor_size}")

    kinds = Counter()
    total = 0
    for M in enumerate_subspaces(4, 6, K):
        total += 1
        if not model.ik_holds_at(M):
            continue
        # how many F_2-points the quadrics have in common tells the kind of subscheme
        common = 0
        for pt in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]:
            vals = []
            for col in zip(*M):
                v = 0
                for c, e in zip(col, model.monomials):
                    term = int(c)
                    for x, k in zip(pt, e):
                        term *= x ** k
                    v += term
                vals.append(v % 2)
            common += not any(vals)
        kinds[common] += 1
    print(f"{sum(kinds.values())} of the {total} subspaces of S_2 are ideals of length-two subschemes")
    print(f"  two rational points: {kinds[2]}")
    print(f"  one rational point (a double point): {kinds[1]}")
    print(f"  no rational point (a conjugate pair): {kinds[0]}")


if __name__ == "__main__":
    main()
