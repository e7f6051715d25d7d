"""Pluecker coordinates on small Grassmannians: matrices, point counts, and the two
descriptions of a containment condition."""
from math import comb

from pictau.exactfield import PrimeField
from pictau.grassmann import (
    GrassmannContext,
    convert_stiefel_to_plucker,
    enumerate_subspaces,
    gaussian_binomial,
    projective_points_of_space,
    stiefel_point_to_plucker,
    submodule_containment,
)
from pictau.textio import format_ideal, format_matrix


def main():
    ctx = GrassmannContext((2, 4), PrimeField(3))
    print("Gr(2,4): the matrix whose column space is the subspace with these coordinates")
    print(format_matrix(ctx.plucker_matrix(), lambda x: x.format()))
    print()
    print("one quadratic relation cuts Gr(2,4) out of P^5")
    print(format_ideal(ctx.relations))
    print()

    for d, n, q in [(2, 4, 2), (2, 4, 3), (3, 5, 2)]:
        K = PrimeField(q)
        c = GrassmannContext((d, n), K)
        on_locus = sum(1 for pt in projective_points_of_space(comb(n, d), K)
                       if all(K.is_zero(g.evaluate(pt, K)) for g in c.relations.gens))
        print(f"Gr({d},{n})(F_{q}): {on_locus} points on the relation locus, "
              f"Gaussian binomial {gaussian_binomial(n, d, q)}")
    print()

    # subspaces of F_2^4 containing e_0, first on Stiefel matrices, then on Pluecker coordinates
    K = PrimeField(2)
    c = GrassmannContext((2, 4), K)
    e0 = [[K.one], [K.zero], [K.zero], [K.zero]]
    I = submodule_containment(c, e0, "minors")
    J = convert_stiefel_to_plucker(I, c)
    print("planes through e_0, in Pluecker coordinates")
    print(format_ideal(J))
    hits = [S for S in enumerate_subspaces(2, 4, K)
            if all(K.is_zero(g.evaluate(stiefel_point_to_plucker(S, K), K)) for g in J.gens)]
    print(f"{len(hits)} planes over F_2 contain e_0 (expected {gaussian_binomial(3, 1, 2)})")


if __name__ == "__main__":
    main()
