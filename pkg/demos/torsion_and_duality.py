"""Finite group schemes from projective equations: Hopf algebras, Cartier duals, and
the Galois modules behind the abelianized fundamental group of an elliptic curve."""
from pictau.exactfield import PrimeField
from pictau.groupscheme import cartier_dual, elliptic_curve, hopf_structure, mu_n, points_with_galois
from pictau.homology import GaloisModule, h1_etale, h1_fppf_mu_n, pi1_ab_mod_n, pi1_ab_structure


def show(title, M):
    print(f"-- {title}")
    print(M.format())


def main():
    F5 = PrimeField(5)
    H = hopf_structure(mu_n(5, F5))
    print(f"mu_5 over F_5: dimension {H.N}, reduced {H.is_reduced()}, "
          f"{points_with_galois(H).order} geometric point")
    show("its Cartier dual", GaloisModule.from_points(points_with_galois(cartier_dual(H))))

    E = elliptic_curve(0, 1)
    show("E[2] for y^2 = x^3 + 1 over Q", h1_fppf_mu_n(E, 2))
    show("pi_1^ab / 3 of the same curve", pi1_ab_mod_n(E, 3))
    print(pi1_ab_structure(1).format())

    for a, b, kind in [(-1, 0, "ordinary"), (0, 1, "supersingular")]:
        Ep = elliptic_curve(a, b, F5)
        pts = h1_fppf_mu_n(Ep, 5).order
        show(f"{kind} curve over F_5: H^1_et(Z/5)", h1_etale(Ep, 5))
        print(pi1_ab_structure(1, char=5, alb_p_points=pts).format())


if __name__ == "__main__":
    main()
