"""Acceptance checks, one test per criterion; each prints a PASS/FAIL line with its runtime."""
import contextlib
import io
import itertools
import random
import time
from math import comb

from pictau.cli import main as cli_main
from pictau.exactfield import QQ, PrimeField
from pictau.grassmann import (
    GrassmannContext,
    chart_matrix,
    convert_plucker_to_stiefel,
    convert_stiefel_to_plucker,
    enumerate_subspaces,
    plucker_matrix,
    projective_points_of_space,
    stiefel_point_to_plucker,
    submodule_containment,
)
from pictau.groebner import Ideal
from pictau.groupscheme import cartier_dual, elliptic_curve, hopf_structure, mu_n, points_with_galois, torsion_kernel
from pictau.hilbscheme import EmbeddedScheme, ik_equations, projective_space_ring
from pictau.homology import GaloisModule, h1_etale, h1_fppf_mu_n, pi1_ab_mod_n, pontryagin_dual
from pictau.linalg import rank
from pictau.numpoly import NumericalPolynomial as S
from pictau.numpoly import gotzmann_number, gotzmann_rep
from pictau.picard import (
    certify_reduced,
    group_law,
    identify_div_component,
    linear_equivalence_relation,
    linearly_equivalent,
    picard_quotient,
)
from pictau.textio import format_ideal

from oracles import QUAD_MONOMIALS, degree_two_subschemes_p2_f2, gaussian_binomial, projective_count

RESULTS = {}


@contextlib.contextmanager
def criterion(n, limit, title):
    """Time the body; a failed check or an exception records FAIL."""
    state = {"ok": True, "notes": []}
    t0 = time.perf_counter()
    try:
        yield state
    except BaseException:
        state["ok"] = False
        raise
    finally:
        secs = time.perf_counter() - t0
        in_time = secs < limit
        status = "PASS" if state["ok"] and in_time else "FAIL"
        note = "; ".join(state["notes"])
        if not in_time:
            note = (note + "; " if note else "") + "over the runtime limit"
        line = f"criterion {n}: {status} {title} ({secs:.1f}s, limit {limit}s)" + (f" {note}" if note else "")
        RESULTS[n] = line
        print(line)
    assert in_time, line


def check(state, cond, note):
    if not cond:
        state["ok"] = False
        state["notes"].append(note)
    assert cond, note


def names(M):
    return [[x.format() for x in row] for row in M]


def vanishes(gens, pt, K):
    return all(K.is_zero(g.evaluate(pt, K)) for g in gens)


# -- 1 --------------------------------------------------------------------------------------------


def test_criterion_01_grassmannian_counts():
    with criterion(1, 10 * 3, "Pluecker locus point counts") as st:
        for d, n, q, want in [(2, 4, 2, 35), (2, 4, 3, 130), (3, 5, 2, 155)]:
            t0 = time.perf_counter()
            K = PrimeField(q)
            ctx = GrassmannContext((d, n), K)
            rel = ctx.relations.gens
            count = sum(1 for pt in projective_points_of_space(comb(n, d), K) if vanishes(rel, pt, K))
            enum = sum(1 for _ in enumerate_subspaces(d, n, K))
            check(st, count == enum == gaussian_binomial(n, d, q) == want, f"Gr({d},{n})/F{q}: {count}")
            check(st, time.perf_counter() - t0 < 10, f"Gr({d},{n})/F{q} over 10 s")


# -- 2 --------------------------------------------------------------------------------------------


def test_criterion_02_printed_matrices():
    with criterion(2, 1, "printed Pluecker and chart matrices") as st:
        check(st, names(plucker_matrix(2, 4)) == [
            ["0", "-p[0,1]", "-p[0,2]", "-p[0,3]"],
            ["p[0,1]", "0", "-p[1,2]", "-p[1,3]"],
            ["p[0,2]", "p[1,2]", "0", "-p[2,3]"],
            ["p[0,3]", "p[1,3]", "p[2,3]", "0"],
        ], "plucker_matrix(2,4)")
        check(st, names(plucker_matrix(3, 4)) == [
            ["0", "0", "0", "p[0,1,2]", "p[0,1,3]", "p[0,2,3]"],
            ["0", "-p[0,1,2]", "-p[0,1,3]", "0", "0", "p[1,2,3]"],
            ["p[0,1,2]", "0", "-p[0,2,3]", "0", "-p[1,2,3]", "0"],
            ["p[0,1,3]", "p[0,2,3]", "0", "p[1,2,3]", "0", "0"],
        ], "plucker_matrix(3,4)")
        check(st, names(chart_matrix((0, 1, 3), 4)) == [
            ["p[0,1,3]", "0", "0"],
            ["0", "p[0,1,3]", "0"],
            ["-p[1,2,3]", "p[0,2,3]", "p[0,1,2]"],
            ["0", "0", "p[0,1,3]"],
        ], "chart_matrix((0,1,3))")


# -- 3 --------------------------------------------------------------------------------------------


def _random_F(rng, n, k, K):
    return [[K.from_int(rng.randrange(K.p)) for _ in range(k)] for _ in range(n)]


def _test_suite(ctx, K, rng):
    """Stiefel-side ideals (containment conditions) and Pluecker-side ideals (linear and quadratic)."""
    d, n = ctx.dims[0]
    stiefel = [submodule_containment(ctx, _random_F(rng, n, 1, K), "minors") for _ in range(2)]
    stiefel.append(submodule_containment(ctx, _random_F(rng, n, 2, K), "minors"))
    R = ctx.plucker_ring
    mons1 = R.monomials_of_degree(1)
    pl = []
    for _ in range(2):
        f = R.poly({m: K.from_int(rng.randrange(K.p)) for m in mons1})
        pl.append(Ideal([f if not f.is_zero() else R.gen(0)], R))
    pl.append(Ideal([R.gen(0) * R.gen(R.n - 1)], R))
    return stiefel, pl


def test_criterion_03_conversion_soundness():
    with criterion(3, 60, "Stiefel/Pluecker conversion soundness") as st:
        rng = random.Random(3)
        for d, n, q in [(2, 4, 2), (2, 4, 3), (3, 5, 2)]:
            K = PrimeField(q)
            ctx = GrassmannContext((d, n), K)
            stiefel, pl = _test_suite(ctx, K, rng)
            pairs = [(I, convert_stiefel_to_plucker(I, ctx)) for I in stiefel]
            pairs2 = [(convert_plucker_to_stiefel(J, ctx), J) for J in pl]
            for Smat in enumerate_subspaces(d, n, K):
                flat = [c for row in Smat for c in row]
                pt = stiefel_point_to_plucker(Smat, K)
                for Is, Ip in pairs + pairs2:
                    if vanishes(Is.gens, flat, K) != vanishes(Ip.gens, pt, K):
                        check(st, False, f"mismatch on Gr({d},{n})/F{q}")


# -- 4 --------------------------------------------------------------------------------------------


def test_criterion_04_fitting_flavors():
    with criterion(4, 30, "minors and wedge flavors agree") as st:
        rng = random.Random(4)
        for d, n, q in [(2, 4, 2), (2, 4, 3), (3, 5, 2)]:
            K = PrimeField(q)
            ctx = GrassmannContext((d, n), K)
            pts = [(Smat, stiefel_point_to_plucker(Smat, K)) for Smat in enumerate_subspaces(d, n, K)]
            for _ in range(10):
                F = _random_F(rng, n, rng.randint(1, 2), K)
                Im = submodule_containment(ctx, F, "minors")
                Iw = submodule_containment(ctx, F, "wedge")
                for Smat, pt in pts:
                    a = vanishes(Im.gens, [c for row in Smat for c in row], K)
                    b = vanishes(Iw.gens, pt, K)
                    direct = rank([list(r) + list(f) for r, f in zip(Smat, F)], K) == d
                    if not a == b == direct:
                        check(st, False, f"flavors differ on Gr({d},{n})/F{q}")


# -- 5 --------------------------------------------------------------------------------------------


def test_criterion_05_gotzmann_numbers():
    with criterion(5, 10, "Gotzmann numbers and reconstruction") as st:
        for r in (1, 2, 3):
            for d in range(1, 7):
                check(st, gotzmann_number(S.projective_space(r) - S([d]), r) == d, f"{d} points in P^{r}")
            for d in range(1, 6):
                P = S.projective_space(r) - S.projective_space(r).shift(-d)
                check(st, gotzmann_number(S.projective_space(r) - P, r) == d, f"degree {d} in P^{r}")
        rng = random.Random(5)
        for _ in range(50):
            top = rng.randint(0, 3)
            a = tuple(sorted((rng.randint(0, top) for _ in range(rng.randint(1, 8))), reverse=True))
            P = S([])
            for i, ai in enumerate(a):
                P = P + S.binom(ai - i, ai)
            rep = gotzmann_rep(P)
            check(st, rep.a == a and rep.polynomial() == P, f"reconstruction of {a}")


# -- 6 --------------------------------------------------------------------------------------------


def test_criterion_06_hilbert_polynomials():
    with criterion(6, 10, "Hilbert polynomials") as st:
        R = projective_space_ring(3, QQ)
        x0, x1, x2, x3 = R.gens()
        tc = EmbeddedScheme(Ideal([x0 * x2 - x1 ** 2, x1 * x3 - x2 ** 2, x0 * x3 - x1 * x2], R))
        R2 = projective_space_ring(2, QQ)
        y0, y1, y2 = R2.gens()
        pc = EmbeddedScheme(Ideal([y0 ** 3 + y1 ** 3 + y2 ** 3], R2))
        check(st, tc.P == S([1, 3]), "twisted cubic")
        check(st, pc.P == S([0, 3]), "plane cubic")
        for X in (tc, pc):
            check(st, X.P + X.Q == S.projective_space(X.r), "P + Q")
            for s in range(12):
                check(st, X.P(s) + X.Q(s) == comb(s + X.r, X.r), "P + Q values")


# -- 7 --------------------------------------------------------------------------------------------


def _span(M, K):
    cols = list(zip(*M))
    out = set()
    for coeffs in itertools.product(range(K.p), repeat=len(cols)):
        v = [0] * len(M)
        for c, col in zip(coeffs, cols):
            for i, x in enumerate(col):
                v[i] = (v[i] + c * int(x)) % K.p
        out.add(tuple(v))
    return frozenset(out)


def test_criterion_07_ik_locus():
    with criterion(7, 300, "IK locus for two points in P^2 over F_2") as st:
        K = PrimeField(2)
        Q = S.projective_space(2) - S([2])
        model = ik_equations(Q, 2, 2, K)
        q3 = Q(3)
        perm = [model.monomials.index(e) for e in QUAD_MONOMIALS]
        ik, persist, total = set(), set(), 0
        for M in enumerate_subspaces(4, 6, K):
            total += 1
            key = _span([M[i] for i in perm], K)
            if model.ik_holds_at(M):
                ik.add(key)
            # S_1 * M inside S_3
            up = model.ring.monomials_of_degree(3)
            idx = {e: i for i, e in enumerate(up)}
            rows = []
            for j in range(3):
                for col in zip(*M):
                    v = [K.zero] * len(up)
                    for c, m in zip(col, model.monomials):
                        e = list(m)
                        e[j] += 1
                        v[idx[tuple(e)]] = K.add(v[idx[tuple(e)]], c)
                    rows.append(v)
            if rank(rows, K) == q3:
                persist.add(key)
        direct = degree_two_subschemes_p2_f2()
        sizes = {k: len(v) for k, v in direct.items()}
        union = set().union(*direct.values())
        check(st, total == 651, f"{total} subspaces")
        check(st, sizes == {"rational_pairs": 21, "conjugate_pairs": 7, "double_points": 21}, str(sizes))
        check(st, ik == persist == union and len(ik) == 49, f"IK {len(ik)}, persistence {len(persist)}")


# -- 8 --------------------------------------------------------------------------------------------


def test_criterion_08_p1_pipeline():
    with criterion(8, 300, "toy P^1 pipeline over F_3") as st:
        K = PrimeField(3)
        X = EmbeddedScheme(Ideal([], projective_space_ring(1, K)))
        want_phi = {1: S([1, 2]), 2: None}
        for m, t, fiber in [(1, 2, 4), (2, 4, 13)]:
            div = identify_div_component(X, m, t)
            check(st, div.accepted_in_full, f"m={m}: Div not accepted in full")
            check(st, certify_reduced(div), f"m={m}: Div not certified reduced")
            pts = div.points()
            total = all(linearly_equivalent(div, D, E) for D, E in itertools.product(pts, repeat=2))
            check(st, total, f"m={m}: L is not total on rational points")
            L = None
            if m == 1:
                # symbolically: nothing beyond the two copies of the Div equations
                L = linear_equivalence_relation(div)
                check(st, len(L.ideal.gens) == 2 * len(div.ideal.gens), "m=1: symbolic L is not total")
            pic = picard_quotient(div, L, u=2, symbolic_graph=L is not None)
            check(st, len(pic.points) == 1 and pic.reduced is True, f"m={m}: Pic is not one reduced point")
            check(st, pic.points[0][2] == fiber == projective_count(X.P(m) - 1, 3), f"m={m}: fiber count")
            if m == 1:
                check(st, pic.Phi == want_phi[1], "Phi_{1,2}")
            else:
                check(st, all(pic.Phi(s) == comb(3 * s + 2, 2) for s in range(12)), "Phi_{2,4}")
            div2 = identify_div_component(X, 2 * m, 2 * t, symbolic=False)
            law = group_law(pic, div2)
            check(st, law.size == 1 and all(law.checks.values()), f"m={m}: group law")


# -- 9 --------------------------------------------------------------------------------------------


def test_criterion_09_budget_honesty():
    with criterion(9, 10, "budget refusal for the plane cubic") as st:
        out, err = io.StringIO(), io.StringIO()
        rc = cli_main(["div", "identify", "--toy", "plane-cubic", "--field", "Fp7"], out, err)
        text = err.getvalue().splitlines()
        check(st, rc == 3, f"exit code {rc}")
        check(st, "grassmannian Gr(90,108)" in text and "binomial C(108,90)" in text, "report")
        check(st, f"plucker_dim {comb(108, 90)}" in text, "Pluecker dimension")


# -- 10 -------------------------------------------------------------------------------------------


def test_criterion_10_hopf_galois():
    with criterion(10, 120, "Hopf algebras, duals and Galois actions") as st:
        H3 = hopf_structure(mu_n(3))
        D3 = GaloisModule.from_points(points_with_galois(cartier_dual(H3)))
        check(st, all(H3.check_axioms().values()), "mu_3 axioms")
        check(st, D3.group.invariants == (3,), "dual of mu_3")
        F5 = PrimeField(5)
        H5 = hopf_structure(mu_n(5, F5))
        check(st, H5.N == 5 and not H5.is_reduced(), "mu_5 algebra")
        check(st, points_with_galois(H5).order == 1, "mu_5 points")
        D5 = GaloisModule.from_points(points_with_galois(cartier_dual(H5)))
        check(st, D5.group.invariants == (5,), "dual of mu_5")
        check(st, all(H5.check_axioms().values()) and all(cartier_dual(H5).check_axioms().values()), "mu_5 axioms")
        E1 = torsion_kernel(elliptic_curve(-1, 0), 2)
        H = hopf_structure(E1)
        M1 = GaloisModule.from_points(points_with_galois(H))
        check(st, all(H.check_axioms().values()), "E[2] axioms")
        check(st, M1.group.invariants == (2, 2) and M1.field == QQ and M1.is_trivial_action(), "split E[2]")
        E2 = torsion_kernel(elliptic_curve(0, 1), 2)
        H = hopf_structure(E2)
        M2 = GaloisModule.from_points(points_with_galois(H))
        check(st, all(H.check_axioms().values()), "E'[2] axioms")
        check(st, M2.group.invariants == (2, 2), "E'[2] group")
        check(st, "field Q(sqrt(-3))" in M2.format().splitlines(), "E'[2] field")
        check(st, len(M2.matrices) == 2 and not M2.is_trivial_action(), "E'[2] swap")


# -- 11 -------------------------------------------------------------------------------------------


def test_criterion_11_homology():
    with criterion(11, 120, "fundamental group and cohomology on fixtures") as st:
        for n, E in [(2, elliptic_curve(-1, 0)), (3, elliptic_curve(0, 1))]:
            P = pi1_ab_mod_n(E, n)
            H = h1_etale(E, n)
            check(st, P.group.invariants == (n, n) and H.group.invariants == (n, n), f"n={n} over Q")
            check(st, P.acts_by_automorphisms() and H.acts_by_automorphisms(), f"n={n} action")
            DD = pontryagin_dual(H)
            check(st, all(DD._reduce(a) == P._reduce(b) for a, b in zip(DD.matrices, P.matrices)), "double dual")
        F5 = PrimeField(5)
        Eo = elliptic_curve(-1, 0, F5)
        check(st, h1_etale(Eo, 5).group.invariants == (5,), "ordinary H1et")
        check(st, h1_fppf_mu_n(Eo, 5).order == 5, "ordinary |E[5]|")
        Es = elliptic_curve(0, 1, F5)
        check(st, h1_etale(Es, 5).group.invariants == (), "supersingular H1et")


# -- 12 -------------------------------------------------------------------------------------------


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    rc = cli_main(argv, out, err)
    return rc, out.getvalue()


def test_criterion_12_determinism(tmp_path):
    with criterion(12, 600, "worker count does not change output") as st:
        K = PrimeField(2)
        ctx = GrassmannContext((3, 5), K)
        rng = random.Random(12)
        I = submodule_containment(ctx, _random_F(rng, 5, 1, K), "minors")
        stiefel = tmp_path / "stiefel.txt"
        stiefel.write_text(format_ideal(I, "stiefel") + "\n")
        runs = [
            ["grass", "relations", "--d", "3", "--n", "5", "--field", "Fp2"],
            ["grass", "matrix", "--d", "2", "--n", "4"],
            ["grass", "convert", "--d", "3", "--n", "5", "--field", "Fp2", "--input", str(stiefel)],
            ["gotzmann", "--hypersurface", "3", "--r", "3"],
            ["params", "--toy", "twisted-cubic"],
            ["hilb", "ik", "--points", "2", "--r", "2", "--t", "2", "--field", "Fp2"],
            ["pic", "grouplaw", "--toy", "p1", "--field", "Fp3", "--symbolic"],
            ["div", "identify", "--toy", "plane-cubic", "--field", "Fp7"],
            ["gs", "hopf", "--fixture", "mu:5", "--field", "Fp5"],
            ["gs", "points", "--fixture", "elliptic:0,1", "--n", "2"],
            ["homology", "h1-etale", "--fixture", "elliptic:-1,0", "--n", "2"],
        ]
        for argv in runs:
            a = _cli(argv + ["--workers", "1"])
            b = _cli(argv + ["--workers", "4"])
            check(st, a == b, "differs: " + " ".join(argv))
        # library level: the threaded conversion
        outs = {w: format_ideal(convert_stiefel_to_plucker(I, ctx, w)) for w in (1, 4)}
        check(st, outs[1] == outs[4], "threaded conversion differs")


if __name__ == "__main__":
    import pytest
    raise SystemExit(pytest.main(["-q", "-s", __file__]))
