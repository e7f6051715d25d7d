"""Divisor models, linear equivalence, the Picard quotient and its group law."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .errors import DEFAULT_CAP_MINOR_COUNT, DEFAULT_CAP_PLUCKER_DIM, BudgetExceeded, ContractViolation
from .exactfield import ExtensionField, Field, PrimeField, UnivariatePoly, extend_field, factor_univariate
from .grassmann import GrassmannContext, enumerate_subspaces, inc, submodule_containment, symbolic_det
from .groebner import Ideal, colon, eliminate, irrelevant_ideal, sample_component_points, saturate
from .hilbscheme import (
    EmbeddedScheme,
    Factor,
    HilbertSchemeModel,
    MorphismGraph,
    _product_ring,
    fiber_morphism_graph,
    ik_equations,
    restrict_to_X,
)
from .linalg import det, matmul, nullspace, rank, rref
from .multipoly import Poly, PolyRing, graded_basis
from .numpoly import NumericalPolynomial, fiber_hilbert_poly, gotzmann_number

__all__ = [
    "DivModel",
    "PicModel",
    "is_cartier_divisor",
    "is_numerically_mH",
    "identify_div_component",
    "linear_equivalence_relation",
    "linearly_equivalent",
    "picard_quotient",
    "addition_graph_div",
    "group_law",
    "PointGroupLaw",
    "check_parameters",
    "parametrization_kernel",
    "certify_reduced",
]


# -- subscheme tests ------------------------------------------------------------------


def is_cartier_divisor(I_Z: Ideal, X: EmbeddedScheme) -> bool:
    """Pure codimension one test (exact on curves and for principal sections)."""
    nf = I_Z.reducer()
    if not all(nf(g).is_zero() for g in X.ideal.gens):
        raise ContractViolation("Z is not contained in X")
    if I_Z.is_unit():
        return False
    PZ = I_Z.hilbert_polynomial()
    if PZ.is_zero():
        return False
    dimZ = PZ.degree
    if X.dim == 1:
        return dimZ == 0
    # principal section: Z = X ∩ V(g) for one generator g
    for g in I_Z.gens:
        if X.ideal.gens and X.ideal.contains(g):
            continue
        J = X.ideal + [g]
        if J.hilbert_polynomial() == PZ:
            return True
    # fallback: top-dimensional check only
    return dimZ == X.dim - 1


def is_numerically_mH(D: Ideal, X: EmbeddedScheme, m: int, N: int = 1) -> bool:
    """Numerical equivalence with ``mH``. Exact for curves (degree comparison);
    in higher dimension the Hilbert polynomials of ``D`` and ``mH`` are compared."""
    if N < 1:
        raise ContractViolation("N must be positive")
    PD = D.hilbert_polynomial()
    PmH = X.divisor_poly(m)
    if X.dim == 1:
        return PD.leading_coefficient() == PmH.leading_coefficient() and PD.degree == 0
    return PD == PmH


def check_parameters(X: EmbeddedScheme, m: int, t: int):
    """Condition (m >= max(phi(nu H), phi(X)), t >= max(phi(2mH), phi(X)))."""
    base = X.params()
    if m < base.m:
        raise ContractViolation(f"m={m} is below the bound {base.m}")
    p = X.params(override_m=m)
    if t < p.t:
        raise ContractViolation(f"t={t} is below the bound {p.t}")
    return X.params(override_m=m, override_t=t)


# -- divisor models ---------------------------------------------------------------------


@dataclass
class DivPoint:
    """A rational point of a Div model: the subspace ``(I_D)_t`` of ``S_t`` (RREF rows)."""

    rows: tuple

    def key(self):
        return self.rows


@dataclass
class DivModel:
    X: EmbeddedScheme
    m: int
    t: int
    Q: NumericalPolynomial
    hilb: HilbertSchemeModel
    ideal: Ideal | None = None
    accepted_in_full: bool = False
    samples: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    _points: list | None = None

    @property
    def field(self) -> Field:
        return self.X.field

    @property
    def monomials(self):
        return self.hilb.monomials

    @property
    def d(self) -> int:
        return self.hilb.d

    def mH_point(self, m: int | None = None) -> DivPoint:
        """``(I_{mH/X})_t`` for ``H = V(x_i) ∩ X`` with ``x_i`` a nonzerodivisor."""
        m = self.m if m is None else m
        X = self.X
        R = X.ring
        for i in range(R.n):
            x = R.gen(i)
            if not X.ideal.gens or colon(X.ideal, x) == X.ideal:
                break
        else:
            raise ContractViolation("no coordinate is a nonzerodivisor on X")
        I = Ideal(X.ideal.gens + [x ** m], R)
        return DivPoint(_ideal_piece(I, self.t, self.monomials, self.field))

    def points(self):
        """All rational points, by enumeration of subspaces of ``(S_X)_t``."""
        if self._points is None:
            self._points = _enumerate_div_points(self)
        return self._points

    def format(self) -> str:
        d2, n2 = self.hilb.small_grassmannian or (self.d, len(self.monomials))
        lines = [f"div m {self.m} t {self.t}", f"grassmannian Gr({d2},{n2})",
                 f"plucker_dim {comb(n2, d2)}", f"accepted_in_full {str(self.accepted_in_full).lower()}"]
        if self.ideal is not None:
            lines.append("-----BEGIN IDEAL-----")
            lines.append(self.ideal.ring.header())
            lines += [g.format() for g in self.ideal.gens]
            lines.append("-----END IDEAL-----")
        return "\n".join(lines)


def _ideal_piece(I: Ideal, t: int, monomials, K: Field):
    """RREF basis (over ``monomials``) of ``I_t``."""
    R = I.ring
    nf = I.reducer()
    piece = graded_basis(R, I, t)
    cols = [piece.coordinates(nf(R.monomial(m))) for m in monomials]
    rows = [[c[i] for c in cols] for i in range(piece.dim)]
    if not rows:
        basis = [[K.one if i == j else K.zero for i in range(len(monomials))] for j in range(len(monomials))]
    else:
        basis = nullspace(rows, K, len(monomials))
    red, _ = rref(basis, K)
    return tuple(tuple(r) for r in red)


def _rref_key(rows, K):
    red, _ = rref([list(r) for r in rows], K)
    return tuple(tuple(r) for r in red)


def _enumerate_div_points(div: DivModel):
    X = div.X
    K = div.field
    if not K.is_finite:
        raise ContractViolation("point enumeration needs a finite field")
    t = div.t
    mons = div.monomials
    U = X.ideal_piece(t)
    small_d = div.d - len(U)
    # complement coordinates: standard monomials of (S_X)_t
    piece = X.piece(t)
    std = [mons.index(e) for e in piece.basis]
    out = []
    for S in enumerate_subspaces(small_d, len(std), K):
        rows = [list(u) for u in U]
        for j in range(small_d):
            v = [K.zero] * len(mons)
            for a, idx in enumerate(std):
                v[idx] = S[a][j]
            rows.append(v)
        Smat = [list(c) for c in zip(*rows)]
        if div.hilb.ik_holds_at(Smat):
            out.append(DivPoint(_rref_key(rows, K)))
    return out


def identify_div_component(X: EmbeddedScheme, m: int, t: int, components=None, N: int = 1, seed: int = 0,
                           cap_plucker_dim: int = DEFAULT_CAP_PLUCKER_DIM,
                           cap_minor_count: int = DEFAULT_CAP_MINOR_COUNT, symbolic: bool = True,
                           saturate_below: int = 6) -> DivModel:
    """Build ``Hilb^{Q_mH} X`` and keep the components of divisors numerically equivalent to ``mH``."""
    params = check_parameters(X, m, t)
    r = X.r
    PmH = X.divisor_poly(m)
    Q = NumericalPolynomial.projective_space(r) - PmH
    small_d = Q(t) - X.Q(t)
    small_n = X.P(t)
    pdim = comb(small_n, small_d)
    if pdim > cap_plucker_dim:
        raise BudgetExceeded("Div ambient Grassmannian too large", grassmannian=f"Gr({small_d},{small_n})",
                             binomial=f"C({small_n},{small_d})",
                             plucker_dim=pdim, cap_plucker_dim=cap_plucker_dim)
    model = ik_equations(Q, t, r, X.field, X.ring, cap_minor_count)
    model = restrict_to_X(model, X, m)
    div = DivModel(X, m, t, Q, model)
    div.provenance.update({"m": m, "t": t, "nu": params.nu, "phi_X": params.provenance["phi_X"],
                           "grassmannian": f"Gr({small_d},{small_n})", "plucker_dim": pdim, "seed": seed})
    if not symbolic:
        return div
    ideal = model.plucker_ideal()
    if ideal.ring.n <= saturate_below:
        ideal = saturate(ideal, irrelevant_ideal(ideal.ring, ideal.ring.names))
        ideal = Ideal(ideal.groebner(), ideal.ring)
        div.provenance["saturated"] = True
    div.ideal = ideal
    if components is None:
        components = [ideal]
    accepted = []
    for comp in components:
        samples = sample_component_points(comp, seed)
        ok = True
        for pt, size, L in samples:
            Z = _subscheme_from_plucker(div, pt, L)
            XL = X if L == X.field else EmbeddedScheme(X.ideal.map_to(X.ring.with_field(L)) if X.ideal.gens
                                                       else Ideal([], X.ring.with_field(L)), X.delta)
            good = is_cartier_divisor(Z, XL) and is_numerically_mH(Z, XL, m, N)
            div.samples.append((tuple(L.format(c) for c in pt), size, good))
            ok = ok and good
        if ok:
            accepted.append(comp)
    div.accepted_in_full = len(accepted) == len(components)
    if accepted and len(accepted) < len(components):
        gens = []
        inter = accepted[0]
        for comp in accepted[1:]:
            inter = inter.intersect(comp)
        div.ideal = inter
    elif not accepted:
        div.ideal = Ideal([ideal.ring.one()], ideal.ring)
    return div


def parametrization_kernel(div: DivModel) -> Ideal:
    """For ``X = P^r``: the prime ideal of the image of ``g -> g S_{t-m}`` (``g`` of degree ``m``)."""
    X = div.X
    if X.ideal.gens:
        raise ContractViolation("the parametrization needs X = P^r")
    K = div.field
    m, t = div.m, div.t
    R = X.ring
    gmons = R.monomials_of_degree(m)
    lower = R.monomials_of_degree(t - m)
    ctx = div.hilb.ctx
    pnames = list(ctx.plucker_ring.names)
    cnames = [f"c{i}" for i in range(len(gmons))]
    names = cnames + pnames
    grading = [[1] * len(cnames) + [div.d] * len(pnames)]
    T = PolyRing(K, names, grading=grading)
    c = [T.gen(i) for i in range(len(cnames))]
    row_of = {e: i for i, e in enumerate(div.monomials)}
    # Stiefel matrix of g * S_{t-m}: column per lower monomial
    S = [[T.zero() for _ in lower] for _ in div.monomials]
    for j, b in enumerate(lower):
        for i, a in enumerate(gmons):
            e = tuple(x + y for x, y in zip(a, b))
            S[row_of[e]][j] = S[row_of[e]][j] + c[i]
    gens = []
    for k, alpha in enumerate(ctx.alphas[0]):
        gens.append(T.gen(len(cnames) + k) - symbolic_det([S[i] for i in alpha], T))
    return eliminate(Ideal(gens, T), cnames, target=ctx.plucker_ring)


def certify_reduced(div: DivModel) -> bool:
    """``Div`` is reduced when its ideal lies in the prime parametrization kernel with
    the same Hilbert polynomial (then both define the same scheme)."""
    if div.ideal is None:
        raise ContractViolation("the Div model has no ideal")
    P = parametrization_kernel(div)
    ok = all(P.contains(g) for g in div.ideal.gens) and P.hilbert_polynomial() == div.ideal.hilbert_polynomial()
    div.provenance["reduced_certificate"] = ok
    return ok


def _subscheme_from_plucker(div: DivModel, pt, L: Field) -> Ideal:
    """Ideal generated by the column space of the evaluated Pluecker matrix."""
    ctx = div.hilb.ctx
    P = ctx.plucker_matrix()
    cols = []
    for j in range(len(P[0])):
        cols.append([P[i][j].evaluate(pt, L) for i in range(len(P))])
    red, _ = rref(cols, L)
    R = div.X.ring.with_field(L)
    gens = [R.poly({m: c for m, c in zip(div.monomials, v)}) for v in red]
    return Ideal(gens, R)


# -- linear equivalence -------------------------------------------------------------------


class _Mult:
    """Multiplication ``(S_X)_a x (S_X)_b -> (S_X)_{a+b}`` in monomial coordinates."""

    def __init__(self, X: EmbeddedScheme, t: int):
        self.X = X
        self.K = X.field
        R = X.ring
        self.t = t
        self.mons = R.monomials_of_degree(t)
        self.piece2 = X.piece(2 * t)
        self.nf = X.ideal.reducer() if X.ideal.gens else (lambda f: f)
        self._cache = {}

    def product(self, u, v):
        """Coordinates in ``(S_X)_{2t}`` of the product of two vectors over ``S_t``."""
        R = self.X.ring
        f = R.poly({m: c for m, c in zip(self.mons, u)})
        g = R.poly({m: c for m, c in zip(self.mons, v)})
        return self.piece2.coordinates(self.nf(f * g))

    def times_matrix(self, u):
        """Matrix of ``v -> u v`` (columns indexed by the monomials of ``S_t``)."""
        K = self.K
        cols = []
        for j in range(len(self.mons)):
            e = [K.zero] * len(self.mons)
            e[j] = K.one
            cols.append(self.product(u, e))
        return [[c[i] for c in cols] for i in range(self.piece2.dim)]


def linearly_equivalent(div: DivModel, D: DivPoint, E: DivPoint, mult: _Mult | None = None) -> bool:
    """``D ~ E``: with ``b`` the first basis vector of ``(I_E)_t``, some nonzero
    ``a`` in ``(S_X)_t`` satisfies ``a (I_E)_t ⊆ b (I_D)_t``."""
    mult = mult or _Mult(div.X, div.t)
    return bool(_equivalence_witnesses(div, D, E, mult))


def _modulo_I_X(div: DivModel, mult: _Mult, vecs):
    """Drop vectors lying in ``(I_X)_t`` (they vanish in ``(S_X)_t``)."""
    K = div.field
    U = div.X.ideal_piece(div.t)
    out = []
    base = [list(u) for u in U]
    r0 = rank(base, K) if base else 0
    for v in vecs:
        if rank(base + [list(v)], K) > r0:
            out.append(list(v))
            base.append(list(v))
            r0 += 1
    return out


def _equivalence_witnesses(div: DivModel, D: DivPoint, E: DivPoint, mult: _Mult):
    K = div.field
    gE = _modulo_I_X(div, mult, E.rows)
    gD = _modulo_I_X(div, mult, D.rows)
    b = gE[0]
    target = [mult.product(b, f) for f in gD]
    # a * g_j must lie in span(target) for every j: solve for a
    ncoef = len(mult.mons)
    tmat = [list(c) for c in zip(*target)]  # rows of the 2t piece
    # projector: complement of span(target) via nullspace of its transpose
    ann = nullspace([list(v) for v in target], K, mult.piece2.dim) if target else None
    eqs = []
    for g in gE:
        Mg = mult.times_matrix(g)  # 2t-dim x ncoef
        for w in ann:
            eqs.append([sum_k(K, [K.mul(w[i], Mg[i][c]) for i in range(len(w))]) for c in range(ncoef)])
    sol = nullspace(eqs, K, ncoef) if eqs else [[K.one if i == j else K.zero for i in range(ncoef)] for j in range(ncoef)]
    # discard solutions vanishing on X
    return _modulo_I_X(div, mult, sol)


def sum_k(K, xs):
    acc = K.zero
    for x in xs:
        acc = K.add(acc, x)
    return acc


def linear_equivalence_relation(div: DivModel, cap_minor_count: int = DEFAULT_CAP_MINOR_COUNT) -> MorphismGraph:
    """``L`` on ``Div x Div`` by eliminating ``(q, p)`` from the rank condition on ``(q f_i | p g_j)``."""
    if div.ideal is None:
        raise ContractViolation("symbolic Div ideal not available")
    X = div.X
    K = div.field
    t = div.t
    ctx = div.hilb.ctx
    piece_t = X.piece(t)
    piece2 = X.piece(2 * t)
    d_eff = div.d - len(X.ideal_piece(t))
    ncols = len(ctx.plucker_matrix()[0])
    k = d_eff + 1
    count = comb(piece2.dim, k) * comb(2 * ncols, k)
    if count > cap_minor_count:
        raise BudgetExceeded("linear-equivalence minors", minors=count, minor_size=k)
    fu = Factor("U", tuple(f"u{i}" for i in range(piece_t.dim)))
    fv = Factor("V", tuple(f"v{i}" for i in range(piece_t.dim)))
    names = ctx.plucker_names(0)
    fD = Factor("D", tuple(nm.replace("p[", "pD[") for nm in names), "grass", (div.d, len(div.monomials)))
    fE = Factor("E", tuple(nm.replace("p[", "pE[") for nm in names), "grass", (div.d, len(div.monomials)))
    W = _product_ring([fu, fv, fD, fE], K)
    # big ring holding x's too, to multiply forms
    xs = X.ring.names
    big = PolyRing(K, list(W.names) + list(xs))
    nf = X.ideal.reducer() if X.ideal.gens else None
    q = sum((big.gen(f"u{i}") * big.monomial(_lift_exp(e, big, xs)) for i, e in enumerate(piece_t.basis)), big.zero())
    p = sum((big.gen(f"v{i}") * big.monomial(_lift_exp(e, big, xs)) for i, e in enumerate(piece_t.basis)), big.zero())
    P = ctx.plucker_matrix()

    def column_forms(tagname):
        out = []
        for j in range(ncols):
            f = big.zero()
            for i, mexp in enumerate(div.monomials):
                ent = P[i][j]
                if ent.is_zero():
                    continue
                ent_big = ent.rename(big, [big.index[nm.replace("p[", tagname + "[")] for nm in ent.ring.names])
                f = f + ent_big * big.monomial(_lift_exp(mexp, big, xs))
            out.append(f)
        return out

    fD_forms = column_forms("pD")
    fE_forms = column_forms("pE")
    # coordinates over (S_X)_{2t}: x-part reduced modulo I_X
    xi = [big.index[nm] for nm in xs]
    rows_index = {e: i for i, e in enumerate(piece2.basis)}

    def coords(F):
        vec = [W.zero() for _ in piece2.basis]
        terms_by_x = {}
        for e, c in F.terms.items():
            xe = tuple(e[i] for i in xi)
            we = tuple(e[: W.n])
            terms_by_x.setdefault(xe, {})[we] = c
        for xe, wterms in terms_by_x.items():
            coeff = Poly(W, wterms)
            red = nf(X.ring.monomial(xe)) if nf else X.ring.monomial(xe)
            for re_, rc in red.terms.items():
                vec[rows_index[re_]] = vec[rows_index[re_]] + coeff.scale(rc)
        return vec

    cols = [coords(q * f) for f in fD_forms] + [coords(p * g) for g in fE_forms]
    M = [[cols[j][i] for j in range(len(cols))] for i in range(piece2.dim)]
    gens = []
    for rs in itertools.combinations(range(piece2.dim), k):
        for cs in itertools.combinations(range(len(cols)), k):
            g = symbolic_det([[M[a][b] for b in cs] for a in rs], W)
            if not g.is_zero():
                gens.append(g)
    base = [g.rename(W, [W.index[nm.replace("p[", "pD[")] for nm in g.ring.names]) for g in div.ideal.gens]
    base += [g.rename(W, [W.index[nm.replace("p[", "pE[")] for nm in g.ring.names]) for g in div.ideal.gens]
    Wg = MorphismGraph([fu, fv, fD, fE], Ideal(gens + base, W))
    L = Wg.project(["D", "E"])
    L.source, L.target = 0, 1
    return L


def _lift_exp(e, big: PolyRing, xs):
    out = [0] * big.n
    for nm, a in zip(xs, e):
        out[big.index[nm]] = a
    return tuple(out)


# -- the quotient ------------------------------------------------------------------------


@dataclass
class PicModel:
    div: DivModel
    Phi: NumericalPolynomial
    u: int
    points: list  # list of (key, representative DivPoint, fiber size)
    epsilon: object
    graph: MorphismGraph | None = None
    ideal: Ideal | None = None
    reduced: bool | None = None
    provenance: dict = field(default_factory=dict)

    def format(self) -> str:
        lines = [f"pic m {self.div.m} t {self.div.t}", f"Phi {self.Phi.format_power()}", f"u {self.u}",
                 f"points {len(self.points)}"]
        for i, (_, _, size) in enumerate(self.points):
            lines.append(f"point {i} fiber {size}")
        if self.reduced is not None:
            lines.append(f"reduced {str(self.reduced).lower()}")
        for k in sorted(self.provenance):
            lines.append(f"{k} {self.provenance[k]}")
        if self.ideal is not None:
            lines.append("-----BEGIN IDEAL-----")
            lines.append(self.ideal.ring.header())
            lines += [g.format() for g in self.ideal.gens]
            lines.append("-----END IDEAL-----")
        return "\n".join(lines)


def _classes(div: DivModel, pts, mult: _Mult):
    reps = []  # (rep, members)
    for D in pts:
        for rep, members in reps:
            if linearly_equivalent(div, D, rep, mult):
                members.append(D)
                break
        else:
            reps.append((D, [D]))
    return reps


def _grid_field(K: Field, size: int) -> Field:
    """An extension of the finite field ``K`` with at least ``size`` elements."""
    if not isinstance(K, PrimeField):
        return K
    q = K.p
    k = 1
    while q ** k < size:
        k += 1
    if k == 1:
        return K
    # first irreducible monic polynomial of degree k in lexicographic order
    for tail in itertools.product(range(q), repeat=k):
        f = UnivariatePoly(K, list(tail) + [1])
        facs = factor_univariate(f)
        if len(facs) == 1 and facs[0][1] == 1 and facs[0][0].deg == k:
            return extend_field(K, f, "w", check=False)
    raise ContractViolation("no irreducible polynomial found")


def fiber_hilbert_point(div: DivModel, E: DivPoint, u: int):
    """Degree-``u`` piece of the ideal of the fiber through ``E`` inside the Pluecker
    space of Div, as an RREF basis over the base field.

    The fiber is parametrized by ``a`` in ``V = {a : a (I_E)_t ⊆ b (S_X)_t}`` via
    ``(I_D)_t = {f : f b ∈ a (I_E)_t}``; the pullback of a degree-``u`` form has degree
    ``u * P_X(t-m)`` in ``a``, so vanishing on a grid with more points per coordinate
    than that degree is exact.
    """
    X = div.X
    K = div.field
    t, m = div.t, div.m
    deg_pull = u * X.P(t - m)
    L = _grid_field(K, deg_pull + 1)
    mons = div.monomials
    XL = X
    multL = _Mult(X, t)  # products are computed over K coefficients then embedded
    gE = _modulo_I_X(div, multL, E.rows)
    b = gE[0]
    # V: a with a * g_j in b * (S_X)_t for all j
    ncoef = len(mons)
    span_b = [multL.product(b, [K.one if i == j else K.zero for i in range(ncoef)]) for j in range(ncoef)]
    ann = nullspace(span_b, K, multL.piece2.dim)
    eqs = []
    for g in gE:
        Mg = multL.times_matrix(g)
        for w in ann:
            eqs.append([sum_k(K, [K.mul(w[i], Mg[i][c]) for i in range(len(w))]) for c in range(ncoef)])
    V = nullspace(eqs, K, ncoef) if eqs else [[K.one if i == j else K.zero for i in range(ncoef)] for j in range(ncoef)]
    V = _modulo_I_X(div, multL, V)
    dimV = len(V)
    if dimV != X.P(m):
        raise ContractViolation(f"linear system has dimension {dimV}, expected P_X(m)={X.P(m)}")
    # grid over L
    elems = list(L.elements())[: deg_pull + 1]
    alphas = inc(div.d, len(mons))
    # degree-u monomials in the Pluecker coordinates
    N = len(alphas)
    pring = PolyRing(L, [f"z{i}" for i in range(N)])
    umons = pring.monomials_of_degree(u)
    Mb = multL.times_matrix(b)  # f -> f b, over K
    MbL = [[L.embed(c, K) for c in row] for row in Mb]
    gEL = [[L.embed(c, K) for c in g] for g in gE]
    UL = [[L.embed(c, K) for c in row] for row in X.ideal_piece(t)]
    rows = []
    for coeffs in itertools.product(elems, repeat=dimV):
        if all(L.is_zero(c) for c in coeffs):
            continue
        a = [sum_k(L, [L.mul(c, L.embed(v[i], K)) for c, v in zip(coeffs, V)]) for i in range(ncoef)]
        # a * g_j over L
        imgs = [_product_L(multL, a, g, L) for g in gEL]
        # f with f b in span(imgs): solve [Mb | -imgs] kernel
        aug = [list(MbL[i]) + [L.neg(img[i]) for img in imgs] for i in range(len(MbL))]
        ker = nullspace(aug, L, ncoef + len(imgs))
        fs = [k[:ncoef] for k in ker]
        fs = [list(r) for r in rref(UL + fs, L)[0]] if UL else [list(r) for r in rref(fs, L)[0]]
        if len(fs) != div.d:
            raise ContractViolation("fiber point has the wrong dimension")
        cols = [list(c) for c in zip(*fs)]
        pl = [det([cols[i] for i in al], L) for al in alphas]
        rows.append([_eval_monomial(pl, e, L) for e in umons])
    ker = nullspace(rows, L, len(umons))
    red, _ = rref(ker, L)
    # the kernel is defined over K; bring it back
    out = []
    for row in red:
        vals = []
        for c in row:
            if isinstance(L, ExtensionField):
                if not L.in_base(c):
                    raise ContractViolation("fiber ideal is not defined over the base field")
                vals.append(c[0])
            else:
                vals.append(c)
        out.append(tuple(vals))
    return tuple(out), umons, N


def _product_L(mult: _Mult, u, v, L: Field):
    """Product of two vectors with coefficients in ``L`` (via bilinearity over monomials)."""
    K = mult.K
    n = len(mult.mons)
    key = "table"
    if key not in mult._cache:
        table = {}
        for i in range(n):
            for j in range(i, n):
                ei = [K.one if a == i else K.zero for a in range(n)]
                ej = [K.one if a == j else K.zero for a in range(n)]
                table[(i, j)] = mult.product(ei, ej)
        mult._cache[key] = table
    table = mult._cache[key]
    out = [L.zero] * mult.piece2.dim
    for i in range(n):
        if L.is_zero(u[i]):
            continue
        for j in range(n):
            if L.is_zero(v[j]):
                continue
            c = L.mul(u[i], v[j])
            vec = table[(i, j) if i <= j else (j, i)]
            for r, w in enumerate(vec):
                if not K.is_zero(w):
                    out[r] = L.add(out[r], L.mul(c, L.embed(w, K)))
    return out


def _eval_monomial(vals, e, L):
    acc = L.one
    for v, a in zip(vals, e):
        if a:
            acc = L.mul(acc, L.pow(v, a))
    return acc


def picard_quotient(div: DivModel, L: MorphismGraph | None = None, u: int | None = None,
                    certify: bool = True, symbolic_graph: bool = False) -> PicModel:
    """Quotient of Div by linear equivalence; each Pic point is the Hilbert point
    ``(I_F)_u`` of its fiber ``F`` (a complete linear system, Hilbert polynomial ``Phi``)."""
    X = div.X
    K = div.field
    m, t = div.m, div.t
    Phi = fiber_hilbert_poly(X.P, m, t)
    nu_p = comb(len(div.monomials), div.d) - 1
    Qp = NumericalPolynomial.projective_space(nu_p) - Phi
    u_bound = gotzmann_number(Qp, nu_p)
    prov = {"u_bound": u_bound, "nu_prime": nu_p}
    if u is None:
        u = u_bound
    pts = div.points()
    mult = _Mult(X, t)
    classes = _classes(div, pts, mult)
    points = []
    for rep, members in classes:
        key, umons, N = fiber_hilbert_point(div, rep, u)
        expected = Qp(u)
        if len(key) != expected:
            raise ContractViolation(f"fiber ideal has {len(key)} forms in degree {u}, expected Q'(u)={expected}")
        if certify:
            ring = PolyRing(K, [f"z{i}" for i in range(N)])
            I = Ideal([ring.poly({e: c for e, c in zip(umons, row)}) for row in key], ring)
            if I.hilbert_polynomial() != Phi:
                raise ContractViolation(f"u={u} does not certify the fiber (Hilbert polynomial differs from Phi)")
        points.append((key, rep, len(members)))
    # distinct classes must give distinct Hilbert points
    if len({p[0] for p in points}) != len(points):
        raise ContractViolation("two classes map to the same Hilbert point")
    eps_key = None
    mH = div.mH_point()
    for key, rep, _ in points:
        if linearly_equivalent(div, mH, rep, mult):
            eps_key = key
    pic = PicModel(div, Phi, u, points, eps_key, provenance=prov)
    if div.provenance.get("reduced_certificate"):
        # the scheme-theoretic image of a reduced scheme is reduced
        pic.reduced = True
        pic.provenance["reduced_via"] = "image_of_reduced_div"
    if symbolic_graph and L is not None:
        _attach_symbolic_image(pic, L)
    return pic


def _attach_symbolic_image(pic: PicModel, L: MorphismGraph):
    """Graph of ``E -> [fiber]`` from ``L`` viewed as a family over its second factor,
    and its scheme-theoretic image."""
    div = pic.div
    fD, fE = L.factors
    Bring = PolyRing(div.field, list(fE.names))
    B = Ideal([g.rename(Bring, [Bring.index["pE" + nm[1:]] for nm in g.ring.names]) for g in div.ideal.gens], Bring)
    G = fiber_morphism_graph(B, list(fE.names), L.ideal, list(fD.names), pic.Phi, pic.u, check_bound=False)
    img = G.project(["H"])
    pic.graph = G
    pic.ideal = img.ideal
    hp = img.ideal.hilbert_polynomial()
    pic.provenance["image_hilbert_polynomial"] = hp.format_power()
    if hp == NumericalPolynomial([1]):
        # a degree-one point is reduced iff its saturated ideal is generated by linear forms
        lin = [g for g in img.ideal.groebner() if g.total_degree() == 1]
        pic.reduced = len(lin) == img.ideal.ring.n - 1
    else:
        pic.reduced = None


# -- addition and the group law --------------------------------------------------------------


def addition_graph_div(div_m: DivModel, div_2m: DivModel, D: DivPoint, E: DivPoint) -> DivPoint:
    """Point-level ``sigma``: ``(I_{D+E})_{2t}`` spanned by the products ``f_i g_j`` (plus ``(I_X)_{2t}``)."""
    X = div_m.X
    K = div_m.field
    if div_2m.t != 2 * div_m.t or div_2m.m != 2 * div_m.m:
        raise ContractViolation("the 2mH model must use parameters (2m, 2t)")
    R = X.ring
    mons = div_m.monomials
    mons2 = div_2m.monomials
    fs = [R.poly({e: c for e, c in zip(mons, v)}) for v in D.rows]
    gs = [R.poly({e: c for e, c in zip(mons, v)}) for v in E.rows]
    vecs = []
    for f in fs:
        for g in gs:
            h = f * g
            vecs.append([h.coefficient(e) for e in mons2])
    vecs += [list(v) for v in X.ideal_piece(2 * div_m.t)]
    key = _rref_key(vecs, K)
    if len(key) != div_2m.d:
        raise ContractViolation("product does not have the expected dimension")
    return DivPoint(key)


@dataclass
class PointGroupLaw:
    """The group law on the rational points of Pic, with ``epsilon`` its identity index."""

    size: int
    table: list
    inverse: list
    epsilon: int
    checks: dict

    def format(self) -> str:
        lines = [f"order {self.size}", f"epsilon {self.epsilon}"]
        for row in self.table:
            lines.append("row " + " ".join(map(str, row)))
        lines.append("inverse " + " ".join(map(str, self.inverse)))
        for k in sorted(self.checks):
            lines.append(f"{k} {str(self.checks[k]).lower()}")
        return "\n".join(lines)


def group_law(pic: PicModel, div_2m: DivModel) -> PointGroupLaw:
    """``alpha = tau^{-1} o beta`` with ``beta(D, E) = [D + E]``, ``tau(D) = [D + mH]``,
    ``iota`` from the fiber of ``beta`` over ``[2mH]`` and ``epsilon = [mH]``."""
    div = pic.div
    mult2 = _Mult(div.X, div_2m.t)
    reps = [rep for _, rep, _ in pic.points]
    n = len(reps)
    mH = div.mH_point()
    twomH = div_2m.mH_point()
    # classes in Div_2m are tested directly by linear equivalence
    cls2 = []

    def class_2m(P):
        for i, Q in enumerate(cls2):
            if linearly_equivalent(div_2m, P, Q, mult2):
                return i
        cls2.append(P)
        return len(cls2) - 1

    mult = _Mult(div.X, div.t)
    beta = [[class_2m(addition_graph_div(div, div_2m, reps[i], reps[j])) for j in range(n)] for i in range(n)]
    tau = [class_2m(addition_graph_div(div, div_2m, reps[i], mH)) for i in range(n)]
    eps2 = class_2m(twomH)
    checks = {}
    checks["tau_injective"] = len(set(tau)) == n
    # well-definedness of beta on other representatives of each class
    ok = True
    for i, (_, rep, _) in enumerate(pic.points):
        members = [P for P in div.points() if linearly_equivalent(div, P, rep, mult)]
        for P in members[:3]:
            if class_2m(addition_graph_div(div, div_2m, P, reps[0])) != beta[i][0]:
                ok = False
    checks["beta_well_defined"] = ok
    inv_tau = {c: i for i, c in enumerate(tau)}
    table = [[inv_tau.get(beta[i][j], -1) for j in range(n)] for i in range(n)]
    eps = next(i for i, (key, _, _) in enumerate(pic.points) if key == pic.epsilon)
    inverse = []
    for i in range(n):
        js = [j for j in range(n) if beta[i][j] == eps2]
        inverse.append(js[0] if len(js) == 1 else -1)
    rng = range(n)
    checks["closed"] = all(table[i][j] >= 0 for i in rng for j in rng)
    checks["identity"] = all(table[eps][i] == i and table[i][eps] == i for i in rng)
    checks["commutative"] = all(table[i][j] == table[j][i] for i in rng for j in rng)
    checks["associative"] = checks["closed"] and all(
        table[table[i][j]][k] == table[i][table[j][k]] for i in rng for j in rng for k in rng)
    checks["inverse"] = all(inverse[i] >= 0 and table[i][inverse[i]] == eps for i in rng)
    return PointGroupLaw(n, table, inverse, eps, checks)
