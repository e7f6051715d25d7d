"""Finite group schemes: global sections, Hopf algebras, Cartier duals, torsion
kernels and geometric points with Galois action."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import ceil

import numpy as np

from .errors import ContractViolation
from .exactfield import (
    QQ,
    ExtensionField,
    Field,
    FieldError,
    PrimeField,
    Rationals,
    UnivariatePoly,
    automorphisms,
)
from .groebner import Ideal, intersect, irrelevant_ideal, radical_zero_dim, saturate, solve_zero_dimensional
from .hilbscheme import EmbeddedScheme, Factor, MorphismGraph, _product_ring
from .linalg import LinearAlgebraError, nullspace, rank, rref, solve_many
from .multipoly import MonomialOrder, Poly, PolyRing

__all__ = [
    "FiniteAlgebra",
    "HopfAlgebra",
    "GroupSchemePresentation",
    "FiniteGroupWithGalois",
    "global_sections",
    "hopf_structure",
    "cartier_dual",
    "multiplication_by_n",
    "torsion_kernel",
    "points_with_galois",
    "mu_n",
    "elliptic_curve",
    "division_polynomial",
    "RegularityError",
]


class RegularityError(ContractViolation):
    """A structure solve was not unique; the degree used is too small."""


# -- dense structure constants ----------------------------------------------------------


def _check_field(K: Field):
    if not isinstance(K, (PrimeField, Rationals)):
        raise FieldError(f"structure constants over {K.descriptor()} are not supported")


def _zeros(K: Field, shape):
    if isinstance(K, PrimeField):
        return np.zeros(shape, dtype=np.int64)
    return np.full(shape, K.zero, dtype=object)


def _red(K: Field, a):
    if isinstance(K, PrimeField):
        return np.mod(a, K.p)
    return a


def _arr(K: Field, data):
    if isinstance(K, PrimeField):
        return np.mod(np.array(data, dtype=np.int64), K.p)
    return np.array(data, dtype=object)


def _lists(K: Field, a):
    if isinstance(K, PrimeField):
        return [[int(v) for v in row] for row in a]
    return [list(row) for row in a]


def _eye(K: Field, n):
    E = _zeros(K, (n, n))
    for i in range(n):
        E[i, i] = K.one
    return E


def _equal(K: Field, a, b) -> bool:
    return bool(np.all(_red(K, a - b) == 0)) if isinstance(K, PrimeField) else bool(np.all(a == b))


def _solve(K: Field, A, b):
    """Unique solution of ``A x = b`` (``A`` square or tall)."""
    try:
        return solve_many(_lists(K, A), [list(_lists(K, [b])[0])], K, unique=True)[0]
    except LinearAlgebraError as exc:
        raise RegularityError(f"structure solve is not unique: {exc}") from exc


@dataclass
class FiniteAlgebra:
    """Commutative finite-dimensional algebra: ``e_i e_j = sum_k mult[i,j,k] e_k``."""

    field: Field
    mult: np.ndarray
    unit: np.ndarray
    labels: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.unit)

    def basis(self, i):
        v = _zeros(self.field, self.N)
        v[i] = self.field.one
        return v

    def mul(self, u, v):
        X = np.tensordot(u, self.mult, axes=([0], [0]))
        return _red(self.field, np.tensordot(v, X, axes=([0], [0])))

    def power(self, a, e: int):
        out = self.unit.copy()
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def left_matrix(self, a):
        """Matrix of ``x -> a x`` acting on column vectors."""
        return _red(self.field, np.tensordot(a, self.mult, axes=([0], [0])).T)

    def is_commutative(self) -> bool:
        return _equal(self.field, self.mult, self.mult.transpose(1, 0, 2))

    def is_associative(self) -> bool:
        m = self.mult
        A = np.tensordot(m, m, axes=([2], [0]))
        B = np.tensordot(m, m, axes=([2], [1])).transpose(2, 0, 1, 3)
        return _equal(self.field, _red(self.field, A), _red(self.field, B))

    def nilradical(self):
        """Basis of the nilradical (trace form in characteristic 0, iterated
        Frobenius over a prime field)."""
        K = self.field
        N = self.N
        if isinstance(K, Rationals):
            tr = np.array([sum((self.mult[l, k, k] for k in range(N)), K.zero) for l in range(N)], dtype=object)
            T = np.tensordot(self.mult, tr, axes=([2], [0]))
            return nullspace(_lists(K, T), K, N)
        if isinstance(K, PrimeField):
            p = K.p
            k = 1
            while p ** k < N:
                k += 1
            cols = [self.power(self.basis(i), p ** k) for i in range(N)]
            F = np.array(cols, dtype=np.int64).T
            return nullspace(_lists(K, F), K, N)
        raise FieldError(f"nilradical over {K.descriptor()} is not supported")

    def is_reduced(self) -> bool:
        return not self.nilradical()

    def points(self, seed: int = 0):
        """Geometric points as tuples ``(chi(e_0), ..., chi(e_{N-1}))`` over a common field ``L``."""
        return _algebra_points(self, seed)


def _algebra_points(A: FiniteAlgebra, seed: int):
    K = A.field
    N = A.N
    nil = A.nilradical()
    R, piv = rref(nil, K) if nil else ([], [])
    comp = [i for i in range(N) if i not in set(piv)]

    def proj(v):
        v = list(v)
        for row, c in zip(R, piv):
            f = v[c]
            if not K.is_zero(f):
                v = [K.sub(a, K.mul(f, b)) for a, b in zip(v, row)]
        return [v[i] for i in comp]

    n = len(comp)
    mred = _zeros(K, (n, n, n))
    for a in range(n):
        for b in range(a, n):
            vec = proj(A.mul(A.basis(comp[a]), A.basis(comp[b])))
            for k in range(n):
                mred[a, b, k] = vec[k]
                mred[b, a, k] = vec[k]
    E = FiniteAlgebra(K, mred, _arr(K, proj(A.unit)))
    rng = random.Random(seed)
    fields = _split_etale(E, rng)
    # common splitting field of all component minimal polynomials
    distinct = []
    for _, _, f, _ in fields:
        if f not in distinct:
            distinct.append(f)
    prod = UnivariatePoly(K, [K.one])
    for f in distinct:
        prod = prod * f
    R1 = PolyRing(K, ["t"])
    t = R1.gen(0)
    P = R1.poly({(i,): c for i, c in enumerate(prod.coeffs) if not K.is_zero(c)})
    sol = solve_zero_dimensional(Ideal([P], R1), seed)
    L = sol.field
    roots = [p[0] for p in sol.points]
    out = []
    for W, idem, f, g in fields:
        for lam in roots:
            if not L.is_zero(f.eval_in(L, lam)):
                continue
            # chi(e_i) = g_i(lam) where (e_i mod nil) times the component idempotent is g_i(a)
            vals = []
            for i in range(N):
                gi = _express(E, W, idem, proj(A.basis(i)), g)
                vals.append(gi.eval_in(L, lam))
            out.append(tuple(vals))
    return L, out


def _express(E: FiniteAlgebra, W, idem, v, data):
    """Polynomial ``g`` with ``v * idem = g(a)`` inside the component."""
    K = E.field
    powers, solver = data
    w = E.mul(_arr(K, v), idem)
    coeffs = solver(list(w))
    return UnivariatePoly(K, coeffs)


def _split_etale(E: FiniteAlgebra, rng: random.Random):
    """Decompose an etale algebra into fields by idempotents; each field component is
    returned with a generator ``a`` and its minimal polynomial ``f``."""
    K = E.field
    stack = [(_lists(K, _eye(K, E.N)), E.unit)]
    out = []
    while stack:
        W, idem = stack.pop()
        dim = len(W)
        for _attempt in range(80):
            coeffs = [K.from_int(rng.randint(-4, 4)) for _ in range(dim)]
            a = _zeros(K, E.N)
            for c, w in zip(coeffs, W):
                a = _red(K, a + _arr(K, [K.mul(c, x) for x in w]))
            # minimal polynomial of a on the component
            powers = [idem]
            while True:
                nxt = E.mul(powers[-1], a)
                M = _lists(K, np.array(powers))
                if rank(M + _lists(K, [nxt]), K) == len(powers):
                    sol = solve_many(_lists(K, np.array(powers).T), [list(_lists(K, [nxt])[0])], K)[0]
                    f = UnivariatePoly(K, [K.neg(c) for c in sol] + [K.one])
                    break
                powers.append(nxt)
            from .exactfield import factor_univariate

            facs = factor_univariate(f)
            if len(facs) > 1:
                for fi, _ in facs:
                    h = f // fi
                    _, s, _ = h.xgcd(fi)
                    u = (s * h) % f
                    e_i = _eval_alg(E, u, a, idem)
                    Wi = rref(_lists(K, [E.mul(_arr(K, w), e_i) for w in W]), K)[0]
                    stack.append((Wi, e_i))
                break
            if f.deg == dim:
                PT = np.array(powers).T

                def solver(w, PT=PT):
                    return solve_many(_lists(K, PT), [w], K)[0]

                out.append((W, idem, f, (powers, solver)))
                break
        else:
            raise ContractViolation("idempotent splitting did not converge")
    out.sort(key=lambda item: (item[2].deg, [K.format(c) for c in item[2].coeffs]))
    return out


def _eval_alg(E: FiniteAlgebra, u: UnivariatePoly, a, one):
    K = E.field
    acc = _zeros(K, E.N)
    for c in reversed(u.coeffs):
        acc = _red(K, E.mul(acc, a) + _arr(K, [K.mul(c, x) for x in one]))
    return acc


# -- Hopf algebras -----------------------------------------------------------------------


@dataclass
class HopfAlgebra:
    """Structure constants: ``mult[i,j,k]``, ``unit[k]``, ``comult[k,i,j]``
    (``mu(e_k) = sum comult[k,i,j] e_i (x) e_j``), ``counit[k]``, ``antipode[i,j]``
    (``S(e_i) = sum antipode[i,j] e_j``)."""

    field: Field
    mult: np.ndarray
    unit: np.ndarray
    comult: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    labels: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.unit)

    def algebra(self) -> FiniteAlgebra:
        return FiniteAlgebra(self.field, self.mult, self.unit, self.labels)

    def is_commutative(self) -> bool:
        return _equal(self.field, self.mult, self.mult.transpose(1, 0, 2))

    def is_cocommutative(self) -> bool:
        return _equal(self.field, self.comult, self.comult.transpose(0, 2, 1))

    def is_reduced(self) -> bool:
        return self.algebra().is_reduced()

    def tensor_mul(self, u, v):
        """Product in ``H (x) H`` of two ``N x N`` coefficient arrays."""
        m = self.mult
        Y = np.tensordot(u, m, axes=([0], [0]))  # [j,p,k]
        Z = np.tensordot(Y, v, axes=([1], [0]))  # [j,k,q]
        return _red(self.field, np.tensordot(Z, m, axes=([0, 2], [0, 1])))

    def check_axioms(self, bialgebra_limit: int = 12) -> dict:
        K = self.field
        m, e, c, eps, s = self.mult, self.unit, self.comult, self.counit, self.antipode
        N = self.N
        I = _eye(K, N)
        out = {}
        out["associative"] = self.algebra().is_associative()
        out["unit"] = _equal(K, _red(K, np.tensordot(e, m, axes=([0], [0]))), I) and _equal(
            K, _red(K, np.tensordot(e, m, axes=([0], [1]))), I)
        C1 = _red(K, np.tensordot(c, c, axes=([1], [0])).transpose(0, 2, 3, 1))
        C2 = _red(K, np.tensordot(c, c, axes=([2], [0])))
        out["coassociative"] = _equal(K, C1, C2)
        out["counit"] = _equal(K, _red(K, np.tensordot(c, eps, axes=([1], [0]))), I) and _equal(
            K, _red(K, np.tensordot(c, eps, axes=([2], [0]))), I)
        target = _red(K, np.multiply.outer(eps, e))
        X = np.tensordot(c, s, axes=([1], [0]))  # [a,j,i']
        left = _red(K, np.tensordot(X, m, axes=([2, 1], [0, 1])))
        X2 = np.tensordot(c, s, axes=([2], [0]))  # [a,i,j']
        right = _red(K, np.tensordot(X2, m, axes=([1, 2], [0, 1])))
        out["antipode"] = _equal(K, left, target) and _equal(K, right, target)
        out["counit_multiplicative"] = _equal(K, _red(K, np.tensordot(m, eps, axes=([2], [0]))),
                                              _red(K, np.multiply.outer(eps, eps)))
        if N <= bialgebra_limit:
            ok = True
            lhs = _red(K, np.tensordot(m, c, axes=([2], [0])))
            for a in range(N):
                for b in range(N):
                    if not _equal(K, lhs[a, b], self.tensor_mul(c[a], c[b])):
                        ok = False
            out["comult_multiplicative"] = ok
        out["commutative"] = self.is_commutative()
        out["cocommutative"] = self.is_cocommutative()
        return out

    def format(self) -> str:
        K = self.field
        fmt = lambda a: " ".join(K.format(K.convert(x) if isinstance(K, PrimeField) else x) for x in a.ravel())
        lines = ["-----BEGIN HOPF-----", f"field {K.descriptor()}", f"dimension {self.N}"]
        if self.labels:
            lines.append("basis " + " ".join(self.labels))
        lines += [f"mult {fmt(self.mult)}", f"unit {fmt(self.unit)}", f"comult {fmt(self.comult)}",
                  f"counit {fmt(self.counit)}", f"antipode {fmt(self.antipode)}", "-----END HOPF-----"]
        return "\n".join(lines)


def cartier_dual(H: HopfAlgebra) -> HopfAlgebra:
    """Dual vector space with all structure maps transposed."""
    if not H.is_commutative():
        raise ContractViolation("Cartier duality needs a commutative Hopf algebra")
    if not H.is_cocommutative():
        raise ContractViolation("Cartier duality needs a cocommutative Hopf algebra")
    labels = [f"{l}*" if not l.endswith("*") else l[:-1] for l in H.labels]
    return HopfAlgebra(H.field, H.comult.transpose(1, 2, 0).copy(), H.counit.copy(),
                       H.mult.transpose(2, 0, 1).copy(), H.unit.copy(), H.antipode.T.copy(), labels,
                       {"dual_of": H.provenance.get("name", "H")})


# -- presentations -----------------------------------------------------------------------


def _copy_names(names, k):
    return [f"{nm}_{k}" for nm in names]


@dataclass
class GroupSchemePresentation:
    """Group scheme ``Y`` in ``P^r`` with its identity and group-law data.

    ``mult_laws`` are tuples of bihomogeneous forms in two copies of the coordinates
    (names ``x_1``, ``x_2``) representing the multiplication on open sets covering
    ``Y x Y``; ``inv_laws`` likewise for the inverse. The graphs are derived from them.
    """

    ideal: Ideal
    identity: tuple
    mult_laws: list
    inv_laws: list
    name: str = "Y"
    torsion_builder: object = None
    mult_graph: MorphismGraph | None = None
    inv_graph: MorphismGraph | None = None

    def __post_init__(self):
        R = self.ideal.ring
        K = R.field
        for g in self.ideal.gens:
            if not K.is_zero(g.evaluate(self.identity)):
                raise ContractViolation("identity point does not lie on Y")
        if self.mult_graph is None and self.mult_laws:
            self.mult_graph = _laws_graph(self.ideal, self.mult_laws, 2)
        if self.inv_graph is None and self.inv_laws:
            self.inv_graph = _laws_graph(self.ideal, self.inv_laws, 1)

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    @property
    def field(self) -> Field:
        return self.ideal.ring.field

    def restrict(self, J: Ideal, name: str) -> "GroupSchemePresentation":
        """The same group law on a closed subgroup scheme ``V(J)``."""
        return GroupSchemePresentation(J, self.identity, self.mult_laws, self.inv_laws, name)

    def format(self) -> str:
        K = self.field
        lines = [f"group_scheme {self.name}", "-----BEGIN IDEAL-----", self.ring.header()]
        lines += [g.format() for g in self.ideal.gens]
        lines.append("-----END IDEAL-----")
        lines.append("identity " + " ".join(K.format(c) for c in self.identity))
        if self.mult_graph is not None:
            lines.append(self.mult_graph.format())
        if self.inv_graph is not None:
            lines.append(self.inv_graph.format())
        return "\n".join(lines)


def _factors(R: PolyRing, count: int):
    return [Factor(f"Y{k}", tuple(_copy_names(R.names, k))) for k in range(1, count + 1)]


def _laws_graph(Y: Ideal, laws, nsrc: int) -> MorphismGraph:
    """Graph in ``Y^nsrc x Y`` cut out by ``w ∧ F(sources) = 0`` for every law ``F``."""
    R = Y.ring
    facs = _factors(R, nsrc + 1)
    G = _product_ring(facs, R.field)
    w = [G.gen(nm) for nm in facs[-1].names]
    gens = []
    for F in laws:
        Fg = [f.rename(G, [G.index[nm if nm in G.index else f"{nm}_1"] for nm in f.ring.names]) for f in F]
        for a in range(len(w)):
            for b in range(a + 1, len(w)):
                h = w[a] * Fg[b] - w[b] * Fg[a]
                if not h.is_zero():
                    gens.append(h)
    for fac in facs:
        gens += [g.rename(G, [G.index[nm] for nm in fac.names]) for g in Y.gens]
    return MorphismGraph(facs, Ideal(gens, G), 0, nsrc)


def _chart_form(Y: Ideal, identity):
    """A linear form not vanishing anywhere on the finite scheme ``V(Y)``."""
    R = Y.ring
    K = R.field
    cands = list(R.gens())
    for i in range(R.n):
        for j in range(R.n):
            if i != j:
                for c in range(1, 4):
                    cands.append(R.gen(i) + R.gen(j).scale(K.from_int(c)))
    for ell in cands:
        if K.is_zero(ell.evaluate(identity)):
            continue
        J = Ideal(Y.gens + [ell], R)
        if J.hilbert_polynomial().is_zero():
            return ell
    raise ContractViolation("no coordinate chart contains the whole finite scheme")


# -- global sections -----------------------------------------------------------------------


@dataclass
class SectionAlgebra:
    algebra: FiniteAlgebra
    sections: list  # per basis element: list over i of coordinate vectors in (S_Y)_t
    t: int


def global_sections(Y: Ideal, t: int | None = None) -> SectionAlgebra:
    """``H^0(Y, O_Y)`` as the kernel of ``(f_i) -> (x_j^t f_i - x_i^t f_j)``."""
    X = EmbeddedScheme(Y)
    phi = X.phi
    if t is None:
        t = max(int(phi), 1)
    elif t < phi:
        raise ContractViolation(f"t={t} is below phi(Y)={phi}")
    R = Y.ring
    K = R.field
    r1 = R.n
    P1 = X.piece(t)
    P2 = X.piece(2 * t)
    nf = Y.reducer() if Y.gens else (lambda f: f)
    basis1 = [R.monomial(e) for e in P1.basis]
    xt = [R.gen(i) ** t for i in range(r1)]
    d1, d2 = P1.dim, P2.dim
    # image of x_j^t * b for every (j, b)
    img = [[P2.coordinates(nf(xt[j] * b)) for b in basis1] for j in range(r1)]
    pairs = [(i, j) for i in range(r1) for j in range(i + 1, r1)]
    rows = []
    for i, j in pairs:
        for k in range(d2):
            row = [K.zero] * (r1 * d1)
            for b in range(d1):
                row[i * d1 + b] = K.add(row[i * d1 + b], img[j][b][k])
                row[j * d1 + b] = K.sub(row[j * d1 + b], img[i][b][k])
            rows.append(row)
    ker = nullspace(rows, K, r1 * d1) if rows else nullspace([], K, r1 * d1)
    ker = rref(ker, K)[0]
    N = len(ker)
    secs = [[v[i * d1:(i + 1) * d1] for i in range(r1)] for v in ker]

    def as_poly(vec):
        return sum((b.scale(c) for b, c in zip(basis1, vec) if not K.is_zero(c)), R.zero())

    # x_i^t h_i = f_i g_i: linear in the kernel coordinates of h
    lhs = []
    for i in range(r1):
        for k in range(d2):
            lhs.append([sum_field(K, [K.mul(v[i * d1 + b], img[i][b][k]) for b in range(d1)]) for v in ker])

    def solve_section(rhs):
        try:
            return solve_many(lhs, [rhs], K, unique=True)[0]
        except LinearAlgebraError as exc:
            raise RegularityError(str(exc)) from exc

    mult = _zeros(K, (N, N, N))
    for a in range(N):
        for b in range(a, N):
            rhs = []
            for i in range(r1):
                prod = nf(as_poly(secs[a][i]) * as_poly(secs[b][i]))
                rhs += list(P2.coordinates(prod))
            h = solve_section(rhs)
            for k in range(N):
                mult[a, b, k] = h[k]
                mult[b, a, k] = h[k]
    rhs = []
    for i in range(r1):
        rhs += list(P2.coordinates(nf(xt[i] * xt[i])))
    unit = _arr(K, solve_section(rhs))
    alg = FiniteAlgebra(K, _red(K, mult), unit, [f"s{k}" for k in range(N)])
    return SectionAlgebra(alg, secs, t)


def sum_field(K, xs):
    acc = K.zero
    for x in xs:
        acc = K.add(acc, x)
    return acc


# -- the Hopf structure ------------------------------------------------------------------


class _Chart:
    """Coordinate ring ``A = S/(I_Y, l - 1)`` of a finite scheme inside one chart."""

    def __init__(self, Y: Ideal, ell: Poly):
        R = Y.ring
        K = R.field
        _check_field(K)
        self.R, self.K, self.ell = R, K, ell
        self.I = Ideal(Y.gens + [ell - R.one()], R)
        self.std = self.I.standard_monomials()
        self.index = {e: i for i, e in enumerate(self.std)}
        self.nf = self.I.reducer()
        self.N = len(self.std)
        self._cache = {}
        mult = _zeros(K, (self.N, self.N, self.N))
        for i, a in enumerate(self.std):
            for j, b in enumerate(self.std):
                if j < i:
                    mult[i, j] = mult[j, i]
                    continue
                mult[i, j] = self.vec(R.monomial(tuple(x + y for x, y in zip(a, b))))
        self.alg = FiniteAlgebra(K, mult, self.vec(R.one()), [R.format_monomial(e) or "1" for e in self.std])

    def vec(self, f: Poly):
        K = self.K
        out = _zeros(K, self.N)
        for e, c in self.nf(f).terms.items():
            out[self.index[e]] = c
        return out

    def mono(self, e):
        if e not in self._cache:
            self._cache[e] = self.vec(self.R.monomial(e))
        return self._cache[e]


def _tensor_of(chart: _Chart, F: Poly, n: int):
    """``F`` (bihomogeneous in two copies) as an ``N x N`` array in ``A (x) A``."""
    K = chart.K
    out = _zeros(K, (chart.N, chart.N))
    for e, c in F.terms.items():
        a, b = e[:n], e[n:]
        out = out + np.multiply.outer(chart.mono(a), chart.mono(b)) * (c if not isinstance(K, PrimeField) else int(c))
    return _red(K, out)


def _value_of(chart: _Chart, F: Poly):
    return chart.vec(F.rename(chart.R))


def hopf_structure(G: GroupSchemePresentation, seed: int = 0, trials: int = 40) -> HopfAlgebra:
    """Hopf algebra ``H^0(Y, O_Y)`` of a finite group scheme, computed in an affine
    chart ``l = 1`` containing ``Y``: comultiplication and antipode are the pullbacks
    ``F_v / l(F)`` of the coordinate functions along a law ``F`` whose denominator
    is a unit."""
    Y = G.ideal
    R = Y.ring
    K = R.field
    P = EmbeddedScheme(Y).P
    if P.degree != 0:
        raise ContractViolation("hopf_structure needs a finite group scheme")
    ell = _chart_form(Y, G.identity)
    chart = _Chart(Y, ell)
    N = chart.N
    if N != P(0):
        raise ContractViolation("chart coordinate ring has the wrong dimension")
    A = chart.alg
    H = HopfAlgebra(K, A.mult, A.unit, _zeros(K, (N, N, N)), _zeros(K, N), _zeros(K, (N, N)), A.labels)
    rng = random.Random(seed)
    n = R.n
    R2 = PolyRing(K, _copy_names(R.names, 1) + _copy_names(R.names, 2))
    laws2 = [tuple(f.rename(R2) for f in F) for F in G.mult_laws]
    ell2 = ell.rename(R2, list(range(n)))
    # a law with invertible denominator
    for _ in range(trials):
        F = _combine(laws2, rng, K, R2)
        D = _tensor_of(chart, ell.substitute(list(F), R2), n)
        MD = _tensor_left_matrix(H, D)
        if rank(_lists(K, MD), K) == N * N:
            break
    else:
        raise ContractViolation("no multiplication law is defined on all of Y x Y")
    gen_images = []
    for v in range(n):
        rhs = _tensor_of(chart, F[v], n).reshape(N * N)
        gen_images.append(_arr(K, _solve(K, MD, rhs)).reshape(N, N))
    one2 = _red(K, np.multiply.outer(A.unit, A.unit))
    comult = _zeros(K, (N, N, N))
    for k, e in enumerate(chart.std):
        acc = one2
        for v, a in enumerate(e):
            for _ in range(a):
                acc = H.tensor_mul(acc, gen_images[v])
        comult[k] = acc
    H.comult = comult
    # antipode
    for _ in range(trials):
        Gi = _combine([tuple(f.rename(R) for f in F_) for F_ in G.inv_laws], rng, K, R)
        den = chart.vec(ell.substitute(list(Gi), R))
        MDen = A.left_matrix(den)
        if rank(_lists(K, MDen), K) == N:
            break
    else:
        raise ContractViolation("no inverse law is defined on all of Y")
    s_gens = [_arr(K, _solve(K, MDen, chart.vec(Gi[v]))) for v in range(n)]
    S = _zeros(K, (N, N))
    for k, e in enumerate(chart.std):
        acc = A.unit
        for v, a in enumerate(e):
            for _ in range(a):
                acc = A.mul(acc, s_gens[v])
        S[k] = acc
    H.antipode = S
    # counit: evaluation at the identity normalized by l
    lval = ell.evaluate(G.identity)
    pt = [K.div(c, lval) for c in G.identity]
    H.counit = _arr(K, [R.monomial(e).evaluate(pt) for e in chart.std])
    H.provenance = {"name": G.name, "chart": ell.format(), "dimension": N}
    return H


def _combine(laws, rng, K, ring):
    if len(laws) == 1:
        return laws[0]
    coeffs = [K.from_int(rng.randint(-3, 3)) for _ in laws]
    out = []
    for v in range(len(laws[0])):
        acc = ring.zero()
        for c, F in zip(coeffs, laws):
            if not K.is_zero(c):
                acc = acc + F[v].scale(c)
        out.append(acc)
    return tuple(out)


def _tensor_left_matrix(H: HopfAlgebra, D):
    """Matrix of ``z -> D z`` on ``A (x) A`` (flattened ``N^2``)."""
    K = H.field
    m = H.mult
    N = H.N
    X = np.tensordot(D, m, axes=([0], [0]))  # [p,j,k]
    Y = np.tensordot(X, m, axes=([0], [0]))  # [j,k,q,l]
    return _red(K, Y.transpose(1, 3, 0, 2).reshape(N * N, N * N))


# -- [n] and torsion -----------------------------------------------------------------------


def multiplication_by_n(G: GroupSchemePresentation, n: int) -> MorphismGraph:
    """Graph of ``[n]`` in ``Y x Y`` by iterating ``x -> m(x, [k] x)``."""
    if n < 1:
        raise ContractViolation("n must be positive")
    R = G.ring
    facs = _factors(R, 2)
    P2 = _product_ring(facs, G.field)
    x = [P2.gen(nm) for nm in facs[0].names]
    w = [P2.gen(nm) for nm in facs[1].names]
    gens = [x[a] * w[b] - x[b] * w[a] for a in range(R.n) for b in range(a + 1, R.n)]
    for fac in facs:
        gens += [g.rename(P2, [P2.index[nm] for nm in fac.names]) for g in G.ideal.gens]
    graph = MorphismGraph(facs, Ideal(gens, P2), 0, 1)
    for _ in range(n - 1):
        f3 = _factors(R, 3)
        P3 = _product_ring(f3, G.field)
        prev = [g.rename(P3, [P3.index[nm] for nm in f3[0].names + f3[1].names]) for g in graph.ideal.gens]
        mult = [g.rename(P3) for g in G.mult_graph.ideal.gens]
        big = MorphismGraph(f3, Ideal(prev + mult, P3), 0, 2)
        proj = big.project([0, 2])
        ren = [P2.index[nm.replace("_3", "_2")] if nm.endswith("_3") else P2.index[nm] for nm in proj.ring.names]
        graph = MorphismGraph(facs, Ideal([g.rename(P2, ren) for g in proj.ideal.gens], P2), 0, 1)
    return graph


def torsion_kernel(G: GroupSchemePresentation, n: int) -> GroupSchemePresentation:
    """``Y[n]``: the scheme-theoretic fiber of ``[n]`` over the identity."""
    if n < 1:
        raise ContractViolation("n must be positive")
    R = G.ring
    K = G.field
    if n == 1:
        e = G.identity
        i = next(k for k, c in enumerate(e) if not K.is_zero(c))
        gens = [R.gen(j).scale(e[i]) - R.gen(i).scale(e[j]) for j in range(R.n) if j != i]
        return G.restrict(Ideal(gens, R), f"{G.name}[1]")
    if G.torsion_builder is not None:
        J = G.torsion_builder(n)
    else:
        graph = multiplication_by_n(G, n)
        fib = graph.fiber(1, G.identity)
        J = Ideal([g.rename(R, [R.index[nm[:-2]] for nm in fib.ring.names]) for g in fib.ideal.gens], R)
        J = saturate(J, irrelevant_ideal(R, R.names))
    return G.restrict(J, f"{G.name}[{n}]")


# -- points ---------------------------------------------------------------------------------


@dataclass
class FiniteGroupWithGalois:
    field: Field
    points: list
    table: list
    identity: int
    automorphisms: list
    action: list  # one permutation of point indices per automorphism
    checks: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.points)

    def format(self) -> str:
        L = self.field
        lines = [f"field {L.descriptor()}", f"order {self.order}", f"identity {self.identity}"]
        for i, p in enumerate(self.points):
            lines.append(f"point {i} " + " ".join(L.format(c) for c in p))
        for row in self.table:
            lines.append("row " + " ".join(map(str, row)))
        for k, perm in enumerate(self.action):
            lines.append(f"aut {k} " + " ".join(map(str, perm)))
        return "\n".join(lines)


def points_with_galois(G, seed: int = 0) -> FiniteGroupWithGalois:
    """``G(L)`` with its group table and the action of ``Aut(L/k)``; ``G`` is a
    presentation or a HopfAlgebra."""
    H = G if isinstance(G, HopfAlgebra) else hopf_structure(G, seed)
    K = H.field
    L, pts = H.algebra().points(seed)
    emb = lambda a: L.embed(K.convert(a) if isinstance(K, PrimeField) else a, K)
    c = H.comult
    N = H.N
    nz = [(k, i, j, emb(c[k, i, j])) for k in range(N) for i in range(N) for j in range(N)
          if not K.is_zero(K.convert(c[k, i, j]) if isinstance(K, PrimeField) else c[k, i, j])]
    index = {p: i for i, p in enumerate(pts)}

    def product(p, q):
        out = [L.zero] * N
        for k, i, j, v in nz:
            out[k] = L.add(out[k], L.mul(v, L.mul(p[i], q[j])))
        return tuple(out)

    table = []
    for p in pts:
        row = []
        for q in pts:
            r = product(p, q)
            if r not in index:
                raise ContractViolation("points are not closed under the group law")
            row.append(index[r])
        table.append(row)
    eps = tuple(emb(x) for x in H.counit)
    if eps not in index:
        raise ContractViolation("identity is not among the points")
    auts = automorphisms(L, seed)
    action = []
    for s in auts:
        perm = []
        for p in pts:
            q = tuple(s(x) for x in p)
            if q not in index:
                raise ContractViolation("Galois image is not a point")
            perm.append(index[q])
        action.append(perm)
    n = len(pts)
    e = index[eps]
    rng = range(n)
    checks = {
        "identity": all(table[e][i] == i for i in rng),
        "inverses": all(any(table[i][j] == e for j in rng) for i in rng),
        "associative": all(table[table[i][j]][k] == table[i][table[j][k]] for i in rng for j in rng for k in rng),
        "equivariant": all(perm[table[i][j]] == table[perm[i]][perm[j]] for perm in action for i in rng for j in rng),
    }
    return FiniteGroupWithGalois(L, pts, table, e, auts, action, checks)


# -- fixtures ---------------------------------------------------------------------------------


def mu_n(n: int, field: Field = QQ) -> GroupSchemePresentation:
    """``mu_n = V(x1^n - x0^n)`` in ``P^1`` with coordinatewise multiplication."""
    R = PolyRing(field, ["x0", "x1"])
    x0, x1 = R.gens()
    Y = Ideal([x1 ** n - x0 ** n], R)
    R2 = PolyRing(field, _copy_names(R.names, 1) + _copy_names(R.names, 2))
    a0, a1, b0, b1 = R2.gens()
    mult = [(a0 * b0, a1 * b1)]
    inv = [(x1, x0)]
    return GroupSchemePresentation(Y, (field.one, field.one), mult, inv, f"mu_{n}")


def division_polynomial(n: int, a, b, K: Field):
    """``f_n`` in ``k[x]`` with ``psi_n = f_n`` (n odd) or ``psi_n = 2 y f_n`` (n even)."""
    X = UnivariatePoly.x(K)
    c = lambda v: UnivariatePoly(K, [K.convert(v) if not isinstance(v, int) else K.from_int(v)])
    a_, b_ = c(a), c(b)
    cube = X * X * X + a_ * X + b_
    Y2 = c(16) * cube * cube  # (2y)^4
    f = {0: UnivariatePoly(K, []), 1: c(1), 2: c(1),
         3: c(3) * X ** 4 + c(6) * a_ * X * X + c(12) * b_ * X - a_ * a_,
         4: c(2) * (X ** 6 + c(5) * a_ * X ** 4 + c(20) * b_ * X ** 3 - c(5) * a_ * a_ * X * X
                    - c(4) * a_ * b_ * X - c(8) * b_ * b_ - a_ * a_ * a_)}

    def get(k):
        if k in f:
            return f[k]
        m = k // 2
        if k % 2:
            if m % 2 == 0:
                val = Y2 * get(m + 2) * get(m) ** 3 - get(m - 1) * get(m + 1) ** 3
            else:
                val = get(m + 2) * get(m) ** 3 - Y2 * get(m - 1) * get(m + 1) ** 3
        else:
            val = get(m) * (get(m + 2) * get(m - 1) ** 2 - get(m - 2) * get(m + 1) ** 2)
        f[k] = val
        return val

    return get(n)


def _addition_laws(a, b, K: Field, R: PolyRing):
    """Basis of the bidegree (2,2) addition laws on ``y^2 z = x^3 + a x z^2 + b z^3``,
    found by linear algebra against the chord construction."""
    A = PolyRing(K, ["x1", "y1", "x2", "y2"])
    x1, y1, x2, y2 = A.gens()
    ca, cb = A.const(a), A.const(b)
    E = Ideal([y1 ** 2 - x1 ** 3 - ca * x1 - cb, y2 ** 2 - x2 ** 3 - ca * x2 - cb], A)
    nf = E.reducer()
    D = x2 - x1
    D2 = D * D
    D3 = D2 * D
    Nx = (y2 - y1) ** 2 - (x1 + x2) * D2
    Ny = (y2 - y1) * (x1 * D2 - Nx) - y1 * D3
    mons = R.monomials_of_degree(2)
    pairs = [(p, q) for p in mons for q in mons]

    def aff(p, q):
        return A.monomial((p[0], p[1], q[0], q[1]))

    cols = []  # each column: (eq1 poly, eq2 poly)
    for coord in range(3):
        for p, q in pairs:
            mm = aff(p, q)
            if coord == 0:
                cols.append((nf(mm * D2), A.zero()))
            elif coord == 1:
                cols.append((A.zero(), nf(mm * D3)))
            else:
                cols.append((nf(-(Nx * mm)), nf(-(Ny * mm))))
    keys = sorted({(k, e) for col in cols for k, f in enumerate(col) for e in f.terms})
    kidx = {key: i for i, key in enumerate(keys)}
    rows = [[K.zero] * len(cols) for _ in keys]
    for j, col in enumerate(cols):
        for k, f in enumerate(col):
            for e, c in f.terms.items():
                rows[kidx[(k, e)]][j] = c
    ker = rref(nullspace(rows, K, len(cols)), K)[0]
    if len(ker) != 3:
        raise ContractViolation(f"expected a 3-dimensional space of addition laws, found {len(ker)}")
    R2 = PolyRing(K, _copy_names(R.names, 1) + _copy_names(R.names, 2))
    laws = []
    npairs = len(pairs)
    for v in ker:
        F = []
        for coord in range(3):
            terms = {}
            for idx, (p, q) in enumerate(pairs):
                c = v[coord * npairs + idx]
                if not K.is_zero(c):
                    terms[tuple(p) + tuple(q)] = c
            F.append(R2.poly(terms))
        laws.append(tuple(F))
    return laws


def elliptic_curve(a, b, field: Field = QQ) -> GroupSchemePresentation:
    """``E: y^2 z = x^3 + a x z^2 + b z^3`` with identity ``(0:1:0)``; torsion
    subschemes come from division polynomials (affine part) and the local ideal at
    the identity."""
    K = field
    if K.characteristic in (2, 3):
        raise FieldError("short Weierstrass form needs characteristic other than 2 and 3")
    a, b = K.convert(a), K.convert(b)
    disc = K.add(K.mul(K.from_int(4), K.pow(a, 3)), K.mul(K.from_int(27), K.mul(b, b)))
    if K.is_zero(disc):
        raise ContractViolation("singular cubic")
    R = PolyRing(K, ["x", "y", "z"])
    x, y, z = R.gens()
    I_E = Ideal([y * y * z - x ** 3 - x * z * z * R.const(a) - z ** 3 * R.const(b)], R)
    laws = _addition_laws(a, b, K, R)
    inv = [(x, -y, z)]
    G = GroupSchemePresentation(I_E, (K.zero, K.one, K.zero), laws, inv, "E")

    def builder(n: int) -> Ideal:
        return _elliptic_torsion(I_E, a, b, n)

    G.torsion_builder = builder
    G.curve = (a, b)
    return G


def _elliptic_torsion(I_E: Ideal, a, b, n: int) -> Ideal:
    R = I_E.ring
    K = R.field
    x, y, z = R.gens()
    f = division_polynomial(n, a, b, K)
    if f.is_zero():
        raise ContractViolation("division polynomial vanishes identically")
    D = f.deg
    psi = sum((R.monomial((i, 0, D - i)).scale(c) for i, c in enumerate(f.coeffs) if not K.is_zero(c)), R.zero())
    if n % 2 == 0:
        psi = y.scale(K.from_int(2)) * psi
    J_aff = saturate(I_E + [psi], z)
    if J_aff.is_unit():
        npts, length = 0, 0
    else:
        A = PolyRing(K, ["x", "y"])
        chart = Ideal([g.substitute([A.gen(0), A.gen(1), A.one()], A) for g in J_aff.gens], A)
        length = chart.vdim()
        npts = radical_zero_dim(chart).vdim()
    total = n * n
    if total % (npts + 1):
        raise ContractViolation("torsion point count does not divide n^2")
    e = total // (npts + 1)
    if length + e != total:
        raise ContractViolation("torsion subscheme has the wrong length")
    J_O = Ideal(I_E.gens + [x ** e, z ** ceil(e / 3)], R)
    J = J_O if J_aff.is_unit() else intersect(J_aff, J_O)
    if EmbeddedScheme(J).P(0) != total:
        raise ContractViolation("torsion subscheme has the wrong Hilbert polynomial")
    return J
