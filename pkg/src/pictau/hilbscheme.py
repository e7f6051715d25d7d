"""Embedded schemes, Iarrobino-Kleiman equations, restriction to a subscheme,
morphism graphs and the fiber-morphism graph construction."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .errors import DEFAULT_CAP_MINOR_COUNT, BudgetExceeded, ContractViolation
from .exactfield import Field
from .grassmann import (
    GrassmannContext,
    convert_stiefel_to_plucker,
    inc,
    _linear_basis,
    linear_embedding_equations,
    submodule_containment,
    symbolic_det,
)
from .groebner import Ideal, eliminate, saturate, irrelevant_ideal
from .linalg import nullspace, rank, rref, row_space_key
from .multipoly import GradedPiece, Poly, PolyRing, graded_basis
from .numpoly import (
    NumericalPolynomial,
    gotzmann_number,
    pipeline_params,
)

__all__ = [
    "EmbeddedScheme",
    "HilbertSchemeModel",
    "Factor",
    "MorphismGraph",
    "projective_space_ring",
    "ik_equations",
    "restrict_to_X",
    "fiber_morphism_graph",
    "raise_degree",
    "subspace_ideal",
]


def projective_space_ring(r: int, field: Field, prefix: str = "x") -> PolyRing:
    return PolyRing(field, [f"{prefix}{i}" for i in range(r + 1)])


class EmbeddedScheme:
    """Closed subscheme ``X`` of ``P^r`` given by a homogeneous ideal."""

    def __init__(self, ideal: Ideal, delta: int | None = None, name: str = "X"):
        if not ideal.is_homogeneous():
            raise ContractViolation("the ideal of X must be homogeneous")
        self.ideal = ideal
        self.ring = ideal.ring
        self.field = ideal.ring.field
        self.r = ideal.ring.n - 1
        self.name = name
        degs = [g.degree() for g in ideal.gens]
        self.delta = delta if delta is not None else max(degs, default=1)
        if degs and self.delta < max(degs):
            raise ContractViolation("delta is below a generator degree")
        self.P = ideal.hilbert_polynomial()
        self.Q = NumericalPolynomial.projective_space(self.r) - self.P
        self.dim = self.P.degree
        self.codim = self.r - self.dim
        self.nu = (self.delta - 1) * self.codim

    @property
    def phi(self):
        return gotzmann_number(self.Q, self.r)

    def params(self, override_m=None, override_t=None):
        return pipeline_params(self.P, self.r, self.delta, self.codim, self.phi, override_m, override_t)

    def piece(self, t: int) -> GradedPiece:
        """``(S_X)_t`` with its standard-monomial basis."""
        return graded_basis(self.ring, self.ideal if self.ideal.gens else None, t)

    def ideal_piece(self, t: int):
        """Basis of ``(I_X)_t`` as coefficient vectors over the monomials of ``S_t``."""
        mons = self.ring.monomials_of_degree(t)
        if not self.ideal.gens:
            return []
        nf = self.ideal.reducer()
        K = self.field
        # (I_X)_t is the kernel of S_t -> (S_X)_t
        piece = self.piece(t)
        cols = [piece.coordinates(nf(self.ring.monomial(m))) for m in mons]
        rows = [[col[i] for col in cols] for i in range(piece.dim)]
        if not rows:
            return [[K.one if i == j else K.zero for i in range(len(mons))] for j in range(len(mons))]
        return nullspace(rows, K, len(mons))

    def divisor_poly(self, c: int) -> NumericalPolynomial:
        return self.P - self.P.shift(-c)

    def format(self) -> str:
        lines = [f"scheme {self.name}", f"r {self.r}", f"delta {self.delta}",
                 f"P {self.P.format_power()}", f"dim {self.dim}", f"codim {self.codim}"]
        return "\n".join(lines)


@dataclass
class HilbertSchemeModel:
    """``Hilb^Q P^r`` inside ``Gr(Q(t), S_t)``, optionally cut down to ``Hilb^Q X``."""

    Q: NumericalPolynomial
    t: int
    r: int
    ring: PolyRing
    ctx: GrassmannContext
    monomials: list
    cap_minor_count: int = DEFAULT_CAP_MINOR_COUNT
    X: EmbeddedScheme | None = None
    linear_section: Ideal | None = None
    small_grassmannian: tuple | None = None
    provenance: dict = field(default_factory=dict)
    _stiefel: Ideal | None = None
    _plucker: Ideal | None = None

    @property
    def d(self) -> int:
        return self.ctx.d

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def minor_size(self) -> int:
        return self.Q(self.t + 1) + 1

    @property
    def omega_hat_shape(self):
        return comb(self.t + 1 + self.r, self.r), (self.r + 1) * self.d

    @property
    def minor_count(self) -> int:
        rows, cols = self.omega_hat_shape
        k = self.minor_size
        if k > min(rows, cols):
            return 0
        return comb(rows, k) * comb(cols, k)

    def omega_hat(self, S=None):
        """``(x_j f_i)`` as a ``dim S_{t+1} x (r+1) Q(t)`` matrix.

        Symbolic in the Stiefel variables when ``S`` is None, otherwise evaluated
        at the Stiefel matrix ``S`` (rows indexed by the monomials of ``S_t``).
        """
        R = self.ring
        up = R.monomials_of_degree(self.t + 1)
        row_of = {e: i for i, e in enumerate(up)}
        K = R.field
        T = self.ctx.stiefel_ring
        ncols = (self.r + 1) * self.d
        if S is None:
            M = [[T.zero() for _ in range(ncols)] for _ in up]
        else:
            M = [[K.zero] * ncols for _ in up]
        for i in range(self.d):
            for j in range(self.r + 1):
                col = i * (self.r + 1) + j
                for k, m in enumerate(self.monomials):
                    e = list(m)
                    e[j] += 1
                    row = row_of[tuple(e)]
                    if S is None:
                        M[row][col] = self.ctx.s(k, i)
                    else:
                        M[row][col] = S[k][i]
        return M

    def ik_holds_at(self, S) -> bool:
        """All minors of size ``Q(t+1)+1`` of ``Omega-hat`` vanish at ``S``,
        i.e. ``rank Omega-hat(S) <= Q(t+1)``."""
        K = self.ring.field
        return rank(self.omega_hat(S), K) <= self.Q(self.t + 1)

    def contains_point(self, S) -> bool:
        if not self.ik_holds_at(S):
            return False
        if self.X is not None and self.X.ideal.gens:
            K = self.ring.field
            U = self.X.ideal_piece(self.t)
            M = [list(r) for r in zip(*S)]
            return rank(M + U, K) == rank(M, K)
        return True

    def stiefel_ideal(self) -> Ideal:
        """The ideal of all size-``Q(t+1)+1`` minors (materialized lazily, capped)."""
        if self._stiefel is not None:
            return self._stiefel
        T = self.ctx.stiefel_ring
        rows, cols = self.omega_hat_shape
        k = self.minor_size
        count = self.minor_count
        if count > self.cap_minor_count:
            raise BudgetExceeded("equation system too large", minors=count, minor_size=k,
                                 matrix=f"{rows}x{cols}")
        gens = []
        if count:
            M = self.omega_hat()
            for rs in itertools.combinations(range(rows), k):
                for cs in itertools.combinations(range(cols), k):
                    g = symbolic_det([[M[a][b] for b in cs] for a in rs], T)
                    if not g.is_zero():
                        gens.append(g.monic())
        uniq = {}
        for g in gens:
            uniq.setdefault(tuple(sorted(g.terms.items())), g)
        self._stiefel = Ideal(list(uniq.values()), T)
        return self._stiefel

    def plucker_ideal(self, workers: int = 1) -> Ideal:
        if self._plucker is None:
            I = self.stiefel_ideal()
            J = convert_stiefel_to_plucker(I, self.ctx, workers) if I.gens else Ideal([], self.ctx.plucker_ring)
            J = J + self.ctx.relations
            if self.linear_section is not None:
                J = J + self.linear_section
            self._plucker = J
        return self._plucker

    def format(self) -> str:
        lines = [self.ctx.header(), f"Q {self.Q.format_power()}", f"t {self.t}", f"r {self.r}",
                 f"minor_size {self.minor_size}", f"minor_count {self.minor_count}"]
        if self.small_grassmannian:
            d, n = self.small_grassmannian
            lines.append(f"section Gr({d},{n})")
        return "\n".join(lines)


def ik_equations(Q: NumericalPolynomial, t: int, r: int, field: Field, ring: PolyRing | None = None,
                 cap_minor_count: int = DEFAULT_CAP_MINOR_COUNT) -> HilbertSchemeModel:
    """Model of ``Hilb^Q P^r`` in ``Gr(Q(t), S_t)`` cut by the minors of ``Omega-hat``."""
    phi = gotzmann_number(Q, r)
    if phi == float("inf"):
        raise ContractViolation("not a Hilbert polynomial")
    if t < phi:
        raise ContractViolation(f"t={t} is below the Gotzmann number {phi}")
    ring = ring or projective_space_ring(r, field)
    mons = ring.monomials_of_degree(t)
    d = Q(t)
    if not 1 <= d <= len(mons):
        raise ContractViolation(f"Q(t)={d} is not a valid subspace dimension of S_t")
    ctx = GrassmannContext((d, len(mons)), field)
    model = HilbertSchemeModel(Q, t, r, ring, ctx, mons, cap_minor_count)
    model.provenance["phi_Q"] = phi
    return model


def restrict_to_X(model: HilbertSchemeModel, X: EmbeddedScheme, m: int | None = None) -> HilbertSchemeModel:
    """Add the linear conditions ``(I_X)_t ⊆ M``."""
    phi_X = X.phi
    phi_Q = model.provenance.get("phi_Q", gotzmann_number(model.Q, model.r))
    if model.t < phi_Q:
        raise ContractViolation(f"t={model.t} is below phi(Q)={phi_Q}")
    if model.t < phi_X:
        raise ContractViolation(f"t={model.t} is below phi(X)={phi_X}")
    t = model.t
    U = X.ideal_piece(t)
    lin = linear_embedding_equations(model.n, U, model.d, model.ctx.field, model.ctx)
    small_d = model.Q(t) - X.Q(t)
    small_n = X.P(t)
    if m is not None and small_d != X.P(t - m):
        raise ContractViolation("Q(t) - Q_X(t) differs from P_X(t - m)")
    out = HilbertSchemeModel(model.Q, t, model.r, model.ring, model.ctx, model.monomials,
                             model.cap_minor_count, X, lin, (small_d, small_n), dict(model.provenance))
    out.provenance["phi_X"] = phi_X
    out._stiefel = model._stiefel
    return out


def subspace_ideal(ring: PolyRing, monomials, M) -> Ideal:
    """Ideal generated by the forms whose coefficient vectors span the columns of ``M``."""
    K = ring.field
    cols = [list(c) for c in zip(*M)]
    red, _ = rref(cols, K)
    gens = [ring.poly({m: c for m, c in zip(monomials, v)}) for v in red]
    return Ideal(gens, ring)


# -- morphism graphs ----------------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    """One factor of a multi-projective ambient: its coordinate names and kind."""

    name: str
    names: tuple
    kind: str = "proj"  # "proj" or "grass"
    grass: tuple | None = None  # (d, n) for Grassmannian factors in Pluecker coordinates


def _product_ring(factors, field: Field) -> PolyRing:
    names, grading = [], []
    total = sum(len(f.names) for f in factors)
    off = 0
    for f in factors:
        names += list(f.names)
        grading.append([0] * off + [1] * len(f.names) + [0] * (total - off - len(f.names)))
        off += len(f.names)
    return PolyRing(field, names, grading=grading)


class MorphismGraph:
    """Multi-homogeneous ideal on a product of projective factors."""

    def __init__(self, factors, ideal: Ideal, source=0, target=None):
        self.factors = list(factors)
        self.field = ideal.ring.field
        self.ring = _product_ring(self.factors, self.field)
        if ideal.ring.names != self.ring.names:
            ideal = ideal.map_to(self.ring)
        elif ideal.ring is not self.ring:
            ideal = Ideal([Poly(self.ring, g.terms) for g in ideal.gens], self.ring)
        for g in ideal.gens:
            if not g.is_homogeneous():
                raise ContractViolation("graph ideal is not multi-homogeneous")
        self.ideal = ideal
        self.source = source
        self.target = target if target is not None else len(self.factors) - 1

    def __repr__(self):
        return f"MorphismGraph({' x '.join(f.name for f in self.factors)}, {len(self.ideal.gens)} generators)"

    def factor_index(self, name: str) -> int:
        for i, f in enumerate(self.factors):
            if f.name == name:
                return i
        raise KeyError(name)

    def project(self, keep) -> "MorphismGraph":
        """Scheme-theoretic image: intersect over the affine charts of the dropped
        factors the elimination ideals of the dehomogenized graph."""
        keep = [self.factor_index(k) if isinstance(k, str) else k for k in keep]
        drop = [i for i in range(len(self.factors)) if i not in keep]
        kept = [self.factors[i] for i in keep]
        target = _product_ring(kept, self.field)
        if not drop:
            return MorphismGraph(kept, self.ideal.map_to(target), 0, len(kept) - 1)
        R = self.ring
        gens = _linear_basis(self.ideal.gens, R)
        drop_names = [nm for i in drop for nm in self.factors[i].names]
        rest_names = [nm for nm in R.names if nm not in drop_names]
        out = None
        for chart in itertools.product(*[self.factors[i].names for i in drop]):
            elim_vars = [nm for nm in drop_names if nm not in chart]
            sub = PolyRing(self.field, elim_vars + rest_names)
            images = [sub.one() if nm in chart else sub.gen(nm) for nm in R.names]
            J = Ideal([g.substitute(images, sub) for g in gens], sub)
            E = eliminate(J, elim_vars, target=PolyRing(self.field, target.names, grading=target.grading))
            out = E if out is None else out.intersect(E)
        return MorphismGraph(kept, out, 0, len(kept) - 1)

    def fiber(self, k, point) -> "MorphismGraph":
        """Fiber over a point of factor ``k`` (coordinates over the base field)."""
        k = self.factor_index(k) if isinstance(k, str) else k
        fac = self.factors[k]
        rest = [f for i, f in enumerate(self.factors) if i != k]
        target = _product_ring(rest, self.field)
        images = []
        for nm in self.ring.names:
            if nm in fac.names:
                images.append(target.const(point[fac.names.index(nm)]))
            else:
                images.append(target.gen(nm))
        gens = [g.substitute(images, target) for g in self.ideal.gens]
        I = Ideal([g for g in gens if not g.is_zero()], target)
        for f in rest:
            I = saturate(I, irrelevant_ideal(target, f.names))
        return MorphismGraph(rest, I, 0, len(rest) - 1)

    def product(self, other: "MorphismGraph") -> "MorphismGraph":
        factors = self.factors + other.factors
        ring = _product_ring(factors, self.field)
        gens = [g.rename(ring) for g in self.ideal.gens] + [g.rename(ring) for g in other.ideal.gens]
        return MorphismGraph(factors, Ideal(gens, ring), 0, len(factors) - 1)

    def compose(self, other: "MorphismGraph") -> "MorphismGraph":
        """``Gamma_{g o f}`` from ``Gamma_f`` (self, X x Y) and ``Gamma_g`` (other, Y x Z)."""
        X, Y = self.factors[self.source], self.factors[self.target]
        Y2, Z = other.factors[other.source], other.factors[other.target]
        if Y.names != Y2.names:
            raise ContractViolation("middle factors do not match")
        factors = [X, Y, Z]
        ring = _product_ring(factors, self.field)
        gens = [g.rename(ring) for g in self.ideal.gens] + [g.rename(ring) for g in other.ideal.gens]
        return MorphismGraph(factors, Ideal(gens, ring)).project([0, 2])

    def swap(self) -> "MorphismGraph":
        factors = [self.factors[self.target], self.factors[self.source]]
        ring = _product_ring(factors, self.field)
        return MorphismGraph(factors, self.ideal.map_to(ring))

    def contains(self, point) -> bool:
        """Membership of a point given as one coordinate tuple per factor."""
        flat = [c for part in point for c in part]
        K = self.field
        return all(K.is_zero(g.evaluate(flat)) for g in self.ideal.gens)

    def rational_points(self, candidates):
        """Filter candidate points (lists of per-factor tuples)."""
        return [p for p in candidates if self.contains(p)]

    def format(self) -> str:
        lines = ["-----BEGIN GRAPH-----"]
        for f in self.factors:
            lines.append(f"factor {f.name} {f.kind} {' '.join(f.names)}")
        lines.append(f"source {self.factors[self.source].name}")
        lines.append(f"target {self.factors[self.target].name}")
        for g in self.ideal.gens:
            lines.append(g.format())
        lines.append("-----END GRAPH-----")
        return "\n".join(lines)


def raise_degree(gens, x_names, u: int, ring: PolyRing):
    """Multiply generators by all monomials in ``x_names`` reaching x-degree ``u``."""
    idx = [ring.index[nm] for nm in x_names]
    out = []
    for g in gens:
        degs = {sum(e[i] for i in idx) for e in g.terms}
        if len(degs) != 1:
            raise ContractViolation("generator is not homogeneous in the fiber variables")
        dg = degs.pop()
        if dg > u:
            raise ContractViolation(f"generator of fiber degree {dg} exceeds u={u}")
        for comp in _compositions(u - dg, len(idx)):
            e = [0] * ring.n
            for i, a in zip(idx, comp):
                e[i] = a
            out.append(g.mul_monomial(tuple(e)))
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for a in range(total, -1, -1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def fiber_morphism_graph(B: Ideal, b_names, Y: Ideal, x_names, P: NumericalPolynomial, u: int,
                         tag: str = "h", check_bound: bool = True) -> MorphismGraph:
    """Graph of ``b -> [Y_b]`` in ``B x Gr(Q'(u), S_u)`` (Pluecker coordinates), where
    ``Y`` is bihomogeneous in ``x_names`` (the fiber ``P^nu``) and ``b_names``."""
    nu = len(x_names) - 1
    K = Y.ring.field
    Qp = NumericalPolynomial.projective_space(nu) - P
    phi = gotzmann_number(Qp, nu)
    if check_bound and u < phi:
        raise ContractViolation(f"u={u} is below phi(Q')={phi}")
    S = PolyRing(K, list(x_names))
    mons = S.monomials_of_degree(u)
    d = Qp(u)
    if not 1 <= d <= len(mons):
        raise ContractViolation(f"Q'(u)={d} is not a valid subspace dimension")
    ctx = GrassmannContext((d, len(mons)), K, tags=[tag])
    gens = raise_degree(Y.gens, x_names, u, Y.ring)
    # coefficient columns of the generators, with entries polynomial in b
    bring = PolyRing(K, list(b_names))
    fac_b = Factor("B", tuple(b_names))
    fac_h = Factor("H", tuple(ctx.plucker_names(0)), "grass", (d, len(mons)))
    out_ring = _product_ring([fac_b, fac_h], K)
    xi = [Y.ring.index[nm] for nm in x_names]
    bi = [Y.ring.index[nm] for nm in b_names]
    cols = []
    for g in gens:
        col = {m: {} for m in mons}
        for e, c in g.terms.items():
            xm = tuple(e[i] for i in xi)
            bm = tuple(e[i] for i in bi)
            col[xm][bm] = c
        cols.append([Poly(bring, col[m]).rename(out_ring) for m in mons])
    F = [[cols[j][i] for j in range(len(cols))] for i in range(len(mons))]
    cond = submodule_containment(ctx, F, "wedge", ring=out_ring)
    rel = [g.rename(out_ring) for g in ctx.relations.gens]
    base = [g.rename(out_ring) for g in B.gens]
    graph = MorphismGraph([fac_b, fac_h], Ideal(cond.gens + rel + base, out_ring), 0, 1)
    graph.ctx = ctx
    graph.monomials = mons
    graph.u = u
    return graph
