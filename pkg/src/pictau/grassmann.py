"""Stiefel and Pluecker coordinates on Grassmannians and products of them."""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property

from .exactfield import QQ, Field
from .groebner import Ideal
from .linalg import det, rank, rref
from .multipoly import Poly, PolyRing

__all__ = [
    "GrassmannContext",
    "GrassmannError",
    "normalize_plucker_index",
    "plucker_relations",
    "plucker_matrix",
    "chart_matrix",
    "stiefel_point_to_plucker",
    "convert_plucker_to_stiefel",
    "convert_stiefel_to_plucker",
    "submodule_containment",
    "linear_embedding_equations",
    "check_gl_stable",
    "enumerate_subspaces",
    "gaussian_binomial",
    "projective_points_of_space",
    "symbolic_det",
]


class GrassmannError(ValueError):
    pass


def normalize_plucker_index(seq):
    """``(sign, alpha)`` with ``p_seq = sign * p_alpha``; ``(0, None)`` on repeats."""
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    # parity of the sorting permutation via inversion count
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def inc(d: int, n: int):
    return list(itertools.combinations(range(n), d))


def _pname(tag: str, alpha) -> str:
    return f"p{tag}[{','.join(map(str, alpha))}]"


def _sname(tag: str, i: int, j: int) -> str:
    return f"s{tag}[{i},{j}]"


def symbolic_det(M, ring: PolyRing) -> Poly:
    """Determinant of a square matrix of Polys (Laplace expansion, memoized on column sets)."""
    n = len(M)
    if n == 0:
        return ring.one()
    memo = {}

    def rec(row, cols):
        if row == n:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = ring.zero()
        sign = 1
        for pos, c in enumerate(cols):
            e = M[row][c]
            if not e.is_zero():
                sub = rec(row + 1, cols[:pos] + cols[pos + 1:])
                if not sub.is_zero():
                    term = e * sub
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[key] = acc
        return acc

    return rec(0, tuple(range(n)))


class GrassmannContext:
    """``Gr(d_1, n_1) x ... x Gr(d_k, n_k)`` with named Stiefel and Pluecker rings.

    A single Grassmannian uses names ``s[i,j]`` and ``p[...]``; factor ``k`` of a
    product uses the tag ``tags[k]`` (default ``1, 2, ...``) as in ``p1[0,1]``.
    """

    def __init__(self, dims, field: Field = QQ, tags=None):
        if isinstance(dims, tuple) and len(dims) == 2 and isinstance(dims[0], int):
            dims = [dims]
        dims = [tuple(x) for x in dims]
        for d, n in dims:
            if not 1 <= d <= n:
                raise GrassmannError(f"need 1 <= d <= n, got ({d}, {n})")
        if tags is None:
            tags = [""] if len(dims) == 1 else [str(k + 1) for k in range(len(dims))]
        self.dims = dims
        self.field = field
        self.tags = list(tags)
        self.alphas = [inc(d, n) for d, n in dims]

    @property
    def d(self) -> int:
        return self.dims[0][0]

    @property
    def n(self) -> int:
        return self.dims[0][1]

    def __repr__(self):
        return "GrassmannContext(" + " x ".join(f"Gr({d},{n})" for d, n in self.dims) + ")"

    def header(self) -> str:
        return "grassmann " + " ".join(f"{d},{n}" for d, n in self.dims)

    def plucker_dimension(self, k: int = 0) -> int:
        return len(self.alphas[k])

    # -- rings ---------------------------------------------------------------
    def stiefel_names(self, k: int):
        d, n = self.dims[k]
        return [_sname(self.tags[k], i, j) for i in range(n) for j in range(d)]

    def plucker_names(self, k: int):
        return [_pname(self.tags[k], a) for a in self.alphas[k]]

    @cached_property
    def stiefel_ring(self) -> PolyRing:
        names, grading = [], []
        sizes = [d * n for d, n in self.dims]
        for k in range(len(self.dims)):
            names += self.stiefel_names(k)
        off = 0
        for sz in sizes:
            grading.append([0] * off + [1] * sz + [0] * (len(names) - off - sz))
            off += sz
        return PolyRing(self.field, names, grading=grading)

    @cached_property
    def plucker_ring(self) -> PolyRing:
        names, grading = [], []
        sizes = [len(a) for a in self.alphas]
        for k in range(len(self.dims)):
            names += self.plucker_names(k)
        off = 0
        for sz in sizes:
            grading.append([0] * off + [1] * sz + [0] * (len(names) - off - sz))
            off += sz
        return PolyRing(self.field, names, grading=grading)

    def s(self, i: int, j: int, k: int = 0) -> Poly:
        return self.stiefel_ring.gen(_sname(self.tags[k], i, j))

    def p(self, alpha, k: int = 0) -> Poly:
        """Signed Pluecker variable ``p_alpha`` for any index sequence."""
        sign, a = normalize_plucker_index(alpha)
        R = self.plucker_ring
        if sign == 0:
            return R.zero()
        v = R.gen(_pname(self.tags[k], a))
        return v if sign > 0 else -v

    def stiefel_matrix(self, k: int = 0):
        d, n = self.dims[k]
        return [[self.s(i, j, k) for j in range(d)] for i in range(n)]

    def minor(self, rows, k: int = 0) -> Poly:
        """``det S_{rows, .}`` in the Stiefel ring (rows in the given order)."""
        key = (k, tuple(rows))
        cache = self.__dict__.setdefault("_minor_cache", {})
        if key not in cache:
            S = self.stiefel_matrix(k)
            cache[key] = symbolic_det([S[i] for i in rows], self.stiefel_ring)
        return cache[key]

    def plucker_matrix(self, k: int = 0):
        d, n = self.dims[k]
        betas = inc(d - 1, n)
        return [[self.p(beta + (i,), k) for beta in betas] for i in range(n)]

    def chart_matrix(self, alpha, k: int = 0):
        d, n = self.dims[k]
        alpha = tuple(alpha)
        if len(alpha) != d:
            raise GrassmannError("chart index has the wrong length")
        return [[self.p(alpha[:j] + (i,) + alpha[j + 1:], k) for j in range(d)] for i in range(n)]

    @cached_property
    def relations(self) -> Ideal:
        gens = []
        R = self.plucker_ring
        for k in range(len(self.dims)):
            for g in _exchange_relations(self, k):
                gens.append(g)
        return Ideal(gens, R)

    @cached_property
    def _relation_reducer(self):
        return self.relations.reducer()

    def reduce_plucker(self, f: Poly) -> Poly:
        return self._relation_reducer(f) if self.relations.gens else f


def _exchange_relations(ctx: GrassmannContext, k: int):
    """Quadratic exchange relations of one factor, row-reduced to a basis."""
    d, n = ctx.dims[k]
    R = ctx.plucker_ring
    K = R.field
    if d in (1, n):
        return []
    raw = []
    for alpha in inc(d - 1, n):
        for beta in inc(d + 1, n):
            f = R.zero()
            for j in range(d + 1):
                rest = beta[:j] + beta[j + 1:]
                term = ctx.p(alpha + (beta[j],), k) * ctx.p(rest, k)
                f = f + term if j % 2 == 0 else f - term
            if not f.is_zero():
                raw.append(f)
    return _linear_basis(raw, R)


def _linear_basis(polys, R: PolyRing):
    """A row-reduced basis (per multidegree) of the span of ``polys``."""
    K = R.field
    by_deg: dict = {}
    for f in polys:
        if f.is_zero():
            continue
        for part in _homogeneous_parts(f):
            by_deg.setdefault(R.exp_degree(next(iter(part.terms))), []).append(part)
    out = []
    for deg in sorted(by_deg):
        fs = by_deg[deg]
        mons = sorted({e for f in fs for e in f.terms}, key=R.key, reverse=True)
        idx = {e: i for i, e in enumerate(mons)}
        rows = []
        for f in fs:
            row = [K.zero] * len(mons)
            for e, c in f.terms.items():
                row[idx[e]] = c
            rows.append(row)
        red, _ = rref(rows, K)
        for row in red:
            out.append(R.poly({mons[i]: c for i, c in enumerate(row) if not K.is_zero(c)}))
    return out


def _homogeneous_parts(f: Poly):
    parts: dict = {}
    for e, c in f.terms.items():
        parts.setdefault(f.ring.exp_degree(e), {})[e] = c
    return [Poly(f.ring, t) for _, t in sorted(parts.items())]


# -- module-level convenience ---------------------------------------------------


def plucker_relations(d: int, n: int, field: Field = QQ) -> Ideal:
    return GrassmannContext((d, n), field).relations


def plucker_matrix(d: int, n: int, field: Field = QQ):
    return GrassmannContext((d, n), field).plucker_matrix()


def chart_matrix(alpha, n: int, field: Field = QQ):
    return GrassmannContext((len(alpha), n), field).chart_matrix(alpha)


def stiefel_point_to_plucker(S, K: Field):
    """All maximal minors of a full-rank ``n x d`` matrix, in ``Inc(d, n)`` order."""
    n = len(S)
    d = len(S[0]) if S else 0
    if rank([list(r) for r in S], K) < d:
        raise GrassmannError("Stiefel matrix does not have full rank")
    return tuple(det([S[i] for i in a], K) for a in inc(d, n))


# -- conversions ------------------------------------------------------------------


def _check_multihomogeneous(I: Ideal):
    for g in I.gens:
        if not g.is_homogeneous():
            raise GrassmannError("ideal must be (multi-)homogeneous")


def convert_plucker_to_stiefel(J: Ideal, ctx: GrassmannContext) -> Ideal:
    """Substitute every ``p_alpha`` by the minor ``det S_{alpha, .}``."""
    _check_multihomogeneous(J)
    R = J.ring
    images = []
    lookup = {}
    for k in range(len(ctx.dims)):
        for a in ctx.alphas[k]:
            lookup[_pname(ctx.tags[k], a)] = (k, a)
    for nm in R.names:
        if nm not in lookup:
            raise GrassmannError(f"unknown Pluecker variable {nm}")
        k, a = lookup[nm]
        images.append(ctx.minor(a, k))
    T = ctx.stiefel_ring
    gens = [g.substitute(images, T) for g in J.gens]
    return Ideal([g for g in gens if not g.is_zero()], T)


def _chart_images(ctx: GrassmannContext, charts):
    """Images of all Stiefel variables for a tuple of chart indices (one per factor)."""
    images = []
    for k, alpha in enumerate(charts):
        P = ctx.chart_matrix(alpha, k)
        d, n = ctx.dims[k]
        for i in range(n):
            for j in range(d):
                images.append(P[i][j])
    return images


def convert_stiefel_to_plucker(I: Ideal, ctx: GrassmannContext, workers: int = 1) -> Ideal:
    """Ideal generated by ``f(P_alpha)`` over all generators and chart tuples,
    reduced modulo the relations and row-reduced per degree."""
    T = ctx.stiefel_ring
    if not I.ring.same_space(T):
        I = I.map_to(T)
    R = ctx.plucker_ring
    tuples = list(itertools.product(*ctx.alphas))

    def work(charts):
        images = _chart_images(ctx, charts)
        out = []
        for g in I.gens:
            h = ctx.reduce_plucker(g.substitute(images, R))
            if not h.is_zero():
                out.append(h)
        return out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(work, tuples))
    else:
        parts = [work(c) for c in tuples]
    polys = [h for part in parts for h in part]
    return Ideal(_linear_basis(polys, R), R)


def check_gl_stable(I: Ideal, ctx: GrassmannContext, trials: int = 20, seed: int = 0) -> bool:
    """Randomized check that ``I`` is stable under ``S -> S g`` for ``g`` in ``GL_d``."""
    T = ctx.stiefel_ring
    K = T.field
    rng = random.Random(seed)
    nf = I.reducer()
    for _ in range(trials):
        images = []
        for k, (d, n) in enumerate(ctx.dims):
            while True:
                if K.is_finite:
                    g = [[K.random_element(rng) for _ in range(d)] for _ in range(d)]
                else:
                    g = [[K.from_int(rng.randint(-3, 3)) for _ in range(d)] for _ in range(d)]
                if not K.is_zero(det(g, K)):
                    break
            for i in range(n):
                for j in range(d):
                    acc = T.zero()
                    for l in range(d):
                        acc = acc + ctx.s(i, l, k).scale(g[l][j]) if not K.is_zero(g[l][j]) else acc
                    images.append(acc)
        for f in I.gens:
            if not nf(f.substitute(images, T)).is_zero():
                return False
    return True


# -- submodule conditions ----------------------------------------------------------


def _as_poly(x, R: PolyRing) -> Poly:
    if isinstance(x, Poly):
        return x if x.ring is R else x.rename(R) if x.ring.names != R.names else Poly(R, x.terms)
    return R.const(x)


def _lift(f: Poly, R: PolyRing) -> Poly:
    if f.ring.names == R.names:
        return Poly(R, f.terms)
    return f.rename(R)


def submodule_containment(ctx: GrassmannContext, F, flavor: str = "minors", k: int = 0,
                          ring: PolyRing | None = None) -> Ideal:
    """Conditions for ``im F`` to lie in the represented subspace.

    ``F`` is an ``n x c`` matrix (list of rows) of scalars or Polys. With
    ``flavor="minors"`` the result is the ideal of ``(d+1)``-minors of ``(S | f_i)``
    in Stiefel coordinates; with ``flavor="wedge"`` it is ``p ^ f_i = 0`` in
    Pluecker coordinates. ``ring`` (containing the context's variable names) is
    needed when ``F`` has polynomial entries.
    """
    d, n = ctx.dims[k]
    if len(F) != n:
        raise GrassmannError(f"F has {len(F)} rows, expected {n}")
    c = len(F[0]) if F else 0
    if any(len(row) != c for row in F):
        raise GrassmannError("ragged matrix")
    if flavor not in ("minors", "wedge"):
        raise GrassmannError(f"unknown flavor {flavor}")
    base = ctx.stiefel_ring if flavor == "minors" else ctx.plucker_ring
    R = ring or base
    gens = []
    for col in range(c):
        f = [_as_poly(F[i][col], R) for i in range(n)]
        if all(x.is_zero() for x in f):
            continue
        for gamma in inc(d + 1, n):
            acc = R.zero()
            for pos, i in enumerate(gamma):
                if f[i].is_zero():
                    continue
                rest = gamma[:pos] + gamma[pos + 1:]
                if flavor == "minors":
                    coef = _lift(ctx.minor(rest, k), R)
                else:
                    coef = _lift(ctx.p(rest, k), R)
                sign = 1 if (d - pos) % 2 == 0 else -1
                term = coef * f[i]
                acc = acc + term if sign > 0 else acc - term
            if not acc.is_zero():
                gens.append(acc)
    if ring is None and flavor == "wedge":
        gens = _linear_basis(gens, R)
    return Ideal(gens, R)


def linear_embedding_equations(n: int, U, d: int, field: Field = QQ, ctx: GrassmannContext | None = None) -> Ideal:
    """Linear forms ``sum_alpha p_alpha (e_alpha ^ u) = 0`` for ``u`` in a basis of ``U``.

    ``U`` is a list of vectors of length ``n``.
    """
    ctx = ctx or GrassmannContext((d, n), field)
    if not U:
        return Ideal([], ctx.plucker_ring)
    F = [[u[i] for u in U] for i in range(n)]
    return submodule_containment(ctx, F, "wedge")


# -- enumeration helpers (finite fields) ----------------------------------------------


def gaussian_binomial(n: int, d: int, q: int) -> int:
    num, den = 1, 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(d: int, n: int, K: Field):
    """All ``d``-dimensional subspaces of ``K^n`` as reduced column-echelon Stiefel matrices."""
    elems = list(K.elements())
    for alpha in inc(d, n):
        free = [(i, j) for j in range(d) for i in range(alpha[j] + 1, n) if i not in alpha]
        for vals in itertools.product(elems, repeat=len(free)):
            S = [[K.zero] * d for _ in range(n)]
            for j, a in enumerate(alpha):
                S[a][j] = K.one
            for (i, j), v in zip(free, vals):
                S[i][j] = v
            yield S


def projective_points_of_space(N: int, K: Field):
    """All points of ``P^{N-1}(K)`` normalized with first nonzero coordinate 1."""
    elems = list(K.elements())
    for lead in range(N):
        for vals in itertools.product(elems, repeat=N - lead - 1):
            yield (K.zero,) * lead + (K.one,) + tuple(vals)
