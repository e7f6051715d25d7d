"""Buchberger's algorithm and the ideal operations built on it.

Reduction works on raw ``{exp: coeff}`` dicts with a heap keyed by the
integer sort keys of :mod:`pictau.multipoly`. Pair selection uses the sugar
strategy; useless pairs are discarded with the Gebauer-Moeller criteria
(which contain both Buchberger criteria).
"""
from __future__ import annotations

import heapq
import random
from math import comb

from .exactfield import (
    ExtensionField,
    Field,
    FieldError,
    PrimeField,
    UnivariatePoly,
    automorphisms,
    extend_field,
    factor_univariate,
)
from .linalg import nullspace, rank
from .multipoly import GREVLEX, LEX, MonomialOrder, Poly, PolyError, PolyRing

__all__ = [
    "Ideal",
    "TriangularSolution",
    "groebner_basis",
    "eliminate",
    "saturate",
    "hilbert_polynomial",
    "solve_zero_dimensional",
    "sample_component_points",
    "radical_zero_dim",
    "GroebnerError",
]


class GroebnerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dict-level kernels
# ---------------------------------------------------------------------------


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Reducer:
    """A list of monic reducers with fast divisor lookup."""

    def __init__(self, K: Field, key):
        self.K = K
        self.key = key
        self.polys = []  # (lm, deg(lm), dict)
        self.p = K.p if isinstance(K, PrimeField) else None

    def add(self, lm, g):
        self.polys.append((lm, sum(lm), g))

    def find(self, e, de):
        for lm, d, g in self.polys:
            if d <= de and _divides(lm, e):
                return lm, g
        return None

    def reduce(self, f: dict, full: bool = True) -> dict:
        if not f:
            return {}
        key = self.key
        f = dict(f)
        heap = [(-key(e), e) for e in f]
        heapq.heapify(heap)
        rem = {}
        p = self.p
        K = self.K
        while heap:
            _, e = heapq.heappop(heap)
            c = f.pop(e, None)
            if c is None:
                continue
            hit = self.find(e, sum(e))
            if hit is None:
                rem[e] = c
                if not full:
                    rem.update(f)
                    return rem
                continue
            lm, g = hit
            q = _sub_exp(e, lm)
            if p is not None:
                for ge, gc in g.items():
                    if ge == lm:
                        continue
                    ne = _add_exp(ge, q)
                    v = f.get(ne)
                    if v is None:
                        f[ne] = (-c * gc) % p
                        heapq.heappush(heap, (-key(ne), ne))
                    else:
                        v = (v - c * gc) % p
                        if v:
                            f[ne] = v
                        else:
                            del f[ne]
            else:
                for ge, gc in g.items():
                    if ge == lm:
                        continue
                    ne = _add_exp(ge, q)
                    v = f.get(ne)
                    if v is None:
                        f[ne] = K.neg(K.mul(c, gc))
                        heapq.heappush(heap, (-key(ne), ne))
                    else:
                        v = K.sub(v, K.mul(c, gc))
                        if K.is_zero(v):
                            del f[ne]
                        else:
                            f[ne] = v
        return rem


def _monic(f: dict, K: Field, key):
    lm = max(f, key=key)
    c = f[lm]
    if c == K.one:
        return lm, f
    inv = K.inv(c)
    return lm, {e: K.mul(inv, v) for e, v in f.items()}


def _spoly(f, lmf, g, lmg, K):
    l = _lcm(lmf, lmg)
    qf = _sub_exp(l, lmf)
    qg = _sub_exp(l, lmg)
    out = {}
    for e, c in f.items():
        if e != lmf:
            out[_add_exp(e, qf)] = c
    for e, c in g.items():
        if e == lmg:
            continue
        ne = _add_exp(e, qg)
        v = K.sub(out.get(ne, K.zero), c)
        if K.is_zero(v):
            out.pop(ne, None)
        else:
            out[ne] = v
    return out


def _buchberger(polys, K: Field, key, max_pairs: int | None = None):
    """Reduced Groebner basis of a list of dicts (all in one ring/order)."""
    red = _Reducer(K, key)
    G = []  # list of [lm, dict, sugar, active]
    pairs = []  # heap of (sugar, lcm key, i, j, lcm)
    count = 0

    def update(h_lm, h, sugar):
        # Gebauer-Moeller installation of a new element
        nonlocal pairs
        hidx = len(G)
        cands = []
        for i, (lm, _, s, active) in enumerate(G):
            if not active:
                continue
            cands.append((i, _lcm(lm, h_lm), _coprime(lm, h_lm)))
        keep = []
        for a, (i, l, cop) in enumerate(cands):
            if cop:
                keep.append((i, l, cop))
                continue
            dominated = False
            for b, (j, l2, _) in enumerate(cands):
                if b != a and _divides(l2, l) and (l2 != l or b < a):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, l, cop))
        new_pairs = [(i, l) for i, l, cop in keep if not cop]
        # drop old pairs whose lcm is a multiple of lm(h) with distinct lcms
        filtered = []
        for entry in pairs:
            s, kk, i, j, l = entry
            if _divides(h_lm, l):
                l1 = _lcm(G[i][0], h_lm)
                l2 = _lcm(G[j][0], h_lm)
                if l1 != l and l2 != l:
                    continue
            filtered.append(entry)
        for i, l in new_pairs:
            lmi, _, si, _ = G[i]
            ps = max(si + sum(l) - sum(lmi), sugar + sum(l) - sum(h_lm))
            filtered.append((ps, key(l), i, hidx, l))
        heapq.heapify(filtered)
        pairs = filtered
        for g in G:
            if g[3] and _divides(h_lm, g[0]):
                g[3] = False
        G.append([h_lm, h, sugar, True])
        red.add(h_lm, h)

    inputs = sorted((f for f in polys if f), key=lambda f: key(max(f, key=key)))
    for f in inputs:
        sugar = max(sum(e) for e in f)
        r = red.reduce(f)
        if r:
            lm, r = _monic(r, K, key)
            update(lm, r, sugar)
    while pairs:
        s, _, i, j, l = heapq.heappop(pairs)
        count += 1
        if max_pairs is not None and count > max_pairs:
            raise GroebnerError(f"Groebner computation exceeded {max_pairs} pairs")
        sp = _spoly(G[i][1], G[i][0], G[j][1], G[j][0], K)
        r = red.reduce(sp)
        if r:
            lm, r = _monic(r, K, key)
            update(lm, r, s)
    # minimal basis then inter-reduce
    basis = [(lm, g) for lm, g, _, active in G if active]
    basis.sort(key=lambda t: key(t[0]))
    minimal = []
    for lm, g in basis:
        if not any(_divides(m, lm) for m, _ in minimal):
            minimal.append((lm, g))
    out = []
    for idx, (lm, g) in enumerate(minimal):
        others = _Reducer(K, key)
        for jdx, (lm2, g2) in enumerate(minimal):
            if jdx != idx:
                others.add(lm2, g2)
        tail = {e: c for e, c in g.items() if e != lm}
        r = others.reduce(tail)
        r[lm] = g[lm]
        out.append((lm, r))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return [g for _, g in out]


# ---------------------------------------------------------------------------
# Ideal
# ---------------------------------------------------------------------------


class Ideal:
    """Ideal of a :class:`PolyRing` with per-order cached Groebner bases."""

    def __init__(self, gens, ring: PolyRing | None = None):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise GroebnerError("ring needed for an ideal without generators")
            ring = gens[0].ring
        for g in gens:
            if not g.ring.same_space(ring):
                raise GroebnerError("generators live in different rings")
        self.ring = ring
        self.gens = [Poly(ring, g.terms) for g in gens if not g.is_zero()]
        self._gb: dict = {}

    def __repr__(self):
        return f"Ideal({len(self.gens)} generators in {self.ring})"

    # -- Groebner ----------------------------------------------------------
    def groebner(self, order: MonomialOrder | None = None, max_pairs: int | None = None):
        order = order or self.ring.order
        if order not in self._gb:
            R = self.ring.with_order(order)
            dicts = _buchberger([g.terms for g in self.gens], R.field, R.key, max_pairs)
            self._gb[order] = [Poly(R, d) for d in dicts]
        return self._gb[order]

    def normal_form(self, f: Poly, order: MonomialOrder | None = None) -> Poly:
        gb = self.groebner(order)
        R = gb[0].ring if gb else self.ring.with_order(order or self.ring.order)
        red = _Reducer(R.field, R.key)
        for g in gb:
            red.add(g.lm(), g.terms)
        return Poly(self.ring, red.reduce(f.terms))

    def reducer(self, order: MonomialOrder | None = None):
        """Callable normal form (reuses one reducer object)."""
        gb = self.groebner(order)
        R = self.ring.with_order(order or self.ring.order)
        red = _Reducer(R.field, R.key)
        for g in gb:
            red.add(g.lm(), g.terms)
        ring = self.ring
        return lambda f: Poly(ring, red.reduce(f.terms))

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        nf = self.reducer()
        return all(nf(g).is_zero() for g in other.gens)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.contains_ideal(other) and other.contains_ideal(self)

    __hash__ = None

    def is_unit(self) -> bool:
        gb = self.groebner()
        return any(all(a == 0 for a in g.lm()) for g in gb)

    def is_zero_ideal(self) -> bool:
        return not self.gens

    def leading_monomials(self, order=None):
        return [g.lm() for g in self.groebner(order)]

    # -- structure ---------------------------------------------------------
    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def __add__(self, other):
        if isinstance(other, Ideal):
            return Ideal(self.gens + other.gens, self.ring)
        return Ideal(self.gens + list(other), self.ring)

    def __mul__(self, other: "Ideal"):
        return Ideal([f * g for f in self.gens for g in other.gens], self.ring)

    def power(self, k: int) -> "Ideal":
        out = Ideal([self.ring.one()], self.ring)
        for _ in range(k):
            out = out * self
        return out

    def map_to(self, ring: PolyRing, var_map=None) -> "Ideal":
        return Ideal([g.rename(ring, var_map) for g in self.gens], ring)

    def eliminate(self, drop) -> "Ideal":
        return eliminate(self, drop)

    def saturate(self, J) -> "Ideal":
        return saturate(self, J)

    def quotient(self, J) -> "Ideal":
        return colon(self, J)

    def intersect(self, other: "Ideal") -> "Ideal":
        return intersect(self, other)

    # -- Hilbert functions -------------------------------------------------
    def hilbert_function(self, degree) -> int:
        from .multipoly import graded_basis

        return graded_basis(self.ring, self, degree).dim

    def hilbert_numerator(self):
        """Numerator N(t) of the Hilbert series N(t)/(1-t)^n (standard grading)."""
        if not self.is_homogeneous():
            raise GroebnerError("Hilbert series needs a homogeneous ideal")
        lms = self.leading_monomials()
        return _hilbert_numerator(_minimalize(lms), self.ring.n)

    def hilbert_polynomial(self):
        return hilbert_polynomial(self)

    def krull_dimension(self) -> int:
        """Krull dimension of ring/I (computed from the initial ideal)."""
        if self.is_unit():
            return -1
        lms = _minimalize(self.leading_monomials())
        return _monomial_dimension(lms, self.ring.n)

    # -- affine zero-dimensional helpers --------------------------------------
    def is_zero_dimensional(self) -> bool:
        if self.is_unit():
            return True
        lms = self.leading_monomials()
        n = self.ring.n
        have = set()
        for m in lms:
            nz = [i for i, a in enumerate(m) if a]
            if len(nz) == 1:
                have.add(nz[0])
        return len(have) == n

    def standard_monomials(self, order=None):
        """Standard monomials of an affine zero-dimensional ideal (ascending)."""
        if not self.is_zero_dimensional():
            raise GroebnerError("ideal is not zero-dimensional")
        lms = self.leading_monomials(order)
        if self.is_unit():
            return []
        n = self.ring.n
        bounds = [0] * n
        for m in lms:
            nz = [i for i, a in enumerate(m) if a]
            if len(nz) == 1:
                i = nz[0]
                bounds[i] = m[i] if not bounds[i] else min(bounds[i], m[i])
        out = []

        def rec(i, acc):
            if i == n:
                e = tuple(acc)
                if not any(_divides(m, e) for m in lms):
                    out.append(e)
                return
            for a in range(bounds[i]):
                acc.append(a)
                rec(i + 1, acc)
                acc.pop()

        rec(0, [])
        key = self.ring.with_order(order or self.ring.order).key
        out.sort(key=key)
        return out

    def vdim(self) -> int:
        return len(self.standard_monomials())


def groebner_basis(I: Ideal, order: MonomialOrder | None = None):
    return I.groebner(order)


# ---------------------------------------------------------------------------
# elimination, colon, saturation, intersection
# ---------------------------------------------------------------------------


def _sub_grading(ring: PolyRing, keep_idx):
    rows = []
    for row in ring.grading:
        r = [row[i] for i in keep_idx]
        if any(r):
            rows.append(r)
    return rows


def subring(ring: PolyRing, keep_names, order: MonomialOrder = GREVLEX) -> PolyRing:
    idx = [ring.index[nm] for nm in keep_names]
    return PolyRing(ring.field, keep_names, order, _sub_grading(ring, idx))


def eliminate(I: Ideal, drop, target: PolyRing | None = None) -> Ideal:
    """``I`` intersected with the subring of the remaining variables (block order)."""
    ring = I.ring
    drop_names = [ring.names[d] if isinstance(d, int) else d for d in drop]
    drop_set = set(drop_names)
    keep_names = [nm for nm in ring.names if nm not in drop_set]
    if target is None:
        target = subring(ring, keep_names)
    if not drop_names:
        return Ideal([g.rename(target) for g in I.gens], target)
    order = MonomialOrder("block", blocks=[len(drop_names), len(keep_names)]) if keep_names else GREVLEX
    elim_ring = PolyRing(ring.field, drop_names + keep_names, order)
    J = Ideal([g.rename(elim_ring) for g in I.gens], elim_ring)
    nd = len(drop_names)
    out = []
    for g in J.groebner():
        if all(not any(e[:nd]) for e in g.terms):
            out.append(Poly(target, {e[nd:]: c for e, c in g.terms.items()}))
    return Ideal(out, target)


def _with_extra_var(ring: PolyRing, name: str):
    names = [name] + ring.names
    grading = [[1] + [0] * ring.n] + [[0] + list(r) for r in ring.grading]
    order = MonomialOrder("block", blocks=[1, ring.n])
    return PolyRing(ring.field, names, order, grading)


def _fresh_name(ring: PolyRing, base: str = "_t") -> str:
    name = base
    while name in ring.index:
        name += "_"
    return name


def saturate_poly(I: Ideal, f: Poly) -> Ideal:
    """``I : f^infinity`` by the Rabinowitsch trick."""
    ring = I.ring
    t = _fresh_name(ring)
    R = _with_extra_var(ring, t)
    gens = [g.rename(R) for g in I.gens]
    gens.append(R.one() - R.gen(0) * f.rename(R))
    J = Ideal(gens, R)
    out = []
    for g in J.groebner():
        if all(e[0] == 0 for e in g.terms):
            out.append(Poly(ring, {e[1:]: c for e, c in g.terms.items()}))
    return Ideal(out, ring)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    t = _fresh_name(ring)
    R = _with_extra_var(ring, t)
    tt = R.gen(0)
    gens = [tt * g.rename(R) for g in I.gens] + [(R.one() - tt) * g.rename(R) for g in J.gens]
    if not I.gens or not J.gens:
        return Ideal([], ring)
    K = Ideal(gens, R)
    out = []
    for g in K.groebner():
        if all(e[0] == 0 for e in g.terms):
            out.append(Poly(ring, {e[1:]: c for e, c in g.terms.items()}))
    return Ideal(out, ring)


def colon_poly(I: Ideal, f: Poly) -> Ideal:
    if f.is_zero():
        return Ideal([I.ring.one()], I.ring)
    inter = intersect(I, Ideal([f], I.ring))
    out = []
    for g in inter.gens:
        q = _exact_divide(g, f)
        out.append(q)
    return Ideal(out, I.ring)


def _exact_divide(g: Poly, f: Poly) -> Poly:
    ring = g.ring
    K = ring.field
    key = ring.key
    lm = f.lm()
    lc_inv = K.inv(f.terms[lm])
    # plain multivariate division by a single polynomial
    rem = dict(g.terms)
    quot = {}
    while rem:
        e = max(rem, key=key)
        if not _divides(lm, e):
            raise GroebnerError("division is not exact")
        c = K.mul(rem[e], lc_inv)
        q = _sub_exp(e, lm)
        quot[q] = c
        for fe, fc in f.terms.items():
            ne = _add_exp(fe, q)
            v = K.sub(rem.get(ne, K.zero), K.mul(c, fc))
            if K.is_zero(v):
                rem.pop(ne, None)
            else:
                rem[ne] = v
    return Poly(ring, quot)


def colon(I: Ideal, J) -> Ideal:
    """``I : J``."""
    gens = J.gens if isinstance(J, Ideal) else [J]
    out = None
    for f in gens:
        c = colon_poly(I, f)
        out = c if out is None else intersect(out, c)
    return out if out is not None else Ideal([I.ring.one()], I.ring)


def saturate(I: Ideal, J) -> Ideal:
    """``I : J^infinity``; for several generators the intersection of the
    single-generator saturations."""
    gens = J.gens if isinstance(J, Ideal) else [J]
    if not gens:
        return I
    if any(all(a == 0 for a in e) for g in gens for e in g.terms) and len(gens) == 1 and len(gens[0].terms) == 1:
        return I  # J is the unit ideal
    out = None
    for f in gens:
        s = saturate_poly(I, f)
        out = s if out is None else intersect(out, s)
    return out


def irrelevant_ideal(ring: PolyRing, names) -> Ideal:
    return Ideal([ring.gen(nm) for nm in names], ring)


def saturate_irrelevant(I: Ideal, names) -> Ideal:
    """Saturation by the ideal generated by the variables ``names``."""
    return saturate(I, irrelevant_ideal(I.ring, names))


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals
# ---------------------------------------------------------------------------


def _minimalize(mons):
    mons = sorted(set(mons), key=sum)
    out = []
    for m in mons:
        if not any(_divides(o, m) for o in out):
            out.append(m)
    return out


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _hilbert_numerator(mons, n):
    """Numerator of the Hilbert series of k[x]/(mons) over (1-t)^n."""
    mons = _minimalize(mons)
    if not mons:
        return [1]
    # base case: pairwise coprime monomials -> product of (1 - t^deg)
    if all(_coprime(mons[i], mons[j]) for i in range(len(mons)) for j in range(i + 1, len(mons))):
        out = [1]
        for m in mons:
            d = sum(m)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1]) if d else [0]
        return out
    # pivot on a variable of a generator that is not a pure power, so that
    # both I + p and I : p are strictly simpler
    mixed = [m for m in mons if sum(1 for a in m if a) > 1]
    counts = [0] * n
    for m in mixed:
        for i, a in enumerate(m):
            if a:
                counts[i] += 1
    var = max(range(n), key=lambda i: counts[i])
    exps = sorted(m[var] for m in mixed if m[var])
    a = exps[len(exps) // 2]
    pivot = tuple(a if i == var else 0 for i in range(n))
    # HS(I) = HS(I + p) + t^a HS(I : p)
    plus = _minimalize(mons + [pivot])
    col = _minimalize([tuple(max(x - y, 0) for x, y in zip(m, pivot)) for m in mons])
    left = _hilbert_numerator(plus, n)
    right = _hilbert_numerator(col, n)
    return _poly_add_shift(left, right, a)


def _poly_add_shift(a, b, s):
    n = max(len(a), len(b) + s)
    out = [0] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i + s] += x
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _monomial_dimension(mons, n):
    """Krull dimension of k[x]/(mons): n minus the minimal vertex cover size."""
    if not mons:
        return n
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in mons]
    if any(not s for s in supports):
        return -1
    best = n
    # small n: exhaustive search over covers by increasing size
    from itertools import combinations

    for k in range(0, n + 1):
        for cover in combinations(range(n), k):
            cs = set(cover)
            if all(s & cs for s in supports):
                return n - k
    return n - best


def hilbert_function_from_numerator(num, n, d) -> int:
    return sum(c * comb(d - k + n - 1, n - 1) for k, c in enumerate(num) if d - k >= 0)


def hilbert_polynomial(I: Ideal):
    """Hilbert polynomial of ring/I (standard grading) as a NumericalPolynomial.

    Derived from the Hilbert series of the initial ideal, then checked
    against a direct standard-monomial count for three degrees past the
    stabilization degree.
    """
    from .numpoly import NumericalPolynomial

    if not I.is_homogeneous():
        raise GroebnerError("Hilbert polynomial needs a homogeneous ideal")
    n = I.ring.n
    num = I.hilbert_numerator()
    r = n - 1
    # P(s) = sum_k c_k C(s - k + r, r) as a polynomial identity
    P = NumericalPolynomial.zero(r)
    for k, c in enumerate(num):
        if c:
            P = P + NumericalPolynomial.binom(r - k, r) * c
    lms = I.leading_monomials()
    stab = max((sum(m) for m in lms), default=0) + n
    from .multipoly import graded_basis

    for d in range(stab, stab + 3):
        direct = graded_basis(I.ring, I, d).dim if comb(d + r, r) <= 20000 else hilbert_function_from_numerator(num, n, d)
        if direct != P(d):
            raise GroebnerError(f"Hilbert polynomial check failed in degree {d}")
    P.stabilization = stab
    return P


# ---------------------------------------------------------------------------
# zero-dimensional solving
# ---------------------------------------------------------------------------


class TriangularSolution:
    """Field ``L`` and the geometric points (tuples over ``L``) of an ideal."""

    def __init__(self, field: Field, points, ring_names):
        self.field = field
        self.points = points
        self.names = ring_names

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"TriangularSolution({self.field}, {len(self.points)} points)"

    def format(self) -> str:
        lines = [f"field {self.field.descriptor()}", f"vars {' '.join(self.names)}"]
        for pt in self.points:
            lines.append("point " + " ".join(self.field.format(c) for c in pt))
        return "\n".join(lines)


def _embed_point(pt, L: Field, src: Field):
    return tuple(L.embed(c, src) for c in pt)


def solve_zero_dimensional(I: Ideal, seed: int = 0) -> TriangularSolution:
    """All geometric points of an affine zero-dimensional ideal.

    Lex Groebner basis, univariate factorization in the last variable,
    field extension per irreducible factor, substitution, recursion.
    """
    if not I.is_zero_dimensional():
        raise GroebnerError("ideal is not zero-dimensional")
    ring = I.ring
    if I.is_unit():
        return TriangularSolution(ring.field, [], ring.names)
    L, partials = _solve_rec(I.gens, ring, ring.field, seed)
    pts = sorted({_embed_point(p, L, F) for F, p in partials}, key=lambda p: _point_sort_key(L, p))
    return TriangularSolution(L, pts, ring.names)


def _point_sort_key(L, p):
    return tuple(L.format(c) for c in p)


def _solve_rec(gens, ring: PolyRing, L0: Field, seed: int):
    """Returns ``(L_final, [(field, point)])`` with points over subfields of L_final."""
    n = ring.n
    R = PolyRing(L0, ring.names, LEX)
    if L0 != ring.field:
        gens = [Poly(R, {e: L0.embed(c, ring.field) for e, c in g.terms.items()}) for g in gens]
    else:
        gens = [Poly(R, g.terms) for g in gens]
    gb = Ideal(gens, R).groebner()
    if any(all(a == 0 for a in g.lm()) for g in gb):
        return L0, []
    last = n - 1
    uni = [g for g in gb if all(all(a == 0 for a in e[:last]) for e in g.terms)]
    if not uni:
        raise GroebnerError("no univariate polynomial in the lex basis")
    f = min(uni, key=lambda g: g.lm()[last])
    coeffs = [L0.zero] * (f.lm()[last] + 1)
    for e, c in f.terms.items():
        coeffs[e[last]] = c
    u = UnivariatePoly(L0, coeffs)
    # extend until u splits into linear factors
    Lu = L0
    while True:
        facs = factor_univariate(u, seed)
        nonlinear = [g for g, _ in facs if g.deg > 1]
        if not nonlinear:
            break
        Lu = extend_field(Lu, nonlinear[0], name=_gen_name(Lu), check=False)
        u = u.map_coeffs(Lu, lambda c, F=Lu, src=u.field: F.embed(c, src))
    roots = [Lu.neg(g.coeffs[0]) for g, _ in facs]
    sub_names = ring.names[:last]
    cur = Lu
    results = []
    for root in roots:
        if not sub_names:
            results.append((Lu, (root,)))
            continue
        sub_ring = PolyRing(cur, sub_names, LEX)
        r = cur.embed(root, Lu)
        sub_gens = []
        for g in gb:
            h = {}
            for e, c in g.terms.items():
                v = cur.mul(cur.embed(c, L0), cur.pow(r, e[last]))
                k = e[:last]
                w = cur.add(h.get(k, cur.zero), v)
                if cur.is_zero(w):
                    h.pop(k, None)
                else:
                    h[k] = w
            if h:
                sub_gens.append(Poly(sub_ring, h))
        L2, sub_pts = _solve_rec(sub_gens, sub_ring, cur, seed)
        for F, p in sub_pts:
            results.append((L2, _embed_point(p, L2, F) + (L2.embed(r, cur),)))
        cur = L2
    return cur, [(cur, _embed_point(p, cur, F)) for F, p in results]


def _gen_name(L: Field) -> str:
    depth = 0
    cur = L
    while isinstance(cur, ExtensionField):
        depth += 1
        cur = cur.base
    return "y" if depth == 0 else f"y{depth}"


def radical_zero_dim(I: Ideal, seed: int = 0) -> Ideal:
    """Radical of a zero-dimensional affine ideal (Seidenberg)."""
    if not I.is_zero_dimensional():
        raise GroebnerError("ideal is not zero-dimensional")
    ring = I.ring
    K = ring.field
    if I.is_unit():
        return I
    basis = I.standard_monomials()
    index = {e: i for i, e in enumerate(basis)}
    nf = I.reducer()
    extra = []
    for v in range(ring.n):
        x = ring.gen(v)
        powers = [ring.one()]
        vecs = [_coords(nf(ring.one()), index, K)]
        while True:
            nxt = nf(powers[-1] * x)
            vecs.append(_coords(nxt, index, K))
            powers.append(nxt)
            ker = nullspace([list(col) for col in zip(*vecs)], K)
            if ker:
                coeffs = ker[0]
                break
        minpoly = UnivariatePoly(K, coeffs).monic()
        sqfree = UnivariatePoly(K, [K.one])
        for g, _ in factor_univariate(minpoly, seed):
            sqfree = sqfree * g
        h = ring.zero()
        for k, c in enumerate(sqfree.coeffs):
            h = h + (x ** k).scale(c)
        extra.append(h)
    return Ideal(I.gens + extra, ring)


def _coords(f: Poly, index, K):
    v = [K.zero] * len(index)
    for e, c in f.terms.items():
        v[index[e]] = c
    return v


# ---------------------------------------------------------------------------
# projective points
# ---------------------------------------------------------------------------


def projective_points(I: Ideal, seed: int = 0):
    """Geometric points of a homogeneous ideal with zero-dimensional
    projective locus, normalized so the first nonzero coordinate is 1.
    Returns ``(L, points)``."""
    ring = I.ring
    n = ring.n
    K = ring.field
    collected = []
    L = K
    for i in range(n):
        # chart x_i = 1, x_j = 0 for j < i
        names = [nm for j, nm in enumerate(ring.names) if j > i]
        aff = PolyRing(K, names, LEX) if names else PolyRing(K, ["_dummy"], LEX)
        images = []
        for j in range(n):
            if j < i:
                images.append(aff.zero())
            elif j == i:
                images.append(aff.one())
            else:
                images.append(aff.gen(ring.names[j]))
        gens = [g.substitute(images, aff) for g in I.gens]
        if not names:
            gens = [g for g in gens]
            if any(not g.is_zero() for g in gens):
                continue
            collected.append((K, tuple(K.zero if j < i else K.one for j in range(n))))
            continue
        J = Ideal(gens, aff)
        if J.is_unit():
            continue
        if not J.is_zero_dimensional():
            raise GroebnerError("projective locus is not zero-dimensional")
        sol = solve_zero_dimensional(J, seed)
        for p in sol.points:
            F = sol.field
            full = tuple([F.zero] * i + [F.one] + list(p))
            collected.append((F, full))
    for F, _ in collected:
        if F.degree > L.degree:
            L = F
    pts = []
    for F, p in collected:
        pts.append(_embed_point(p, L, F) if F != L else p)
    return L, pts


def closed_points(L: Field, points):
    """Group geometric points into Galois orbits; returns one representative per orbit."""
    auts = automorphisms(L) if isinstance(L, ExtensionField) else []
    seen = set()
    reps = []
    for p in points:
        if p in seen:
            continue
        orbit = {p}
        for s in auts:
            orbit.add(tuple(s(c) for c in p))
        seen |= orbit
        reps.append((p, len(orbit)))
    return reps


def sample_component_points(I: Ideal, seed: int = 0, max_tries: int = 20):
    """At least one point on every top-dimensional component of ``V(I)``.

    Slices with seeded random hyperplanes until the locus is zero-dimensional,
    then returns one representative per closed point of the slice as
    ``(point, residue field degree, field)``.
    """
    if not I.is_homogeneous():
        raise GroebnerError("sampling needs a homogeneous ideal")
    ring = I.ring
    K = ring.field
    if I.is_unit():
        return []
    d = I.krull_dimension() - 1  # projective dimension
    if d < 0:
        return []
    rng = random.Random(seed)
    for _ in range(max_tries):
        hyper = []
        for _ in range(d):
            terms = {}
            for v in range(ring.n):
                c = K.random_element(rng) if K.is_finite else K.from_int(rng.randint(-5, 5))
                e = tuple(1 if j == v else 0 for j in range(ring.n))
                if not K.is_zero(c):
                    terms[e] = c
            hyper.append(Poly(ring, terms))
        J = Ideal(I.gens + hyper, ring)
        if J.is_unit():
            continue
        if J.krull_dimension() != 1:
            continue
        L, pts = projective_points(J, seed)
        reps = closed_points(L, pts)
        return [(p, size, L) for p, size in reps]
    raise GroebnerError("could not find a transverse slice")


def evaluation_ideal_of_points(ring: PolyRing, points, field: Field | None = None) -> Ideal:
    """Vanishing ideal (in degrees up to the Hilbert regularity) of finitely many
    rational projective points: forms of each degree vanishing at all points."""
    K = ring.field
    gens = []
    d = 1
    while True:
        mons = ring.monomials_of_degree(d)
        rows = []
        for p in points:
            rows.append([ring.monomial(m).evaluate(p) for m in mons])
        ker = nullspace(rows, K, len(mons)) if rows else [[K.one if i == j else K.zero for i in range(len(mons))] for j in range(len(mons))]
        for v in ker:
            gens.append(ring.poly({m: c for m, c in zip(mons, v)}))
        if len(mons) - len(ker) == len(points) and d >= 2:
            break
        d += 1
    return Ideal(gens, ring)
