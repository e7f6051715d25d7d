"""Sparse multivariate polynomials over exact fields.

A polynomial is a dict ``{exponent tuple: coefficient}`` wrapped in
:class:`Poly`. Monomial orders map exponent tuples to Python ints so that
comparisons (and heaps in the Groebner code) are cheap.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from .exactfield import Field, QQ, _needs_parens

__all__ = [
    "MonomialOrder",
    "PolyRing",
    "Poly",
    "GradedPiece",
    "graded_basis",
    "multiply_into_degree",
    "PolyError",
]

EXP_BITS = 12  # exponents and degrees must stay below 4096


class PolyError(ValueError):
    pass


class MonomialOrder:
    """``lex``, ``grevlex``, ``block`` (list of block sizes, grevlex inside
    each block, blocks compared left to right) or ``weighted`` (weight rows
    compared first, grevlex tie-break)."""

    def __init__(self, kind: str = "grevlex", blocks=None, weights=None):
        if kind not in ("lex", "grevlex", "block", "weighted"):
            raise PolyError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.blocks = tuple(blocks) if blocks else None
        self.weights = tuple(tuple(w) for w in weights) if weights else None

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and (self.kind, self.blocks, self.weights) == (other.kind, other.blocks, other.weights)
        )

    def __hash__(self):
        return hash((self.kind, self.blocks, self.weights))

    def __repr__(self):
        if self.kind == "block":
            return f"block{list(self.blocks)}"
        return self.kind

    def key_function(self, nvars: int):
        return _key_function(self, nvars)


def _check(e):
    if e >= (1 << EXP_BITS) or e < 0:
        raise PolyError("exponent out of range")


def _grevlex_key(exp):
    d = 0
    k = 0
    for e in reversed(exp):
        _check(e)
        d += e
        k = (k << EXP_BITS) | ((1 << EXP_BITS) - 1 - e)
    return (d << (EXP_BITS * len(exp))) | k


@lru_cache(maxsize=None)
def _key_function(order: MonomialOrder, nvars: int):
    if order.kind == "lex":
        def key(exp):
            k = 0
            for e in exp:
                _check(e)
                k = (k << EXP_BITS) | e
            return k
        return key
    if order.kind == "grevlex":
        return _grevlex_key
    if order.kind == "block":
        blocks = order.blocks
        if sum(blocks) != nvars:
            raise PolyError("block sizes must add up to the number of variables")
        cuts = []
        start = 0
        for b in blocks:
            cuts.append((start, start + b))
            start += b

        def key(exp):
            k = 0
            for a, b in cuts:
                k = (k << (EXP_BITS * (b - a + 1))) | _grevlex_key(exp[a:b])
            return k
        return key
    weights = order.weights
    wbits = 2 * EXP_BITS + 8

    def key(exp):
        k = 0
        for w in weights:
            k = (k << wbits) | sum(a * b for a, b in zip(w, exp))
        return (k << (EXP_BITS * (nvars + 1))) | _grevlex_key(exp)
    return key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class PolyRing:
    """``field[names]`` with a monomial order and a Z^k grading.

    ``grading`` is a list of weight rows; the default is the standard
    Z-grading. For products of projective spaces pass one 0/1 row per factor.
    """

    def __init__(self, field: Field, names, order: MonomialOrder = GREVLEX, grading=None):
        names = list(names)
        if len(set(names)) != len(names):
            raise PolyError("variable names must be unique")
        self.field = field
        self.names = names
        self.n = len(names)
        self.order = order
        if grading is None:
            grading = [[1] * self.n]
        grading = [tuple(int(w) for w in row) for row in grading]
        for row in grading:
            if len(row) != self.n or any(w < 0 for w in row):
                raise PolyError("bad grading row")
        for j in range(self.n):
            if all(row[j] == 0 for row in grading):
                raise PolyError(f"variable {names[j]} carries no degree")
        self.grading = grading
        self.key = order.key_function(self.n)
        self.index = {nm: i for i, nm in enumerate(names)}
        self._parse_re = None

    # -- construction ------------------------------------------------------
    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.names, order, self.grading)

    def with_field(self, field: Field) -> "PolyRing":
        return PolyRing(field, self.names, self.order, self.grading)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.order == other.order
            and self.grading == other.grading
        )

    def __hash__(self):
        return hash((self.field, tuple(self.names), self.order))

    def same_space(self, other: "PolyRing") -> bool:
        return self.field == other.field and self.names == other.names

    def __repr__(self):
        return f"{self.field.descriptor()}[{', '.join(self.names)}]"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(self.field.one)

    def const(self, c) -> "Poly":
        return Poly(self, {(0,) * self.n: c} if not self.field.is_zero(c) else {})

    def from_int(self, k: int) -> "Poly":
        return self.const(self.field.from_int(k))

    def gen(self, i) -> "Poly":
        if isinstance(i, str):
            i = self.index[i]
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def monomial(self, exp, c=None) -> "Poly":
        c = self.field.one if c is None else c
        return Poly(self, {tuple(exp): c})

    def poly(self, terms) -> "Poly":
        K = self.field
        return Poly(self, {tuple(e): c for e, c in terms.items() if not K.is_zero(c)})

    # -- grading -----------------------------------------------------------
    def exp_degree(self, exp):
        return tuple(sum(w * e for w, e in zip(row, exp)) for row in self.grading)

    def normalize_degree(self, degree):
        if isinstance(degree, int):
            degree = (degree,)
        degree = tuple(degree)
        if len(degree) != len(self.grading):
            raise PolyError("degree does not match the grading")
        return degree

    def monomials_of_degree(self, degree):
        """All exponent vectors of the given (multi)degree, in decreasing order."""
        degree = self.normalize_degree(degree)
        return list(_monomials_cached(tuple(self.grading), degree, self.order, self.n))

    def dim_free(self, degree) -> int:
        return len(self.monomials_of_degree(degree))

    # -- text --------------------------------------------------------------
    def parse(self, text: str) -> "Poly":
        """Parse ``3/2*x0^2*x1 - x2^3``; extension coefficients go in parentheses."""
        if self._parse_re is None:
            alts = "|".join(re.escape(nm) for nm in sorted(self.names, key=len, reverse=True))
            self._parse_re = re.compile(rf"^({alts})(?:\^(\d+))?$")
        s = text.replace(" ", "")
        if not s:
            raise PolyError("empty polynomial")
        K = self.field
        out: dict = {}
        for sign, body in _split_terms(s):
            coeff = K.one if sign > 0 else K.neg(K.one)
            exp = [0] * self.n
            for fac in _split_factors(body):
                m = self._parse_re.match(fac)
                if m:
                    exp[self.index[m.group(1)]] += int(m.group(2) or 1)
                    continue
                if fac.startswith("(") and fac.endswith(")"):
                    fac = fac[1:-1]
                try:
                    coeff = K.mul(coeff, K.parse(fac))
                except Exception:
                    raise PolyError(f"cannot parse factor {fac!r}") from None
            e = tuple(exp)
            out[e] = K.add(out.get(e, K.zero), coeff)
        return self.poly(out)

    def format_monomial(self, exp) -> str:
        parts = []
        for nm, e in zip(self.names, exp):
            if e == 1:
                parts.append(nm)
            elif e > 1:
                parts.append(f"{nm}^{e}")
        return "*".join(parts)

    def header(self) -> str:
        return f"ring {self.field.descriptor()} vars {' '.join(self.names)}"


@lru_cache(maxsize=4096)
def _monomials_cached(grading, degree, order, n):
    # variables whose weights are all in one grading row are handled by
    # splitting into blocks; general weights fall back to a bounded search
    blocks = _grading_blocks(grading, n)
    if blocks is not None:
        per_block = []
        for row_idx, vars_ in blocks:
            d = degree[row_idx]
            ws = [grading[row_idx][v] for v in vars_]
            per_block.append((vars_, _weighted_compositions(ws, d)))
        used_rows = {r for r, _ in blocks}
        for r in range(len(degree)):
            if r not in used_rows and degree[r] != 0:
                return ()
        results = [[0] * n]
        for vars_, comps in per_block:
            new = []
            for base in results:
                for c in comps:
                    e = list(base)
                    for v, a in zip(vars_, c):
                        e[v] = a
                    new.append(e)
            results = new
        key = order.key_function(n)
        exps = [tuple(e) for e in results]
        exps.sort(key=key, reverse=True)
        return tuple(exps)
    raise PolyError("grading with variables in several rows is not supported")


def _grading_blocks(grading, n):
    """Each variable must have exactly one nonzero weight row."""
    by_row: dict = {}
    for v in range(n):
        rows = [r for r, row in enumerate(grading) if row[v] != 0]
        if len(rows) != 1:
            return None
        by_row.setdefault(rows[0], []).append(v)
    return sorted(by_row.items())


def _weighted_compositions(ws, d):
    if not ws:
        return [()] if d == 0 else []
    if all(w == 1 for w in ws):
        k = len(ws)
        out = []
        for combo in combinations_with_replacement(range(k), d):
            e = [0] * k
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        return out
    out = []

    def rec(i, rem, acc):
        if i == len(ws) - 1:
            if rem % ws[i] == 0:
                out.append(tuple(acc + [rem // ws[i]]))
            return
        for a in range(rem // ws[i] + 1):
            rec(i + 1, rem - a * ws[i], acc + [a])

    rec(0, d, [])
    return out


def _split_terms(s):
    depth = 0
    cur = ""
    sign = 1
    out = []
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in "+-" and depth == 0 and not (cur.endswith("^") or cur.endswith("*") or cur.endswith("/")):
            if cur:
                out.append((sign, cur))
            elif ch == "-" and i > 0:
                # e.g. "+-3": fold into sign
                sign = -sign
                continue
            sign = -1 if ch == "-" else 1
            cur = ""
            continue
        cur += ch
    if cur:
        out.append((sign, cur))
    return out


def _split_factors(body):
    depth = 0
    cur = ""
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "*" and depth == 0:
            yield cur
            cur = ""
        else:
            cur += ch
    if cur:
        yield cur


class Poly:
    """Immutable-by-convention sparse polynomial."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # -- basic -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms and self.ring.same_space(other.ring)
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def lm(self):
        """Leading exponent under the ring's order."""
        if self._lm is None:
            if not self.terms:
                raise PolyError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        K = self.ring.field
        inv = K.inv(self.lc())
        return Poly(self.ring, {e: K.mul(inv, c) for e, c in self.terms.items()})

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        K = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = K.add(out.get(e, K.zero), c)
            if K.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.field
        return Poly(self.ring, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, int):
                other = self.ring.field.from_int(other)
            return self.scale(other)
        K = self.ring.field
        out: dict = {}
        zero = K.zero
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = K.add(out.get(e, zero), K.mul(c1, c2))
                out[e] = v
        return Poly(self.ring, {e: c for e, c in out.items() if not K.is_zero(c)})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        K = self.ring.field
        if K.is_zero(c):
            return self.ring.zero()
        return Poly(self.ring, {e: K.mul(c, v) for e, v in self.terms.items()})

    def mul_monomial(self, exp, c=None) -> "Poly":
        K = self.ring.field
        if c is None:
            return Poly(self.ring, {tuple(a + b for a, b in zip(e, exp)): v for e, v in self.terms.items()})
        return Poly(self.ring, {tuple(a + b for a, b in zip(e, exp)): K.mul(c, v) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- grading -----------------------------------------------------------
    def degrees(self):
        return {self.ring.exp_degree(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """(Multi)degree of a homogeneous polynomial; plain int for Z-gradings."""
        ds = self.degrees()
        if not ds:
            raise PolyError("zero polynomial has no degree")
        if len(ds) > 1:
            raise PolyError("polynomial is not homogeneous")
        d = next(iter(ds))
        return d[0] if len(d) == 1 else d

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return sorted(used)

    # -- evaluation / substitution ------------------------------------------
    def evaluate(self, point, field: Field | None = None):
        """Value at ``point`` (one entry per variable) in ``field`` (an overfield)."""
        K = self.ring.field
        L = field or K
        acc = L.zero
        cache: dict = {}
        for e, c in self.terms.items():
            t = L.embed(c, K) if L is not K else c
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    pw = cache.get(key)
                    if pw is None:
                        pw = L.pow(point[i], a)
                        cache[key] = pw
                    t = L.mul(t, pw)
                    if L.is_zero(t):
                        break
            acc = L.add(acc, t)
        return acc

    def substitute(self, images, target: PolyRing | None = None) -> "Poly":
        """Replace variable ``i`` by ``images[i]`` (a Poly in ``target``, or None to keep it
        when the rings share names)."""
        target = target or self.ring
        K = target.field
        out = target.zero()
        powcache: dict = {}
        for e, c in self.terms.items():
            t = target.const(K.embed(c, self.ring.field) if K != self.ring.field else c)
            for i, a in enumerate(e):
                if not a:
                    continue
                img = images[i]
                if img is None:
                    img = target.gen(self.ring.names[i])
                key = (i, a)
                pw = powcache.get(key)
                if pw is None:
                    pw = img ** a
                    powcache[key] = pw
                t = t * pw
                if t.is_zero():
                    break
            out = out + t
        return out

    def rename(self, target: PolyRing, var_map=None) -> "Poly":
        """Move to ``target`` by variable name (or explicit index map)."""
        if var_map is None:
            var_map = [target.index[nm] for nm in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * target.n
            for i, a in enumerate(e):
                if a:
                    ne[var_map[i]] += a
            out[tuple(ne)] = c
        return Poly(target, out)

    def map_coeffs(self, fn, target: PolyRing) -> "Poly":
        K = target.field
        return Poly(target, {e: v for e, c in self.terms.items() if not K.is_zero(v := fn(c))})

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), self.ring.field.zero)

    # -- text --------------------------------------------------------------
    def format(self) -> str:
        if not self.terms:
            return "0"
        K = self.ring.field
        parts = []
        for e, c in self.sorted_terms():
            mon = self.ring.format_monomial(e)
            cs = K.format(c)
            if _needs_parens(cs):
                cs = f"({cs})"
            if not mon:
                parts.append(cs)
            elif c == K.one:
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"{cs}*{mon}")
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    __str__ = format

    def __repr__(self):
        return f"Poly({self.format()})"


class GradedPiece:
    """Graded component of ``ring / modulus`` with a standard-monomial basis."""

    def __init__(self, ring: PolyRing, degree, basis, reducer=None):
        self.ring = ring
        self.degree = degree
        self.basis = list(basis)
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.reducer = reducer  # callable Poly -> normal form, or None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: Poly):
        """Coefficient vector of ``f`` (reduced first) in the basis."""
        K = self.ring.field
        if self.reducer is not None:
            f = self.reducer(f)
        v = [K.zero] * self.dim
        for e, c in f.terms.items():
            i = self.index.get(e)
            if i is None:
                raise PolyError("polynomial does not lie in this graded piece")
            v[i] = c
        return v

    def element(self, vec) -> Poly:
        return self.ring.poly({e: c for e, c in zip(self.basis, vec)})

    def __repr__(self):
        return f"GradedPiece(degree={self.degree}, dim={self.dim})"


def graded_basis(ring: PolyRing, modulus=None, degree=0) -> GradedPiece:
    """Standard monomials of ``(ring/modulus)_degree``.

    ``modulus`` is an :class:`pictau.groebner.Ideal` (or None); its Groebner
    basis is computed in ``ring``'s order.
    """
    mons = ring.monomials_of_degree(degree)
    if modulus is None:
        return GradedPiece(ring, degree, mons)
    if not modulus.is_homogeneous():
        raise PolyError("modulus must be homogeneous for the ring's grading")
    gb = modulus.groebner(ring.order)
    lms = [g.lm() for g in gb]
    basis = [e for e in mons if not any(all(a <= b for a, b in zip(lm, e)) for lm in lms)]
    return GradedPiece(ring, degree, basis, reducer=modulus.normal_form)


def multiply_into_degree(fs, gs, modulus=None):
    """Matrix whose column (i, j) is the coordinate vector of ``f_i * g_j`` in the
    graded piece of ``ring/modulus`` where all products land. Columns are in
    lexicographic (i, j) order. Returns ``(matrix, piece)``."""
    if not fs or not gs:
        raise PolyError("empty input")
    for h in list(fs) + list(gs):
        if h.is_zero():
            raise PolyError("zero polynomial has no degree")
    ring = fs[0].ring
    degs = {tuple(a + b for a, b in zip(ring.normalize_degree(f.degree()), ring.normalize_degree(g.degree())))
            for f in fs for g in gs}
    if len(degs) != 1:
        raise PolyError("products land in different degrees")
    deg = next(iter(degs))
    piece = graded_basis(ring, modulus, deg if len(deg) > 1 else deg[0])
    cols = [piece.coordinates(f * g) for f in fs for g in gs]
    matrix = [[col[r] for col in cols] for r in range(piece.dim)]
    return matrix, piece


def dim_free_piece(nvars: int, degree: int) -> int:
    return comb(degree + nvars - 1, nvars - 1) if degree >= 0 else 0
