"""Abelianized fundamental groups, their mod-n quotients, H^1 with Z/n and mu_n
coefficients, and finite abelian group utilities."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import ContractViolation
from .exactfield import ExtensionField, Field, Rationals
from .groebner import Ideal
from .groupscheme import (
    FiniteGroupWithGalois,
    GroupSchemePresentation,
    HopfAlgebra,
    _arr,
    _zeros,
    cartier_dual,
    global_sections,
    hopf_structure,
    points_with_galois,
    torsion_kernel,
)
from .hilbscheme import EmbeddedScheme
from .multipoly import PolyRing

__all__ = [
    "IntegrityError",
    "smith_normal_form",
    "FinAbGroup",
    "GaloisModule",
    "ProfiniteAbDescription",
    "pontryagin_dual",
    "pi1_ab_structure",
    "pi1_ab_mod_n",
    "h1_etale",
    "h1_fppf_mu_n",
    "ns_torsion",
    "p_rank",
    "trivial_group",
    "field_label",
]


class IntegrityError(ContractViolation):
    """Upstream data is inconsistent with the expected structure."""


# -- Smith normal form ----------------------------------------------------------------------


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """``(U, D, V)`` with ``U A V = D`` diagonal, ``d_1 | d_2 | ...`` and ``U``, ``V`` unimodular."""
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: fold an offending row into row t
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % D[t][t]:
                            add_row(i, t, 1)
                            done = False
                            break
                    if not done:
                        break
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


# -- finite abelian groups ---------------------------------------------------------------------


@dataclass
class FinAbGroup:
    """``Z/d_1 x ... x Z/d_k`` with ``d_1 | ... | d_k`` and every ``d_i > 1``."""

    invariants: tuple

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants if int(d) != 1)
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ContractViolation("invariant factors must form a divisibility chain")
        if any(d <= 0 for d in inv):
            raise ContractViolation("invariant factors must be positive")
        self.invariants = inv

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def format(self) -> str:
        if not self.invariants:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariants)

    @classmethod
    def from_table(cls, table, identity: int):
        """Structure of the group with Cayley table ``table``; returns the group and
        the coordinates of every element."""
        n = len(table)
        rows = []
        for i in range(n):
            for j in range(i, n):
                r = [0] * n
                r[i] += 1
                r[j] += 1
                r[table[i][j]] -= 1
                rows.append(r)
        r = [0] * n
        r[identity] = 1
        rows.append(r)
        _, D, V = smith_normal_form(rows)
        diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
        if any(d == 0 for d in diag):
            raise IntegrityError("table does not define a finite group")
        keep = [i for i, d in enumerate(diag) if d != 1]
        G = cls(tuple(diag[i] for i in keep))
        coords = [tuple(V[k][i] % diag[i] for i in keep) for k in range(n)]
        if len(set(coords)) != n or G.order != n:
            raise IntegrityError("table is not an abelian group")
        return G, coords


# -- Galois modules ----------------------------------------------------------------------------


def field_label(L: Field) -> str:
    """``Q``, ``Fp p``, ``Q(sqrt(D))`` for quadratic fields over Q, else the descriptor."""
    if isinstance(L, ExtensionField) and isinstance(L.base, Rationals) and L.minpoly.deg == 2:
        c0, c1, _ = L.minpoly.coeffs
        disc = Fraction(c1) ** 2 - 4 * Fraction(c0)
        num = disc.numerator * disc.denominator
        sign = -1 if num < 0 else 1
        num = abs(num)
        sq = 1
        k = 2
        while k * k <= num:
            while num % (k * k) == 0:
                num //= k * k
            k += 1
        return f"Q(sqrt({sign * num}))"
    return L.descriptor()


@dataclass
class GaloisModule:
    group: FinAbGroup
    field: Field
    matrices: list  # one integer matrix per automorphism: coords(s g) = M coords(g)
    perms: list = field(default_factory=list)  # automorphism permutations of points (if known)
    coords: list = field(default_factory=list)  # coordinates of points (if known)
    label: str = ""

    @property
    def order(self) -> int:
        return self.group.order

    def is_trivial_action(self) -> bool:
        k = len(self.group.invariants)
        I = _identity(k)
        return all(self._reduce(M) == I for M in self.matrices)

    def _reduce(self, M):
        d = self.group.invariants
        return [[M[i][j] % d[i] for j in range(len(M[i]))] for i in range(len(M))]

    def acts_by_automorphisms(self) -> bool:
        """Each matrix is invertible modulo the invariant factors."""
        d = self.group.invariants
        if not d:
            return True
        elems = _elements(d)
        for M in self.matrices:
            imgs = {tuple(sum(M[i][j] * g[j] for j in range(len(d))) % d[i] for i in range(len(d))) for g in elems}
            if len(imgs) != len(elems):
                return False
        return True

    def format(self) -> str:
        lines = [f"group {self.group.format()}", "invariants " + " ".join(map(str, self.group.invariants)),
                 f"order {self.order}", f"field {field_label(self.field)}",
                 f"automorphisms {len(self.matrices)}"]
        for k, M in enumerate(self.matrices):
            red = self._reduce(M)
            lines.append(f"action {k} " + ";".join(" ".join(map(str, row)) for row in red))
        if self.label:
            lines.insert(0, f"module {self.label}")
        return "\n".join(l.rstrip() for l in lines)

    @classmethod
    def from_points(cls, P: FiniteGroupWithGalois, label: str = ""):
        G, coords = FinAbGroup.from_table(P.table, P.identity)
        k = len(G.invariants)
        index = {c: i for i, c in enumerate(coords)}
        gens = []
        for i in range(k):
            e = tuple(1 if j == i else 0 for j in range(k))
            gens.append(index[e])
        mats = []
        for perm in P.action:
            M = [[coords[perm[gens[j]]][i] for j in range(k)] for i in range(k)]
            for idx, c in enumerate(coords):
                img = tuple(sum(M[i][j] * c[j] for j in range(k)) % G.invariants[i] for i in range(k))
                if img != coords[perm[idx]]:
                    raise IntegrityError("Galois action is not additive")
            mats.append(M)
        return cls(G, P.field, mats, [list(p) for p in P.action], coords, label)


def _elements(d):
    out = [()]
    for di in d:
        out = [e + (a,) for e in out for a in range(di)]
    return out


def _invert_matrix_mod(M, d):
    """Inverse of the automorphism ``M`` of ``prod Z/d_i`` (by enumeration)."""
    k = len(d)
    elems = _elements(d)
    image = {}
    for g in elems:
        img = tuple(sum(M[i][j] * g[j] for j in range(k)) % d[i] for i in range(k))
        image[img] = g
    cols = []
    for j in range(k):
        e = tuple(1 if i == j else 0 for i in range(k))
        cols.append(image[e])
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def pontryagin_dual(M: GaloisModule) -> GaloisModule:
    """``Hom(G, Q/Z)`` with ``(s chi)(g) = chi(s^{-1} g)``; characters are written in the
    basis ``chi_i(e_j) = delta_ij / d_i``."""
    d = M.group.invariants
    k = len(d)
    mats = []
    for A in M.matrices:
        B = _invert_matrix_mod(A, d)
        D = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                val = Fraction(d[i] * B[j][i], d[j])
                if val.denominator != 1:
                    raise IntegrityError("dual action is not integral")
                D[i][j] = int(val) % d[i]
        mats.append(D)
    label = M.label[:-1] if M.label.endswith("^") else (M.label + "^" if M.label else "")
    return GaloisModule(FinAbGroup(d), M.field, mats, label=label)


# -- pi_1^ab -------------------------------------------------------------------------------------


@dataclass
class ProfiniteAbDescription:
    g: int
    sigma: int
    char: int
    tor: GaloisModule | FinAbGroup | None = None

    def __post_init__(self):
        if self.g < 0 or not 0 <= self.sigma <= self.g:
            raise IntegrityError("need g >= 0 and 0 <= sigma <= g")
        if self.char == 0 and self.sigma:
            raise IntegrityError("sigma is only defined in positive characteristic")

    def format(self) -> str:
        parts = []
        tg = 2 * self.g
        if self.char == 0:
            if tg:
                parts.append(f"Zhat^{tg}")
        else:
            p = self.char
            if tg:
                parts.append(f"(prod_{{l!={p}}} Z_l^{tg})")
            if self.sigma:
                parts.append(f"Z_{p}^{self.sigma}")
        tor = self.tor.group if isinstance(self.tor, GaloisModule) else self.tor
        if tor is not None and tor.invariants:
            parts.append(tor.format())
        return " x ".join(parts) if parts else "0"


def p_rank(points: int, p: int, g: int) -> int:
    """``sigma`` with ``points = p^sigma``; integrity error otherwise."""
    s = 0
    n = points
    while n > 1 and n % p == 0:
        n //= p
        s += 1
    if n != 1:
        raise IntegrityError(f"|A[p](k)| = {points} is not a power of {p}")
    if s > g:
        raise IntegrityError(f"p-rank {s} exceeds g = {g}")
    return s


def pi1_ab_structure(g: int, tor=None, char: int = 0, alb_p_points: int | None = None,
                     sigma: int | None = None) -> ProfiniteAbDescription:
    """``(prod_{l != p} Z_l^{2g}) x Z_p^sigma x tor``."""
    if char:
        if alb_p_points is not None:
            s = p_rank(alb_p_points, char, g)
            if sigma is not None and sigma != s:
                raise IntegrityError("sigma disagrees with the p-torsion count")
            sigma = s
        if sigma is None:
            raise ContractViolation("sigma or |Alb[p](k)| is needed in positive characteristic")
    else:
        sigma = 0
    return ProfiniteAbDescription(g, sigma, char, tor)


def trivial_group(field_: Field) -> GroupSchemePresentation:
    """``Spec k`` as the point ``(1:0)`` of ``P^1``."""
    R = PolyRing(field_, ["x0", "x1"])
    x0, x1 = R.gens()
    R2 = PolyRing(field_, ["x0_1", "x1_1", "x0_2", "x1_2"])
    a0, a1, b0, b1 = R2.gens()
    return GroupSchemePresentation(Ideal([x1], R), (field_.one, field_.zero), [(a0 * b0, a1 * b1)], [(x0, x1)], "pt")


def _presentation(pic) -> GroupSchemePresentation:
    if isinstance(pic, GroupSchemePresentation):
        return pic
    points = getattr(pic, "points", None)
    if points is not None and hasattr(pic, "div"):
        if len(points) == 1 and pic.reduced is not False:
            return trivial_group(pic.div.field)
        raise ContractViolation("only a one-point Picard model converts to a presentation")
    raise ContractViolation("expected a group-scheme presentation or a Picard model")


def pi1_ab_mod_n(pic, n: int, seed: int = 0) -> GaloisModule:
    """``(Pic^tau)[n]^dual (k-bar)``: torsion kernel, Hopf algebra, Cartier dual, points."""
    G = _presentation(pic)
    T = torsion_kernel(G, n)
    H = hopf_structure(T, seed)
    D = cartier_dual(H)
    P = points_with_galois(D, seed)
    return GaloisModule.from_points(P, f"pi1ab/{n}")


def h1_etale(pic, n: int, seed: int = 0) -> GaloisModule:
    M = pontryagin_dual(pi1_ab_mod_n(pic, n, seed))
    M.label = f"H1et(Z/{n})"
    return M


def h1_fppf_mu_n(pic, n: int, seed: int = 0) -> GaloisModule:
    """``(Pic X)[n](k-bar)`` read off the torsion kernel directly."""
    G = _presentation(pic)
    T = torsion_kernel(G, n)
    P = points_with_galois(T, seed)
    return GaloisModule.from_points(P, f"H1fppf(mu_{n})")


def _trivial_hopf(K: Field) -> HopfAlgebra:
    one = lambda shape: _arr(K, np.full(shape, K.one, dtype=object).tolist())
    return HopfAlgebra(K, one((1, 1, 1)), one((1,)), one((1, 1, 1)), one((1,)), one((1, 1)), ["1"],
                       {"name": "k"})


def ns_torsion(pic, seed: int = 0) -> HopfAlgebra:
    """``H^0(Pic^tau, O)`` with its Hopf structure."""
    G = _presentation(pic)
    S = global_sections(G.ideal)
    if S.algebra.N == 1:
        return _trivial_hopf(G.field)
    if EmbeddedScheme(G.ideal).P.degree == 0:
        return hopf_structure(G, seed)
    raise ContractViolation("disconnected positive-dimensional Pic^tau is not supported")
