"""Numerical polynomials, Gotzmann representations and pipeline parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

__all__ = [
    "NumericalPolynomial",
    "GotzmannRep",
    "NotAHilbertPolynomial",
    "PipelineParams",
    "gotzmann_rep",
    "gotzmann_number",
    "phi_of_scheme",
    "pipeline_params",
    "fiber_hilbert_poly",
    "divisor_class_poly",
]


class NotAHilbertPolynomial(ValueError):
    pass


class NumericalPolynomial:
    """Polynomial in ``s`` with rational coefficients (power basis, low to high).

    ``r`` optionally records the ambient projective space.
    """

    __slots__ = ("coeffs", "r", "stabilization")

    def __init__(self, coeffs, r: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs
        self.r = r
        self.stabilization = None

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, r=None):
        return cls([], r)

    @classmethod
    def constant(cls, c, r=None):
        return cls([c], r)

    @classmethod
    def s(cls, r=None):
        return cls([0, 1], r)

    @classmethod
    def binom(cls, a, k: int, r=None):
        """``C(s + a, k)`` as a polynomial in ``s``."""
        return cls.binom_linear(1, a, k, r)

    @classmethod
    def binom_linear(cls, mult, a, k: int, r=None):
        """``C(mult*s + a, k)``."""
        if k < 0:
            return cls.zero(r)
        out = [Fraction(1)]
        for i in range(k):
            # multiply by (mult*s + a - i)
            lin = [Fraction(a - i), Fraction(mult)]
            new = [Fraction(0)] * (len(out) + 1)
            for j, c in enumerate(out):
                new[j] += c * lin[0]
                new[j + 1] += c * lin[1]
            out = new
        f = factorial(k)
        return cls([c / f for c in out], r)

    @classmethod
    def projective_space(cls, r: int):
        """``C(s + r, r)``, the Hilbert polynomial of P^r."""
        return cls.binom(r, r, r)

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (n - len(other.coeffs))
        return NumericalPolynomial([x + y for x, y in zip(a, b)], self.r if self.r is not None else other.r)

    __radd__ = __add__

    def __neg__(self):
        return NumericalPolynomial([-c for c in self.coeffs], self.r)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, NumericalPolynomial):
            if not self.coeffs or not other.coeffs:
                return NumericalPolynomial([], self.r)
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, x in enumerate(self.coeffs):
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
            return NumericalPolynomial(out, self.r)
        return NumericalPolynomial([c * other for c in self.coeffs], self.r)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NumericalPolynomial([other])
        return isinstance(other, NumericalPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __call__(self, s):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * s + c
        if acc.denominator == 1:
            return int(acc)
        return acc

    def shift(self, a) -> "NumericalPolynomial":
        """``P(s + a)``."""
        return self.compose_linear(1, a)

    def compose_linear(self, mult, a) -> "NumericalPolynomial":
        """``P(mult*s + a)``."""
        out = NumericalPolynomial([], self.r)
        lin = NumericalPolynomial([a, mult])
        pw = NumericalPolynomial([1])
        for c in self.coeffs:
            out = out + pw * c
            pw = pw * lin
        out.r = self.r
        return out

    # -- structure -------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_integer_valued(self, window: int = 0) -> bool:
        d = max(self.degree, 0)
        return all(Fraction(self(s)).denominator == 1 for s in range(window, window + d + 2))

    def binomial_basis(self):
        """Integer coefficients ``b_c`` with ``P(s) = sum_c b_c C(s, c)``."""
        d = max(self.degree, 0)
        vals = [Fraction(self(s)) for s in range(d + 1)]
        # forward differences at 0
        out = []
        row = vals
        for _ in range(d + 1):
            out.append(row[0])
            row = [b - a for a, b in zip(row, row[1:])]
        return [int(b) if b.denominator == 1 else b for b in out]

    def with_r(self, r):
        p = NumericalPolynomial(self.coeffs, r)
        return p

    def format(self) -> str:
        """Binomial-basis text, Gotzmann shape when available."""
        if not self.coeffs:
            return "0"
        try:
            rep = gotzmann_rep(self)
            return rep.format()
        except NotAHilbertPolynomial:
            pass
        parts = []
        for c, b in enumerate(self.binomial_basis()):
            if b:
                parts.append(f"{b}*C(s,{c})")
        return "+".join(parts).replace("+-", "-")

    def format_power(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if mon and c == 1:
                parts.append(mon)
            elif mon and c == -1:
                parts.append("-" + mon)
            elif mon:
                parts.append(f"{c}*{mon}")
            else:
                parts.append(str(c))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"NumericalPolynomial({self.format_power()})"


def _coerce(x):
    if isinstance(x, NumericalPolynomial):
        return x
    return NumericalPolynomial([x])


@dataclass(frozen=True)
class GotzmannRep:
    a: tuple

    @property
    def psi(self) -> int:
        return len(self.a)

    def polynomial(self) -> NumericalPolynomial:
        out = NumericalPolynomial.zero()
        for i, ai in enumerate(self.a):
            out = out + NumericalPolynomial.binom(ai - i, ai)
        return out

    def format(self) -> str:
        if not self.a:
            return "0"
        parts = []
        for i, ai in enumerate(self.a):
            off = ai - i
            top = "s" if off == 0 else (f"s+{off}" if off > 0 else f"s{off}")
            parts.append(f"C({top},{ai})")
        return "+".join(parts)


def gotzmann_rep(P: NumericalPolynomial) -> GotzmannRep:
    """Greedy Gotzmann representation ``P(s) = sum_i C(s + a_i - (i-1), a_i)``."""
    if P.is_zero():
        return GotzmannRep(())
    d = P.degree
    cap = max(10 * abs(int(P(d + 1))), 10)
    a = []
    R = NumericalPolynomial(P.coeffs)
    prev = None
    while not R.is_zero():
        if len(a) >= cap:
            raise NotAHilbertPolynomial("greedy representation did not terminate")
        if R.leading_coefficient() < 0:
            raise NotAHilbertPolynomial("negative leading coefficient")
        ai = R.degree
        if prev is not None and ai > prev:
            raise NotAHilbertPolynomial("degree increased during the greedy step")
        a.append(ai)
        prev = ai
        R = (R - NumericalPolynomial.binom(ai, ai)).shift(1)
    rep = GotzmannRep(tuple(a))
    if rep.polynomial() != NumericalPolynomial(P.coeffs):
        raise NotAHilbertPolynomial("reconstruction identity failed")
    return rep


def gotzmann_number(Q: NumericalPolynomial, r: int):
    """Gotzmann number of an ideal-sheaf polynomial ``Q`` in P^r (``math.inf`` if none).

    Computed on the quotient polynomial ``C(s+r, r) - Q``.
    """
    P = NumericalPolynomial.projective_space(r) - Q
    try:
        return gotzmann_rep(P).psi
    except NotAHilbertPolynomial:
        return math.inf


def phi_of_scheme(I_Z) -> int:
    """Gotzmann number of the Hilbert polynomial of the ideal sheaf of ``Z``."""
    P = I_Z.hilbert_polynomial()
    r = I_Z.ring.n - 1
    Q = NumericalPolynomial.projective_space(r) - P
    return gotzmann_number(Q, r)


def divisor_class_poly(P_X: NumericalPolynomial, c: int) -> NumericalPolynomial:
    """Quotient Hilbert polynomial of a divisor in ``|cH|``: ``P_X(s) - P_X(s - c)``."""
    return P_X - P_X.shift(-c)


@dataclass
class PipelineParams:
    m: int
    t: int
    nu: int
    delta: int
    provenance: dict = field(default_factory=dict)

    def format(self) -> str:
        lines = [f"m {self.m}", f"t {self.t}", f"nu {self.nu}"]
        for k in sorted(self.provenance):
            lines.append(f"{k} {self.provenance[k]}")
        return "\n".join(lines)


class ParameterError(ValueError):
    pass


def pipeline_params(P_X: NumericalPolynomial, r: int, delta: int, codim: int, phi_X: int,
                    override_m: int | None = None, override_t: int | None = None) -> PipelineParams:
    """Smallest ``m, t`` with ``m >= max(phi(nu H), phi(X))`` and
    ``t >= max(phi(2m H), phi(X))``, where ``nu = (delta - 1) * codim``."""
    nu = (delta - 1) * codim

    def phi_cH(c):
        if c == 0:
            return 0
        Pc = divisor_class_poly(P_X, c)
        return gotzmann_number(NumericalPolynomial.projective_space(r) - Pc, r)

    phi_nu = phi_cH(nu)
    m = max(phi_nu, phi_X)
    if override_m is not None:
        if override_m < m:
            raise ParameterError(f"override m={override_m} is below the bound {m}")
        m = override_m
    phi_2m = phi_cH(2 * m)
    t = max(phi_2m, phi_X)
    if override_t is not None:
        if override_t < t:
            raise ParameterError(f"override t={override_t} is below the bound {t}")
        t = override_t
    prov = {"phi_X": phi_X, "phi_nuH": phi_nu, "phi_2mH": phi_2m}
    return PipelineParams(m, t, nu, delta, prov)


def fiber_hilbert_poly(P_X: NumericalPolynomial, m: int, t: int) -> NumericalPolynomial:
    """``C(P_X(t-m) s + P_X(m) - 1, P_X(m) - 1)``."""
    a = P_X(t - m)
    b = P_X(m)
    if a < 1 or b < 1:
        raise ParameterError("P_X(t-m) and P_X(m) must be positive")
    return NumericalPolynomial.binom_linear(a, b - 1, b - 1)
