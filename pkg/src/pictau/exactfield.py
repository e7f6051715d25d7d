"""Exact coefficient fields: Q, F_p and simple algebraic extensions.

Elements are plain Python values so that polynomial code can store them in
dicts without wrapping:

* ``Rationals``      -> ``fractions.Fraction``
* ``PrimeField(p)``  -> ``int`` in ``range(p)``
* ``ExtensionField`` -> ``tuple`` of base-field elements (coefficients of
  ``1, y, ..., y^(n-1)`` where ``y`` is the adjoined root)

All arithmetic goes through the field object (``K.add(a, b)`` ...).
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd

__all__ = [
    "FieldError",
    "UnsupportedTowerError",
    "Field",
    "Rationals",
    "PrimeField",
    "ExtensionField",
    "QQ",
    "UnivariatePoly",
    "FieldMap",
    "factor_univariate",
    "extend_field",
    "automorphisms",
    "parse_field",
    "is_prime",
]


class FieldError(ValueError):
    pass


class UnsupportedTowerError(FieldError):
    """Raised instead of risking a wrong answer (tower too deep, degree above cap)."""


# Degree cap for factorization over Q and over number fields (norm degree).
QQ_FACTOR_DEGREE_CAP = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Abstract exact field. Subclasses implement the element protocol."""

    characteristic: int = 0
    order: int | None = None  # number of elements, None when infinite

    # -- element protocol -------------------------------------------------
    zero = None
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def from_int(self, n: int):
        raise NotImplementedError

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # -- structure ---------------------------------------------------------
    @property
    def prime_field(self) -> "Field":
        return self

    @property
    def degree(self) -> int:
        """Degree over the prime field."""
        return 1

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def embed(self, a, source: "Field"):
        """Map an element of a subfield ``source`` of ``self`` into ``self``."""
        if source == self:
            return a
        raise FieldError(f"cannot embed {source} into {self}")

    def elements(self):
        raise FieldError(f"{self} is infinite")

    def random_element(self, rng: random.Random):
        raise NotImplementedError

    def p_th_root(self, a):
        """Inverse Frobenius on a finite field."""
        return self.pow(a, self.order // self.characteristic)

    # -- text --------------------------------------------------------------
    def format(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.descriptor()


class Rationals(Field):
    characteristic = 0
    order = None
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a):
        return not a

    def from_int(self, n):
        return Fraction(n)

    def convert(self, x):
        return Fraction(x)

    def random_element(self, rng):
        return Fraction(rng.randint(-9, 9))

    def format(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text.strip())

    def descriptor(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


QQ = Rationals()


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def convert(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def elements(self):
        return range(self.p)

    def random_element(self, rng):
        return rng.randrange(self.p)

    def p_th_root(self, a):
        return a

    def format(self, a):
        return str(a)

    def parse(self, text):
        return self.convert(Fraction(text.strip()))

    def descriptor(self):
        return f"Fp {self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


class ExtensionField(Field):
    """``base[y]/(minpoly)`` with ``minpoly`` monic irreducible over ``base``.

    Use :func:`extend_field` to build one; the constructor does not check
    irreducibility.
    """

    def __init__(self, base: Field, minpoly: "UnivariatePoly", name: str = "y"):
        if minpoly.field != base:
            raise FieldError("minimal polynomial must have coefficients in the base field")
        if not minpoly.is_monic() or minpoly.deg < 1:
            raise FieldError("minimal polynomial must be monic of positive degree")
        self.base = base
        self.minpoly = minpoly
        self.name = name
        self.n = minpoly.deg
        self.characteristic = base.characteristic
        self.order = None if base.order is None else base.order ** self.n
        bz = base.zero
        self.zero = (bz,) * self.n
        self.one = (base.one,) + (bz,) * (self.n - 1)
        self.gen = ((bz, base.one) + (bz,) * (self.n - 2)) if self.n > 1 else (
            base.neg(minpoly.coeffs[0]),)
        # y^(n+k) reduction table: y^n = -sum m_i y^i
        self._tail = [base.neg(c) for c in minpoly.coeffs[:-1]]

    # -- element protocol -------------------------------------------------
    def add(self, a, b):
        K = self.base
        return tuple(K.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        K = self.base
        return tuple(K.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        K = self.base
        return tuple(K.neg(x) for x in a)

    def mul(self, a, b):
        K = self.base
        n = self.n
        if a == self.zero or b == self.zero:
            return self.zero
        prod = [K.zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if K.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not K.is_zero(y):
                    prod[i + j] = K.add(prod[i + j], K.mul(x, y))
        tail = self._tail
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if K.is_zero(c):
                continue
            # y^k = y^(k-n) * y^n
            for i, t in enumerate(tail):
                prod[k - n + i] = K.add(prod[k - n + i], K.mul(c, t))
        return tuple(prod[:n])

    def scale(self, c, a):
        K = self.base
        return tuple(K.mul(c, x) for x in a)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of 0")
        f = UnivariatePoly(self.base, list(a))
        g, s, _ = f.xgcd(self.minpoly)
        if g.deg != 0:
            raise FieldError("minimal polynomial is reducible")
        s = s * self.base.inv(g.coeffs[0])
        return self.from_poly(s)

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.n - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.n - 1)

    def from_poly(self, f: "UnivariatePoly"):
        r = f % self.minpoly
        cs = list(r.coeffs) + [self.base.zero] * (self.n - len(r.coeffs))
        return tuple(cs[: self.n])

    def to_poly(self, a) -> "UnivariatePoly":
        return UnivariatePoly(self.base, list(a))

    def convert(self, x):
        return self.from_base(self.base.convert(x))

    def embed(self, a, source):
        if source == self:
            return a
        return self.from_base(self.base.embed(a, source))

    def in_base(self, a) -> bool:
        return all(self.base.is_zero(c) for c in a[1:])

    # -- structure ---------------------------------------------------------
    @property
    def prime_field(self):
        return self.base.prime_field

    @property
    def degree(self):
        return self.n * self.base.degree

    def tower_depth(self) -> int:
        return 1 + (self.base.tower_depth() if isinstance(self.base, ExtensionField) else 0)

    def elements(self):
        if self.order is None:
            raise FieldError(f"{self} is infinite")
        return (tuple(c) for c in product(list(self.base.elements()), repeat=self.n))

    def random_element(self, rng):
        return tuple(self.base.random_element(rng) for _ in range(self.n))

    def p_th_root(self, a):
        return self.pow(a, self.order // self.characteristic)

    def frobenius(self, a):
        return self.pow(a, self.characteristic)

    # -- text --------------------------------------------------------------
    def format(self, a):
        K = self.base
        terms = []
        for i, c in enumerate(a):
            if K.is_zero(c):
                continue
            cs = K.format(c)
            if _needs_parens(cs):
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
                continue
            mon = self.name if i == 1 else f"{self.name}^{i}"
            if c == K.one:
                terms.append(mon)
            elif cs == "-1":
                terms.append("-" + mon)
            else:
                terms.append(f"{cs}*{mon}")
        return _join_terms(terms)

    def parse(self, text):
        f = UnivariatePoly.parse(self.base, text, var=self.name)
        return self.from_poly(f)

    def descriptor(self):
        return f"ext({self.base.descriptor()}; {self.minpoly.format(self.name)})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.base == self.base
            and other.minpoly.coeffs == self.minpoly.coeffs
        )

    def __hash__(self):
        return hash(("ext", self.base, tuple(self.minpoly.coeffs)))

    # -- flattening --------------------------------------------------------
    @cached_property
    def flat(self) -> "tuple[ExtensionField, FieldMap]":
        """Return ``(F, phi)`` with ``F`` a simple extension of the prime field
        and ``phi: self -> F`` an isomorphism."""
        return _flatten_tower(self)


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


class UnivariatePoly:
    """Dense univariate polynomial, coefficients low -> high, trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        self.field = field
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = cs

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(c) for c in ints])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero, field.one])

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def monic(self):
        if not self.coeffs:
            return self
        K = self.field
        c = K.inv(self.coeffs[-1])
        return UnivariatePoly(K, [K.mul(c, a) for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, UnivariatePoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs)))

    def __add__(self, other):
        K = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return UnivariatePoly(K, out)

    def __neg__(self):
        K = self.field
        return UnivariatePoly(K, [K.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.field
        if not isinstance(other, UnivariatePoly):
            return UnivariatePoly(K, [K.mul(other, c) for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UnivariatePoly(K, [])
        out = [K.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if K.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
        return UnivariatePoly(K, out)

    def __pow__(self, e: int):
        result = UnivariatePoly(self.field, [self.field.one])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other):
        K = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.deg
        inv_lc = K.inv(other.lc())
        q = [K.zero] * max(len(r) - db, 0)
        bc = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if K.is_zero(c):
                continue
            c = K.mul(c, inv_lc)
            q[k - db] = c
            for i, b in enumerate(bc):
                r[k - db + i] = K.sub(r[k - db + i], K.mul(c, b))
        return UnivariatePoly(K, q), UnivariatePoly(K, r[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other):
        if isinstance(self.field, Rationals) and not self.is_zero() and not other.is_zero():
            # modular gcd in sympy avoids coefficient growth in the Euclidean scheme
            return _from_sympy(self.field, _to_sympy(self).gcd(_to_sympy(other))).monic()
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """Return ``(g, s, t)`` with ``s*self + t*other = g``."""
        K = self.field
        r0, r1 = self, other
        s0, s1 = UnivariatePoly(K, [K.one]), UnivariatePoly(K, [])
        t0, t1 = UnivariatePoly(K, []), UnivariatePoly(K, [K.one])
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        return r0, s0, t0

    def derivative(self):
        K = self.field
        return UnivariatePoly(K, [K.mul(K.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, a):
        K = self.field
        acc = K.zero
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, a), c)
        return acc

    def eval_in(self, L: Field, a):
        """Evaluate at ``a`` in an overfield ``L`` of ``self.field``."""
        acc = L.zero
        for c in reversed(self.coeffs):
            acc = L.add(L.mul(acc, a), L.embed(c, self.field))
        return acc

    def powmod(self, e: int, m: "UnivariatePoly"):
        result = UnivariatePoly(self.field, [self.field.one])
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def map_coeffs(self, L: Field, fn):
        return UnivariatePoly(L, [fn(c) for c in self.coeffs])

    def format(self, var="x") -> str:
        K = self.field
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if K.is_zero(c):
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = K.format(c)
            if _needs_parens(cs):
                cs = f"({cs})"
            if mon and c == K.one:
                terms.append(mon)
            elif mon and cs == "-1":
                terms.append("-" + mon)
            elif mon:
                terms.append(f"{cs}*{mon}")
            else:
                terms.append(cs)
        return _join_terms(terms)

    def __repr__(self):
        return f"UnivariatePoly({self.format()} over {self.field})"

    @classmethod
    def parse(cls, field: Field, text: str, var: str = "x") -> "UnivariatePoly":
        """Parse ``3/2*x^2 - x + 1`` (coefficients are field literals)."""
        s = text.replace(" ", "")
        if not s:
            raise FieldError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        out: dict[int, object] = {}
        depth = 0
        parts = []
        cur = ""
        for ch in s:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch in "+-" and depth == 0 and cur and not cur.endswith(("^", "*")):
                parts.append(cur)
                cur = ch
            else:
                cur += ch
        parts.append(cur)
        for part in parts:
            sign = -1 if part[0] == "-" else 1
            body = part[1:]
            coeff = field.one
            exp = 0
            for fac in _split_top(body, "*"):
                if fac == var:
                    exp += 1
                elif fac.startswith(var + "^"):
                    exp += int(fac[len(var) + 1:])
                else:
                    if fac.startswith("(") and fac.endswith(")"):
                        fac = fac[1:-1]
                    coeff = field.mul(coeff, field.parse(fac))
            if sign < 0:
                coeff = field.neg(coeff)
            out[exp] = field.add(out.get(exp, field.zero), coeff)
        n = max(out) + 1
        return cls(field, [out.get(i, field.zero) for i in range(n)])


def _needs_parens(cs: str) -> bool:
    return "+" in cs[1:] or "-" in cs[1:]


def _join_terms(terms) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _split_top(s: str, sep: str):
    depth = 0
    cur = ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            yield cur
            cur = ""
        else:
            cur += ch
    if cur:
        yield cur


# ---------------------------------------------------------------------------
# field maps
# ---------------------------------------------------------------------------


class FieldMap:
    """A homomorphism from ``source`` (a simple extension of ``base``, or the
    base itself) into ``target``, fixing a common subfield.

    For an extension source the map is determined by the image of the
    generator together with the map on the base.
    """

    def __init__(self, source: Field, target: Field, gen_image=None, base_map: "FieldMap | None" = None):
        self.source = source
        self.target = target
        self.gen_image = gen_image
        self.base_map = base_map

    def __call__(self, a):
        S, T = self.source, self.target
        if not isinstance(S, ExtensionField) or self.gen_image is None:
            return T.embed(a, S)
        acc = T.zero
        bm = self.base_map
        for c in reversed(a):
            cc = bm(c) if bm is not None else T.embed(c, S.base)
            acc = T.add(T.mul(acc, self.gen_image), cc)
        return acc

    def compose(self, other: "FieldMap") -> "FieldMap":
        """``self o other``."""
        if not isinstance(other.source, ExtensionField) or other.gen_image is None:
            return FieldMap(other.source, self.target)
        bm = other.base_map
        new_base = self.compose(bm) if bm is not None else None
        return FieldMap(other.source, self.target, self(other.gen_image), new_base)

    def is_identity(self) -> bool:
        if self.source != self.target:
            return False
        S = self.source
        if not isinstance(S, ExtensionField) or self.gen_image is None:
            return True
        base_id = self.base_map is None or self.base_map.is_identity()
        return base_id and self.gen_image == S.gen

    def key(self):
        S = self.source
        if not isinstance(S, ExtensionField) or self.gen_image is None:
            return ()
        bm = self.base_map
        return (self.gen_image,) + (bm.key() if bm is not None else ())

    def __eq__(self, other):
        return isinstance(other, FieldMap) and self.source == other.source and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.gen_image is None:
            return "FieldMap(id)"
        return f"FieldMap({self.source.name} -> {self.target.format(self.gen_image)})"


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


def _squarefree_decomposition(f: UnivariatePoly):
    """Return ``[(g, e), ...]`` with ``f = lc * prod g^e``, ``g`` squarefree monic."""
    K = f.field
    f = f.monic()
    if f.deg <= 0:
        return []
    p = K.characteristic
    out = []
    df = f.derivative()
    if df.is_zero():
        # f = g(x^p)
        g = UnivariatePoly(K, [K.p_th_root(f.coeffs[i]) for i in range(0, len(f.coeffs), p)])
        return [(h, e * p) for h, e in _squarefree_decomposition(g)]
    c = f.gcd(df)
    w = f // c
    i = 1
    while w.deg > 0:
        y = w.gcd(c)
        z = w // y
        if z.deg > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.deg > 0:
        # remaining part is a p-th power (char p)
        if p == 0:
            raise FieldError("unexpected non-squarefree remainder in characteristic 0")
        g = UnivariatePoly(K, [K.p_th_root(c.coeffs[k]) for k in range(0, len(c.coeffs), p)])
        out.extend((h, e * p) for h, e in _squarefree_decomposition(g))
    return out


def _merge_factors(items):
    acc: dict = {}
    order = []
    for g, e in items:
        key = tuple(g.coeffs)
        if key not in acc:
            acc[key] = [g, 0]
            order.append(key)
        acc[key][1] += e
    return [(acc[k][0], acc[k][1]) for k in order]


def _ddf(f: UnivariatePoly):
    """Distinct-degree factorization of squarefree monic ``f`` over a finite field."""
    K = f.field
    q = K.order
    x = UnivariatePoly.x(K)
    out = []
    h = x % f
    d = 0
    while f.deg >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, f)
        g = f.gcd(h - x)
        if g.deg > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.deg > 0:
        out.append((f.monic(), f.deg))
    return out


def _edf(f: UnivariatePoly, d: int, rng: random.Random):
    """Equal-degree splitting (Cantor-Zassenhaus) of ``f`` into degree-``d`` factors."""
    K = f.field
    if f.deg == d:
        return [f.monic()]
    q = K.order
    p = K.characteristic
    while True:
        a = UnivariatePoly(K, [K.random_element(rng) for _ in range(f.deg)])
        if a.deg < 1:
            continue
        if p == 2:
            # trace map to F_2 from F_{q^d}
            k = (q ** d).bit_length() - 1
            t = a % f
            acc = t
            for _ in range(k - 1):
                t = (t * t) % f
                acc = acc + t
            g = f.gcd(acc)
        else:
            g = f.gcd(a.powmod((q ** d - 1) // 2, f) - UnivariatePoly(K, [K.one]))
        if 0 < g.deg < f.deg:
            return _edf(g.monic(), d, rng) + _edf((f // g).monic(), d, rng)


def _factor_finite(f: UnivariatePoly, seed: int):
    rng = random.Random(seed)
    out = []
    for g, e in _squarefree_decomposition(f):
        for h, d in _ddf(g):
            for irr in _edf(h, d, rng):
                out.append((irr, e))
    return out


def _to_sympy(f: UnivariatePoly):
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)], x, domain="QQ")


def _from_sympy(K: Field, poly) -> UnivariatePoly:
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return UnivariatePoly(K, cs)


def _factor_rationals(f: UnivariatePoly):
    # Rational roots first (exact, cheap), then Zassenhaus/Hensel for the rest.
    if f.deg > QQ_FACTOR_DEGREE_CAP:
        raise UnsupportedTowerError(f"degree {f.deg} above the factorization cap {QQ_FACTOR_DEGREE_CAP}")
    import sympy

    out = []
    _, facs = sympy.factor_list(_to_sympy(f))
    for h, m in facs:
        out.append((_from_sympy(QQ, h).monic(), m))
    return out


def _norm_over_base(f: UnivariatePoly, shift):
    """Norm from ``K = Q(a)[x]`` to ``Q[x]`` of ``f(x - shift*a)``.

    Computed as ``Res_y(m(y), F(x, y))`` with sympy.
    """
    import sympy

    K = f.field
    x, y = sympy.symbols("x y")
    m = sum(sympy.Rational(c.numerator, c.denominator) * y ** i for i, c in enumerate(K.minpoly.coeffs))
    F = 0
    for i, c in enumerate(f.coeffs):
        cy = sum(sympy.Rational(b.numerator, b.denominator) * y ** j for j, b in enumerate(c))
        F += cy * (x - shift * y) ** i
    r = sympy.resultant(sympy.Poly(m, y), sympy.Poly(sympy.expand(F), y))
    return _from_sympy(QQ, sympy.Poly(r, x, domain="QQ"))


def _factor_number_field(f: UnivariatePoly):
    """Trager's norm method over a simple extension of Q."""
    K = f.field
    out = []
    for g, e in _squarefree_decomposition(f):
        if g.deg == 1:
            out.append((g, e))
            continue
        shift = 0
        while True:
            N = _norm_over_base(g, shift)
            if N.deg > QQ_FACTOR_DEGREE_CAP:
                raise UnsupportedTowerError(f"norm degree {N.deg} above cap")
            if N.gcd(N.derivative()).deg == 0:
                break
            shift += 1
        facs = _factor_rationals(N)
        if len(facs) == 1:
            out.append((g.monic(), e))
            continue
        # substitute x -> x + shift*a back
        a = K.gen
        xs = UnivariatePoly(K, [K.scale(K.base.from_int(shift), a), K.one])
        rem = g.monic()
        for h, _ in facs:
            hK = UnivariatePoly(K, [K.from_base(c) for c in h.coeffs])
            # h(x + shift*a)
            acc = UnivariatePoly(K, [])
            for c in reversed(hK.coeffs):
                acc = acc * xs + UnivariatePoly(K, [c])
            piece = rem.gcd(acc)
            if piece.deg > 0:
                out.append((piece, e))
                rem = rem // piece
        if rem.deg > 0:
            raise FieldError("Trager splitting left a remainder")
    return out


def factor_univariate(f: UnivariatePoly, seed: int = 0):
    """Factor ``f`` into monic irreducibles with multiplicities.

    Finite fields use distinct-degree plus seeded equal-degree splitting;
    Q uses rational roots and Zassenhaus (via sympy); simple extensions of
    Q use Trager's norm method. Deeper towers over Q are flattened first.
    """
    if f.is_zero():
        raise FieldError("cannot factor the zero polynomial")
    K = f.field
    if f.deg == 0:
        return []
    if K.is_finite:
        facs = _factor_finite(f, seed)
    elif isinstance(K, Rationals):
        facs = _factor_rationals(f)
    elif isinstance(K, ExtensionField) and isinstance(K.base, Rationals):
        facs = _factor_number_field(f)
    elif isinstance(K, ExtensionField):
        F, phi = K.flat
        inv = _inverse_map(phi, K)
        g = f.map_coeffs(F, phi)
        facs = [(h.map_coeffs(K, inv).monic(), e) for h, e in factor_univariate(g, seed)]
    else:
        raise UnsupportedTowerError(f"factorization over {K} is not supported")
    facs = _merge_factors(facs)
    facs.sort(key=lambda fe: (fe[0].deg, [K.format(c) for c in fe[0].coeffs]))
    return facs


def roots(f: UnivariatePoly, seed: int = 0):
    """Roots of ``f`` in its coefficient field (with multiplicity ignored)."""
    out = []
    for g, _ in factor_univariate(f, seed):
        if g.deg == 1:
            out.append(g.field.neg(g.coeffs[0]))
    return out


def extend_field(base: Field, minpoly: UnivariatePoly, name: str = "y", check: bool = True) -> ExtensionField:
    if minpoly.field != base:
        raise FieldError("minimal polynomial is not over the given base")
    minpoly = minpoly.monic()
    if check:
        facs = factor_univariate(minpoly)
        if len(facs) != 1 or facs[0][1] != 1:
            raise FieldError(f"{minpoly.format()} is reducible over {base}")
    return ExtensionField(base, minpoly, name)


def automorphisms(L: Field, seed: int = 0) -> list[FieldMap]:
    """``Aut(L/k)`` for ``L`` a finite tower over its prime field ``k``.

    Every map is determined by the images of the generators; those images are
    roots (inside ``L``) of the conjugated minimal polynomials.
    """
    if not isinstance(L, ExtensionField):
        return [FieldMap(L, L)]
    return _embeddings(L, L, seed)


def _embeddings(S: Field, T: Field, seed: int) -> list[FieldMap]:
    """All homomorphisms ``S -> T`` over the prime field."""
    if not isinstance(S, ExtensionField):
        return [FieldMap(S, T)]
    out = []
    for bm in _embeddings(S.base, T, seed):
        if isinstance(S.base, ExtensionField):
            mp = S.minpoly.map_coeffs(T, bm)
        else:
            mp = S.minpoly.map_coeffs(T, lambda c: T.embed(c, S.base))
        base_map = bm if isinstance(S.base, ExtensionField) else None
        for r in roots(mp, seed):
            out.append(FieldMap(S, T, r, base_map))
    return out


def _inverse_map(phi: FieldMap, K: ExtensionField) -> FieldMap:
    """Inverse of an isomorphism ``phi: K -> F`` with ``F`` simple over the prime field."""
    F = phi.target
    prime = F.prime_field
    # write F.gen in the phi-image of a prime-field basis of K, then transport
    kb = _prime_basis(K)
    mat = [_prime_coords(F)(phi(b)) for b in kb]
    sol = _solve_prime(prime, mat, _prime_coords(F)(F.gen))
    g = K.zero
    for c, b in zip(sol, kb):
        g = K.add(g, _scale_prime(K, c, b))
    return FieldMap(F, K, g)


def _prime_basis(K: Field):
    """Basis of ``K`` over its prime field, as elements of ``K``."""
    if not isinstance(K, ExtensionField):
        return [K.one]
    inner = _prime_basis(K.base)
    out = []
    for i in range(K.n):
        yi = K.pow(K.gen, i)
        for b in inner:
            out.append(K.mul(K.from_base(b), yi))
    return out


def _prime_coords(K: Field):
    """Function returning coordinates of an element over the prime field."""
    if not isinstance(K, ExtensionField):
        return lambda a: [a]
    inner = _prime_coords(K.base)

    def coords(a):
        out = []
        for c in a:
            out.extend(inner(c))
        return out

    return coords


def _scale_prime(K: Field, c, a):
    if not isinstance(K, ExtensionField):
        return K.mul(c, a)
    return tuple(_scale_prime(K.base, c, x) for x in a)


def _solve_prime(k: Field, rows, target):
    """Solve ``sum_i x_i rows[i] = target`` over the prime field ``k``."""
    n = len(rows)
    m = len(target)
    # augmented matrix with columns = unknowns
    A = [[rows[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not k.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = k.inv(A[r][c])
        A[r] = [k.mul(inv, v) for v in A[r]]
        for i in range(m):
            if i != r and not k.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [k.sub(a, k.mul(f, b)) for a, b in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if not k.is_zero(A[i][n]):
            raise FieldError("inconsistent linear system")
    sol = [k.zero] * n
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][n]
    return sol


def _flatten_tower(K: ExtensionField):
    """Primitive element for a tower over the prime field."""
    prime = K.prime_field
    N = K.degree
    if not isinstance(K.base, ExtensionField):
        return K, FieldMap(K, K, K.gen)
    coords = _prime_coords(K)
    rng = random.Random(1)
    gens = _tower_generators(K)
    for attempt in range(200):
        if attempt == 0:
            gamma = K.zero
            for i, g in enumerate(gens):
                gamma = K.add(gamma, _scale_prime(K, prime.from_int(i + 1 if i else 1), g))
        else:
            gamma = K.zero
            for g in gens:
                gamma = K.add(gamma, _scale_prime(K, prime.from_int(rng.randint(1, 50)), g))
        powers = [K.one]
        for _ in range(N):
            powers.append(K.mul(powers[-1], gamma))
        rows = [coords(pw) for pw in powers[:N]]
        if _rank_prime(prime, rows) < N:
            continue
        sol = _solve_prime(prime, rows, coords(K.neg(powers[N])))
        minpoly = UnivariatePoly(prime, sol + [prime.one])
        F = ExtensionField(prime, minpoly, K.name)
        # phi: K -> F sends gamma -> F.gen; express K generators in powers of gamma
        # phi is determined on each level by the image of that level's generator.
        inv_rows = rows  # K-basis coordinates of gamma^i
        F_pows = [F.pow(F.gen, i) for i in range(N)]

        def to_F(a, inv_rows=inv_rows, F_pows=F_pows, F=F):
            sol_a = _solve_prime(prime, inv_rows, coords(a))
            acc = F.zero
            for c, pw in zip(sol_a, F_pows):
                acc = F.add(acc, _scale_prime(F, c, pw))
            return acc

        return F, _level_map(K, F, to_F)
    raise UnsupportedTowerError("no primitive element found")


def _tower_generators(K: Field):
    out = []
    cur = K
    lift = lambda a: a  # noqa: E731
    while isinstance(cur, ExtensionField):
        out.append(lift(cur.gen))
        prev_lift = lift
        c = cur
        lift = (lambda pl, cc: (lambda a: pl(cc.from_base(a))))(prev_lift, c)
        cur = cur.base
    return out


def _level_map(K: Field, F: Field, to_F) -> FieldMap:
    """Build a FieldMap ``K -> F`` from an element-level function."""
    if not isinstance(K, ExtensionField):
        return FieldMap(K, F)
    lift_base = lambda b: K.from_base(b)  # noqa: E731
    inner = _level_map(K.base, F, lambda b: to_F(lift_base(b))) if isinstance(K.base, ExtensionField) else None
    return FieldMap(K, F, to_F(K.gen), inner)


def _rank_prime(k: Field, rows) -> int:
    A = [list(r) for r in rows]
    if not A:
        return 0
    m = len(A[0])
    rank = 0
    for c in range(m):
        piv = next((i for i in range(rank, len(A)) if not k.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = k.inv(A[rank][c])
        for i in range(rank + 1, len(A)):
            if not k.is_zero(A[i][c]):
                f = k.mul(A[i][c], inv)
                A[i] = [k.sub(a, k.mul(f, b)) for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_EXT_RE = re.compile(r"^ext\((.*);\s*(.*)\)$")


def parse_field(text: str) -> Field:
    """Parse ``Q``, ``Fp 7`` or ``ext(<base>; <minpoly in y>)``."""
    s = text.strip()
    if s == "Q":
        return QQ
    if s.startswith("Fp"):
        return PrimeField(int(s[2:].strip()))
    m = _EXT_RE.match(s)
    if m:
        inner, poly = m.group(1), m.group(2)
        # split at the last top-level ';'
        depth = 0
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == ";" and depth == 1:
                inner, poly = s[4:i], s[i + 1:-1]
        base = parse_field(inner)
        mp = UnivariatePoly.parse(base, poly.strip(), var="y")
        return extend_field(base, mp)
    raise FieldError(f"unrecognized field descriptor: {text!r}")


def gcd_int(a: int, b: int) -> int:
    return gcd(a, b)
