"""Exact scalar arithmetic: rationals, integer polynomials, Q(t), Q(sqrt d).

Every value is immutable and every operation is a pure function, so scalars
can be shared freely between concurrent analyses.  No floating point is used
anywhere; integer coefficients are arbitrary precision.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class ZeroPolynomial(ValueError):
    """Raised when an operation requires a nonzero polynomial."""


class MixedFieldError(TypeError):
    """Raised when elements of Q(sqrt d) with different d are combined."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s**2 * d with d squarefree; returns (s, d).

    The sign of n goes into d.  n must be nonzero.
    """
    if n == 0:
        raise ValueError("0 has no squarefree part")
    sign = 1 if n > 0 else -1
    n = abs(n)
    s, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= n
    return s, sign * d


def is_squarefree(n: int) -> bool:
    return n not in (0,) and squarefree_decompose(n)[0] == 1


class IntPoly:
    """Univariate polynomial with integer coefficients, stored ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coeffs == IntPoly((other,)).coeffs
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def __neg__(self) -> IntPoly:
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other) -> IntPoly:
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> IntPoly:
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> IntPoly:
        return (-self) + other

    def __mul__(self, other) -> IntPoly:
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not isinstance(other, IntPoly):
            return NotImplemented
        if not self or not other:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = IntPoly((1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        """Horner evaluation at x, which may live in any Q-algebra."""
        if not self.coeffs:
            return 0 * x if not isinstance(x, (int, Fraction)) else x * 0
        acc = self.coeffs[-1] + 0 * x  # coerce into the algebra of x
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    @property
    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> IntPoly:
        """Primitive part with positive leading coefficient; 0 stays 0."""
        if not self:
            return self
        g = self.content
        if self.leading < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def derivative(self) -> IntPoly:
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def shift_up(self, k: int) -> IntPoly:
        """Multiply by t**k."""
        if not self:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}t" if i == 1 else f"{mag}t^{i}"
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append((" - " if c < 0 else " + ") + term)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"IntPoly({self})"


T = IntPoly((0, 1))
P_ONE = IntPoly((1,))
P_ZERO = IntPoly()


def poly(*coeffs) -> IntPoly:
    """IntPoly from ascending coefficients: poly(-1, 1) is t - 1."""
    return IntPoly(coeffs)


def _frac_divmod(p: list[Fraction], q: list[Fraction]):
    """Division with remainder on ascending Fraction coefficient lists."""
    p = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quo = [Fraction(0)] * max(len(p) - dq, 0)
    while len(p) - 1 >= dq and any(p):
        while p and p[-1] == 0:
            p.pop()
        if len(p) - 1 < dq:
            break
        k = len(p) - 1 - dq
        f = p[-1] / lead
        quo[k] = f
        for i, c in enumerate(q):
            p[k + i] -= f * c
        p.pop()
    while p and p[-1] == 0:
        p.pop()
    return quo, p


def div_exact(p: IntPoly, q: IntPoly) -> IntPoly:
    """Exact quotient p / q in Z[t]; raises if the division is not exact."""
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p:
        return P_ZERO
    quo, rem = _frac_divmod([Fraction(c) for c in p.coeffs],
                            [Fraction(c) for c in q.coeffs])
    if rem or any(f.denominator != 1 for f in quo):
        raise ValueError(f"{q} does not divide {p} exactly")
    return IntPoly(int(f) for f in quo)


def poly_gcd(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd in Q[t] with positive leading coefficient.

    gcd(p, 0) is the primitive part of p; gcd(0, 0) = 0.
    """
    a, b = p.primitive(), q.primitive()
    if not a:
        return b
    if not b:
        return a
    if a.degree < b.degree:
        a, b = b, a
    # primitive pseudo-remainder sequence
    while b:
        d = a.degree - b.degree
        r = (b.leading ** (d + 1)) * a
        # pseudo-remainder of r by b
        rc = [Fraction(c) for c in r.coeffs]
        _, rem = _frac_divmod(rc, [Fraction(c) for c in b.coeffs])
        rp = IntPoly(int(f) for f in rem)  # exact by construction
        a, b = b, rp.primitive()
    return a.primitive()


def divides(p: IntPoly, q: IntPoly) -> bool:
    """True iff p divides q in Q[t]."""
    if not p:
        return not q
    if not q:
        return True
    _, rem = _frac_divmod([Fraction(c) for c in q.coeffs],
                          [Fraction(c) for c in p.coeffs])
    return not rem


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    for i in range(1, isqrt(n) + 1):
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
    return sorted(out)


def rational_roots(p: IntPoly) -> set[Fraction]:
    """All rational roots of p, via the rational root theorem."""
    if not p:
        raise ZeroPolynomial("the zero polynomial vanishes everywhere")
    roots: set[Fraction] = set()
    cs = list(p.primitive().coeffs)
    k = 0
    while cs[0] == 0:
        cs.pop(0)
        k += 1
    if k:
        roots.add(Fraction(0))
    pp = IntPoly(cs)
    if pp.degree == 0:
        return roots
    for num in _divisors(cs[0]):
        for den in _divisors(pp.leading):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if pp(cand) == 0:
                    roots.add(cand)
    return roots


def factor_low_degree(p: IntPoly):
    """Split off irreducible factors of degree at most two.

    Returns (factors, remainder) where factors is a list of
    (primitive irreducible IntPoly of degree 1 or 2, multiplicity) and
    remainder collects all irreducible factors of degree >= 3, so that
    the product of everything equals p up to a rational constant.
    """
    if not p:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    import sympy

    t = sympy.Symbol("t")
    expr = sympy.Poly(list(reversed(p.primitive().coeffs)), t)
    _, fac = expr.factor_list()
    factors: list[tuple[IntPoly, int]] = []
    remainder = P_ONE
    for q, mult in fac:
        qp = IntPoly(int(c) for c in reversed(q.all_coeffs())).primitive()
        if qp.degree == 0:
            continue
        if qp.degree <= 2:
            factors.append((qp, int(mult)))
        else:
            remainder = remainder * qp ** int(mult)
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return factors, remainder


class RatFunc:
    """Element of Q(t) as a reduced fraction of integer polynomials.

    Canonical form: gcd(num, den) = 1 in Q[t], the integer contents of
    numerator and denominator are coprime, and the denominator has positive
    leading coefficient.  Equality is then componentwise.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=P_ONE):
        if isinstance(num, int):
            num = IntPoly((num,))
        if isinstance(den, int):
            den = IntPoly((den,))
        if not den:
            raise ZeroDivisionError("zero denominator in Q(t)")
        if not num:
            self.num, self.den = P_ZERO, P_ONE
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = div_exact(num, g) if divides(g, num) else num
            den = div_exact(den, g) if divides(g, den) else den
        cn, cd = num.content, den.content
        c = gcd(cn, cd)
        if den.leading < 0:
            c = -c
        num = IntPoly(x // c for x in num.coeffs)
        den = IntPoly(x // c for x in den.coeffs)
        self.num, self.den = num, den

    @classmethod
    def from_fraction(cls, q: Fraction) -> RatFunc:
        return cls(IntPoly((q.numerator,)), IntPoly((q.denominator,)))

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, IntPoly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc(IntPoly((other,)))
        if isinstance(other, Fraction):
            return RatFunc.from_fraction(other)
        return None

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __add__(self, other) -> RatFunc:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> RatFunc:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> RatFunc:
        return (-self) + other

    def __mul__(self, other) -> RatFunc:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(t)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> RatFunc:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> RatFunc:
        o = self._coerce(other)
        return o * self.inverse()

    def __str__(self) -> str:
        if self.den == P_ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


class QuadElem:
    """Element a + b*sqrt(d) of the quadratic field Q(sqrt d).

    d is a fixed squarefree integer (possibly negative), not 0 or 1.
    Elements with different d never mix; that raises MixedFieldError
    rather than silently building a compositum.
    """

    __slots__ = ("d", "a", "b")

    def __init__(self, d: int, a, b=0):
        if d in (0, 1) or not is_squarefree(d):
            raise ValueError(f"d = {d} must be squarefree and not 0 or 1")
        self.d = d
        self.a = _as_fraction(a)
        self.b = _as_fraction(b)

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise MixedFieldError(
                    f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.d, other, 0)
        return None

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except MixedFieldError:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(("QuadElem", self.d, self.a, self.b))

    def __neg__(self) -> QuadElem:
        return QuadElem(self.d, -self.a, -self.b)

    def __add__(self, other) -> QuadElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> QuadElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> QuadElem:
        return (-self) + other

    def __mul__(self, other) -> QuadElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.d,
                        self.a * o.a + self.d * self.b * o.b,
                        self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QuadElem:
        return QuadElem(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadElem(self.d, self.a / n, -self.b / n)

    def __truediv__(self, other) -> QuadElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> QuadElem:
        o = self._coerce(other)
        return o * self.inverse()

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        bs = "" if self.b == 1 else ("-" if self.b == -1 else f"{self.b}*")
        root = f"sqrt({self.d})"
        if not self.a:
            return f"{bs}{root}"
        sign = "+" if self.b > 0 else ""
        return f"{self.a}{sign}{bs}{root}"

    def __repr__(self) -> str:
        return f"QuadElem({self.d}, {self.a}, {self.b})"


class Domain:
    """An exact field of scalars with decidable equality.

    Elements carry their own arithmetic through operator overloading plus
    an ``inverse`` method (Fraction uses 1/x); the domain object supplies
    construction from integers and a name used for tagging arrangements.
    """

    name: str

    def from_int(self, k: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def invert(self, x):
        """Multiplicative inverse of a nonzero element."""
        if isinstance(x, Fraction):
            return 1 / x
        return x.inverse()

    def __repr__(self):
        return f"<domain {self.name}>"


class RationalDomain(Domain):
    name = "QQ"

    def from_int(self, k: int) -> Fraction:
        return Fraction(k)

    def from_fraction(self, q: Fraction) -> Fraction:
        return q


class RationalFunctionDomain(Domain):
    name = "QQ(t)"

    def from_int(self, k: int) -> RatFunc:
        return RatFunc(IntPoly((k,)))

    def from_fraction(self, q: Fraction) -> RatFunc:
        return RatFunc.from_fraction(q)


class QuadDomain(Domain):
    def __init__(self, d: int):
        if d in (0, 1) or not is_squarefree(d):
            raise ValueError(f"d = {d} must be squarefree and not 0 or 1")
        self.d = d
        self.name = f"QQ(sqrt {d})"

    def from_int(self, k: int) -> QuadElem:
        return QuadElem(self.d, k, 0)

    def from_fraction(self, q: Fraction) -> QuadElem:
        return QuadElem(self.d, q, 0)


QQ = RationalDomain()
QQT = RationalFunctionDomain()


@lru_cache(maxsize=None)
def quad_field(d: int) -> QuadDomain:
    return QuadDomain(d)


def domain_of(x) -> Domain:
    """Infer the scalar domain of an element."""
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, RatFunc):
        return QQT
    if isinstance(x, QuadElem):
        return quad_field(x.d)
    raise TypeError(f"no scalar domain for {type(x).__name__}")


_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(s: str) -> Fraction:
    m = _RAT_RE.match(s.strip())
    if not m:
        raise ValueError(f"not a rational number: {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return Fraction(num, den)
