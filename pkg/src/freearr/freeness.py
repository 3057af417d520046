"""Freeness of rank-3 arrangements via exact graded linear algebra.

The derivation module is probed degree by degree: membership conditions are
imposed on each hyperplane through a two-vector parametrization, giving an
exact linear system whose nullspace is the graded piece.  Positive verdicts
are certified with an explicit Saito determinant identity, negative ones by
a non-splitting characteristic polynomial or a graded dimension mismatch.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm

from . import linalg
from .arrangement import Arrangement, build
from .scalars import (QQ, Domain, MixedFieldError, QuadDomain, QuadElem,
                      RatFunc, quad_field)


class DegreeMismatchError(ValueError):
    """Saito check attempted with pdeg sum different from n."""


@lru_cache(maxsize=None)
def monomials(p: int) -> tuple:
    """Exponent triples of total degree p, in a fixed deterministic order."""
    out = []
    for i in range(p, -1, -1):
        for j in range(p - i, -1, -1):
            out.append((i, j, p - i - j))
    return tuple(out)


class HPoly:
    """Homogeneous polynomial in x1, x2, x3 with scalar coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs=None):
        self.degree = degree
        self.coeffs = {m: c for m, c in (coeffs or {}).items() if c}

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __add__(self, other):
        if self.degree != other.degree and self and other:
            raise ValueError("degree mismatch in homogeneous addition")
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            cur = out.get(m)
            out[m] = c if cur is None else cur + c
        return HPoly(max(self.degree, other.degree), out)

    def __neg__(self):
        return HPoly(self.degree, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HPoly):
            out = {}
            for m1, c1 in self.coeffs.items():
                for m2, c2 in other.coeffs.items():
                    m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                    c = c1 * c2
                    cur = out.get(m)
                    out[m] = c if cur is None else cur + c
            return HPoly(self.degree + other.degree, out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        return HPoly(self.degree, {m: c * v for m, v in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs, reverse=True):
            c = self.coeffs[m]
            vars_ = "*".join(
                (f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}")
                for i, e in enumerate(m) if e)
            cs = str(c)
            if "+" in cs[1:] or "-" in cs[1:] or "/" in cs:
                cs = f"({cs})"
            parts.append(f"{cs}*{vars_}" if vars_ else cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"HPoly({self})"


@dataclass(frozen=True)
class Derivation:
    """Homogeneous derivation f1*D1 + f2*D2 + f3*D3 of polynomial degree pdeg."""

    polys: tuple  # (HPoly, HPoly, HPoly)
    pdeg: int

    def apply_form(self, alpha) -> HPoly:
        """The polynomial theta(alpha) for a linear form alpha = (a1,a2,a3)."""
        out = HPoly(self.pdeg)
        for a, f in zip(alpha, self.polys):
            if a and f:
                out = out + f.scale(a)
        return out


@dataclass(frozen=True)
class SaitoCertificate:
    derivations: tuple  # three Derivations
    constant: object    # nonzero scalar c with det = c * Q


@dataclass(frozen=True)
class Free:
    exponents: tuple
    certificate: SaitoCertificate


@dataclass(frozen=True)
class NotFree:
    reason: str          # "ChiDoesNotSplit" | "GradedDimensionMismatch"
    detail: tuple = ()   # (p, expected, actual) for dimension mismatches


@dataclass(frozen=True)
class Inconclusive:
    diagnostics: dict = field(default_factory=dict)


def expected_graded_dim(exponents, p: int) -> int:
    """Graded dimension of a free module with the given generator degrees."""
    return sum(comb(p - e + 2, 2) for e in exponents if e <= p)


def _clear_rational_column(col):
    den = lcm(*(x.denominator for x in col)) if col else 1
    ints = [int(x * den) for x in col]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _clear_quad_column(col):
    den = 1
    for x in col:
        den = lcm(den, x.a.denominator, x.b.denominator)
    pairs = [(int(x.a * den), int(x.b * den)) for x in col]
    g = 0
    for a, b in pairs:
        g = gcd(gcd(g, a), b)
    if g > 1:
        pairs = [(a // g, b // g) for a, b in pairs]
    return tuple(pairs)


def cleared_columns(arr: Arrangement):
    """(ring ops, columns in integral ring form) for the solver engines."""
    dom = arr.domain
    if isinstance(dom, QuadDomain):
        ops = linalg.QuadOps(dom.d)
        cols = [_clear_quad_column(c) for c in arr.columns]
    else:
        first = arr.columns[0][0]
        if isinstance(first, (int, Fraction)):
            ops = linalg.IntOps
            cols = [_clear_rational_column([Fraction(x) for x in c])
                    for c in arr.columns]
        else:
            raise TypeError(
                f"no integral solver engine for domain {dom.name}")
    return ops, cols


def _ring_add(ops, x, y):
    if ops is linalg.IntOps:
        return x + y
    return (x[0] + y[0], x[1] + y[1])


def _ring_int_mul(ops, k: int, x):
    if ops is linalg.IntOps:
        return k * x
    return (k * x[0], k * x[1])


def _spanning_vectors(ops, alpha):
    """Two independent integral vectors spanning ker(alpha)."""
    pivot = next(i for i, a in enumerate(alpha) if not ops.is_zero(a))
    others = [i for i in range(3) if i != pivot]
    vecs = []
    for j in others:
        v = [ops.zero, ops.zero, ops.zero]
        v[j] = alpha[pivot]
        v[pivot] = _ring_int_mul(ops, -1, alpha[j])
        vecs.append(tuple(v))
    return vecs[0], vecs[1]


def _binary_form(ops, u, v, expnts, p: int):
    """Coefficients in (s, r) of prod (s*u_i + r*v_i)^e_i, length p+1."""
    one = 1 if ops is linalg.IntOps else (1, 0)
    form = [one]
    for axis, e in enumerate(expnts):
        if e == 0:
            continue
        ua, va = u[axis], v[axis]
        # (ua*s + va*r)^e expanded: coeff of s^a r^(e-a) = C(e,a) ua^a va^(e-a)
        pows_u = [one]
        pows_v = [one]
        for _ in range(e):
            pows_u.append(ops.mul(pows_u[-1], ua))
            pows_v.append(ops.mul(pows_v[-1], va))
        fac = [_ring_int_mul(ops, comb(e, a), ops.mul(pows_u[a], pows_v[e - a]))
               for a in range(e + 1)]
        new = [ops.zero] * (len(form) + e)
        for a, x in enumerate(form):
            if ops.is_zero(x):
                continue
            for b, y in enumerate(fac):
                new[a + b] = _ring_add(ops, new[a + b], ops.mul(x, y))
        form = new
    assert len(form) == p + 1
    return form


def _constraint_matrix(arr: Arrangement, p: int):
    """Rows of the membership system for degree p, over the integral ring."""
    ops, cols = cleared_columns(arr)
    mons = monomials(p)
    nm = len(mons)
    ncols = 3 * nm
    rows = []
    for alpha in cols:
        u, v = _spanning_vectors(ops, alpha)
        forms = [_binary_form(ops, u, v, m, p) for m in mons]
        for t in range(p + 1):
            row = [ops.zero] * ncols
            for c in range(3):
                ac = alpha[c]
                if ops.is_zero(ac):
                    continue
                base = c * nm
                for mi in range(nm):
                    ft = forms[mi][t]
                    if not ops.is_zero(ft):
                        row[base + mi] = ops.mul(ac, ft)
            rows.append(row)
    return ops, rows, ncols


def derivation_space_dim(arr: Arrangement, p: int) -> int:
    """Exact dimension of the degree-p graded piece of the derivation module."""
    if p < 0:
        raise ValueError("degree must be nonnegative")
    ops, rows, ncols = _constraint_matrix(arr, p)
    return ncols - linalg.rank(rows, ncols, ops)


def _vector_to_derivation(vec, p: int) -> Derivation:
    mons = monomials(p)
    nm = len(mons)
    polys = []
    for c in range(3):
        coeffs = {mons[i]: vec[c * nm + i]
                  for i in range(nm) if vec[c * nm + i]}
        polys.append(HPoly(p, coeffs))
    return Derivation(tuple(polys), p)


def derivation_basis(arr: Arrangement, p: int) -> list:
    """Basis of the degree-p graded piece, as Derivations over the field."""
    ops, rows, ncols = _constraint_matrix(arr, p)
    vecs = linalg.nullspace(rows, ncols, ops)
    return [_vector_to_derivation(v, p) for v in vecs]


def euler_derivation(arr: Arrangement) -> Derivation:
    """theta_E = x1*D1 + x2*D2 + x3*D3, a member for every arrangement."""
    one = arr.domain.one
    polys = tuple(HPoly(1, {tuple(1 if i == c else 0 for i in range(3)): one})
                  for c in range(3))
    return Derivation(polys, 1)


def is_member(arr: Arrangement, deriv: Derivation) -> bool:
    """Re-verify membership: theta(alpha_H) vanishes on H for every H."""
    for alpha in arr.columns:
        g = deriv.apply_form(alpha)
        if not g:
            continue
        if not _vanishes_on_kernel(g, alpha, arr.domain):
            return False
    return True


def _vanishes_on_kernel(g: HPoly, alpha, dom: Domain) -> bool:
    # g vanishes identically on ker(alpha) iff alpha divides g
    pivot = next(i for i, a in enumerate(alpha) if a)
    others = [i for i in range(3) if i != pivot]
    u = [dom.zero] * 3
    v = [dom.zero] * 3
    u[others[0]] = alpha[pivot]
    u[pivot] = -alpha[others[0]]
    v[others[1]] = alpha[pivot]
    v[pivot] = -alpha[others[1]]
    p = g.degree
    form = [dom.zero] * (p + 1)
    for m, c in g.coeffs.items():
        term = [dom.one]
        for axis, e in enumerate(m):
            for _ in range(e):
                new = [dom.zero] * (len(term) + 1)
                for a, x in enumerate(term):
                    if x:
                        new[a] = new[a] + x * u[axis]
                        new[a + 1] = new[a + 1] + x * v[axis]
                term = new
        for a, x in enumerate(term):
            form[a] = form[a] + c * x
    return not any(form)


def defining_polynomial(arr: Arrangement) -> HPoly:
    """Q = product of the defining linear forms."""
    out = HPoly(0, {(0, 0, 0): arr.domain.one})
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for alpha in arr.columns:
        lin = HPoly(1, {e[i]: alpha[i] for i in range(3) if alpha[i]})
        out = out * lin
    return out


def saito_check(arr: Arrangement, th1: Derivation, th2: Derivation,
                th3: Derivation):
    """Saito's criterion: det of the coefficient matrix against c * Q.

    Returns the nonzero constant c on success, None if the determinant is
    not a nonzero constant multiple of Q.
    """
    if th1.pdeg + th2.pdeg + th3.pdeg != arr.n:
        raise DegreeMismatchError(
            f"pdeg sum {th1.pdeg + th2.pdeg + th3.pdeg} != n = {arr.n}")
    rowmat = [t.polys for t in (th1, th2, th3)]
    det = _det3_hpoly(rowmat)
    if not det:
        return None
    q = defining_polynomial(arr)
    # candidate constant from any monomial of Q
    m0, qc = next(iter(q.coeffs.items()))
    dc = det.coeffs.get(m0)
    if dc is None or not dc:
        return None
    c = dc / qc
    if det == q.scale(c):
        return c
    return None


def _det3_hpoly(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))


def _field_ops_for(arr: Arrangement):
    ops, _ = cleared_columns(arr)
    return ops


def _derivation_vector(deriv: Derivation, p: int, dom: Domain):
    """Coefficient vector of a degree-p derivation, for span computations."""
    assert deriv.pdeg == p
    mons = monomials(p)
    nm = len(mons)
    vec = [dom.zero] * (3 * nm)
    idx = {m: i for i, m in enumerate(mons)}
    for c, poly in enumerate(deriv.polys):
        for m, co in poly.coeffs.items():
            vec[c * nm + idx[m]] = co
    return vec


def _euler_multiple_vectors(arr: Arrangement, p: int):
    """Vectors of m * theta_E for all monomials m of degree p - 1."""
    dom = arr.domain
    mons = monomials(p)
    nm = len(mons)
    idx = {m: i for i, m in enumerate(mons)}
    one = dom.one
    out = []
    for m in monomials(p - 1):
        vec = [dom.zero] * (3 * nm)
        for c in range(3):
            mm = tuple(m[i] + (1 if i == c else 0) for i in range(3))
            vec[c * nm + idx[mm]] = one
        out.append(vec)
    return out


def _poly_multiple_vectors(deriv: Derivation, p: int, dom: Domain):
    """Vectors of m * deriv for all monomials m of degree p - deriv.pdeg."""
    mons = monomials(p)
    nm = len(mons)
    idx = {m: i for i, m in enumerate(mons)}
    out = []
    for m in monomials(p - deriv.pdeg):
        vec = [dom.zero] * (3 * nm)
        for c, poly in enumerate(deriv.polys):
            for mm, co in poly.coeffs.items():
                key = tuple(mm[i] + m[i] for i in range(3))
                vec[c * nm + idx[key]] = vec[c * nm + idx[key]] + co
        out.append(vec)
    return out


class _FieldReducer:
    """Incremental row reduction over a field, for complement extraction."""

    def __init__(self, zero):
        self.zero = zero
        self.rows = {}  # pivot index -> normalized row

    def reduce(self, vec):
        v = list(vec)
        for piv in sorted(self.rows):
            if v[piv]:
                coef = v[piv]
                row = self.rows[piv]
                v = [a - coef * b for a, b in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        """Reduce and absorb; returns True if the vector was independent."""
        v = self.reduce(vec)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = (1 / v[piv]) if isinstance(v[piv], Fraction) else v[piv].inverse()
        self.rows[piv] = [x * inv for x in v]
        return True


def _complement_candidates(arr: Arrangement, p: int, span_vectors,
                           basis_vectors):
    """Basis vectors independent of the span, reduced deterministically."""
    red = _FieldReducer(arr.domain.zero)
    for v in span_vectors:
        red.add(v)
    out = []
    for b in basis_vectors:
        r = red.reduce(b)
        if any(r):
            out.append(r)
            red.add(r)
    return out


_VERDICT_CACHE: dict = {}


def state_key(arr: Arrangement) -> str:
    """Coordinate key: columns scaled to leading one, sorted; domain-tagged."""
    normed = []
    for col in arr.columns:
        lead = next(x for x in col if x)
        inv = (1 / lead) if isinstance(lead, Fraction) else lead.inverse()
        normed.append(tuple(str(x * inv) for x in col))
    return arr.domain.name + "|" + ";".join(",".join(c) for c in sorted(normed))


def decide_freeness(arr: Arrangement, use_cache: bool = True):
    """Three-valued freeness decision with explicit certificates.

    Free only with a verified Saito identity; NotFree only by a
    non-splitting characteristic polynomial or a graded dimension mismatch;
    everything else is Inconclusive.
    """
    key = state_key(arr) if use_cache else None
    if key is not None and key in _VERDICT_CACHE:
        return _VERDICT_CACHE[key]
    verdict = _decide_freeness_impl(arr)
    if key is not None:
        _VERDICT_CACHE[key] = verdict
    return verdict


def _decide_freeness_impl(arr: Arrangement):
    chi = arr.char_poly()
    exps = chi.exponents()
    if exps is None:
        return NotFree("ChiDoesNotSplit")
    e1, e2, e3 = exps
    dims = {}
    for p in range(0, e3 + 1):
        actual = derivation_space_dim(arr, p)
        dims[p] = actual
        expected = expected_graded_dim(exps, p)
        if actual != expected:
            return NotFree("GradedDimensionMismatch", (p, expected, actual))
    theta_e = euler_derivation(arr)
    dom = arr.domain
    basis2 = derivation_basis(arr, e2)
    vecs2 = [_derivation_vector(b, e2, dom) for b in basis2]
    span2 = _euler_multiple_vectors(arr, e2)
    cands2 = [_vector_to_derivation(v, e2)
              for v in _complement_candidates(arr, e2, span2, vecs2)]
    basis3 = basis2 if e3 == e2 else derivation_basis(arr, e3)
    for th2 in cands2:
        span3 = _euler_multiple_vectors(arr, e3)
        span3 += _poly_multiple_vectors(th2, e3, dom)
        vecs3 = [_derivation_vector(b, e3, dom) for b in basis3]
        cands3 = [_vector_to_derivation(v, e3)
                  for v in _complement_candidates(arr, e3, span3, vecs3)]
        for th3 in cands3:
            c = saito_check(arr, theta_e, th2, th3)
            if c is not None:
                cert = SaitoCertificate((theta_e, th2, th3), c)
                return Free(exps, cert)
    # fallback: raw basis elements, then small integer combinations
    basis2_full = basis2
    basis3_full = basis3
    for th2 in basis2_full:
        for th3 in basis3_full:
            if e2 == e3 and th2 is th3:
                continue
            try:
                c = saito_check(arr, theta_e, th2, th3)
            except DegreeMismatchError:
                break
            if c is not None:
                return Free(exps, SaitoCertificate((theta_e, th2, th3), c))
    for th2 in _small_combinations(basis2_full, e2):
        for th3 in _small_combinations(basis3_full, e3):
            c = saito_check(arr, theta_e, th2, th3)
            if c is not None:
                return Free(exps, SaitoCertificate((theta_e, th2, th3), c))
    return Inconclusive({"exponents": exps, "graded_dims": dims})


def _small_combinations(basis, p, coeff_range=(1, -1, 2, -2)):
    """Deterministic small integer pair-combinations of basis elements."""
    for i, j in itertools.combinations(range(len(basis)), 2):
        for a in coeff_range:
            for b in coeff_range:
                polys = tuple(
                    basis[i].polys[c].scale(a) + basis[j].polys[c].scale(b)
                    for c in range(3))
                yield Derivation(polys, p)


# -- certificate serialization -------------------------------------------

def _scalar_to_text(x) -> str:
    if isinstance(x, Fraction):
        return f"rat {x}"
    if isinstance(x, QuadElem):
        return f"quad {x.d} {x.a} {x.b}"
    if isinstance(x, RatFunc):
        num = ",".join(str(c) for c in x.num.coeffs)
        den = ",".join(str(c) for c in x.den.coeffs)
        return f"ratfunc {num or '0'} {den or '0'}"
    raise TypeError(f"cannot serialize scalar {x!r}")


def _scalar_from_text(parts):
    kind = parts[0]
    if kind == "rat":
        return Fraction(parts[1])
    if kind == "quad":
        return QuadElem(int(parts[1]), Fraction(parts[2]), Fraction(parts[3]))
    if kind == "ratfunc":
        from .scalars import IntPoly
        num = IntPoly(int(c) for c in parts[1].split(","))
        den = IntPoly(int(c) for c in parts[2].split(","))
        return RatFunc(num, den)
    raise ValueError(f"unknown scalar tag {kind!r}")


def certificate_to_text(cert: SaitoCertificate) -> str:
    lines = ["saito-certificate"]
    lines.append("c " + _scalar_to_text(cert.constant))
    for k, th in enumerate(cert.derivations, start=1):
        lines.append(f"derivation {k} pdeg {th.pdeg}")
        for c, poly in enumerate(th.polys, start=1):
            for m in sorted(poly.coeffs):
                lines.append(
                    f"term {c} {m[0]} {m[1]} {m[2]} "
                    + _scalar_to_text(poly.coeffs[m]))
    lines.append("end")
    return "\n".join(lines) + "\n"


def certificate_from_text(text: str) -> SaitoCertificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "saito-certificate":
        raise ValueError("not a saito certificate")
    constant = None
    derivs = []
    current = None
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "c":
            constant = _scalar_from_text(parts[1:])
        elif parts[0] == "derivation":
            if current is not None:
                derivs.append(current)
            current = {"pdeg": int(parts[3]), "polys": [{}, {}, {}]}
        elif parts[0] == "term":
            c = int(parts[1]) - 1
            m = (int(parts[2]), int(parts[3]), int(parts[4]))
            current["polys"][c][m] = _scalar_from_text(parts[5:])
        elif parts[0] == "end":
            if current is not None:
                derivs.append(current)
            current = None
    ths = tuple(
        Derivation(tuple(HPoly(d["pdeg"], poly) for poly in d["polys"]),
                   d["pdeg"])
        for d in derivs)
    return SaitoCertificate(ths, constant)
