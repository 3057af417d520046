"""Exact scalar arithmetic: integer polynomials, Q(t), quadratic fields."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freearr.scalars import (
    IntPoly,
    MixedFieldError,
    QQ,
    QQT,
    QuadElem,
    RatFunc,
    ZeroPolynomial,
    divides,
    div_exact,
    factor_low_degree,
    parse_rational,
    poly,
    poly_gcd,
    quad_field,
    rational_roots,
)

T = poly(0, 1)

small_ints = st.integers(min_value=-30, max_value=30)
fractions = st.builds(Fraction, small_ints,
                      st.integers(min_value=1, max_value=12))
polys = st.builds(lambda cs: IntPoly(cs),
                  st.lists(small_ints, min_size=0, max_size=5))


class TestIntPoly:
    def test_normalization_drops_leading_zeros(self):
        assert IntPoly((1, 2, 0, 0)).coeffs == (1, 2)
        assert not IntPoly((0, 0))

    def test_arithmetic(self):
        p = poly(1, 1)      # 1 + t
        q = poly(-1, 1)     # t - 1
        assert (p * q).coeffs == (-1, 0, 1)
        assert (p + q).coeffs == (0, 2)
        assert (p - q).coeffs == (2,)
        assert (p ** 3).coeffs == (1, 3, 3, 1)

    @given(polys, polys, fractions)
    @settings(max_examples=60)
    def test_evaluation_is_a_ring_homomorphism(self, p, q, x):
        assert (p * q)(x) == p(x) * q(x)
        assert (p + q)(x) == p(x) + q(x)

    @given(polys, st.builds(QuadElem, st.just(5), fractions, fractions))
    @settings(max_examples=40)
    def test_evaluation_homomorphism_in_quadratic_field(self, p, w):
        two = p * p
        assert two(w) == p(w) * p(w)

    def test_content_and_primitive(self):
        p = poly(6, -9, 12)
        assert p.content == 3
        assert p.primitive().coeffs == (2, -3, 4)

    def test_derivative_and_shift(self):
        p = poly(1, 2, 3)
        assert p.derivative().coeffs == (2, 6)
        assert p.shift_up(2).coeffs == (0, 0, 1, 2, 3)

    def test_str(self):
        assert str(poly(1, -3, 1)) == "t^2 - 3*t + 1"
        assert str(poly(0, 1)) == "t"
        assert str(poly(-2)) == "-2"


class TestDivisionAndGcd:
    def test_div_exact(self):
        p = poly(-1, 0, 1)
        assert div_exact(p, poly(-1, 1)).coeffs == (1, 1)

    def test_divides(self):
        q = poly(1, -3, 1)
        assert divides(q, q * poly(2, 5))
        assert not divides(q, poly(1, 1))

    def test_poly_gcd_recovers_common_factor(self):
        q = poly(1, -3, 1)
        a = q * poly(1, 1)
        b = q * poly(-2, 0, 3)
        g = poly_gcd(a, b)
        assert g.primitive().coeffs == q.coeffs

    def test_poly_gcd_coprime(self):
        assert poly_gcd(poly(1, 1), poly(-1, 1)).degree == 0

    def test_rational_roots(self):
        p = poly(-1, 1) * poly(1, 2) * poly(1, 0, 1)
        assert sorted(rational_roots(p)) == [Fraction(-1, 2), Fraction(1)]

    def test_zero_polynomial_errors(self):
        with pytest.raises(ZeroPolynomial):
            factor_low_degree(IntPoly(()))


class TestFactorLowDegree:
    def test_irreducible_quadratics_stay_whole(self):
        for coeffs in ((1, -1, 1), (1, -12, 4), (1, -3, 1), (-1, 1, 1)):
            factors, rem = factor_low_degree(IntPoly(coeffs))
            assert factors == [(IntPoly(coeffs), 1)]
            assert rem.degree == 0

    def test_splits_products(self):
        p = poly(-1, 1) * poly(-1, 1, 1) ** 2
        factors, rem = factor_low_degree(p)
        assert (poly(-1, 1), 1) in factors
        assert (poly(-1, 1, 1), 2) in factors
        assert rem.degree == 0

    def test_high_degree_remainder(self):
        p = poly(1, 1, 0, 1) * poly(-1, 1)  # t^3 + t + 1 is irreducible
        factors, rem = factor_low_degree(p)
        assert factors == [(poly(-1, 1), 1)]
        assert rem.primitive().coeffs == (1, 1, 0, 1)


class TestRatFunc:
    def test_reduction_to_canonical_form(self):
        f = RatFunc(poly(-1, 0, 1), poly(-1, 1))   # (t^2-1)/(t-1)
        assert f == RatFunc(poly(1, 1))
        assert RatFunc(poly(2), poly(0, 4)) == RatFunc(poly(1), poly(0, 2))

    def test_field_operations(self):
        t = RatFunc(T)
        one = QQT.one
        assert t * QQT.invert(t) == one
        assert (t + one) * (t - one) == t * t - one

    @given(st.builds(lambda a, b: RatFunc(poly(a, b), poly(1)),
                     small_ints, small_ints),
           st.builds(lambda a, b: RatFunc(poly(a), poly(b, 1)),
                     small_ints, small_ints))
    @settings(max_examples=40)
    def test_field_axioms(self, f, g):
        assert f + g == g + f
        assert f * g == g * f
        assert f * (g + g) == f * g + f * g
        if g:
            assert (f / g) * g == f


quad_elems = st.builds(QuadElem, st.sampled_from([2, 5, -3]),
                       fractions, fractions)


class TestQuadElem:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadElem(4, 1, 1)
        with pytest.raises(ValueError):
            QuadElem(1, 1, 1)

    def test_mixing_fields_is_an_error(self):
        with pytest.raises(MixedFieldError):
            QuadElem(2, 1, 1) + QuadElem(3, 1, 1)

    @given(quad_elems, quad_elems)
    @settings(max_examples=60)
    def test_commutative_ring_axioms(self, x, y):
        if x.d != y.d:
            return
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) * (x - y) == x * x - y * y

    @given(quad_elems)
    @settings(max_examples=60)
    def test_norm_identity(self, x):
        norm = x * x.conjugate()
        assert norm.b == 0
        assert norm.a == x.a * x.a - x.d * x.b * x.b

    @given(quad_elems)
    @settings(max_examples=60)
    def test_inverse(self, x):
        if not x:
            return
        one = QuadElem(x.d, 1, 0)
        assert x * x.inverse() == one

    def test_known_algebraic_numbers(self):
        golden = QuadElem(5, Fraction(-1, 2), Fraction(1, 2))
        assert poly(-1, 1, 1)(golden) == 0
        omega = QuadElem(-3, Fraction(1, 2), Fraction(1, 2))
        assert poly(1, -1, 1)(omega) == 0
        root2 = QuadElem(5, Fraction(3, 2), Fraction(1, 2))
        assert poly(1, -3, 1)(root2) == 0


class TestDomains:
    def test_parse_rational(self):
        assert parse_rational("-1/2") == Fraction(-1, 2)
        assert parse_rational("7") == 7

    def test_quad_field_is_cached_and_validated(self):
        assert quad_field(5) is quad_field(5)
        with pytest.raises(ValueError):
            quad_field(12)

    def test_from_int(self):
        assert QQ.from_int(3) == Fraction(3)
        assert quad_field(2).from_int(3) == QuadElem(2, 3, 0)
        assert QQT.from_int(3) == RatFunc(poly(3))
