"""One-parameter families, specialization, degeneracy sets."""
from fractions import Fraction
from pathlib import Path

import pytest

from freearr import arrangement as am
from freearr import moduli as mod
from freearr.freeness import Free, decide_freeness
from freearr.scalars import IntPoly, QuadElem, poly

DATA = Path(__file__).resolve().parent.parent / "src" / "freearr" / "data"


class TestFamilies:
    def test_13_column_entries(self):
        f = mod.family_13()
        assert f.n == 13
        assert f.columns[0] == (poly(1), IntPoly(()), IntPoly(()))
        # column 13 is (t-1, t, -t^2)
        assert f.columns[12] == (poly(-1, 1), poly(0, 1), poly(0, 0, -1))

    def test_15_column_entries(self):
        f = mod.family_15()
        assert f.n == 15
        # column 12 is (1-3t, t^2-3t+1, -t)
        assert f.columns[11] == (poly(1, -3), poly(1, -3, 1), poly(0, -1))

    def test_validation_rejects_proportional_columns(self):
        with pytest.raises(ValueError):
            mod.Family("bad", mod._cols((1, 0, 0), (2, 0, 0)))


class TestGenericLattices:
    def test_13_has_30_flats(self):
        lat = mod.generic_lattice(mod.family_13())
        assert len(lat.flats) == 30
        sizes = sorted(len(f) for f in lat.flats)
        assert sizes == [2] * 21 + [3] * 3 + [4] * 3 + [5] * 3

    def test_15_has_39_flats(self):
        lat = mod.generic_lattice(mod.family_15())
        assert len(lat.flats) == 39
        sizes = sorted(len(f) for f in lat.flats)
        assert sizes == [2] * 27 + [3] * 6 + [5] * 6

    def test_generic_13_isomorphic_to_golden_listing(self):
        golden = am.parse_lattice_listing(
            (DATA / "paper13.lattice").read_text())
        lat = mod.generic_lattice(mod.family_13())
        assert am.lattice_iso(lat, golden) is not None

    def test_generic_15_isomorphic_to_golden_listing(self):
        golden = am.parse_lattice_listing(
            (DATA / "paper15.lattice").read_text())
        lat = mod.generic_lattice(mod.family_15())
        assert am.lattice_iso(lat, golden) is not None


class TestSpecialize:
    def test_13_generic_value(self, a13):
        spec = mod.specialize(mod.family_13(), 3)
        assert spec.count == 13
        assert spec.matches_generic
        assert spec.dropped == ()
        assert spec.merges == ()
        assert a13.n == 13

    def test_13_at_zero_drops_column(self):
        # column 13 = (t-1, t, -t^2) stays, but columns merge at t=0:
        # (1,0,-t) -> (1,0,0) = column 1 etc.
        spec = mod.specialize(mod.family_13(), 0)
        assert spec.count < 13

    def test_13_at_two_changes_lattice(self):
        spec = mod.specialize(mod.family_13(), 2)
        assert spec.count == 13
        assert not spec.matches_generic

    def test_13_at_sixth_root_merges_columns(self):
        # at a root of t^2 - t + 1, columns 11, 12 and 13 all coincide
        omega = QuadElem(-3, Fraction(1, 2), Fraction(1, 2))
        spec = mod.specialize(mod.family_13(), omega)
        assert spec.count == 11
        assert spec.merges == ((11, 12, 13),)

    def test_15_at_golden_square_changes_lattice(self):
        # (3+sqrt5)/2 is a root of t^2 - 3t + 1
        omega = QuadElem(5, Fraction(3, 2), Fraction(1, 2))
        spec = mod.specialize(mod.family_15(), omega)
        assert spec.count == 15
        assert not spec.matches_generic

    def test_15_at_minus_one_is_generic(self):
        spec = mod.specialize(mod.family_15(), -1)
        assert spec.count == 15
        assert spec.matches_generic


class TestDegeneracySet:
    def test_13_family(self):
        rep = mod.degeneracy_set(mod.family_13())
        assert rep.rational == {
            Fraction(-1): mod.LATTICE_CHANGES,
            Fraction(0): mod.COUNT_DROPS,
            Fraction(1, 2): mod.LATTICE_CHANGES,
            Fraction(1): mod.COUNT_DROPS,
            Fraction(2): mod.LATTICE_CHANGES,
        }
        assert rep.quadratic == {(1, -1, 1): mod.COUNT_DROPS}
        assert rep.unresolved == ()

    def test_15_family(self):
        rep = mod.degeneracy_set(mod.family_15())
        assert rep.rational == {
            Fraction(0): mod.COUNT_DROPS,
            Fraction(1, 2): mod.COUNT_DROPS,
            Fraction(1): mod.COUNT_DROPS,
        }
        assert rep.quadratic == {
            (1, -3, 1): mod.LATTICE_CHANGES,
            (-1, 1, 1): mod.LATTICE_CHANGES,
        }
        assert rep.unresolved == ()

    def test_nonexceptional_samples_match_generic(self):
        f = mod.family_13()
        rep = mod.degeneracy_set(f)
        for k in range(3, 23):
            omega = Fraction(k, 7)
            if omega in rep.rational:
                continue
            assert mod.specialize(f, omega).matches_generic

    def test_classification_closure(self):
        # re-verify every reported value by direct specialization
        f = mod.family_15()
        rep = mod.degeneracy_set(f)
        for omega, tag in rep.rational.items():
            spec = mod.specialize(f, omega)
            if tag == mod.COUNT_DROPS:
                assert spec.count < f.n
            else:
                assert spec.count == f.n and not spec.matches_generic
        for coeffs, tag in rep.quadratic.items():
            root = mod._quadratic_root(coeffs)
            assert IntPoly(coeffs)(root) == 0
            spec = mod.specialize(f, root)
            if tag == mod.COUNT_DROPS:
                assert spec.count < f.n
            else:
                assert spec.count == f.n and not spec.matches_generic

    def test_15_exceptional_values_give_free_1_5_9(self):
        f = mod.family_15()
        for coeffs in ((1, -3, 1), (-1, 1, 1)):
            root = mod._quadratic_root(coeffs)
            assert root.d == 5
            spec = mod.specialize(f, root)
            verdict = decide_freeness(spec.arrangement)
            assert isinstance(verdict, Free)
            assert verdict.exponents == (1, 5, 9)


class TestVLMembership:
    def test_generic_lattice_membership(self):
        f = mod.family_13()
        lat = mod.generic_lattice(f)
        assert mod.vL_membership(f, lat, 3)
        assert not mod.vL_membership(f, lat, 2)       # lattice changes
        assert not mod.vL_membership(f, lat, 0)       # count drops


class TestFamilyFormat:
    def test_round_trip(self):
        for f in (mod.family_13(), mod.family_15()):
            back = mod.parse_family_text(mod.format_family(f), f.name)
            assert back.columns == f.columns

    def test_parse_with_comments(self):
        f = mod.parse_family_text(
            "# coordinate triangle\n1; 0; 0\n0; 1; 0\n\n0; 0; 1\n")
        assert f.n == 3
        assert all(p.degree <= 0 for col in f.columns for p in col)

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            mod.parse_family_text("1; 0\n")
        with pytest.raises(ValueError):
            mod.parse_family_text("")

    def test_constant_family_specializes_everywhere(self):
        f = mod.parse_family_text("1; 0; 0\n0; 1; 0\n0; 0; 1\n")
        rep = mod.degeneracy_set(f)
        assert rep.rational == {} and rep.quadratic == {}
        assert mod.specialize(f, 17).matches_generic


class TestMultiplicityInvariance:
    def test_profile_constant_off_the_exceptional_set(self):
        f = mod.family_15()
        generic_profile = sorted(
            len(fl) for fl in mod.generic_lattice(f).flats)
        for omega in (3, -2, Fraction(7, 3)):
            spec = mod.specialize(f, omega)
            profile = sorted(
                len(fl) for fl in spec.arrangement.lattice().flats)
            assert profile == generic_profile
