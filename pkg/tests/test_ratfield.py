"""Field arithmetic, polar parts, and the expression grammar."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symplext.errors import ParseError, UnsupportedPoleField, ZeroDenominator
from symplext.ratfield import (
    INFINITY,
    PointP1,
    PolarPart,
    Poly,
    RatFunc,
    full_principal_part,
    parse_frac,
    parse_point,
    parse_ratfunc,
    point_text,
    polar_coeffs_as_ratfunc,
    polar_part,
    ratfunc_text,
    valuation,
    zpow,
)

fracs = st.fractions(min_value=-30, max_value=30, max_denominator=6)


def polys(max_deg=3):
    return st.lists(fracs, min_size=0, max_size=max_deg + 1).map(Poly)


def nonzero_polys(max_deg=3):
    return polys(max_deg).filter(lambda p: not p.is_zero)


@st.composite
def ratfuncs(draw, max_deg=3):
    num = draw(polys(max_deg))
    den = draw(nonzero_polys(max_deg))
    return RatFunc(num, den)


# points with exact rational handling all the way through
@st.composite
def pole_structured(draw):
    """Rational function with poles only at small rational points."""
    f = RatFunc(draw(polys(2)))
    for a in draw(st.lists(st.sampled_from([0, 1, -1, 2, Fraction(1, 2)]),
                           max_size=2, unique=True)):
        coeffs = draw(st.lists(fracs, min_size=1, max_size=3))
        f = f + polar_coeffs_as_ratfunc(Fraction(a), coeffs)
    return f


# ------------------------------------------------------------
# Poly basics
# ------------------------------------------------------------


def test_poly_trims_and_degree():
    assert Poly([1, 0, 0]).degree == 0
    assert Poly([]).degree == -1
    assert Poly([0]).is_zero
    assert Poly([1, 0, -2]).degree == 2


def test_poly_divmod_exact():
    a = Poly([1, 0, -2, 1])
    b = Poly([-1, 1])
    q, r = divmod(a, b)
    assert q * b + r == a


@given(polys(), polys(), polys())
def test_poly_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)


# ------------------------------------------------------------
# RatFunc normalization and field laws
# ------------------------------------------------------------


def test_normalization_monic_denominator():
    # 2z / 4 reduces to z/2 with monic denominator
    f = RatFunc(Poly([0, 2]), Poly([4]))
    assert f.den == Poly.one()
    assert f.num == Poly([0, Fraction(1, 2)])
    # re-expansion oracle
    assert f * RatFunc.constant(4) == RatFunc(Poly([0, 2]))


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDenominator):
        RatFunc(Poly.one(), Poly.zero())


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_laws(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f


@given(ratfuncs())
def test_inverse(f):
    if f.is_zero:
        return
    assert f * (RatFunc.one() / f) == RatFunc.one()


@given(ratfuncs(), st.fractions(min_value=-8, max_value=8, max_denominator=4))
def test_translate_is_a_field_map(f, a):
    assert f.translate(a).translate(-a) == f


@given(ratfuncs())
def test_flip_involution(f):
    assert f.flip().flip() == f


def test_zpow():
    assert zpow(3) == RatFunc(Poly.monomial(3))
    assert zpow(-2) * zpow(2) == RatFunc.one()


# ------------------------------------------------------------
# Valuations and polar parts
# ------------------------------------------------------------


def test_valuation_triple_zero():
    f = RatFunc(Poly([-1, 1]) ** 3, Poly([2, 1]))
    assert valuation(f, PointP1.finite(1)) == 3
    assert valuation(f, PointP1.finite(-2)) == -1
    assert valuation(f, PointP1.finite(5)) == 0


def test_polar_part_partial_fractions():
    # 1/(z(z-1)) = -1/z + 1/(z-1)
    f = RatFunc(Poly.one(), Poly([0, 1]) * Poly([-1, 1]))
    assert polar_part(f, PointP1.finite(0)).coeffs == (Fraction(-1),)
    assert polar_part(f, PointP1.finite(1)).coeffs == (Fraction(1),)


def test_infinity_polar_cubic():
    # z^3/(z-1) = z^2 + z + 1 + 1/(z-1); in the u-chart at twist 0 the
    # polar part is u^-2 + u^-1 (division oracle, not u^-3)
    f = RatFunc(Poly.monomial(3), Poly([-1, 1]))
    parts = full_principal_part(f, 0)
    assert [p.point for p in parts] == [PointP1.finite(1), INFINITY]
    assert parts[0].coeffs == (Fraction(1),)
    assert parts[1].coeffs == (Fraction(1), Fraction(1))


def test_full_principal_part_of_z():
    parts = full_principal_part(RatFunc(Poly([0, 1])), 0)
    assert len(parts) == 1
    assert parts[0].point.is_infinity
    assert parts[0].coeffs == (Fraction(1),)


def test_full_principal_part_twisted():
    # 1/(z-1) as a section of O(-2): pole at 1 and, after the twist, at
    # infinity with c_1 = 1
    f = RatFunc(Poly.one(), Poly([-1, 1]))
    parts = full_principal_part(f, -2)
    assert [(p.point, p.coeffs) for p in parts] == [
        (PointP1.finite(1), (Fraction(1),)),
        (INFINITY, (Fraction(1),)),
    ]


def test_irrational_pole_rejected():
    f = RatFunc(Poly.one(), Poly([-2, 0, 1]))  # z^2 - 2
    with pytest.raises(UnsupportedPoleField):
        f.finite_poles()


@given(pole_structured())
def test_partial_fraction_completeness(f):
    # f minus all its finite polar parts is a polynomial
    rest = f
    for a in f.finite_poles():
        rest = rest - polar_coeffs_as_ratfunc(a, f.translate(a).polar0())
    assert rest.is_polynomial


@given(pole_structured(), pole_structured())
def test_polar_additivity(f, g):
    pt = PointP1.finite(0)
    s = polar_part(f, pt) + polar_part(g, pt)
    assert s == polar_part(f + g, pt)


@given(st.integers(min_value=-4, max_value=4))
def test_global_sections_of_twist(d):
    # z^k is a global section of O(d) exactly for 0 <= k <= d
    for k in range(0, 5):
        f = RatFunc(Poly.monomial(k))
        assert f.is_global(d) == (k <= d)


def test_polar_part_as_ratfunc_round_trip():
    pp = PolarPart(PointP1.finite(2), (Fraction(3), Fraction(0), Fraction(1, 2)))
    f = pp.as_ratfunc()
    assert polar_part(f, PointP1.finite(2)) == pp
    assert (f - polar_coeffs_as_ratfunc(Fraction(2), pp.coeffs)).is_zero


# ------------------------------------------------------------
# Text round trips
# ------------------------------------------------------------


@given(ratfuncs())
@settings(max_examples=200)
def test_expression_round_trip(f):
    assert parse_ratfunc(ratfunc_text(f)) == f


def test_parse_handwritten_variants():
    assert parse_ratfunc("(z^2+1)/(z-1)") == RatFunc(Poly([1, 0, 1]), Poly([-1, 1]))
    assert parse_ratfunc("1/2 * z") == RatFunc(Poly([0, Fraction(1, 2)]))
    assert parse_ratfunc("-z + 3") == RatFunc(Poly([3, -1]))


def test_parse_rejects_garbage():
    for bad in ("", "z +", "1/(z", "z//2", "q + 1", "1/0"):
        with pytest.raises(ParseError):
            parse_ratfunc(bad)


@given(st.fractions(min_value=-100, max_value=100, max_denominator=40))
def test_point_text_round_trip(a):
    assert parse_point(point_text(PointP1.finite(a))) == PointP1.finite(a)
    assert parse_frac(str(a)) == a


def test_point_infinity_spellings():
    for s in ("inf", "Inf", "infinity", "oo"):
        assert parse_point(s).is_infinity
