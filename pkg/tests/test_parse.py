from fractions import Fraction

import pytest
from hypothesis import given

from polares.exactpoly import T, gcd_poly, poly
from polares.parse import (
    CurveValidationError, ParseError, PolarCurve, check_proper, format_rational_function,
    make_curve, parse_curve, parse_rational_function,
)

from conftest import curves, rational_functions


def test_identity_curve_fields():
    c = parse_curve("t", "t")
    assert (c.A, c.B, c.C, c.D) == (poly(T), poly(1, T), poly(T), poly(1, T))


def test_phi3_canonical_form():
    c = parse_curve("t^2/(t^2-11*t+30)", "(t^2+78)/(t^2+1)")
    assert c.B == poly(T**2 - 11 * T + 30)
    assert c.C == poly(T**2 + 78)


def test_constant_radius_rejected():
    with pytest.raises(CurveValidationError, match="circle centered at the origin"):
        parse_curve("(t^2)/(t^2)", "t")


def test_constant_angle_rejected():
    with pytest.raises(CurveValidationError, match="line"):
        parse_curve("t", "3/2")


def test_rational_literals_and_powers():
    f = parse_rational_function("1/2*t^2 - (t+1)^-1")
    assert f(Fraction(1)) == Fraction(1, 2) - Fraction(1, 2)
    assert f(Fraction(3)) == Fraction(9, 2) - Fraction(1, 4)


def test_gcd_is_cancelled():
    f = parse_rational_function("(t^2-1)/(t-1)")
    assert f.den.degree() == 0 and f(Fraction(2)) == 3


def test_denominator_normalized_positive():
    f = parse_rational_function("1/(-t-3)")
    assert f.den.LC() > 0


@pytest.mark.parametrize("text,pos", [("t+*2", 3), ("(t", 3), ("t^t", 3), ("t $ 1", 3)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_rational_function(text)
    assert err.value.position == pos
    assert f"position {pos}" in str(err.value)


def test_zero_denominator_rejected():
    with pytest.raises(ParseError, match="division by zero"):
        parse_rational_function("t/(t-t)")


@pytest.mark.parametrize("r,theta,proper", [
    ("t", "t", True),
    ("t^2", "t^2", False),
    ("t", "t^4/(t^2+1)", True),
    ("t^2", "t^4+1", False),
])
def test_check_proper(r, theta, proper):
    c = PolarCurve(parse_rational_function(r), parse_rational_function(theta))
    assert check_proper(c) is proper


def test_improper_input_rejected():
    with pytest.raises(CurveValidationError, match="not proper"):
        parse_curve("t^2", "t^2")


@given(rational_functions())
def test_print_parse_roundtrip(f):
    assert parse_rational_function(format_rational_function(f)) == f


@given(rational_functions())
def test_canonical_form_coprime(f):
    assert gcd_poly(f.num, f.den).is_ground or f.num.is_zero
    assert f.den.LC() > 0


@given(curves())
def test_accepted_curves_are_proper(c):
    assert check_proper(c)
    assert gcd_poly(c.A, c.B).is_ground and gcd_poly(c.C, c.D).is_ground
