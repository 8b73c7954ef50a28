import math
import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from polares.golden import curve
from polares.ratan import (
    INF, bounded_on_reals, compare_values, global_extrema, limit_at, point_at_infinity,
    rational_value, zeros_and_poles,
)
from polares.parse import parse_rational_function as prf

from conftest import rational_functions


def test_limit_at_infinity_phi3_theta():
    f = prf("(t^2+78)/(t^2+1)")
    assert limit_at(f, INF).value == 1 == limit_at(f, -INF).value


def test_limit_finite_point():
    assert limit_at(prf("t"), Fraction(0)).is_zero


def test_one_sided_limits_at_simple_pole():
    f = prf("t^2/(t^2-11*t+30)")
    assert limit_at(f, Fraction(5), "+").tag == "-inf"
    assert limit_at(f, Fraction(5), "-").tag == "+inf"
    both = limit_at(f, Fraction(5))
    assert both.tag == "undefined"
    assert both.side("-").tag == "+inf" and both.side("+").tag == "-inf"


def test_even_pole_has_signed_limit():
    assert limit_at(prf("1/t^2"), Fraction(0)).tag == "+inf"
    assert limit_at(prf("-1/t^2"), Fraction(0)).tag == "-inf"


def test_removable_value_at_zero_of_num():
    assert limit_at(prf("(t^2+1)/(t-3)"), INF).tag == "+inf"
    assert limit_at(prf("(t^2+1)/(t-3)"), -INF).tag == "-inf"


def test_bounded_on_reals():
    assert bounded_on_reals(prf("t/(1+t^2)"))
    assert not bounded_on_reals(prf("t"))
    assert bounded_on_reals(prf("(t^2+14)/(t^2+1)"))
    assert not bounded_on_reals(prf("1/(t^2-1)"))


def test_extrema_phi4_theta():
    e = global_extrema(prf("(t^2+14)/(t^2+1)"))
    assert e.sup.value == 14 and [b.exact for b in e.sup_at] == [0]
    assert e.inf.value == 1 and e.inf_at == []


def test_extrema_not_attained_sup():
    e = global_extrema(prf("t^2/(t^2+1)"))
    assert e.inf.value == 0 and [b.exact for b in e.inf_at] == [0]
    assert e.sup.value == 1 and e.sup_at == []


def test_extrema_attained_both():
    e = global_extrema(prf("t/(1+t^2)"))
    assert e.sup.value == Fraction(1, 2) and [b.exact for b in e.sup_at] == [1]
    assert e.inf.value == Fraction(-1, 2) and [b.exact for b in e.inf_at] == [-1]


def test_zeros_and_poles():
    z, p = zeros_and_poles(prf("t^2/(t^2-11*t+30)"))
    assert [(b.exact, b.multiplicity) for b in z] == [(0, 2)]
    assert [b.exact for b in p] == [5, 6]
    z, p = zeros_and_poles(prf("1/t^2"))
    assert z == [] and [(b.exact, b.multiplicity) for b in p] == [(0, 2)]
    z, p = zeros_and_poles(prf("t/(1+t^2)"))
    assert [b.exact for b in z] == [0] and p == []


def test_p_infinity_phi1():
    pinf = point_at_infinity(curve("phi1"))
    assert pinf.exists and (pinf.r_inf, pinf.theta_inf) == (0, 1)
    x, y = pinf.cartesian
    assert (x.lo, x.hi, y.lo, y.hi) == (0, 0, 0, 0)


def test_p_infinity_phi3():
    pinf = point_at_infinity(curve("phi3"))
    assert (pinf.r_inf, pinf.theta_inf) == (1, 1)
    x, y = pinf.cartesian
    assert x.lo <= Fraction(math.cos(1)) + Fraction(1, 10**15) and Fraction(math.cos(1)) - Fraction(1, 10**15) <= x.hi
    assert abs(float(x.mid) - math.cos(1)) < 1e-15 and abs(float(y.mid) - math.sin(1)) < 1e-15
    assert x.hi - x.lo < Fraction(1, 2**60)


def test_p_infinity_phi4_absent():
    assert not point_at_infinity(curve("phi4")).exists


@st.composite
def bounded_functions(draw):
    # positive-definite denominators keep f bounded on the reals
    a = draw(st.integers(-4, 4))
    b = draw(st.integers(-4, 4))
    c = draw(st.integers(-4, 4))
    d = draw(st.integers(1, 5))
    e = draw(st.integers(0, 3))
    return prf(f"({a}*t^2+{b}*t+{c})/({d}*t^2+{e}*t+{d + e})")


@given(bounded_functions())
def test_limits_at_both_infinities_agree(f):
    assert limit_at(f, INF) == limit_at(f, -INF)


@given(bounded_functions(), st.integers(0, 2**32))
def test_extrema_enclose_values(f, seed):
    assert bounded_on_reals(f)
    e = global_extrema(f)
    rng = random.Random(seed)
    for _ in range(100):
        q = Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 100))
        v = f(q)
        assert compare_values(e.inf.value, v) <= 0 <= compare_values(e.sup.value, v)


@given(rational_functions())
def test_zero_and_pole_boxes_are_disjoint(f):
    z, p = zeros_and_poles(f)
    # exact roots are points; the others are refined isolating intervals
    spans = sorted((b.exact, b.exact) if b.exact is not None else
                   (lambda r: (r.lo, r.hi))(b.refine(Fraction(1, 2**30))) for b in z + p)
    for (_, hi), (lo, _) in zip(spans, spans[1:]):
        assert hi < lo
    for b in z:
        if b.exact is None and b.multiplicity % 2:
            assert (f.num.eval(b.lo) > 0) != (f.num.eval(b.hi) > 0)


def test_rational_value_of_exact_root():
    z, _ = zeros_and_poles(prf("(2*t-1)/(t^2+1)"))
    assert rational_value(z[0]) == Fraction(1, 2)
