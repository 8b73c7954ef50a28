import functools
import warnings

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polares import analyze
from polares.exactpoly import T
from polares.golden import CURVES, curve
from polares.parse import CurveValidationError, RationalFunction, make_curve

settings.register_profile(
    "polares", deadline=None, max_examples=30,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("polares")


@functools.lru_cache(maxsize=None)
def analyzed(name: str):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return analyze(curve(name))


@pytest.fixture(scope="session")
def golden():
    return {name: curve(name) for name in CURVES}


@pytest.fixture(scope="session")
def analysis():
    return analyzed


small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def polynomials(draw, max_degree=4, min_degree=0):
    deg = draw(st.integers(min_value=min_degree, max_value=max_degree))
    coeffs = draw(st.lists(small_ints, min_size=deg + 1, max_size=deg + 1))
    expr = sum(c * T**i for i, c in enumerate(coeffs))
    return expr


@st.composite
def rational_functions(draw, max_degree=4):
    num = draw(polynomials(max_degree, 1))
    den = draw(polynomials(max_degree))
    if den == 0:
        den = 1
    f = RationalFunction.make(num, den)
    if f.is_constant:
        f = RationalFunction.make(num + T, den)
    return f


@st.composite
def curves(draw, max_degree=4):
    r = draw(rational_functions(max_degree))
    th = draw(rational_functions(max_degree))
    try:
        return make_curve(r, th)
    except CurveValidationError:
        from hypothesis import assume
        assume(False)


@functools.lru_cache(maxsize=None)
def random_curves(n: int = 10, seed: int = 1) -> tuple:
    """``n`` proper curves with integer coefficients in [-3, 3], degree <= 4."""
    import random
    rng = random.Random(seed)

    def rpoly(deg):
        return sum(rng.randint(-3, 3) * T**i for i in range(deg + 1))

    out = []
    while len(out) < n:
        try:
            r = RationalFunction.make(rpoly(rng.randint(1, 4)), rpoly(rng.randint(0, 4)) or 1)
            th = RationalFunction.make(rpoly(rng.randint(1, 4)), rpoly(rng.randint(0, 4)) or 1)
            out.append(make_curve(r, th))
        except (CurveValidationError, ZeroDivisionError):
            continue
    return tuple(out)


@functools.lru_cache(maxsize=None)
def system_data(c):
    """(SystemPolys, Res_s(alpha, beta), Res_s(mu, nu), XiCurve) for a curve."""
    from polares.selfint import build_system_polys, xi_curves
    sp = build_system_polys(c)
    xi = xi_curves(sp)
    return sp, xi.res1, xi.res2, xi


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.RESULTS):
        terminalreporter.write_line(mod._line(i))
