"""Truncated bivariate series used for the additive degeneration."""

from fractions import Fraction

import pytest

from qilab.field import MPoly, RatFun, TruncSeries2, leading_form_ratio, series_of_poly


def test_geometric_inverse():
    # 1/(1 - u) = 1 + u + u^2 + ... up to the cutoff
    one = TruncSeries2.const(1, 5)
    u = TruncSeries2.var_u(5)
    inv = (one - u).inverse()
    expect = TruncSeries2(5, {(k, 0): 1 for k in range(5)})
    assert inv == expect


def test_inverse_requires_unit_constant_term():
    u = TruncSeries2.var_u(4)
    with pytest.raises(ZeroDivisionError):
        u.inverse()


def test_mul_truncates():
    u = TruncSeries2.var_u(3)
    h = TruncSeries2.var_h(3)
    p = (u + h) ** 3
    assert p.is_zero()


def test_min_total_degree_and_leading_form():
    u = TruncSeries2.var_u(6)
    h = TruncSeries2.var_h(6)
    s = u * h + u**3
    assert s.min_total_degree() == 2
    lead = s.leading_form()
    assert lead == MPoly.var("u") * MPoly.var("h")


def test_leading_form_ratio_matches_hand_limit():
    cut = 6
    u = TruncSeries2.var_u(cut)
    h = TruncSeries2.var_h(cut)
    num = u + u * h
    den = u + h + h * h
    got = leading_form_ratio(num, den)
    pu = MPoly.var("u")
    ph = MPoly.var("h")
    assert got == RatFun(pu, pu + ph)


def test_series_of_poly_expands_substitution():
    z = MPoly.var("z")
    q = MPoly.var("q")
    p = z * q - 1
    subs = {
        "z": TruncSeries2(4, {(0, 0): 1, (1, 0): 1}),
        "q": TruncSeries2(4, {(0, 0): 1, (0, 1): Fraction(1, 2)}),
    }
    s = series_of_poly(p, subs, 4)
    # (1+u)(1+h/2) - 1 = u + h/2 + u h/2
    expect = TruncSeries2(
        4, {(1, 0): 1, (0, 1): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    )
    assert s == expect
