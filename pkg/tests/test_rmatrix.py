"""The fundamental 4x4 solution: identities, degenerations, pole data."""

from fractions import Fraction

import pytest

from qilab.field import MPoly, RatFun, mat_eq, mat_mul
from qilab.rmatrix import (
    check_hexagon,
    check_intertwiner,
    check_inverse,
    check_pole_structure,
    check_ybe,
    check_yang,
    cleared_r,
    coproduct_action,
    limit_at,
    normalize,
    perm_p,
    pole_order_at,
    residue_limit,
    trig_r,
    yang_limit,
)

Q = RatFun.var("q")
Z = RatFun.var("z")


def test_entry_closed_forms():
    R = trig_r(Z)
    assert R[0][0] == RatFun(1)
    assert R[3][3] == RatFun(1)
    den = Z - Q**-2
    assert R[1][1] == Q**-1 * (Z - 1) / den
    assert R[2][2] == R[1][1]
    assert R[1][2] == (1 - Q**-2) / den
    assert R[2][1] == Z * (1 - Q**-2) / den
    assert R[0][1].is_zero() and R[3][0].is_zero()


def test_pole_argument_rejected():
    with pytest.raises(ZeroDivisionError):
        trig_r(Q**-2)


def test_unit_argument_is_permutation():
    R = trig_r(RatFun(1))
    P = [[RatFun(x) for x in row] for row in perm_p()]
    assert mat_eq(R, P)


def test_cleared_matches_scaled_normalized():
    z = MPoly.var("z")
    C = cleared_r(z, 1)
    corner = RatFun(C[0][0])
    R = trig_r(Z)
    for i in range(4):
        for j in range(4):
            assert RatFun(C[i][j]) == corner * R[i][j]


def test_normalize_round_trip():
    z = MPoly.var("z")
    C = [[RatFun(e) for e in row] for row in cleared_r(z, 1)]
    rows, factor = normalize(C)
    assert rows[0][0] == RatFun(1)
    assert mat_eq(rows, trig_r(Z))
    assert factor * C[0][0] == RatFun(1)


def test_ybe_passes_and_perturbation_fails():
    assert check_ybe().ok
    assert check_ybe(Fraction(2), Fraction(3), Fraction(5)).ok
    assert not check_ybe(perturb=True).ok


def test_yang_limit_golden():
    lim = yang_limit()
    u = MPoly.var("u")
    h = MPoly.var("h")
    s = u + h
    assert lim[1][1] == RatFun(u, s)
    assert lim[1][2] == RatFun(h, s)
    assert lim[2][1] == RatFun(h, s)
    assert lim[0][0] == RatFun(1)
    cr = check_yang()
    assert cr.ok
    assert not check_yang(perturb=True).ok


def test_pole_order_and_residue():
    f = RatFun(1) / ((Z - 1) ** 2)
    assert pole_order_at(f, "z", 1) == 2
    assert pole_order_at(Z - 1, "z", 1) == -1
    lim = limit_at(f, "z", 1, 2)
    assert lim == RatFun(1)
    with pytest.raises(ZeroDivisionError):
        limit_at(f, "z", 1, 1)


def test_residue_limit_rank_one():
    cr = check_pole_structure()
    assert cr.ok
    assert cr.details["pole_order"] == 1
    assert cr.details["rank"] == 1
    res = residue_limit()
    q = MPoly.var("q")
    assert res[1][1] == RatFun(1 - q * q, q)
    assert res[1][2] == RatFun(q * q - 1)
    assert res[2][1] == RatFun(q * q - 1, q * q)
    assert res[0][0].is_zero()


def test_inverse_identity():
    cr = check_inverse()
    assert cr.ok
    assert not check_inverse(perturb=True).ok


def test_hexagon():
    cr = check_hexagon()
    assert cr.ok
    assert not check_hexagon(perturb=True).ok


def test_intertwiner():
    cr = check_intertwiner()
    assert cr.ok
    assert not check_intertwiner(perturb=True).ok


def test_coproduct_action_shape():
    acts = coproduct_action()
    # one matrix per generator, all 4x4
    assert len(acts) >= 2
    for M in acts.values() if isinstance(acts, dict) else acts:
        assert len(M) == 4 and all(len(row) == 4 for row in M)
