"""Monodromy, transfer matrices, and their exchange identities."""

from fractions import Fraction

import numpy as np
import pytest

from qilab.chain import (
    ChainSpec,
    check_commute,
    check_multiplicativity,
    check_rtt,
    numeric_r,
    parse_complex,
    sample_point,
    transfer_cleared,
    transfer_numeric,
    vacuum_functions,
)
from qilab.field import MPoly


def test_parse_complex_forms():
    assert parse_complex("3/4") == 0.75
    assert parse_complex("2") == 2.0
    assert abs(parse_complex("0.83+0.21*i") - (0.83 + 0.21j)) < 1e-15
    assert abs(parse_complex("i") - 1j) < 1e-15
    assert abs(parse_complex("1-2i") - (1 - 2j)) < 1e-15


def test_spec_schema():
    s = ChainSpec.from_json({"L": 2, "q": "3/5"})
    assert s.L == 2 and s.sites == ("1", "1") and s.twist == "u"
    with pytest.raises(ValueError):
        ChainSpec.from_json({"q": "2"})
    with pytest.raises(ValueError):
        ChainSpec.from_json({"L": 1, "bogus": 1})
    with pytest.raises(ValueError):
        ChainSpec.from_json({"L": 2, "sites": ["1"]})


def test_spec_exact_accessors():
    s = ChainSpec.from_json({"L": 1, "q": "2", "twist": "3"})
    assert not s.q_is_symbolic()
    assert s.q_fraction() == 2
    assert s.twist_fraction() == 3
    sym = ChainSpec.from_json({"L": 1})
    assert sym.q_is_symbolic() and sym.twist_is_symbolic()


def test_l1_transfer_golden_strings():
    # diagonal of the cleared 2x2 transfer at L=1, fully symbolic
    s = ChainSpec.from_json({"L": 1})
    T = transfer_cleared(s, MPoly.var("z"))
    assert str(T[0][0]) == "z*u^2*q^2 + z*q - u^2 - q"
    assert str(T[1][1]) == "z*u^2*q + z*q^2 - u^2*q - 1"
    assert T[0][1].is_zero() and T[1][0].is_zero()


def test_vacuum_functions_golden():
    s = ChainSpec.from_json({"L": 1})
    a, d = vacuum_functions(s)
    assert str(a) == "1"
    assert str(d) == "(z*q - q)/(z*q^2 - 1)"


def test_numeric_r_unitarity_point():
    q = 0.7 + 0.1j
    z = 1.3 - 0.2j
    R = numeric_r(z, q)
    P = np.zeros((4, 4), dtype=complex)
    for pair in ((0, 0), (1, 2), (2, 1), (3, 3)):
        P[pair] = 1
    Rb = P @ numeric_r(1 / z, q) @ P
    assert np.max(np.abs(R @ Rb - np.eye(4))) < 1e-12


def test_sample_point_respects_guards():
    s = ChainSpec.from_json({"L": 2, "q": "0.83+0.21*i", "twist": "0.64+0.13*i"})
    rng = np.random.default_rng(0)
    qinv2 = 1 / s.q_complex() ** 2
    for _ in range(10):
        z = sample_point(s, rng)
        assert 0.4 < abs(z) < 1.6
        for l in range(s.L):
            zeta = z * s.a_complex() / s.site_complex(l)
            assert abs(zeta - qinv2) > 1e-3


def test_rtt_exact_small_l():
    for L in (1, 2):
        s = ChainSpec.from_json({"L": L, "q": "3/5"})
        assert check_rtt(s, mode="exact").ok
    assert not check_rtt(ChainSpec.from_json({"L": 2, "q": "3/5"}), mode="exact", perturb=True).ok


def test_rtt_numeric():
    s = ChainSpec.from_json({"L": 4, "q": "0.83+0.21*i", "twist": "0.64+0.13*i"})
    cr = check_rtt(s, mode="numeric")
    assert cr.ok and cr.details["residual"] < 1e-10
    assert not check_rtt(s, mode="numeric", perturb=True).ok


def test_commute_exact_and_numeric():
    for L in (2, 3):
        s = ChainSpec.from_json({"L": L, "q": "3/5"})
        assert check_commute(s, mode="exact").ok
        assert not check_commute(s, mode="exact", perturb=True).ok
    s8 = ChainSpec.from_json({"L": 8, "q": "0.83+0.21*i", "twist": "0.64+0.13*i"})
    cr = check_commute(s8, mode="numeric")
    assert cr.ok and cr.details["residual"] < 1e-10
    assert not check_commute(s8, mode="numeric", perturb=True).ok


def test_commute_perturb_needs_two_sites():
    s = ChainSpec.from_json({"L": 1, "q": "2"})
    with pytest.raises(ValueError):
        check_commute(s, perturb=True)


def test_commute_inhomogeneous_exact():
    s = ChainSpec.from_json({"L": 2, "q": "3/5", "sites": ["1", "2"]})
    assert check_commute(s, mode="exact").ok


def test_multiplicativity_exact_and_numeric():
    for L in (1, 2):
        s = ChainSpec.from_json({"L": L, "q": "3/5"})
        assert check_multiplicativity(s, mode="exact").ok
    s = ChainSpec.from_json({"L": 2, "q": "3/5"})
    assert not check_multiplicativity(s, mode="exact", perturb=True).ok
    s5 = ChainSpec.from_json({"L": 5, "q": "0.83+0.21*i", "twist": "0.64+0.13*i"})
    cr = check_multiplicativity(s5, mode="numeric")
    assert cr.ok and cr.details["residual"] < 1e-10
    assert not check_multiplicativity(s5, mode="numeric", perturb=True).ok


def test_transfer_numeric_matches_cleared_at_rational_point():
    # same object through the exact and numeric pipelines, up to the
    # cleared scalar u * prod(corner_l)
    s = ChainSpec.from_json({"L": 2, "q": "2", "twist": "3"})
    z0 = Fraction(5, 7)
    T = transfer_cleared(s, MPoly.const(z0))
    q = 2.0
    u = 3.0
    corner = (q * q * float(z0) - 1) ** 2
    Tn = transfer_numeric(s, complex(z0))
    H = 4
    for i in range(H):
        for j in range(H):
            exact_val = float(T[i][j].eval_fraction({}) if not T[i][j].is_zero() else 0)
            assert abs(exact_val - u * corner * Tn[i, j].real) < 1e-9
            assert abs(Tn[i, j].imag) < 1e-12
