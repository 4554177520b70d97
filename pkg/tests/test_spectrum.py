"""Joint eigenbranches, shift-identity polynomials, root systems."""

from fractions import Fraction

import numpy as np
import pytest

from qilab.chain import (
    Branch,
    ChainSpec,
    check_bethe,
    check_tq,
    compute_spectrum,
    functional_residual,
    poly_roots,
    refine_roots,
    root_residuals,
    shift_terms,
    solve_roots_newton,
    solve_shift_poly,
)

L1 = ChainSpec.from_json({"L": 1, "q": "2", "twist": "3"})
L2 = ChainSpec.from_json({"L": 2, "q": "0.83+0.21*i", "twist": "0.64+0.13*i"})


def test_branch_count_and_sectors():
    sp = compute_spectrum(L1)
    assert len(sp.branches) == 2
    assert sorted(b.sector for b in sp.branches) == [0, 1]
    sp2 = compute_spectrum(L2)
    assert len(sp2.branches) == 4
    assert sorted(b.sector for b in sp2.branches) == [0, 1, 1, 2]


def test_branches_are_rational_in_z():
    sp = compute_spectrum(L2)
    for b in sp.branches:
        assert b.fit_residual < 1e-8
        assert len(b.ncoeffs) == L2.L + 1


def test_l1_golden_root():
    # at q=2, u=3 the one-excitation state has its root at exactly 7/34
    sp = compute_spectrum(L1)
    branch = next(b for b in sp.branches if b.sector == 1)
    coeffs = solve_shift_poly(sp, branch)
    roots = refine_roots(coeffs, poly_roots(coeffs))
    assert len(roots) == 1
    assert abs(roots[0] - float(Fraction(7, 34))) < 1e-10
    rr = root_residuals(L1, 1, roots)
    assert max(rr) < 1e-12


def test_shift_terms_weights():
    t1, t2 = shift_terms(L1, 1, 0.9 + 0.1j)
    # first weight u q^m, second u^-1 q^-m d(z)
    assert abs(t1 - 3 * 2) < 1e-12
    assert t2 != 0


def test_vacuum_polynomial_is_constant():
    sp = compute_spectrum(L1)
    vac = next(b for b in sp.branches if b.sector == 0)
    coeffs = solve_shift_poly(sp, vac)
    assert len(coeffs) == 1
    assert abs(coeffs[0] - 1) < 1e-12
    assert functional_residual(sp, vac, coeffs) < 1e-10


def test_garbage_branch_has_no_polynomial():
    sp = compute_spectrum(L1)
    branch = next(b for b in sp.branches if b.sector == 1)
    bad = Branch(
        sector=1,
        ncoeffs=tuple(c * 1.37 + 0.1 for c in branch.ncoeffs),
        fit_residual=branch.fit_residual,
        lam0=branch.lam0,
    )
    with pytest.raises(RuntimeError):
        solve_shift_poly(sp, bad)


def test_degenerate_family_is_refused():
    flat = ChainSpec.from_json({"L": 2, "q": "1", "twist": "0.64+0.13*i"})
    with pytest.raises(RuntimeError):
        compute_spectrum(flat)


def test_check_tq_l2():
    cr = check_tq(L2)
    assert cr.ok
    assert cr.details["branches"] == 4
    assert cr.details["per_sector"] == {"0": 1, "1": 2, "2": 1}
    assert cr.details["worst_functional_residual"] < 1e-8
    assert cr.details["worst_root_residual"] < 1e-8
    assert not check_tq(L2, perturb=True).ok


def test_check_tq_sector_filter():
    cr = check_tq(L2, sector=1)
    solved = cr.details["solved"]
    assert [e["sector"] for e in solved] == [1, 1]
    assert cr.ok


def test_check_bethe_newton_agreement():
    cr = check_bethe(L2, 1)
    assert cr.ok
    for entry in cr.details["branches"]:
        assert entry["newton_matches"]
        assert entry["newton_final_residual"] < 1e-8
    assert not check_bethe(L2, 1, perturb=True).ok
    with pytest.raises(ValueError):
        check_bethe(L2, 5)


def test_newton_basin_from_perturbed_start():
    sp = compute_spectrum(L2)
    branch = next(b for b in sp.branches if b.sector == 1)
    coeffs = solve_shift_poly(sp, branch)
    roots = refine_roots(coeffs, poly_roots(coeffs))
    start = [w * 1.01 for w in roots]
    solved, final = solve_roots_newton(L2, 1, start)
    assert final < 1e-10
    assert min(abs(solved[0] - w) for w in roots) < 1e-8


def test_seed_invariance_of_branches():
    # the recovered rational functions do not depend on the sample seed
    a = compute_spectrum(L2, seed=0)
    b = compute_spectrum(L2, seed=5)
    zt = 1.7 + 0.3j

    def profile(sp):
        return sorted(
            (br.sector, round(sp.lam(br, zt).real, 7), round(sp.lam(br, zt).imag, 7))
            for br in sp.branches
        )

    assert profile(a) == profile(b)
