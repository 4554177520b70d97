"""Matrix layer over exact scalars and its numeric twin."""

from fractions import Fraction

import numpy as np
import pytest

from qilab.field import (
    MPoly,
    RatFun,
    bareiss_nullspace,
    identity,
    inverse_exact,
    kron,
    mat_eq,
    mat_mul,
    nullspace_exact,
    np_op_on_slots,
    np_partial_trace,
    np_rank,
    np_residual,
    op_on_slots,
    partial_trace,
    rref,
    solve_unique,
)


def _frac_mat(rows):
    return [[MPoly.const(Fraction(x)) for x in row] for row in rows]


def test_op_on_slots_matches_kron_oracle():
    # a 4x4 operator on slots (0,1) of three qubits is M (x) I
    M = _frac_mat([[1, 2, 0, 0], [0, 1, 0, 0], [3, 0, 1, 0], [0, 0, 0, 2]])
    big = op_on_slots(M, (0, 1), [2, 2, 2])
    oracle = kron(M, identity(2))
    assert mat_eq(big, oracle)


def test_op_on_slots_reorders_slots():
    # acting on (1,0) must equal conjugation by the swap of the two factors
    M = _frac_mat([[0, 1, 0, 0], [2, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    got = op_on_slots(M, (1, 0), [2, 2])
    S = _frac_mat([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    oracle = mat_mul(mat_mul(S, M), S)
    assert mat_eq(got, oracle)


def test_partial_trace_of_product_state():
    A = _frac_mat([[1, 2], [3, 4]])
    B = _frac_mat([[5, 0], [0, 7]])
    big = kron(A, B)
    # tracing out a factor of a product leaves the other scaled by its trace
    tr_first = partial_trace(big, 0, [2, 2])
    assert mat_eq(tr_first, [[MPoly.const(5) * e for e in row] for row in B])
    tr_second = partial_trace(big, 1, [2, 2])
    assert mat_eq(tr_second, [[MPoly.const(12) * e for e in row] for row in A])


def test_rref_rank_and_nullspace():
    M = [[RatFun(1), RatFun(2)], [RatFun(2), RatFun(4)]]
    _, pivots = rref(M)
    assert len(pivots) == 1
    ns = nullspace_exact(M)
    assert len(ns) == 1
    v = ns[0]
    assert v[0] + 2 * v[1] == RatFun.zero() or 2 * v[0] + 4 * v[1] == RatFun.zero()


def test_bareiss_agrees_with_rref_nullspace():
    rows = [
        [Fraction(1, 2), Fraction(1), Fraction(0)],
        [Fraction(1), Fraction(2), Fraction(0)],
    ]
    M = [[RatFun(x) for x in row] for row in rows]
    ns1 = nullspace_exact(M)
    ns2 = bareiss_nullspace(rows)
    assert len(ns1) == len(ns2) == 2
    for v in ns2:
        for row in rows:
            assert sum(row[i] * v[i] for i in range(3)) == 0


def test_inverse_exact_round_trip():
    u = MPoly.var("u")
    h = MPoly.var("h")
    M = [[RatFun(u), RatFun(h)], [RatFun(h), RatFun(u)]]
    Minv = inverse_exact(M)
    prod = mat_mul(M, Minv)
    assert prod[0][0] == RatFun(1) and prod[1][1] == RatFun(1)
    assert prod[0][1].is_zero() and prod[1][0].is_zero()


def test_inverse_exact_rejects_singular():
    M = [[RatFun(1), RatFun(1)], [RatFun(1), RatFun(1)]]
    with pytest.raises(ZeroDivisionError):
        inverse_exact(M)


def test_solve_unique_and_underdetermined():
    A = [[RatFun(1), RatFun(1)], [RatFun(0), RatFun(1)]]
    b = [RatFun(3), RatFun(1)]
    x = solve_unique(A, b)
    assert x == [RatFun(2), RatFun(1)]
    Aund = [[RatFun(1), RatFun(1)]]
    with pytest.raises(ValueError):
        solve_unique(Aund, [RatFun(1)])


def test_np_op_on_slots_matches_exact_embedding():
    # same random integer matrix through both layers, entry by entry
    rng = np.random.default_rng(3)
    Mi = rng.integers(-3, 4, size=(4, 4))
    exact = op_on_slots(
        [[MPoly.const(int(x)) for x in row] for row in Mi], (0, 2), [2, 2, 2]
    )
    numeric = np_op_on_slots(Mi.astype(complex), (0, 2), [2, 2, 2])
    for i in range(8):
        for j in range(8):
            e = exact[i][j]
            val = float(e.as_fraction()) if isinstance(e, MPoly) else float(e)
            assert abs(val - numeric[i, j].real) < 1e-12
            assert abs(numeric[i, j].imag) < 1e-12


def test_np_identity_and_rank():
    pattern = np_op_on_slots(np.eye(4, dtype=complex), (0, 2), [2, 2, 2])
    assert np_residual(pattern, np.eye(8, dtype=complex)) < 1e-14
    assert np_rank(np.diag([1.0, 1e-3, 0.0]).astype(complex)) == 2
    tr = np_partial_trace(
        np.kron(np.eye(2, dtype=complex), np.eye(2, dtype=complex)), 1, [2, 2]
    )
    assert np_residual(tr, 2 * np.eye(2, dtype=complex)) < 1e-14


def test_np_partial_trace_dims():
    A = np.diag([1.0, 2.0]).astype(complex)
    B = np.array([[0, 1], [1, 0]], dtype=complex)
    tr0 = np_partial_trace(np.kron(A, B), 0, [2, 2])
    assert np_residual(tr0, 3 * B) < 1e-14
