"""Exact arithmetic core: polynomials, rational functions, series, matrices."""

from .poly import MPoly, NotDivisible, normalize_var, poly_gcd, var_rank
from .ratfun import ParseError, RatFun
from .series import TruncSeries2, leading_form_ratio, series_of_poly
from .linalg import (
    RFMatrix,
    bareiss_nullspace,
    identity,
    inverse_exact,
    kron,
    mat_add,
    mat_eq,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_transpose,
    nullspace_exact,
    np_nullspace,
    np_op_on_slots,
    np_partial_trace,
    np_rank,
    np_residual,
    op_on_slots,
    partial_trace,
    rref,
    solve_unique,
)

__all__ = [
    "MPoly",
    "NotDivisible",
    "normalize_var",
    "poly_gcd",
    "var_rank",
    "ParseError",
    "RatFun",
    "TruncSeries2",
    "leading_form_ratio",
    "series_of_poly",
    "RFMatrix",
    "bareiss_nullspace",
    "identity",
    "inverse_exact",
    "kron",
    "mat_add",
    "mat_eq",
    "mat_mul",
    "mat_scale",
    "mat_sub",
    "mat_transpose",
    "nullspace_exact",
    "np_nullspace",
    "np_op_on_slots",
    "np_partial_trace",
    "np_rank",
    "np_residual",
    "op_on_slots",
    "partial_trace",
    "rref",
    "solve_unique",
]
