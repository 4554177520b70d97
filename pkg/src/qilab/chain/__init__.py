"""Twisted inhomogeneous chains: transfer matrices, spectra, root systems."""

from .model import (
    ChainSpec,
    check_commute,
    check_multiplicativity,
    check_rtt,
    monodromy_cleared,
    monodromy_numeric,
    numeric_r,
    parse_complex,
    sample_point,
    transfer_cleared,
    transfer_numeric,
    vacuum_functions,
)
from .spectrum import (
    Branch,
    Spectrum,
    check_bethe,
    check_tq,
    compute_spectrum,
    functional_residual,
    poly_roots,
    refine_roots,
    root_residuals,
    shift_terms,
    solve_q,
    solve_roots_newton,
    solve_shift_poly,
)
from .model import vacuum_eigs
from .spectrum import bethe_check, bethe_solve

__all__ = [
    "ChainSpec",
    "check_commute",
    "check_multiplicativity",
    "check_rtt",
    "monodromy_cleared",
    "monodromy_numeric",
    "numeric_r",
    "parse_complex",
    "sample_point",
    "transfer_cleared",
    "transfer_numeric",
    "vacuum_functions",
    "Branch",
    "Spectrum",
    "check_bethe",
    "check_tq",
    "compute_spectrum",
    "functional_residual",
    "poly_roots",
    "refine_roots",
    "root_residuals",
    "shift_terms",
    "solve_q",
    "solve_roots_newton",
    "solve_shift_poly",
    "vacuum_eigs",
    "bethe_check",
    "bethe_solve",
]
