"""Shorted operators, compatibility, matrix partial orders and weighted least squares."""

from ._core import (
    DimensionMismatch,
    Error,
    HypothesisViolated,
    Infeasible,
    NotPsd,
    ParseError,
    Tolerance,
    is_compatible,
    leq_left_minus,
    leq_minus,
    leq_star,
    leq_weighted_star,
    loewner_leq,
    minimize_quadratic,
    oblique_projection,
    orthonormal_basis,
    projection_set_member,
    rank_and_pinv,
    run_cli,
    schatten_norm,
    shorted_operator,
    shorted_schur_oracle,
    solve_operator_equation,
    suite_names,
    verify,
    w_inverse,
    weighted_schatten_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
