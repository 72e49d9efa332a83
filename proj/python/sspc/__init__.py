"""Semismooth predictor-corrector MPC (Python bindings)."""

from ._sspc import (
    PrimalDualPoint,
    Problem,
    SspcConfig,
    check_derivatives,
    fb,
    load_config,
    parse_config,
    make_problem,
    problem_names,
    simulate,
    solve_dare,
    solve_to_convergence,
    step,
    residual_norm,
    sweep_ell,
)

__all__ = [
    "PrimalDualPoint",
    "Problem",
    "SspcConfig",
    "check_derivatives",
    "fb",
    "load_config",
    "parse_config",
    "make_problem",
    "problem_names",
    "simulate",
    "solve_dare",
    "solve_to_convergence",
    "step",
    "residual_norm",
    "sweep_ell",
]
