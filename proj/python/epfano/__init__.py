"""Exceptional points and Fano-like line shapes of a driven oscillator pair."""

from ._epfano import (
    EffectiveModel,
    EpfanoError,
    ExceptionalPoint,
    Params,
    cross_section,
    default_settle_time,
    find_ep,
    find_extrema,
    integrate,
    locate_ep,
    max_branch_deviation,
    reduce,
    scan_eps,
    stationary_residual,
    t_matrix,
    trajectory,
)

__all__ = [
    "EffectiveModel",
    "EpfanoError",
    "ExceptionalPoint",
    "Params",
    "cross_section",
    "default_settle_time",
    "find_ep",
    "find_extrema",
    "integrate",
    "locate_ep",
    "max_branch_deviation",
    "reduce",
    "scan_eps",
    "stationary_residual",
    "t_matrix",
    "trajectory",
]
