"""Evaluation configuration: tolerances, caps and budgets.

All modular evaluations are deterministic given an ``EvalConfig``.  The
overflow cap may be overridden through the ``MODTOP_CAP`` environment
variable (the cap is the largest admissible natural log of a single term;
anything above it certifies divergence by magnitude).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field


def _cap_from_env() -> float:
    raw = os.environ.get("MODTOP_CAP")
    if raw is None:
        return 690.0
    return float(raw)


@dataclass(frozen=True)
class EvalConfig:
    # absolute tolerance for quadrature-backed function modulars
    quad_tol: float = 1e-8
    # tolerance driving partial summation of custom-exponent tails
    series_tol: float = 1e-10
    # log-domain overflow cap; a single term with log above this is
    # certified infinite (exp(690) > 1e299)
    overflow_cap: float = field(default_factory=_cap_from_env)
    # adaptive quadrature cell budget per evaluation
    max_quad_cells: int = 1_000_000
    # term budget for partial summation of tails
    max_tail_terms: int = 1_000_000
    # empirical-ratio guard: ratios at least 1 - ratio_one_eps over a window
    # of ratio_window consecutive terms force an indeterminate verdict
    ratio_one_eps: float = 1e-12
    ratio_window: int = 10_000


DEFAULT_CONFIG = EvalConfig()
