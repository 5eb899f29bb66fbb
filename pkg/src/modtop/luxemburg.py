"""Luxemburg norm and Minkowski functionals by monotone bracketing.

The map lam -> rho(x / lam) is nonincreasing (convexity plus rho(0) = 0),
so the norm inf{lam > 0 : rho(x/lam) <= 1} is found by doubling/halving to
bracket the threshold and then bisecting.  An infinite modular counts as
"above threshold"; an indeterminate one aborts the solve, because guessing
a side would silently corrupt the norm.

The infimum need not be attained: left-continuity only guarantees
rho(x / ||x||) <= 1, and there are exponents for which rho(x / lam) is
infinite for every lam below the norm while the norm itself is finite.
The reported value is the bracket midpoint; no claim is made that the
modular at the norm is strictly below 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import NormUncertainError, NotInModularSpaceError
from .exponents import ExponentSpec
from .modular import ModularValue, scaled_modular

PROBE_EXP = 60  # bracketing probes cover lam in [2^-60, 2^60]
MAX_EVALS = 200

IN_SPACE = "InSpace"
NOT_IN_SPACE = "NotInSpaceWithinProbe"


@dataclass(frozen=True)
class NormResult:
    value: float
    bracket_width: float
    evals_used: int
    membership: str = IN_SPACE

    def to_json(self):
        return {"value": self.value, "bracket_width": self.bracket_width,
                "evals_used": self.evals_used, "membership": self.membership}


def _threshold_infimum(x, p: ExponentSpec, r: float, tol: float,
                       cfg: EvalConfig) -> NormResult:
    evals = 0

    def above(lam: float) -> bool:
        nonlocal evals
        evals += 1
        if evals > MAX_EVALS:
            raise NormUncertainError("modular evaluation budget exhausted")
        verdict = scaled_modular(x, p, 1.0 / lam, cfg).exceeds(r)
        if verdict is None:
            raise NormUncertainError(
                f"indeterminate modular at lam={lam} blocks the bisection")
        return verdict

    hi = 1.0
    while above(hi):
        hi *= 2.0
        if hi > 2.0 ** PROBE_EXP:
            raise NotInModularSpaceError(
                f"rho(x/lam) stays above {r} for lam up to 2^{PROBE_EXP}",
                partial_result=NormResult(hi, math.inf, evals, NOT_IN_SPACE))
    lo = hi / 2.0 if hi > 1.0 else 0.5
    if hi == 1.0:
        while not above(lo):
            hi = lo
            lo /= 2.0
            if lo < 2.0 ** -PROBE_EXP:
                # norm is below the probe floor; report the tiny bracket
                return NormResult(hi, hi, evals)
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if above(mid):
            lo = mid
        else:
            hi = mid
    return NormResult(0.5 * (lo + hi), hi - lo, evals)


def luxemburg_norm(x, p: ExponentSpec, tol: float = 1e-10,
                   cfg: EvalConfig = DEFAULT_CONFIG) -> NormResult:
    """Norm of x: the Minkowski functional of the unit modular ball."""
    if getattr(x, "is_zero", False):
        return NormResult(0.0, 0.0, 0)
    return _threshold_infimum(x, p, 1.0, tol, cfg)


def minkowski_functional(x, p: ExponentSpec, r: float, tol: float = 1e-10,
                         cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """inf{lam > 0 : rho(x/lam) <= r}; coincides with the norm at r = 1."""
    if r <= 0:
        raise ValueError("threshold must be positive")
    if getattr(x, "is_zero", False):
        return 0.0
    return _threshold_infimum(x, p, r, tol, cfg).value


@dataclass(frozen=True)
class NormModularReport:
    norm: float
    modular: ModularValue
    unit_scaling_ok: bool       # rho(x/||x||) <= 1 + tol
    unit_ball_equiv_ok: bool    # rho(x) <= 1  iff  ||x|| <= 1, up to tol
    norm_dominates_ok: bool     # ||x|| <= 1 implies rho(x) <= ||x|| + tol
    vacuous: bool = False

    @property
    def all_ok(self) -> bool:
        return self.unit_scaling_ok and self.unit_ball_equiv_ok and self.norm_dominates_ok

    def to_json(self):
        return {"norm": self.norm, "modular": self.modular.to_json(),
                "unit_scaling_ok": self.unit_scaling_ok,
                "unit_ball_equiv_ok": self.unit_ball_equiv_ok,
                "norm_dominates_ok": self.norm_dominates_ok,
                "vacuous": self.vacuous, "all_ok": self.all_ok}


def verify_norm_modular_relations(x, p: ExponentSpec, tol: float = 1e-8,
                                  cfg: EvalConfig = DEFAULT_CONFIG) -> NormModularReport:
    """Check the norm/modular relations on a concrete vector.

    The equivalence check only fails on a clear violation: one side well
    inside the unit ball while the other is well outside.
    """
    rho = scaled_modular(x, p, 1.0, cfg)
    if rho.is_indeterminate:
        raise NormUncertainError("modular of x is indeterminate")
    if getattr(x, "is_zero", False):
        return NormModularReport(0.0, rho, True, True, True, vacuous=True)
    res = luxemburg_norm(x, p, min(tol, 1e-10), cfg)
    nrm = res.value

    # probe just above the bracket: the infimum may not be attained, and the
    # modular can jump straight to infinity below the norm
    lam = nrm + res.bracket_width
    at_unit = scaled_modular(x, p, 1.0 / max(lam, 1e-300), cfg)
    unit_scaling_ok = at_unit.is_finite and at_unit.value <= 1.0 + tol

    rho_small = (not rho.is_infinite) and rho.value <= 1.0 + tol
    norm_small = nrm <= 1.0 + tol
    rho_big = rho.is_infinite or rho.value > 1.0 - tol
    norm_big = nrm > 1.0 - tol
    unit_ball_equiv_ok = (rho_small or norm_big) and (norm_small or rho_big)

    if nrm <= 1.0 + tol:
        norm_dominates_ok = (not rho.is_infinite) and rho.value <= nrm + tol
    else:
        norm_dominates_ok = True
    return NormModularReport(nrm, rho, unit_scaling_ok, unit_ball_equiv_ok,
                             norm_dominates_ok)
