"""Adaptive quadrature with graded refinement toward singular endpoints.

Plain adaptive Simpson on each cell with the usual |S_fine - S_coarse|/15
error estimate; cells are bisected until the local estimate fits the budget
share.  A shared cell counter enforces the global budget so an evaluation
can never silently spin; exhausting it raises ``BudgetExhausted`` and the
caller downgrades the verdict instead of reporting a wrong finite value.
"""

from __future__ import annotations

from dataclasses import dataclass


class BudgetExhausted(Exception):
    def __init__(self, partial: float):
        super().__init__("quadrature cell budget exhausted")
        self.partial = partial


@dataclass
class _Budget:
    cells: int

    def spend(self):
        self.cells -= 1
        if self.cells < 0:
            raise BudgetExhausted(0.0)


def _simpson(f, a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, tol, budget, whole):
    budget.spend()
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(f, a, m, fa, flm, fm)
    right = _simpson(f, m, b, fm, frm, fb)
    err = (left + right - whole) / 15.0
    if abs(err) <= tol or (b - a) < 1e-15:
        return left + right + err, abs(err)
    vl, el = _adaptive(f, a, m, fa, flm, fm, tol / 2.0, budget, left)
    vr, er = _adaptive(f, m, b, fm, frm, fb, tol / 2.0, budget, right)
    return vl + vr, el + er


def integrate(f, a, b, tol, budget: _Budget):
    """Adaptive Simpson of f on [a, b] to absolute tolerance ``tol``.

    Returns (value, error_estimate); raises BudgetExhausted on overrun.
    """
    if b <= a:
        return 0.0, 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(f, a, b, fa, fm, fb)
    try:
        return _adaptive(f, a, b, fa, fm, fb, tol, budget, whole)
    except RecursionError:
        raise BudgetExhausted(0.0)


def integrate_graded(f, a, b, tol, budget: _Budget, singular_at_a: bool,
                     vanishing_bound=None):
    """Integrate on (a, b) with dyadic grading (ratio 1/2) toward ``a``.

    ``vanishing_bound(x)`` must upper-bound |f| on (a, x]; the graded march
    stops once the remaining sliver is certified below its tolerance share.
    Without a bound the march continues to floating-point exhaustion.
    """
    if b <= a:
        return 0.0, 0.0
    if not singular_at_a:
        return integrate(f, a, b, tol, budget)
    total = 0.0
    err = 0.0
    hi = b
    share = 0.5 * tol
    remainder_share = tol - share
    while True:
        lo = a + 0.5 * (hi - a)
        width_left = lo - a
        if vanishing_bound is not None:
            rest = width_left * vanishing_bound(lo)
            if rest <= remainder_share:
                v, e = integrate(f, lo, hi, share, budget)
                total += v
                err += e + rest
                return total, err
        if width_left < 1e-300 or lo == hi:
            v, e = integrate(f, lo, hi, share, budget)
            return total + v, err + e
        v, e = integrate(f, lo, hi, share * 0.5, budget)
        total += v
        err += e
        share *= 0.5
        hi = lo


def new_budget(cells: int) -> _Budget:
    return _Budget(cells)
