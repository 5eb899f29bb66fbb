"""Certified evaluation of variable-exponent modulars.

``eval_seq_modular`` computes sum_j |x_j|^{p_j} for run/tail vectors and
``eval_fun_modular`` computes the integral of |u(x)|^{p(x)} for piecewise
functions.  Results are extended nonnegative values wrapped in a
``ModularValue``: finite values carry an absolute error bound, infinite
values carry a machine-checkable divergence certificate, and anything the
tail rules cannot certify comes back indeterminate with a partial lower
bound.  An indeterminate verdict is never coerced; callers must branch.

Divergence certificates come in three kinds:

* nondecreasing terms: a window of term logs, all at least log(delta) and
  nondecreasing, for a tail whose terms provably stay that way;
* overflow: a single term whose natural log exceeds the configured cap;
* analytic comparison: a named rule with parameters (e.g. the integrand
  dominates 1/2 + 1/x near 0, or catalog steps dominate a harmonic tail).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import (DomainMismatchError, EmptySetError, IncompatibleTailError,
                     InvalidExponentError)
from .exponents import (AffineExponent, CustomExponent, ExponentSpec,
                        FunctionExponent, PiecewiseConstExponent,
                        ReciprocalExponent, SequenceExponent, TableExponent)
from .functions import CatalogVTail, PiecewiseConstFunction
from .quadrature import BudgetExhausted, integrate, integrate_graded, new_budget
from .sequences import SequenceVec

NONDECREASING = "terms-eventually-nondecreasing-and-ge-delta"
OVERFLOW = "overflow-cap-exceeded"
ANALYTIC = "analytic-comparison"

_WINDOW = 16


@dataclass(frozen=True)
class NondecreasingTermsCertificate:
    """Terms from ``start_index`` on are >= delta and nondecreasing.

    ``window`` samples (index, log_term) pairs; re-deriving the same logs
    from the inputs and checking the two facts validates the certificate.
    """

    delta: float
    start_index: int
    window: tuple[tuple[int, float], ...]
    note: str = ""
    kind: str = NONDECREASING

    def check_window(self, log_term_at=None, tol: float = 1e-9) -> bool:
        logs = [lt for _, lt in self.window]
        if log_term_at is not None:
            logs = [log_term_at(n) for n, _ in self.window]
        floor = math.log(self.delta)
        ok = all(lt >= floor - tol for lt in logs)
        ok &= all(b >= a - tol for a, b in zip(logs, logs[1:]))
        return ok

    def to_json(self):
        return {"kind": self.kind, "delta": self.delta,
                "start_index": self.start_index,
                "window": [[n, lt] for n, lt in self.window],
                "note": self.note}


@dataclass(frozen=True)
class OverflowCertificate:
    """A single term's natural log exceeded the overflow cap."""

    location: float
    log_term: float
    cap: float
    kind: str = OVERFLOW

    def check_window(self, log_term_at=None, tol: float = 1e-9) -> bool:
        return self.log_term > self.cap

    def to_json(self):
        return {"kind": self.kind, "location": self.location,
                "log_term": self.log_term, "cap": self.cap}


@dataclass(frozen=True)
class AnalyticComparisonCertificate:
    """Named comparison rule certifying divergence.

    Rules:
      theta-exceeds-half-plus-reciprocal: theta^(1/x) >= 1/2 + 1/x on
        (0, x_star], checked via the two stored inequalities at x_star.
      catalog-steps-dominate-harmonic: step n integral >= coef^n/(n+1)
        with coef >= 1, hence a divergent harmonic minorant.
      constant-tail-term-floor: |c| >= 1 and p >= 1 force every tail term
        above 1, with no monotonicity claim.
    """

    rule: str
    params: dict = field(default_factory=dict)
    kind: str = ANALYTIC

    def check(self) -> bool:
        p = self.params
        if self.rule == "theta-exceeds-half-plus-reciprocal":
            theta, xs = p["theta"], p["x_star"]
            t = 1.0 / xs
            lhs_log = t * math.log(theta)
            cond_value = lhs_log >= math.log(0.5 + t)
            cond_monotone = lhs_log + math.log(math.log(theta)) >= 0.0
            return cond_value and cond_monotone
        if self.rule == "catalog-steps-dominate-harmonic":
            return p["coef"] >= 1.0 and p["start_n"] >= 1
        if self.rule == "constant-tail-term-floor":
            return p["c"] >= 1.0
        return False

    def to_json(self):
        return {"kind": self.kind, "rule": self.rule, "params": dict(self.params)}


Certificate = (NondecreasingTermsCertificate | OverflowCertificate |
               AnalyticComparisonCertificate)


@dataclass(frozen=True)
class ModularValue:
    """Extended nonnegative modular with an explicit verdict."""

    verdict: str  # "finite" | "infinite" | "indeterminate"
    value: float = 0.0  # finite value, or partial lower bound
    error_bound: float = 0.0
    certificate: Certificate | None = None
    reason: str = ""

    @classmethod
    def finite(cls, value: float, error_bound: float = 0.0) -> "ModularValue":
        if value < 0 or error_bound < 0:
            raise ValueError("finite modular values and error bounds are nonnegative")
        return cls("finite", float(value), float(error_bound))

    @classmethod
    def infinite(cls, certificate: Certificate) -> "ModularValue":
        if certificate is None:
            raise ValueError("infinite verdicts require a certificate")
        return cls("infinite", math.inf, 0.0, certificate)

    @classmethod
    def indeterminate(cls, partial: float, reason: str) -> "ModularValue":
        return cls("indeterminate", float(partial), 0.0, None, reason)

    @property
    def is_finite(self) -> bool:
        return self.verdict == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.verdict == "infinite"

    @property
    def is_indeterminate(self) -> bool:
        return self.verdict == "indeterminate"

    def exceeds(self, threshold: float) -> bool | None:
        """Definitive comparison against a threshold, None when unknowable."""
        if self.is_infinite:
            return True
        if self.is_finite:
            return self.value > threshold
        if self.value > threshold:  # partial lower bound already above
            return True
        return None

    def to_json(self):
        if self.is_finite:
            return {"verdict": "finite", "value": self.value,
                    "error_bound": self.error_bound}
        if self.is_infinite:
            return {"verdict": "infinite", "value": "inf",
                    "certificate": self.certificate.to_json()}
        return {"verdict": "indeterminate", "partial_lower_bound": self.value,
                "reason": self.reason}


# ---------------------------------------------------------------------------
# sequence modulars
# ---------------------------------------------------------------------------

_CHUNK = 1 << 15


def _run_sum(p: SequenceExponent, start: int, stop: int, abs_v: float,
             cfg: EvalConfig):
    """Sum |v|^{p_j} over j in [start, stop]; None signals overflow."""
    if abs_v == 0.0:
        return 0.0, 0.0, None
    if abs_v == 1.0:
        return float(stop - start + 1), 0.0, None
    log_v = math.log(abs_v)
    total = 0.0
    lo = start
    while lo <= stop:
        hi = min(lo + _CHUNK - 1, stop)
        logs = p.values(lo, hi) * log_v
        peak = float(logs.max())
        if peak > cfg.overflow_cap:
            where = lo + int(np.argmax(logs))
            return None, peak, where
        total += float(np.exp(logs).sum())
        lo = hi + 1
    err = (stop - start + 1) * np.finfo(float).eps * max(total, 1.0)
    return total, err, None


def _tail_nondecreasing_cert(p: SequenceExponent, c: float, start: int) -> NondecreasingTermsCertificate:
    logs = p.values(start, start + _WINDOW - 1) * math.log(c) if c != 1.0 \
        else np.zeros(_WINDOW)
    window = tuple((start + i, float(logs[i])) for i in range(_WINDOW))
    return NondecreasingTermsCertificate(
        delta=math.exp(float(logs[0])), start_index=start,
        window=window, note=f"constant tail |c|={c}")


def _custom_tail_sum(p: CustomExponent, c: float, start: int, cfg: EvalConfig):
    """Partial summation with the empirical-ratio stop rule.

    Terms |c|^{p_n} for a nondecreasing exponent are nonincreasing; summation
    stops once the current term falls below series_tol * (1 - ratio), with a
    headroomed geometric extrapolation charged to the error bound.  The
    extrapolation leans on the declared growth class (a plateauing exponent
    cannot be ruled out by finitely many terms); a ratio pinned at 1 across
    a whole window, or an exhausted budget, yields indeterminate instead.
    """
    log_c = math.log(c)
    total = 0.0
    prev = None
    near_one = 0
    n = start
    remaining = cfg.max_tail_terms
    while remaining > 0:
        count = min(_CHUNK, remaining)
        terms = np.exp(p.values(n, n + count - 1) * log_c)
        for i in range(count):
            t = float(terms[i])
            if prev is None:
                if t == 0.0:
                    return None, total, \
                        "tail underflows at its first term; decay rate unobservable"
            elif prev > 0.0:
                r = t / prev
                if r >= 1.0 - cfg.ratio_one_eps:
                    near_one += 1
                    if near_one >= cfg.ratio_window:
                        return None, total + t, \
                            "empirical ratio pinned at 1 over the guard window"
                else:
                    near_one = 0
                if r < 1.0 and t < cfg.series_tol * (1.0 - r):
                    total += t
                    # geometric extrapolation of the remainder; ratios of
                    # slowly decaying tails keep creeping toward 1, so the
                    # plain extrapolation gets an 8x headroom factor
                    rest = 8.0 * t * r / (1.0 - r) if r > 0.0 else 0.0
                    fp = (n + i - start + 1) * np.finfo(float).eps * max(total, 1.0)
                    return total, rest + fp, None
            total += t
            prev = t
        remaining -= count
        n += count
    return None, total, "tail term budget exhausted before certification"


def eval_seq_modular(x: SequenceVec, p: ExponentSpec,
                     cfg: EvalConfig = DEFAULT_CONFIG) -> ModularValue:
    """Modular of a run/tail vector: sum of |x_j|^{p_j}.

    Runs are summed in looped/closed form; the tail goes through the
    summability rule table keyed on the exponent's growth class.
    """
    if not isinstance(p, SequenceExponent):
        raise DomainMismatchError("sequence vector needs a sequence exponent")
    if isinstance(p, TableExponent):
        x.check_against_dimension(p.dimension)

    total = 0.0
    err = 0.0
    for s, e, v in x.runs:
        if isinstance(p, TableExponent) and v == 0.0:
            continue
        stop = min(e, p.dimension) if isinstance(p, TableExponent) else e
        got, extra, where = _run_sum(p, s, stop, abs(v), cfg)
        if got is None:
            return ModularValue.infinite(OverflowCertificate(
                location=float(where), log_term=extra, cap=cfg.overflow_cap))
        total += got
        err += extra

    c = abs(x.tail)
    if c == 0.0 or isinstance(p, TableExponent):
        return ModularValue.finite(total, err)

    start = x.tail_start
    if c >= 1.0:
        if p.monotone or c == 1.0:
            return ModularValue.infinite(_tail_nondecreasing_cert(p, c, start))
        return ModularValue.infinite(AnalyticComparisonCertificate(
            rule="constant-tail-term-floor", params={"c": c, "floor": 1.0}))

    if isinstance(p, AffineExponent):
        if p.slope == 0.0:
            # constant exponent: infinitely many equal positive terms
            return ModularValue.infinite(_tail_nondecreasing_cert(p, c, start))
        ratio = c ** p.slope
        tail_sum = c ** p.value(start) / (1.0 - ratio)
        return ModularValue.finite(total + tail_sum, err + 8 * np.finfo(float).eps * (1 + tail_sum))

    if isinstance(p, CustomExponent) and p.monotone:
        got, partial, why = _custom_tail_sum(p, c, start, cfg)
        if got is None:
            return ModularValue.indeterminate(total + partial, why)
        return ModularValue.finite(total + got, err + partial)

    return ModularValue.indeterminate(
        total, "constant tail against an exponent without declared growth")


def scaled_modular(x, p: ExponentSpec, lam: float,
                   cfg: EvalConfig = DEFAULT_CONFIG) -> ModularValue:
    """Modular of lam * x; scaling is applied exactly to runs and tails."""
    if lam <= 0:
        raise ValueError("scale must be positive")
    scaled = x.scale(lam)
    if isinstance(scaled, SequenceVec):
        return eval_seq_modular(scaled, p, cfg)
    return eval_fun_modular(scaled, p, cfg)


def modular_distance(x, y, p: ExponentSpec,
                     cfg: EvalConfig = DEFAULT_CONFIG) -> ModularValue:
    """Modular of the difference x - y."""
    diff = x - y
    if isinstance(diff, SequenceVec):
        return eval_seq_modular(diff, p, cfg)
    return eval_fun_modular(diff, p, cfg)


def modular_diameter(vectors: Sequence, p: ExponentSpec,
                     cfg: EvalConfig = DEFAULT_CONFIG) -> ModularValue:
    """Supremum of pairwise modular distances over a finite set."""
    items = list(vectors)
    if not items:
        raise EmptySetError("diameter of an empty set")
    best = ModularValue.finite(0.0)
    pending = None
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            d = modular_distance(items[i], items[j], p, cfg)
            if d.is_infinite:
                return d
            if d.is_indeterminate:
                pending = d
            elif d.value > best.value:
                best = d
    if pending is not None:
        return ModularValue.indeterminate(
            max(best.value, pending.value),
            "an indeterminate pair distance blocks the supremum")
    return best


# ---------------------------------------------------------------------------
# function modulars
# ---------------------------------------------------------------------------


def _divergence_crossover(theta: float, x_hi: float) -> float:
    """Largest x_star <= x_hi with theta^(1/x) >= 1/2 + 1/x and
    theta^(1/x) * ln(theta) >= 1 for all x in (0, x_star]."""
    a = math.log(theta)
    slack = 1e-9  # keep the certified inequalities clear of rounding

    def good(t):  # t = 1/x, in log domain to dodge overflow
        return t * a >= math.log(0.5 + t) + slack and t * a + math.log(a) >= slack

    t0 = max(1.0 / x_hi, 1.0)
    if good(t0):
        return x_hi
    t = t0
    while not good(t):
        t *= 2.0
        if t > 1e300:
            raise ArithmeticError("no crossover found")
    lo = t / 2.0
    for _ in range(200):
        mid = 0.5 * (lo + t)
        if good(mid):
            t = mid
        else:
            lo = mid
    return 1.0 / t


def _piece_modular_reciprocal(x0: float, x1: float, v: float,
                              cfg: EvalConfig, budget, tol_share: float):
    """Integral of |v|^{1/x} over (x0, x1) inside a reciprocal exponent whose
    interval starts at ``a``.  Returns ModularValue or a float contribution."""
    av = abs(v)
    if av == 0.0 or x1 <= x0:
        return 0.0, 0.0
    if av == 1.0:
        return x1 - x0, 0.0
    if av > 1.0:
        if x0 == 0.0:
            x_star = min(_divergence_crossover(av, x1), x1)
            cert = AnalyticComparisonCertificate(
                rule="theta-exceeds-half-plus-reciprocal",
                params={"theta": av, "x_star": x_star})
            return ModularValue.infinite(cert), 0.0
        peak_log = math.log(av) / x0
        if peak_log > cfg.overflow_cap:
            return ModularValue.infinite(OverflowCertificate(
                location=x0, log_term=peak_log, cap=cfg.overflow_cap)), 0.0
        f = lambda x: math.exp(math.log(av) / x)
        val, e = integrate(f, x0, x1, tol_share, budget)
        return val, e
    # av < 1: integrand vanishes superfast toward 0
    log_av = math.log(av)
    f = lambda x: math.exp(log_av / x) if x > 0 else 0.0
    if x0 == 0.0:
        val, e = integrate_graded(f, x0, x1, tol_share, budget, True,
                                  vanishing_bound=f)
    else:
        val, e = integrate(f, x0, x1, tol_share, budget)
    return val, e


def _eval_piecewise_reciprocal(u: PiecewiseConstFunction, p: ReciprocalExponent,
                               cfg: EvalConfig) -> ModularValue:
    budget = new_budget(cfg.max_quad_cells)
    total, err = 0.0, 0.0
    npieces = max(len(u.pieces), 1)
    try:
        for x0, x1, v in u.pieces:
            got, e = _piece_modular_reciprocal(
                x0, x1, v, cfg, budget, cfg.quad_tol / npieces)
            if isinstance(got, ModularValue):
                return got
            total += got
            err += e
    except BudgetExhausted:
        return ModularValue.indeterminate(
            total, "QuadratureBudgetExceeded: cell budget spent before certification")
    return ModularValue.finite(total, err)


def _eval_catalog_reciprocal(u: CatalogVTail, p: ReciprocalExponent,
                             cfg: EvalConfig) -> ModularValue:
    if (p.a, p.b) != (0.0, 1.0):
        raise DomainMismatchError("catalog functions live on (0, 1)")
    s = abs(u.coef)
    if s >= 1.0:
        return ModularValue.infinite(AnalyticComparisonCertificate(
            rule="catalog-steps-dominate-harmonic",
            params={"coef": s, "start_n": u.start_n}))
    budget = new_budget(cfg.max_quad_cells)
    total, err = 0.0, 0.0
    try:
        for x0, x1, v in u.head:
            got, e = _piece_modular_reciprocal(
                x0, x1, v, cfg, budget, cfg.quad_tol / (4 * max(len(u.head), 1)))
            if isinstance(got, ModularValue):
                return got
            total += got
            err += e
        if s == 0.0:
            return ModularValue.finite(total, err)
        # explicit steps until the geometric remainder bound certifies the rest:
        # step n contributes at most s^n/(n+1) once s * n**(1/n) <= 1
        n = u.start_n
        share = cfg.quad_tol / 4.0
        max_steps = 200_000
        for _ in range(max_steps):
            x0, x1, v = u.tail_piece(n)
            got, e = _piece_modular_reciprocal(x0, x1, v, cfg, budget,
                                               share / 256.0)
            if isinstance(got, ModularValue):
                return got
            total += got
            err += e
            m = n + 1
            if s * math.exp(math.log(m) / m) <= 1.0 and m >= 3:
                rest = s ** m / ((m + 1) * (1.0 - s))
                if rest <= cfg.quad_tol / 4.0:
                    return ModularValue.finite(total, err + rest)
            n += 1
    except BudgetExhausted:
        pass
    return ModularValue.indeterminate(
        total, "QuadratureBudgetExceeded: catalog tail not certified in budget")


def _eval_piecewise_const_exponent(u: PiecewiseConstFunction,
                                   p: PiecewiseConstExponent,
                                   cfg: EvalConfig) -> ModularValue:
    cuts = sorted({x for x0, x1, _ in u.pieces for x in (x0, x1)}
                  | set(p.breakpoints))
    total, err = 0.0, 0.0
    for x0, x1 in zip(cuts, cuts[1:]):
        xm = 0.5 * (x0 + x1)
        v = abs(next((pv for a0, a1, pv in u.pieces if a0 <= xm < a1), 0.0))
        if v == 0.0:
            continue
        pc = p(xm)
        log_term = pc * math.log(v) if v != 1.0 else 0.0
        if log_term > cfg.overflow_cap:
            return ModularValue.infinite(OverflowCertificate(
                location=xm, log_term=log_term, cap=cfg.overflow_cap))
        total += (x1 - x0) * math.exp(log_term)
    err = 4 * np.finfo(float).eps * max(total, 1.0)
    return ModularValue.finite(total, err)


def eval_fun_modular(u, p: ExponentSpec,
                     cfg: EvalConfig = DEFAULT_CONFIG) -> ModularValue:
    """Modular of a piecewise function: integral of |u(x)|^{p(x)}.

    Piecewise-constant data against a piecewise-constant exponent integrates
    in closed form; reciprocal exponents use graded adaptive quadrature with
    analytic rules for the divergent and symbolic-tail cases.
    """
    if not isinstance(p, FunctionExponent):
        raise DomainMismatchError("piecewise function needs a function exponent")
    if isinstance(u, CatalogVTail):
        if not isinstance(p, ReciprocalExponent):
            raise DomainMismatchError(
                "catalog functions are only evaluated against reciprocal exponents")
        return _eval_catalog_reciprocal(u, p, cfg)
    if not isinstance(u, PiecewiseConstFunction):
        raise DomainMismatchError(f"unsupported function type {type(u).__name__}")
    if (abs(u.domain[0] - p.domain[0]) > 1e-12
            or abs(u.domain[1] - p.domain[1]) > 1e-12):
        raise DomainMismatchError(
            f"function domain {u.domain} != exponent domain {p.domain}")
    if isinstance(p, ReciprocalExponent):
        return _eval_piecewise_reciprocal(u, p, cfg)
    if isinstance(p, PiecewiseConstExponent):
        return _eval_piecewise_const_exponent(u, p, cfg)
    raise DomainMismatchError(f"unsupported exponent type {type(p).__name__}")
