"""Growth diagnostics: doubling behaviour, right-continuity, convergence
classification, truncation density, duality probes.

The doubling property fails exactly when the exponent is unbounded, and the
failure is constructive: a sparse vector with finite modular whose every
upscaling has infinite modular.  The witness built here truncates that
infinite pattern at K entries and attaches divergence certificates computed
in the log domain over the full index pattern, so the certificates quantify
the untruncated object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import (NotFiniteModularError, NotUnboundedError,
                     UndeclaredGrowthError)
from .exponents import (AffineExponent, CustomExponent, ExponentSpec,
                        PiecewiseConstExponent, ReciprocalExponent,
                        SequenceExponent, TableExponent)
from .functions import PiecewiseConstFunction
from .luxemburg import luxemburg_norm
from .modular import (ModularValue, NondecreasingTermsCertificate,
                      eval_fun_modular, eval_seq_modular, modular_distance,
                      scaled_modular)
from .sequences import SequenceVec
from .errors import NotInModularSpaceError, NormUncertainError

_WITNESS_INDEX_CAP = 10_000_000
_SCAN_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# doubling condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessRecord:
    """A doubling-failure witness with its certificates.

    ``vector`` is the K-term truncation of the infinite construction (or a
    piecewise function for function exponents); ``base`` certifies the
    finite modular at scale 1 and ``scaled`` maps each probed lam > 1 to an
    infinite verdict whose certificate quantifies the full index pattern.
    """

    vector: object
    indices: tuple[int, ...]
    base: ModularValue
    base_bound: float
    scaled: dict

    def to_json(self):
        return {"indices": list(self.indices[:12]) + (["..."] if len(self.indices) > 12 else []),
                "base": self.base.to_json(), "base_bound": self.base_bound,
                "scaled": {str(lam): mv.to_json() for lam, mv in self.scaled.items()}}


@dataclass(frozen=True)
class Delta2Verdict:
    bounded: bool
    p_sup: float
    witness: WitnessRecord | None = None
    note: str = ""

    def to_json(self):
        return {"bounded": self.bounded,
                "p_sup": self.p_sup if math.isfinite(self.p_sup) else "inf",
                "witness": None if self.witness is None else self.witness.to_json(),
                "note": self.note}


def _witness_indices(p: SequenceExponent, K: int):
    """Minimal strictly increasing n_k with p(n_k) > k^2 and p(n_k) strictly
    increasing; None when the search cap is hit."""
    out = []
    prev_val = 0.0
    n = 1
    for k in range(1, K + 1):
        target = max(float(k * k), prev_val)
        if isinstance(p, AffineExponent):
            cand = max(n, int(math.floor((target - p.intercept) / p.slope)) + 1)
            while p.value(cand) <= target:
                cand += 1
            n = cand
        else:
            found = None
            m = n
            while m <= _WITNESS_INDEX_CAP:
                hi = min(m + _SCAN_CHUNK - 1, _WITNESS_INDEX_CAP)
                vals = p.values(m, hi)
                mask = vals > target
                if mask.any():
                    found = m + int(np.argmax(mask))
                    break
                m = hi + 1
            if found is None:
                return None
            n = found
        out.append(n)
        prev_val = p.value(n)
        n += 1
    return tuple(out)


def _sparse_divergence_certificate(p: SequenceExponent, indices, lam: float,
                                   window: int = 16) -> NondecreasingTermsCertificate:
    """Certificate that sum over n_k of lam^{p_{n_k}} / p_{n_k} diverges.

    Terms are handled in the log domain: log t_k = p lam-log minus log p.
    Once p >= 1/log(lam) the map p -> p*log(lam) - log(p) is increasing, so
    the terms are nondecreasing from the first such k on.
    """
    log_lam = math.log(lam)
    pv = np.array([p.value(n) for n in indices], dtype=float)
    logs = pv * log_lam - np.log(pv)
    k0 = int(np.argmax(pv >= 1.0 / log_lam))
    if pv[k0] < 1.0 / log_lam:
        raise NotUnboundedError("witness indices never reach 1/log(lam)")
    win = [(indices[k], float(logs[k]))
           for k in range(k0, min(k0 + window, len(indices)))]
    return NondecreasingTermsCertificate(
        delta=math.exp(float(logs[k0])), start_index=indices[k0],
        window=tuple(win),
        note=f"sparse pattern scaled by lam={lam}; terms lam^p/p over the full pattern")


def delta2_failure_witness(p: ExponentSpec, K: int = 50,
                           lams=(1.1, 1.5, 2.0),
                           cfg: EvalConfig = DEFAULT_CONFIG) -> WitnessRecord:
    """Construct the sparse failure witness for an unbounded exponent.

    The vector takes the value p_{n_k}^{-1/p_{n_k}} at the first K indices
    of the pattern; its modular is at most sum 1/k^2.  Every scaled modular
    at lam > 1 is certified infinite.
    """
    if K < 10:
        raise ValueError("witness needs K >= 10")
    if isinstance(p, ReciprocalExponent):
        if not p.unbounded:
            raise NotUnboundedError("reciprocal exponent on (a, b) with a > 0 is bounded")
        return _function_witness(p, lams, cfg)
    if not isinstance(p, SequenceExponent):
        raise NotUnboundedError("witness construction needs a sequence or reciprocal exponent")
    if p.unbounded is None:
        raise UndeclaredGrowthError("custom exponent lacks an unboundedness declaration")
    if not p.unbounded:
        raise NotUnboundedError(f"exponent {p.describe()} is bounded")
    indices = _witness_indices(p, K)
    if indices is None:
        raise NotUnboundedError(
            f"witness index search exhausted its cap of {_WITNESS_INDEX_CAP}")
    entries = {}
    bound = 0.0
    for k, n in enumerate(indices, start=1):
        pn = p.value(n)
        entries[n] = math.exp(-math.log(pn) / pn)
        bound += 1.0 / (k * k)
    vec = SequenceVec.sparse(entries)
    base = eval_seq_modular(vec, p, cfg)
    scaled = {lam: ModularValue.infinite(
        _sparse_divergence_certificate(p, indices, lam)) for lam in lams}
    return WitnessRecord(vec, indices, base, bound, scaled)


def _function_witness(p: ReciprocalExponent, lams, cfg: EvalConfig) -> WitnessRecord:
    u = PiecewiseConstFunction.const(1.0, p.domain)
    base = eval_fun_modular(u, p, cfg)
    scaled = {lam: scaled_modular(u, p, lam, cfg) for lam in lams}
    return WitnessRecord(u, (), base, p.b - p.a, scaled)


def check_delta2(p: ExponentSpec, probe_window: int = 1_000_000,
                 witness_terms: int = 50,
                 cfg: EvalConfig = DEFAULT_CONFIG) -> Delta2Verdict:
    """Decide the doubling property: bounded exponent iff it holds.

    Tables and piecewise-constant functions are bounded with an exact sup;
    affine and reciprocal kinds are read off analytically; custom kinds need
    a declared growth class (the probe alone cannot certify boundedness).
    """
    if isinstance(p, TableExponent):
        return Delta2Verdict(True, p.p_sup)
    if isinstance(p, PiecewiseConstExponent):
        return Delta2Verdict(True, p.p_sup)
    if isinstance(p, AffineExponent):
        if not p.unbounded:
            return Delta2Verdict(True, p.p_sup)
        return Delta2Verdict(False, math.inf,
                             delta2_failure_witness(p, witness_terms, cfg=cfg))
    if isinstance(p, ReciprocalExponent):
        if not p.unbounded:
            return Delta2Verdict(True, p.p_sup)
        return Delta2Verdict(False, math.inf,
                             delta2_failure_witness(p, witness_terms, cfg=cfg))
    if isinstance(p, CustomExponent):
        if p.unbounded is True:
            try:
                wit = delta2_failure_witness(p, witness_terms, cfg=cfg)
            except NotUnboundedError:
                wit = None
            return Delta2Verdict(False, math.inf, wit,
                                 note="" if wit else "witness index search inconclusive")
        probed = 0.0
        lo = 1
        while lo <= probe_window:
            hi = min(lo + _SCAN_CHUNK - 1, probe_window)
            probed = max(probed, float(p.values(lo, hi).max()))
            lo = hi + 1
        if p.unbounded is None:
            raise UndeclaredGrowthError(
                f"custom exponent without growth flags; probed sup {probed} "
                f"over {probe_window} indices is inconclusive")
        return Delta2Verdict(True, probed,
                             note=f"declared bounded; sup over {probe_window} probed indices")
    raise UndeclaredGrowthError(f"no doubling rule for {type(p).__name__}")


# ---------------------------------------------------------------------------
# right-continuity probe
# ---------------------------------------------------------------------------

RIGHT_CONTINUOUS = "RightContinuousAt"
NOT_RIGHT_CONTINUOUS = "NotRightContinuousAt"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RightContinuityReport:
    verdict: str
    base: float
    trace: tuple[tuple[float, object], ...]  # (lam, value or "inf")
    limit: float | None = None

    def to_json(self):
        return {"verdict": self.verdict, "base": self.base,
                "trace": [[lam, v] for lam, v in self.trace], "limit": self.limit}


def right_continuity_probe(x, p: ExponentSpec, lam_sequence=None,
                           tol: float = 1e-4, gap: float = 0.05,
                           cfg: EvalConfig = DEFAULT_CONFIG) -> RightContinuityReport:
    """Probe lam -> rho(lam * x) from the right at lam = 1.

    Not right-continuous when every probed scaled modular is infinite or
    sits above rho(x) + gap; right-continuous when the probed values close
    in on rho(x) within tol; otherwise inconclusive.
    """
    if lam_sequence is None:
        lam_sequence = [1.0 + 2.0 ** -i for i in range(1, 21)]
    base = scaled_modular(x, p, 1.0, cfg)
    if not base.is_finite:
        raise NotFiniteModularError("right-continuity probe needs a finite base modular")
    vals = []
    trace = []
    saw_indeterminate = False
    for lam in lam_sequence:
        mv = scaled_modular(x, p, lam, cfg)
        if mv.is_indeterminate:
            saw_indeterminate = True
            trace.append((lam, "indeterminate"))
            continue
        trace.append((lam, "inf" if mv.is_infinite else mv.value))
        vals.append((lam, mv))
    away = [mv.is_infinite or mv.value > base.value + gap for _, mv in vals]
    if vals and all(away):
        return RightContinuityReport(NOT_RIGHT_CONTINUOUS, base.value, tuple(trace))
    gaps = [mv.value - base.value for _, mv in vals if mv.is_finite]
    if not saw_indeterminate and gaps and abs(gaps[-1]) <= tol \
            and all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:])):
        return RightContinuityReport(RIGHT_CONTINUOUS, base.value, tuple(trace),
                                     limit=base.value)
    return RightContinuityReport(INCONCLUSIVE, base.value, tuple(trace))


# ---------------------------------------------------------------------------
# convergence classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    modular_converges: bool
    per_lambda: dict
    norm_converges: bool
    rates: tuple[tuple[int, float], ...]
    norm_rates: tuple[tuple[int, float], ...] = ()
    notes: str = ""

    def to_json(self):
        return {"modular_converges": self.modular_converges,
                "per_lambda": {str(k): v for k, v in self.per_lambda.items()},
                "norm_converges": self.norm_converges,
                "rates": [[i, r if math.isfinite(r) else "inf"] for i, r in self.rates],
                "norm_rates": [[i, r if math.isfinite(r) else "inf"]
                               for i, r in self.norm_rates],
                "notes": self.notes}


def _trailing_null(values, tol):
    """Finite-prefix convergence criterion: last value below tol and
    nonincreasing over the trailing half."""
    if any(not math.isfinite(v) for v in values):
        return False
    if values[-1] >= tol:
        return False
    half = values[len(values) // 2:]
    return all(b <= a * (1.0 + 1e-9) + 1e-300 for a, b in zip(half, half[1:]))


def classify_convergence(family, limit, p: ExponentSpec,
                         lam_grid=(0.25, 0.5, 1.0, 2.0, 4.0),
                         tol: float = 1e-8,
                         cfg: EvalConfig = DEFAULT_CONFIG) -> ConvergenceReport:
    """Classify modular vs norm convergence of a finite family prefix."""
    diffs = [x - limit for x in family]
    per_lambda = {}
    rates = ()
    notes = []
    for lam in lam_grid:
        vals = []
        certified = True
        for d in diffs:
            mv = scaled_modular(d, p, lam, cfg)
            if mv.is_indeterminate:
                notes.append(f"indeterminate modular at lam={lam}")
                certified = False
                vals.append(math.nan)
            else:
                vals.append(math.inf if mv.is_infinite else mv.value)
        per_lambda[lam] = certified and _trailing_null(vals, tol)
        if lam == 1.0:
            rates = tuple((i + 1, v) for i, v in enumerate(vals))
    norm_vals = []
    norm_certified = True
    for d in diffs:
        try:
            norm_vals.append(luxemburg_norm(d, p, min(tol, 1e-10), cfg).value)
        except NotInModularSpaceError:
            norm_vals.append(math.inf)
        except NormUncertainError:
            notes.append("norm uncertain for a family member")
            norm_certified = False
            norm_vals.append(math.nan)
    norm_converges = norm_certified and _trailing_null(norm_vals, tol)
    return ConvergenceReport(per_lambda.get(1.0, False), per_lambda,
                             norm_converges, rates,
                             tuple((i + 1, v) for i, v in enumerate(norm_vals)),
                             "; ".join(notes))


# ---------------------------------------------------------------------------
# truncation density
# ---------------------------------------------------------------------------


def truncation_density_check(x: SequenceVec, p: ExponentSpec, tol: float,
                             cap: int = 100_000,
                             cfg: EvalConfig = DEFAULT_CONFIG):
    """Smallest probed N with rho(x - prefix_N(x)) < tol, plus the trace.

    Finite-support vectors are probed at the support breakpoints only (the
    distance is constant in between); tail-carrying vectors are probed at
    every N.
    """
    base = eval_seq_modular(x, p, cfg)
    if not base.is_finite:
        raise NotFiniteModularError("truncation density needs a finite modular")
    if x.finite_support:
        candidates = sorted({e for s, e, v in x.runs if v != 0.0}
                            | {e - 1 for s, e, v in x.runs if v != 0.0 and e > 1})
        candidates = [n for n in candidates if n >= 1] or [1]
    else:
        candidates = range(1, cap + 1)
    trace = []
    for n in candidates:
        mv = modular_distance(x, x.prefix(n), p, cfg)
        d = mv.value if mv.is_finite else math.inf
        trace.append((n, d))
        if mv.is_finite and d < tol:
            return n, trace
    raise NotFiniteModularError(
        f"no truncation below tol within the probe cap ({cap})")


# ---------------------------------------------------------------------------
# duality probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualityReport:
    family_trends: tuple
    families_vanish: bool
    coordinate_bound_ok: bool
    ball_sup: float
    ball_bound: float
    bounded_on_ball: bool

    def to_json(self):
        return {"family_trends": [list(t) for t in self.family_trends],
                "families_vanish": self.families_vanish,
                "coordinate_bound_ok": self.coordinate_bound_ok,
                "ball_sup": self.ball_sup, "ball_bound": self.ball_bound,
                "bounded_on_ball": self.bounded_on_ball}


def _apply_functional(coeffs: SequenceVec, x: SequenceVec) -> float:
    total = 0.0
    for s, e, c in coeffs.runs:
        if c == 0.0:
            continue
        for n in range(s, e + 1):
            total += c * x.value_at(n)
    return total


def functional_probe(coeffs: SequenceVec, families, p: ExponentSpec,
                     tol: float = 1e-6, samples: int = 50, seed: int = 0,
                     cfg: EvalConfig = DEFAULT_CONFIG) -> DualityReport:
    """Probe a finite-support coordinate functional against modular nulls.

    Reports the trend of the functional along each modularly-null family,
    the coordinate bound |x_M| <= rho(x)^(1/p_M) on members inside the unit
    modular ball, and boundedness on sampled points of the ball.
    """
    if not coeffs.finite_support:
        raise ValueError("functional must have finite support")
    support = [n for s, e, c in coeffs.runs if c != 0.0 for n in range(s, e + 1)]
    trends = []
    vanish = True
    coord_ok = True
    for fam in families:
        vals = [abs(_apply_functional(coeffs, x)) for x in fam]
        trends.append(tuple(vals))
        if vals and not (vals[-1] <= tol
                         and max(vals[len(vals) // 2:]) <= max(vals[:max(len(vals) // 2, 1)]) + tol):
            vanish = False
        for x in fam:
            mv = eval_seq_modular(x, p, cfg)
            if mv.is_finite and mv.value <= 1.0:
                for m in support:
                    pm = p.value(m)
                    if abs(x.value_at(m)) > mv.value ** (1.0 / pm) + tol:
                        coord_ok = False
    bound = sum(abs(c) * (e - s + 1) for s, e, c in coeffs.runs)
    rng = np.random.default_rng(seed)
    dim = (max(support) if support else 1) + 3
    if isinstance(p, TableExponent):
        dim = min(dim, p.dimension)
    sup_seen = 0.0
    for _ in range(samples):
        y = SequenceVec.from_values(rng.uniform(-1.0, 1.0, size=dim))
        mv = eval_seq_modular(y, p, cfg)
        halvings = 0
        while not (mv.is_finite and mv.value <= 1.0):
            y = y.scale(0.5)
            mv = eval_seq_modular(y, p, cfg)
            halvings += 1
            if halvings > 80:
                break
        sup_seen = max(sup_seen, abs(_apply_functional(coeffs, y)))
    return DualityReport(tuple(trends), vanish, coord_ok, sup_seen, bound,
                         sup_seen <= bound + tol)


# ---------------------------------------------------------------------------
# sup-norm isomorphism probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinfVerdict:
    verdict: str  # "Isomorphic" | "NotIsomorphic" | "Inconclusive"
    lam: float | None = None
    certified_sum: ModularValue | None = None
    note: str = ""

    def to_json(self):
        return {"verdict": self.verdict, "lam": self.lam,
                "certified_sum": None if self.certified_sum is None
                else self.certified_sum.to_json(),
                "note": self.note}


def check_linf_isomorphism(p: ExponentSpec, max_depth: int = 20,
                           cfg: EvalConfig | None = None) -> LinfVerdict:
    """Search lam in {1/2, 1/4, ...} for a certified finite sum of lam^{p_n}.

    A witness lam makes the constant-one vector an element of the space,
    which is the isomorphism criterion; a bounded exponent makes the sum
    diverge for every lam and settles the other direction.
    """
    if isinstance(p, TableExponent):
        raise NotUnboundedError("isomorphism probe needs an infinite-dimensional spec")
    if not isinstance(p, SequenceExponent):
        raise NotUnboundedError("isomorphism probe is for sequence exponents")
    if cfg is None:
        cfg = EvalConfig(series_tol=1e-8, max_tail_terms=DEFAULT_CONFIG.max_tail_terms)
    if p.unbounded is None:
        return LinfVerdict("Inconclusive", note="undeclared growth")
    if not p.unbounded:
        return LinfVerdict(
            "NotIsomorphic",
            note="bounded exponent: the terms have a uniform positive floor at every lam")
    notes = []
    for i in range(1, max_depth + 1):
        lam = 2.0 ** -i
        mv = eval_seq_modular(SequenceVec.constant(lam), p, cfg)
        if mv.is_finite:
            return LinfVerdict("Isomorphic", lam, mv)
        if mv.is_indeterminate:
            notes.append(f"lam={lam}: {mv.reason}")
    return LinfVerdict("Inconclusive", note="; ".join(notes[:3]))
