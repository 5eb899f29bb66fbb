"""Named counterexample scenarios and property suites.

Each scenario reruns a construction from the unbounded-exponent theory at
desk scale and checks its inequalities through the certified evaluators:
a modular ball that contains a point together with approximants of that
point which all sit at infinite (or >= delta) modular distance from the
center, the doubling-failure witness, truncation density traces, and the
finite-dimensional doubling bound.  The registry names are a stable public
contract; reports serialize to plain JSON.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .diagnostics import (check_delta2, classify_convergence,
                          delta2_failure_witness, truncation_density_check)
from .errors import UnknownScenarioError
from .exponents import (AffineExponent, CustomExponent, ReciprocalExponent,
                        TableExponent)
from .functions import (PiecewiseConstFunction, catalog_v, catalog_v_beyond,
                        catalog_v_truncated)
from .luxemburg import luxemburg_norm, verify_norm_modular_relations
from .modular import (ModularValue, NondecreasingTermsCertificate,
                      eval_fun_modular, eval_seq_modular, modular_distance,
                      scaled_modular)
from .sequences import SequenceVec


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    numbers: dict = field(default_factory=dict)

    def to_json(self):
        return {"label": self.label, "passed": self.passed,
                "numbers": {k: (v if not isinstance(v, float) or math.isfinite(v)
                                else "inf") for k, v in self.numbers.items()}}


@dataclass(frozen=True)
class ScenarioReport:
    name: str
    checks: tuple
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {"name": self.name, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks],
                "extras": self.extras}


def _num(mv: ModularValue):
    return "inf" if mv.is_infinite else mv.value


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------


def _lux_boundary(cfg: EvalConfig, **_):
    p = ReciprocalExponent(0.0, 0.5)
    one = PiecewiseConstFunction.const(1.0, (0.0, 0.5))
    rho1 = eval_fun_modular(one, p, cfg)
    nrm = luxemburg_norm(one, p, tol=1e-6, cfg=cfg)
    checks = [
        Check("rho(1) = 1/2", rho1.is_finite and abs(rho1.value - 0.5) <= 1e-6,
              {"rho": _num(rho1)}),
        Check("rho(1) < 1 while the norm sits at the boundary",
              rho1.is_finite and rho1.value < 1.0, {}),
        Check("norm(1) = 1", abs(nrm.value - 1.0) <= 1e-4,
              {"norm": nrm.value, "bracket": nrm.bracket_width}),
    ]
    for lam in (1.05, 1.1, 1.5):
        mv = scaled_modular(one, p, lam, cfg)
        ok = mv.is_infinite and mv.certificate.kind == "analytic-comparison" \
            and mv.certificate.check()
        checks.append(Check(f"rho({lam} * 1) infinite with analytic certificate",
                            ok, {"rho": _num(mv)}))
    return ScenarioReport("lux-boundary-p-reciprocal", tuple(checks))


def _seq_pn_equals_n(cfg: EvalConfig, delta: float = 3.0, terms: int = 24, **_):
    p = AffineExponent(1.0, 0.0)
    center = SequenceVec.constant(1.0)
    inner = SequenceVec.constant(0.5)
    d_in = modular_distance(inner, center, p, cfg)
    checks = [Check(f"inner point lies in the radius-{delta} ball",
                    d_in.is_finite and d_in.value < delta,
                    {"rho(inner - center)": _num(d_in)})]
    family = [inner.prefix(n) for n in range(1, terms + 1)]
    geo_ok = True
    out_ok = True
    for n, xn in enumerate(family, start=1):
        d = modular_distance(inner, xn, p, cfg)
        if not (d.is_finite and abs(d.value - 2.0 ** -n) <= 1e-12 * 2.0 ** -n):
            geo_ok = False
        d_out = modular_distance(xn, center, p, cfg)
        if not (d_out.is_infinite and d_out.certificate.check_window()):
            out_ok = False
    checks.append(Check("rho(inner - prefix_n) = 2^-n exactly", geo_ok,
                        {"last": 2.0 ** -terms}))
    checks.append(Check("every approximant has infinite distance to the center",
                        out_ok, {}))
    rep = classify_convergence(family, inner, p, tol=1e-6, cfg=cfg)
    checks.append(Check("modular convergence to the inner point",
                        rep.modular_converges, {}))
    checks.append(Check("doubled family does not converge",
                        rep.per_lambda[2.0] is False, {}))
    checks.append(Check("no norm convergence", rep.norm_converges is False,
                        {"last_norm": rep.norm_rates[-1][1]}))
    return ScenarioReport("seq-pn-equals-n", tuple(checks),
                          extras={"convergence": rep.to_json()})


def _ceil_sqrt_exponent():
    return CustomExponent(lambda n: np.ceil(np.sqrt(n)), monotone=True,
                          unbounded=True, name="ceil(sqrt(n))")


def _seq_general_unbounded(cfg: EvalConfig, delta: float = 1.0, terms: int = 40,
                           eps: float = 0.25, **_):
    """Sparse-ones construction for a general unbounded exponent.

    Indices n_k = (k-1)^2 + 1 give p(n_k) = k, so the half-scaled pattern
    sums to exactly sum 2^-k; truncations carry the analytic remainder
    bound sum_{k>K} eps^k.
    """
    p = _ceil_sqrt_exponent()
    idx = [(k - 1) ** 2 + 1 for k in range(1, terms + 1)]
    s_vec = SequenceVec.sparse({n: 1.0 for n in idx})
    half = eval_seq_modular(s_vec.scale(0.5), p, cfg)
    rem_half = 2.0 ** -terms
    checks = [Check("rho(s/2) <= sum 2^-k = 1",
                    half.is_finite and half.value + rem_half <= 1.0 + 1e-12,
                    {"partial": _num(half), "remainder_bound": rem_half})]
    inner = s_vec.scale(1.0 - eps)
    d_in = eval_seq_modular(s_vec.scale(eps), p, cfg)  # rho(s - (1-eps)s)
    bound_in = sum(eps ** k for k in range(1, terms + 1)) + eps ** (terms + 1) / (1 - eps)
    checks.append(Check(
        f"inner point (1-eps)s sits inside the radius-{delta} ball",
        d_in.is_finite and d_in.value < delta and d_in.value <= bound_in + 1e-12,
        {"rho(eps*s)": _num(d_in), "analytic_bound": bound_in}))
    conv_ok = True
    away_ok = True
    for N in (5, 10, 20):
        approx = inner.prefix(idx[N - 1])
        d_conv = modular_distance(inner, approx, p, cfg)
        bound = (1 - eps) ** (N + 1) / eps
        if not (d_conv.is_finite and d_conv.value <= bound + 1e-12):
            conv_ok = False
        d_away = modular_distance(s_vec, approx, p, cfg)
        # truncated distance already counts (terms - N) unit entries
        if not (d_away.is_finite and d_away.value >= min(delta, terms - N)):
            away_ok = False
    checks.append(Check("approximants converge modularly to the inner point",
                        conv_ok, {}))
    checks.append(Check(
        "approximants stay at distance >= delta from the center "
        "(infinite over the full pattern)", away_ok, {}))
    # certificate for the untruncated pattern: unit entries forever
    tail_window = tuple((idx_val, 0.0) for idx_val in idx[:16])
    cert = NondecreasingTermsCertificate(
        delta=1.0, start_index=idx[0], window=tail_window,
        note="unit entries on the sparse pattern")
    checks.append(Check("unit-tail divergence certificate is sound",
                        cert.check_window(), {}))
    return ScenarioReport("seq-general-unbounded", tuple(checks))


def _lp_reciprocal(cfg: EvalConfig, delta: float = 1.0, **_):
    p = ReciprocalExponent(0.0, 1.0)
    v = catalog_v(1.0)
    rho_v = eval_fun_modular(v, p, cfg)
    checks = [Check("rho(v) infinite",
                    rho_v.is_infinite and rho_v.certificate.check(), {})]
    for eps in (0.25, 0.5):
        mv = eval_fun_modular(catalog_v((1.0 - eps)), p, cfg)
        bound = (1.0 - eps) / eps
        checks.append(Check(
            f"rho((1-eps)v) < (1-eps)/eps at eps={eps}",
            mv.is_finite and mv.value + mv.error_bound < bound,
            {"rho": _num(mv), "bound": bound}))
    eps = 0.5
    for k in (5, 10, 15, 20):
        mv = eval_fun_modular(catalog_v_beyond(k, eps), p, cfg)
        bound = eps ** (k + 1) / (1.0 - eps)
        checks.append(Check(
            f"rho(eps(v - v_{k})) < eps^{k + 1}/(1-eps)",
            mv.is_finite and mv.value + mv.error_bound < bound,
            {"rho": _num(mv), "bound": bound}))
    away_ok = True
    for k in (5, 10, 20):
        w = v - catalog_v_truncated(k).scale(1.0 - eps)
        mv = eval_fun_modular(w, p, cfg)
        if not (mv.is_infinite and mv.certificate.check()):
            away_ok = False
    checks.append(Check(
        "rho(v - (1-eps) v_k) infinite: approximants never reach the center",
        away_ok, {}))
    return ScenarioReport("Lp-reciprocal", tuple(checks))


def _delta2_witness(cfg: EvalConfig, terms: int = 50, **_):
    p = AffineExponent(1.0, 0.0)
    verdict = check_delta2(p, witness_terms=terms, cfg=cfg)
    wit = verdict.witness
    pi2_6 = math.pi ** 2 / 6.0
    checks = [
        Check("p_n = n is unbounded", not verdict.bounded, {}),
        Check("witness indices are k^2 + 1",
              wit.indices[:4] == (2, 5, 10, 17), {"first": list(wit.indices[:4])}),
        Check("witness modular finite and <= pi^2/6 + 1e-3",
              wit.base.is_finite and wit.base.value <= pi2_6 + 1e-3,
              {"rho": _num(wit.base), "pi^2/6": pi2_6}),
    ]
    for lam, mv in wit.scaled.items():
        checks.append(Check(
            f"scaled witness diverges at lam={lam}",
            mv.is_infinite and mv.certificate.kind ==
            "terms-eventually-nondecreasing-and-ge-delta"
            and mv.certificate.check_window(),
            {"delta": mv.certificate.delta}))
    fn = check_delta2(ReciprocalExponent(0.0, 0.5), cfg=cfg)
    checks.append(Check(
        "p(x) = 1/x is unbounded with a function witness",
        (not fn.bounded) and fn.witness.base.is_finite
        and all(mv.is_infinite for mv in fn.witness.scaled.values()),
        {"rho(witness)": _num(fn.witness.base)}))
    return ScenarioReport("delta2-witness", tuple(checks))


def _separability(cfg: EvalConfig, **_):
    p = AffineExponent(1.0, 0.0)
    half = SequenceVec.constant(0.5)
    n1, trace1 = truncation_density_check(half, p, 1e-3, cfg=cfg)
    mono1 = all(b[1] <= a[1] + 1e-300 for a, b in zip(trace1, trace1[1:]))
    checks = [
        Check("(1/2)ones truncates below 1e-3 at N = 10",
              n1 == 10 and abs(trace1[-1][1] - 2.0 ** -10) < 1e-15,
              {"N": n1, "distance": trace1[-1][1]}),
        Check("truncation distance trace is monotone", mono1, {}),
    ]
    wit = delta2_failure_witness(p, 50, cfg=cfg)
    n2, trace2 = truncation_density_check(wit.vector, p, 1e-4, cfg=cfg)
    mono2 = all(b[1] <= a[1] + 1e-300 for a, b in zip(trace2, trace2[1:]))
    checks.append(Check(
        "witness truncates below 1e-4 exactly at its last support index",
        n2 == wit.indices[-1] and trace2[-1][1] == 0.0, {"N": n2}))
    checks.append(Check("witness trace is monotone", mono2, {}))
    return ScenarioReport("separability", tuple(checks))


def _finite_dim_delta2(cfg: EvalConfig, seed: int = 0, specs: int = 20,
                       family_len: int = 24, **_):
    rng = np.random.default_rng(seed)
    all_ok = True
    ratio_ok = True
    worst = 0.0
    for _ in range(specs):
        dim = int(rng.integers(2, 9))
        table = TableExponent(1.0 + 5.0 * rng.random(dim))
        base = SequenceVec.from_values(rng.uniform(-1.0, 1.0, dim))
        family = [base.scale(2.0 ** -j) for j in range(1, family_len + 1)]
        doubling_cap = 2.0 ** table.p_sup
        last = math.inf
        for xj in family:
            r1 = eval_seq_modular(xj, table, cfg)
            r2 = eval_seq_modular(xj.scale(2.0), table, cfg)
            if r1.value > 0:
                ratio = r2.value / r1.value
                worst = max(worst, ratio / doubling_cap)
                if ratio > doubling_cap * (1.0 + 1e-12):
                    ratio_ok = False
            last = r2.value
        if not last < 1e-5:
            all_ok = False
    checks = (
        Check("rho(2 x_j) <= 2^{p_sup} rho(x_j) on every member", ratio_ok,
              {"worst_ratio_fraction": worst}),
        Check("doubled families stay modularly null", all_ok, {}),
    )
    return ScenarioReport("finite-dim-delta2", checks)


def _property_norm_modular(cfg: EvalConfig, seed: int = 0, samples: int = 100, **_):
    rng = np.random.default_rng(seed)
    tol = 1e-8
    bad = {"relations": 0, "homogeneity": 0, "triangle": 0, "sandwich": 0,
           "linf": 0}
    for _ in range(samples):
        dim = int(rng.integers(1, 7))
        table = TableExponent(1.0 + 4.0 * rng.random(dim))
        x = SequenceVec.from_values(rng.uniform(-2.0, 2.0, dim))
        y = SequenceVec.from_values(rng.uniform(-2.0, 2.0, dim))
        rep = verify_norm_modular_relations(x, table, tol=tol, cfg=cfg)
        if not rep.all_ok:
            bad["relations"] += 1
        nx = luxemburg_norm(x, table, tol=1e-12, cfg=cfg).value
        ny = luxemburg_norm(y, table, tol=1e-12, cfg=cfg).value
        for c in (-2.0, -1.0, 0.5, 3.0):
            ncx = luxemburg_norm(x.scale(c), table, tol=1e-12, cfg=cfg).value
            if abs(ncx - abs(c) * nx) > 2e-10:
                bad["homogeneity"] += 1
        nxy = luxemburg_norm(x + y, table, tol=1e-12, cfg=cfg).value
        if nxy > nx + ny + 2e-10:
            bad["triangle"] += 1
        for alpha in (0.25, 0.5):
            na = luxemburg_norm(x.scale(alpha), table, tol=1e-12, cfg=cfg).value
            if not (alpha * nx - tol <= na <= nx + tol):
                bad["sandwich"] += 1
        for alpha in (2.0, 4.0):
            na = luxemburg_norm(x.scale(alpha), table, tol=1e-12, cfg=cfg).value
            if not (nx - tol <= na <= alpha * nx + tol):
                bad["sandwich"] += 1
        if x.sup_abs() > nx + 1e-10:
            bad["linf"] += 1
    checks = tuple(Check(f"{k} holds on all samples", v == 0, {"violations": v})
                   for k, v in bad.items())
    return ScenarioReport("property-norm-modular", checks,
                          extras={"samples": samples, "seed": seed})


REGISTRY = {
    "lux-boundary-p-reciprocal": _lux_boundary,
    "seq-pn-equals-n": _seq_pn_equals_n,
    "seq-general-unbounded": _seq_general_unbounded,
    "Lp-reciprocal": _lp_reciprocal,
    "delta2-witness": _delta2_witness,
    "separability": _separability,
    "finite-dim-delta2": _finite_dim_delta2,
}

PROPERTY_SUITES = {
    "property-norm-modular": _property_norm_modular,
}

BALL_SCENARIOS = ("seq-pn-equals-n", "seq-general-unbounded", "Lp-reciprocal")


def run_counterexample(name: str, seed: int = 0,
                       cfg: EvalConfig = DEFAULT_CONFIG, **kwargs) -> ScenarioReport:
    """Execute a registered scenario end to end."""
    fn = REGISTRY.get(name) or PROPERTY_SUITES.get(name)
    if fn is None:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; known: {sorted(REGISTRY) + sorted(PROPERTY_SUITES)}")
    return fn(cfg, seed=seed, **kwargs)


def ball_interior_witness(name: str, delta: float,
                          cfg: EvalConfig = DEFAULT_CONFIG) -> ScenarioReport:
    """Rebuild a non-open-ball construction at the given radius: a point in
    the ball, approximants converging to it modularly, and the verified
    fact that every approximant stays modularly far from the center."""
    if name not in BALL_SCENARIOS:
        raise UnknownScenarioError(
            f"unknown ball scenario {name!r}; known: {list(BALL_SCENARIOS)}")
    if delta <= 0:
        raise ValueError("ball radius must be positive")
    return REGISTRY[name](cfg, delta=delta)
