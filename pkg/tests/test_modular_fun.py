"""Function modular evaluation against quadrature-oracle values.

Oracle values were computed before the build with 40-digit arithmetic via
the antiderivative  x*c^(1/x) - ln(c)*Ei(ln(c)/x)  of c^(1/x), cross-checked
against direct high-precision quadrature.
"""

import pytest

from modtop.config import EvalConfig
from modtop.errors import DomainMismatchError
from modtop.exponents import PiecewiseConstExponent, ReciprocalExponent
from modtop.functions import (PiecewiseConstFunction, catalog_v,
                              catalog_v_beyond, catalog_v_truncated)
from modtop.modular import eval_fun_modular, modular_distance, scaled_modular

REC_HALF = ReciprocalExponent(0.0, 0.5)
REC_ONE = ReciprocalExponent(0.0, 1.0)

# frozen oracle values
RHO_HALF_ON_HALF = 0.042749730134231538532   # rho(0.5 on (0,1/2)), p = 1/x
RHO_HALF_V = 0.31233922950224828319          # rho(0.5 * v)
RHO_3Q_V = 0.82024071700810731301            # rho(0.75 * v)
RHO_TAIL = {5: 0.0033156815894513470876,     # rho(0.5*(v - v_k))
            10: 0.000060544301227191924812,
            20: 3.2102877186321457302e-8}


def test_unit_function_integrates_to_the_width():
    u = PiecewiseConstFunction.const(1.0, (0.0, 0.5))
    mv = eval_fun_modular(u, REC_HALF)
    assert mv.is_finite and mv.value == 0.5


def test_zero_function():
    u = PiecewiseConstFunction.const(0.0, (0.0, 0.5))
    assert eval_fun_modular(u, REC_HALF).value == 0.0


def test_value_above_one_diverges_with_checked_certificate():
    u = PiecewiseConstFunction.const(1.2, (0.0, 0.5))
    mv = eval_fun_modular(u, REC_HALF)
    assert mv.is_infinite
    cert = mv.certificate
    assert cert.rule == "theta-exceeds-half-plus-reciprocal"
    assert cert.check()
    # the stored crossover really satisfies theta^(1/x) >= 1/2 + 1/x below it
    theta, xs = cert.params["theta"], cert.params["x_star"]
    for x in (xs, xs / 2, xs / 7):
        assert theta ** (1.0 / x) >= 0.5 + 1.0 / x


def test_subunit_value_matches_oracle():
    u = PiecewiseConstFunction.const(0.5, (0.0, 0.5))
    mv = eval_fun_modular(u, REC_HALF)
    assert abs(mv.value - RHO_HALF_ON_HALF) <= max(mv.error_bound, 1e-8)


def test_scaled_boundary_function():
    u = PiecewiseConstFunction.const(1.0, (0.0, 0.5))
    for lam in (1.05, 1.1, 1.5, 2.0):
        mv = scaled_modular(u, REC_HALF, lam)
        assert mv.is_infinite and mv.certificate.kind == "analytic-comparison"
    down = scaled_modular(u, REC_HALF, 0.5)
    assert down.is_finite
    assert abs(down.value - RHO_HALF_ON_HALF) <= max(down.error_bound, 1e-8)


def test_catalog_values_and_bounds():
    for coef, oracle in ((0.5, RHO_HALF_V), (0.75, RHO_3Q_V)):
        mv = eval_fun_modular(catalog_v(coef), REC_ONE)
        assert mv.is_finite
        assert abs(mv.value - oracle) <= max(mv.error_bound, 1e-7)
        eps = 1.0 - coef
        assert mv.value < coef / eps  # the analytic upper bound


def test_catalog_diverges_at_full_scale():
    mv = eval_fun_modular(catalog_v(1.0), REC_ONE)
    assert mv.is_infinite
    assert mv.certificate.rule == "catalog-steps-dominate-harmonic"
    assert mv.certificate.check()
    assert eval_fun_modular(catalog_v(1.7), REC_ONE).is_infinite


def test_catalog_tail_values():
    for k, oracle in RHO_TAIL.items():
        mv = eval_fun_modular(catalog_v_beyond(k, 0.5), REC_ONE)
        assert mv.is_finite
        assert abs(mv.value - oracle) <= max(mv.error_bound, 1e-7)
        assert mv.value < 0.5 ** k  # eps^{k+1}/(1-eps) at eps = 1/2


def test_center_to_approximant_distance_is_infinite():
    v = catalog_v(1.0)
    for k in (3, 8):
        w = v - catalog_v_truncated(k).scale(0.5)
        mv = eval_fun_modular(w, REC_ONE)
        assert mv.is_infinite


def test_catalog_truncation_difference_via_distance():
    # v_{k} as explicit pieces subtracted from v leaves exactly the tail
    k = 6
    d = modular_distance(catalog_v(0.5), catalog_v_truncated(k).scale(0.5), REC_ONE)
    ref = eval_fun_modular(catalog_v_beyond(k, 0.5), REC_ONE)
    assert d.is_finite
    assert d.value == pytest.approx(ref.value, abs=1e-8)


def test_piecewise_const_exponent_closed_form():
    p = PiecewiseConstExponent([0.0, 0.5, 1.0], [2.0, 3.0])
    u = PiecewiseConstFunction((0.0, 1.0), [(0.0, 0.25, 2.0), (0.25, 1.0, 0.5)])
    mv = eval_fun_modular(u, p)
    expected = 0.25 * 2.0 ** 2 + 0.25 * 0.5 ** 2 + 0.5 * 0.5 ** 3
    assert mv.value == pytest.approx(expected, rel=1e-14)


def test_domain_mismatch():
    u = PiecewiseConstFunction.const(1.0, (0.0, 0.4))
    with pytest.raises(DomainMismatchError):
        eval_fun_modular(u, REC_HALF)


def test_budget_exhaustion_is_indeterminate_never_wrong():
    u = PiecewiseConstFunction.const(0.5, (0.0, 0.5))
    starved = EvalConfig(max_quad_cells=3)
    mv = eval_fun_modular(u, REC_HALF, starved)
    assert mv.is_indeterminate
    assert "Budget" in mv.reason or "budget" in mv.reason
