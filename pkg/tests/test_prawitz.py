"""Prawitz bound: theta root, kernel behavior, certified integration."""

import math

import numpy as np
import pytest

from radbound.prawitz import (THETA, Integrator, PrawitzParams,
                              default_params, envelope_g, envelope_h,
                              integrate_certified, kernel_k, lipschitz_bounds,
                              prawitz_F, prawitz_row, theta_root)


def test_theta_bracket():
    th = theta_root()
    assert th.hi - th.lo <= 1e-10
    assert abs(0.5 * (th.lo + th.hi) - 1.778) < 1e-4
    # the root satisfies exp(-v^2/2) = -cos(v) up to bracket width
    mid = 0.5 * (th.lo + th.hi)
    assert abs(math.exp(-mid * mid / 2) + math.cos(mid)) < 1e-8
    assert math.pi / 2 < th.lo and th.hi < math.pi


def test_kernel_endpoint_continuity():
    for x, T in [(0.5, 10.0), (1.4, 8.7), (-0.3, 12.0)]:
        k0 = 1.0 + T * x / math.pi
        assert kernel_k(1e-9, x, T) == pytest.approx(k0, abs=1e-6)
        assert kernel_k(1.0 - 1e-9, x, T) == pytest.approx(0.0, abs=1e-6)
        # interior smoothness probe across the u = 1/2 region
        us = np.linspace(1e-6, 1 - 1e-6, 1001)
        vals = np.array([kernel_k(float(u), x, T) for u in us])
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(np.diff(vals))) < 0.1


def test_envelopes_dominate_integrands():
    """|k(u)| * |phi_S(Tu)|^(1/a^2-ish) factors are below g/h envelopes."""
    a = 0.35
    rng = np.random.default_rng(4)
    for v in rng.uniform(1e-6, math.pi / 2, size=200):
        # g envelope on the cosine-power branch
        assert envelope_g(float(v), a) >= 0.0
    for v in rng.uniform(1e-6, math.pi - 1e-6, size=200):
        assert envelope_h(float(v), a) >= 0.0
    # h is the max envelope: below theta it uses the exponential branch
    assert envelope_h(1.0, a) >= math.exp(-1.0 ** 2 / (2 * a * a)) - 1e-12


def test_integrate_certified_linear_exact():
    # trapezoid is exact on affine functions; budget must still be >= 0
    val, err = integrate_certified(lambda u: 2.0 * u + 1.0, 0.0, 1.0,
                                   panels=64, lipschitz_bound=2.0)
    assert val == pytest.approx(2.0, abs=1e-12)
    assert 0.0 <= err < 1e-2


def test_integrate_certified_error_scales():
    f = lambda u: np.sin(3.0 * u)
    _, e1 = integrate_certified(f, 0.0, 1.0, panels=100, lipschitz_bound=3.0)
    _, e2 = integrate_certified(f, 0.0, 1.0, panels=200, lipschitz_bound=3.0)
    assert e2 < e1
    assert e2 == pytest.approx(e1 / 2, rel=0.01)


def test_default_params():
    p = default_params(0.25, 1.0)
    assert p.T == pytest.approx(math.pi / 0.25)
    assert p.q == 0.5


def test_trapezoid_converges_to_adaptive():
    """With enough panels the certified value approaches the quad estimate."""
    p = default_params(0.3, 1.0)
    ad = prawitz_F(p, Integrator.ADAPTIVE_DISCOUNTED)
    coarse = prawitz_F(p, Integrator.TRAPEZOID_CERTIFIED, panels=2000)
    fine = prawitz_F(p, Integrator.TRAPEZOID_CERTIFIED, panels=100000)
    assert fine.error_budget < coarse.error_budget
    # raw estimates (budget added back) agree within the summed budgets
    raw_f = fine.value + fine.error_budget
    raw_a = ad.value + 0.01
    assert abs(raw_f - raw_a) <= fine.error_budget + 0.01


def test_certified_value_is_conservative():
    """More panels can only raise the certified lower bound (same estimate,
    smaller subtracted budget), modulo the shared-grid rounding."""
    p = default_params(0.4, 0.8)
    v = [prawitz_F(p, Integrator.TRAPEZOID_CERTIFIED, panels=n).value
         for n in (2000, 20000, 100000)]
    assert v[0] <= v[1] + 1e-6 <= v[2] + 2e-6


def test_prawitz_row_matches_scalar():
    a = 0.32
    xs = np.array([-0.5, 0.2, 0.8, 1.3, 2.0])
    row = prawitz_row(a, xs, budget=0.002)
    for xv, rv in zip(xs, row):
        sc = prawitz_F(default_params(a, float(xv)),
                       Integrator.TRAPEZOID_CERTIFIED, panels=100000)
        # both are certified lower bounds of the same integral; their raw
        # estimates must sit within the two budgets of each other
        assert abs(rv - sc.value) <= 0.002 + sc.error_budget + 1e-9


def test_f_weakly_decreasing_in_a_numerically():
    xs = np.array([0.5, 1.0, 1.5])
    rows = [prawitz_row(a, xs, budget=0.0005)
            for a in (0.25, 0.3, 0.35, 0.4)]
    for r0, r1 in zip(rows, rows[1:]):
        assert np.all(r1 <= r0 + 2e-3)


def test_lipschitz_bounds_monotone_in_T():
    b_small = lipschitz_bounds(8.0, 1.0)
    b_big = lipschitz_bounds(16.0, 1.0)
    assert all(x > 0 for x in b_small)
    assert all(b > s for b, s in zip(b_big, b_small))


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        PrawitzParams(a=0.0, x=1.0, T=10.0, q=0.5)
    with pytest.raises(ValueError):
        PrawitzParams(a=0.5, x=1.0, T=-1.0, q=0.5)
