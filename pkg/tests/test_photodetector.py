import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy import constants

from nanoradar import photodetector as pd
from nanoradar.errors import DomainError
from nanoradar.photodetector import RcePdParams

NU = constants.c / 850e-9


def params(**kw):
    base = dict(x_a=0.5e-6, w_n=1e-6, w_p=1.5e-6, v_n=1e5, v_p=0.7e5, alpha_eff=2e6, mu_f=0.4, mu_b=0.3, nu=NU)
    base.update(kw)
    return RcePdParams(**base)


class TestEfficiencyFactors:
    def test_strong_absorption_limit(self):
        mf, mb = pd.quantum_efficiency_factors(params(alpha_eff=1e9))
        assert mf == pytest.approx(0.4, rel=1e-15) and mb == pytest.approx(0.3, rel=1e-15)

    def test_zero_efficiency(self):
        assert pd.quantum_efficiency_factors(params(mu_f=0.0, mu_b=0.0)) == (0.0, 0.0)

    def test_half_absorption(self):
        p = params(alpha_eff=math.log(2) / 0.5e-6)
        mf, mb = pd.quantum_efficiency_factors(p)
        assert mf == pytest.approx(0.8, rel=1e-14) and mb == pytest.approx(0.6, rel=1e-14)

    def test_vanishing_absorption(self):
        with pytest.raises(DomainError):
            pd.quantum_efficiency_factors(params(alpha_eff=1e-320))

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            params(mu_f=0.7, mu_b=0.5)
        with pytest.raises(DomainError):
            params(v_n=0.0)


class TestCarriers:
    def test_before_switch_on(self):
        assert pd.photo_carrier_concentrations(-1e-12, 1e-3, params()) == (0.0, 0.0)

    def test_dark(self):
        t = np.linspace(-1e-11, 5e-11, 50)
        n, p = pd.photo_carrier_concentrations(t, 0.0, params())
        assert np.all(n == 0) and np.all(p == 0)

    def test_doubling_power(self):
        t = np.linspace(-1e-11, 5e-11, 97)
        n1, p1 = pd.photo_carrier_concentrations(t, 1e-3, params())
        n2, p2 = pd.photo_carrier_concentrations(t, 2e-3, params())
        assert np.array_equal(n2, 2 * n1) and np.array_equal(p2, 2 * p1)

    def test_sweep_window_matches_inside_grouping(self):
        p = params()
        a, xa, w, v = p.alpha_eff, p.x_a, p.w_n, p.v_n
        t = (w + 0.3 * xa) / v
        mf, mb = pd.quantum_efficiency_factors(p)
        rate = 1e-3 / (constants.h * NU)
        expected = rate * (mf * (1 - math.exp(-a * xa + a * v * t - a * w)) + mb * (math.exp(a * v * t - a * w) - math.exp(-a * xa)))
        n, _ = pd.photo_carrier_concentrations(t, 1e-3, p)
        assert n == pytest.approx(expected, rel=1e-13)

    def test_outside_grouping(self):
        p = params()
        a, xa, w, v = p.alpha_eff, p.x_a, p.w_n, p.v_n
        t = (w + 0.3 * xa) / v
        mf, mb = pd.quantum_efficiency_factors(p)
        rate = 1e-3 / (constants.h * NU)
        expected = rate * (mf * (1 - math.exp(-a * xa + a * v * t) - a * w) + mb * (math.exp(a * v * t - a * w) - math.exp(-a * xa)))
        n, _ = pd.photo_carrier_concentrations(t, 1e-3, p, grouping="outside")
        assert n == pytest.approx(expected, rel=1e-13)
        # both readings share the plateau
        t0 = 0.5 * w / v
        assert pd.photo_carrier_concentrations(t0, 1e-3, p, "outside") == pd.photo_carrier_concentrations(t0, 1e-3, p)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            pd.photo_carrier_concentrations(0.0, -1.0, params())
        with pytest.raises(DomainError):
            pd.photo_carrier_concentrations(0.0, 1.0, params(), grouping="middle")


class TestPhotocurrent:
    def test_plateau(self):
        p = params()
        t = 0.5 * min(p.w_n / p.v_n, p.w_p / p.v_p)
        mf, mb = pd.quantum_efficiency_factors(p)
        rate = 2e-3 / (constants.h * NU)
        expected = p.q / (p.x_a + p.w_n + p.w_p) * rate * (mf + mb) * (1 - math.exp(-p.alpha_eff * p.x_a)) * (p.v_n + p.v_p)
        assert pd.photocurrent(t, 2e-3, p) == pytest.approx(expected, rel=1e-14)

    def test_causal(self):
        t = -np.logspace(-18, -9, 40)
        assert np.all(pd.photocurrent(t, 1e-3, params()) == 0)

    def test_finite_support(self):
        p = params()
        end = max(w for w in p.windows().values())
        t = end * np.array([1.0, 1.0 + 1e-12, 1.5, 10.0, 1e6])
        assert np.all(pd.photocurrent(t, 1e-3, p) == 0)

    @given(st.one_of(st.just(0.0), st.floats(1e-6, 1e3)), st.floats(-1e-10, 1e-10))
    def test_linearity(self, a, t):
        p = params()
        # products are rounded in a different order, so allow a few ulps
        assert pd.photocurrent(t, a * 1e-3, p) == pytest.approx(a * pd.photocurrent(t, 1e-3, p), rel=1e-14, abs=0)

    @pytest.mark.parametrize("scale", [0.25, 2.0, 1024.0])
    def test_power_of_two_scaling_is_exact(self, scale):
        t = np.linspace(-1e-11, 5e-11, 123)
        assert np.array_equal(pd.photocurrent(t, scale * 1e-3, params()), scale * pd.photocurrent(t, 1e-3, params()))

    @given(
        st.floats(1e-8, 1e-5),
        st.floats(1e-8, 1e-5),
        st.floats(1e3, 1e6),
        st.floats(1e3, 1e8),
        st.floats(0.0, 0.5),
        st.floats(0.0, 0.5),
    )
    def test_plateau_nonnegative(self, xa, w, v, alpha, mf, mb):
        p = RcePdParams(xa, w, w, v, v, alpha, mf, mb, NU)
        assert pd.photocurrent(0.5 * w / v, 1e-3, p) >= 0


def _single_carrier_charge(p, power):
    """Exact charge of one carrier species from the piecewise expressions."""
    t = sp.Symbol("t", real=True)
    a, xa, w, v = (sp.nsimplify(val) for val in (p.alpha_eff, p.x_a, p.w_n, p.v_n))
    mf, mb = (sp.Float(m, 30) for m in pd.quantum_efficiency_factors(p))
    plateau = (mf + mb) * (1 - sp.exp(-a * xa))
    sweep = mf * (1 - sp.exp(-a * xa + a * v * t - a * w)) + mb * (sp.exp(a * v * t - a * w) - sp.exp(-a * xa))
    counts = plateau * w / v + sp.integrate(sweep, (t, w / v, (w + xa) / v))
    rate = power / (constants.h * p.nu)
    return float(counts) * rate * p.q * p.v_n / (p.x_a + p.w_n + p.w_p)


def test_charge_against_symbolic_integral():
    p = params(w_p=1e-6, v_p=1e5)
    power = 1e-3
    t1, t2 = p.w_n / p.v_n, (p.w_n + p.x_a) / p.v_n
    # trapezoid on each smooth piece, stopping just short of each jump
    total = 0.0
    for lo, hi in ((0.0, t1), (t1, t2)):
        grid = np.linspace(lo, np.nextafter(hi, 0), 20001)
        total += np.trapezoid(pd.photocurrent(grid, power, p), grid)
    assert total == pytest.approx(2 * _single_carrier_charge(p, power), rel=1e-6)


class TestSeries:
    def test_empty(self):
        trace = pd.photocurrent_series([], 1e-3, params())
        assert trace.times.size == 0 and trace.currents.size == 0

    def test_matches_pointwise(self):
        p = params()
        grid = np.linspace(-5e-12, 4e-11, 301)
        trace = pd.photocurrent_series(grid, 1e-3, p)
        assert all(trace.currents[i] == pd.photocurrent(t, 1e-3, p) for i, t in enumerate(grid))
        assert trace.meta["windows"] == p.windows()

    def test_non_monotone(self):
        with pytest.raises(DomainError):
            pd.photocurrent_series([0.0, 2e-12, 1e-12], 1e-3, params())


class TestRcFilter:
    def test_step_response(self):
        t = np.linspace(0.0, 5e-11, 501)
        trace = pd.PhotocurrentTrace(t, np.ones_like(t))
        tau = 50.0 * 2e-13
        out = pd.rc_lowpass(trace, 50.0, 2e-13)
        assert np.allclose(out.currents, 1 - np.exp(-t / tau), rtol=0, atol=1e-13)
        assert out.meta["rc_time_constant"] == tau

    def test_ramp_is_exact(self):
        t = np.linspace(0.0, 1e-11, 11)
        tau = 1e-12
        out = pd.rc_lowpass(pd.PhotocurrentTrace(t, t / tau), 1.0, tau)
        # y' = (u - y)/tau with u = t/tau and y(0) = 0
        exact = t / tau - 1 + np.exp(-t / tau)
        assert np.allclose(out.currents, exact, rtol=1e-12, atol=1e-14)

    def test_filter_preserves_charge_eventually(self):
        p = params()
        t = np.linspace(0, 3e-10, 30001)
        trace = pd.photocurrent_series(t, 1e-3, p)
        out = pd.rc_lowpass(trace, 50.0, 1e-13)
        q_in = np.trapezoid(trace.currents, t)
        assert np.trapezoid(out.currents, t) == pytest.approx(q_in, rel=1e-3)

    def test_invalid_time_constant(self):
        with pytest.raises(DomainError):
            pd.rc_lowpass(pd.PhotocurrentTrace(np.zeros(1), np.zeros(1)), 0.0, 1e-12)
