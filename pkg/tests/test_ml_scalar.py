import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import wofz

from fracsys.errors import AccuracyLossError, InvalidArgumentError, UnsupportedOrderError
from fracsys.gammafn import gamma
from fracsys.ml_scalar import MLParams, ml, ml_deriv, ml_deriv_series_array

from conftest import ml_reference, ml_deriv_reference


class TestParams:
    def test_rejects_bad_orders(self):
        with pytest.raises(InvalidArgumentError):
            MLParams(0.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            MLParams(2.5, 1.0)
        with pytest.raises(InvalidArgumentError):
            MLParams(0.5, 0.0)
        with pytest.raises(InvalidArgumentError):
            MLParams(math.nan, 1.0)

    def test_rejects_nonfinite_argument(self):
        with pytest.raises(InvalidArgumentError):
            ml(MLParams(0.5, 1.0), complex(math.inf, 0))


class TestKnownValues:
    def test_exponential_special_case(self):
        p = MLParams(1.0, 1.0)
        assert ml(p, 1.0) == pytest.approx(math.e, abs=1e-12)
        for x in np.linspace(-10, 10, 41):
            assert abs(ml(p, x) - math.exp(x)) <= 1e-10

    def test_zero_argument(self):
        assert ml(MLParams(0.7, 1.3), 0.0) == pytest.approx(1.0 / gamma(1.3), rel=1e-14)

    def test_series_value_beta_half(self):
        # frozen from the arbitrary-precision series oracle (dps >= 60)
        got = ml(MLParams(0.5, 1.0), -2.0)
        assert got == pytest.approx(0.2553956763105057, abs=1e-12)

    def test_faddeeva_identity(self):
        # E_{1/2,1}(z) = wofz(-i z) across all regimes
        rs = np.random.default_rng(3)
        p = MLParams(0.5, 1.0)
        for _ in range(120):
            z = 10 ** rs.uniform(-1, 2.5) * cmath.exp(1j * rs.uniform(-math.pi, math.pi))
            if z.real > 22:
                continue
            ref = complex(wofz(-1j * z))
            assert abs(ml(p, z) - ref) <= 1e-10 * max(1.0, abs(ref))


class TestOracleSweep:
    @pytest.mark.parametrize("beta,nu", [(0.5, 1.0), (0.7, 1.3), (0.3, 0.8), (0.9, 2.5), (1.7, 1.0), (0.6, 0.6)])
    def test_against_high_precision_series(self, beta, nu, rng):
        for _ in range(8):
            r = rng.uniform(0, 8.0 if beta < 0.45 else 25.0)
            z = r * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            try:
                got = ml(MLParams(beta, nu), z)
            except AccuracyLossError:
                continue
            ref = ml_reference(beta, nu, z)
            assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref)), (beta, nu, z)


class TestAsymptoticRegimes:
    def test_algebraic_decay_negative_axis(self):
        # |E(-x)| * x stays within a factor 10 of its value at x = 1e3
        p = MLParams(0.6, 1.0)
        base = abs(ml(p, -1.0e3)) * 1.0e3
        for x in np.logspace(3, 6, 13):
            val = abs(ml(p, -x)) * x
            assert base / 10 < val < base * 10

    def test_exponential_growth_sector(self):
        # log E(z) - z^{1/beta} bounded via the leading term for real z in [10, 30]
        p = MLParams(0.8, 1.0)
        for x in np.linspace(10, 30, 9):
            lead = (1.0 / 0.8) * x ** ((1 - 1.0) / 0.8) * math.exp(x ** (1 / 0.8))
            assert ml(p, x).real == pytest.approx(lead, rel=0.2)
            gap = math.log(abs(ml(p, x))) - x ** (1 / 0.8)
            assert abs(gap) < 2.0

    def test_overflow_raises_accuracy_loss(self):
        with pytest.raises(AccuracyLossError):
            ml(MLParams(0.5, 1.5), 1.0e4)


class TestTermShiftIdentity:
    @settings(max_examples=60, deadline=None)
    @given(
        beta=st.floats(min_value=0.3, max_value=2.0),
        nu=st.floats(min_value=1.01, max_value=3.0),
        rad=st.floats(min_value=0.0, max_value=10.0),
        phase=st.floats(min_value=-math.pi, max_value=math.pi),
    )
    def test_shift(self, beta, nu, rad, phase):
        # E_{b,v}(z) = z E_{b,v+b}(z) + 1/Gamma(v)
        z = rad * cmath.exp(1j * phase)
        try:
            lhs = ml(MLParams(beta, nu), z)
            rhs = z * ml(MLParams(beta, nu + beta), z) + 1.0 / gamma(nu)
        except AccuracyLossError:
            return  # value overflows double precision; nothing to compare
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestDerivatives:
    def test_identity_cases(self):
        p = MLParams(1.0, 1.0)
        assert ml_deriv(p, 0.5, 1) == pytest.approx(math.exp(0.5), rel=1e-11)
        q = MLParams(0.37, 1.21)
        z = 1.3 - 0.4j
        assert ml_deriv(q, z, 0) == ml(q, z)

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            ml_deriv(MLParams(0.5, 1.0), 1.0, 21)
        with pytest.raises(InvalidArgumentError):
            ml_deriv(MLParams(0.5, 1.0), 1.0, -1)

    def test_second_derivative_frozen_case(self):
        # finite-difference oracle with step extrapolation, frozen:
        # central differences of ml at h and h/2, Richardson-combined
        p = MLParams(0.5, 0.5)
        got = ml_deriv(p, 1.2, 2)
        h = 1e-3
        def central(hh):
            return (ml(p, 1.2 + hh) - 2 * ml(p, 1.2) + ml(p, 1.2 - hh)) / hh**2
        fd = (4 * central(h / 2) - central(h)) / 3
        assert got == pytest.approx(fd, rel=1e-8)

    def test_first_derivative_consistency(self, rng):
        # matches finite differences to 1e-6 relative for |z| <= 10
        for _ in range(25):
            beta = rng.uniform(0.3, 2.0)
            nu = rng.uniform(0.4, 2.5)
            z = rng.uniform(0, 10) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            p = MLParams(beta, nu)
            try:
                d = ml_deriv(p, z, 1)
            except AccuracyLossError:
                continue
            h = 1e-6 * (1 + abs(z))
            fd = (ml(p, z + h) - ml(p, z - h)) / (2 * h)
            assert abs(d - fd) <= 1e-6 * max(1.0, abs(fd))

    @pytest.mark.parametrize("k", [1, 2, 5, 12, 20])
    def test_against_high_precision_series(self, k, rng):
        for _ in range(4):
            beta = rng.uniform(0.3, 1.0)
            nu = rng.uniform(0.4, 2.0)
            z = rng.uniform(0, 6) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            got = ml_deriv(MLParams(beta, nu), z, k)
            ref = ml_deriv_reference(beta, nu, z, k)
            assert abs(got - ref) <= 1e-8 * max(1.0, abs(ref)), (beta, nu, z, k)

    def test_large_argument_derivatives(self):
        # E_{1/2,1} derivatives via high-precision differentiation of
        # exp(z^2) erfc(-z); exercised in the spectral symbol path
        import mpmath as mp

        for x in (-150.0, -2000.0, -16384.0):
            for k in (1, 2, 3):
                with mp.workdps(60):
                    ref = complex(mp.diff(lambda w: mp.e ** (w * w) * mp.erfc(-w), mp.mpf(x), k))
                got = ml_deriv(MLParams(0.5, 1.0), x, k)
                assert got == pytest.approx(ref, rel=5e-7), (x, k)


class TestSeriesArrayKernel:
    def test_matches_scalar_derivatives(self, rng):
        beta, nu, k = 0.45, 1.7, 3
        xs = rng.uniform(-1, 1, 12) + 1j * rng.uniform(-1, 1, 12)
        got = ml_deriv_series_array(beta, nu, k, xs)
        kfact = math.factorial(k)
        for x, g in zip(xs, got):
            ref = ml_deriv_reference(beta, nu, x, k) / kfact
            assert abs(g - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_high_order_stability(self):
        # far beyond the public cap; used internally by the series solver
        xs = np.linspace(-0.9, 0.9, 7).astype(complex)
        vals = ml_deriv_series_array(0.4, 1.0, 60, xs)
        assert np.all(np.isfinite(vals))
        ref = ml_deriv_reference(0.4, 1.0, 0.9, 60) / math.factorial(60)
        assert vals[-1] == pytest.approx(ref, rel=1e-9)
