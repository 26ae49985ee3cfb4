import math

import numpy as np
import pytest
import scipy.integrate

from radial_plap.quadrature import (
    CONVERGED,
    DIVERGES,
    LeftCumulative,
    RightCumulative,
    integrate,
    integrate_exact_powerlog,
    interval_integrals,
)
from radial_plap.weights import INF, PowerLogPiece, WeightModel


class TestIntegrate:
    def test_inverse_sqrt(self):
        res = integrate(lambda r: (r - 1.0) ** -0.5, 1.0, 2.0)
        assert res.verdict == CONVERGED
        assert res.value == pytest.approx(2.0, abs=1e-10)

    def test_tail(self):
        res = integrate(lambda r: r**-2, 2.0, INF)
        assert res.verdict == CONVERGED
        assert res.value == pytest.approx(0.5, abs=1e-10)

    def test_log_endpoint_diverges(self):
        res = integrate(lambda r: (r - 1.0) ** -1, 1.0, 2.0)
        assert res.verdict == DIVERGES
        assert res.value == INF

    def test_budget_reported(self):
        res = integrate(lambda r: (r - 1.0) ** -0.5, 1.0, 2.0, budget=30)
        assert res.verdict == "inconclusive"

    def test_evaluation_count(self):
        res = integrate(lambda r: np.cos(r), 0.0, 1.0)
        assert 0 < res.evaluations < 10_000
        assert res.value == pytest.approx(math.sin(1.0), abs=1e-10)


GAMMA_SWEEP = [-2.0, -1.5, -1.0, -0.999, -0.5, 0.0]


class TestDivergenceSweep:
    @pytest.mark.parametrize("gamma", GAMMA_SWEEP)
    def test_verdict_matches_exponent_test(self, gamma):
        res = integrate(lambda r, g=gamma: (r - 1.0) ** g, 1.0, 2.0)
        if gamma <= -1.0:
            assert res.verdict == DIVERGES
        else:
            assert res.verdict == CONVERGED
            assert res.value == pytest.approx(1.0 / (gamma + 1.0), rel=1e-9)


class TestExactPowerlog:
    def test_boundary_exponent_diverges(self):
        m = WeightModel((PowerLogPiece(1.0, 2.0, 1.0, -1.0),), 1.0)
        res = integrate_exact_powerlog(m)
        assert res.verdict == DIVERGES

    def test_log_tail_closed_form(self):
        m = WeightModel((PowerLogPiece(3.0, INF, 1.0, 0.0, -1.0, -2.0),), 3.0)
        res = integrate_exact_powerlog(m)
        assert res.verdict == CONVERGED
        assert res.value == pytest.approx(1.0 / math.log(3.0), rel=1e-12)

    def test_mild_singularity_converges(self):
        m = WeightModel((PowerLogPiece(1.0, 2.0, 1.0, -0.5),), 1.0)
        res = integrate_exact_powerlog(m)
        assert res.verdict == CONVERGED
        assert res.value == pytest.approx(2.0, rel=1e-12)

    @pytest.mark.parametrize("gamma", GAMMA_SWEEP)
    def test_gamma_sweep_exact(self, gamma):
        m = WeightModel((PowerLogPiece(1.0, 2.0, 1.0, gamma),), 1.0)
        res = integrate_exact_powerlog(m)
        assert (res.verdict == DIVERGES) == (gamma <= -1.0)


def _random_powerlog(rng):
    """A convergent single-piece model, sometimes with a tail or log factor."""
    kind = rng.integers(0, 3)
    c = 10.0 ** rng.uniform(-1.5, 1.5)
    if kind == 0:  # finite with a left singularity
        a = rng.uniform(-0.9, 2.0)
        b = rng.uniform(-2.0, 2.0)
        return WeightModel((PowerLogPiece(1.0, 3.0, c, a, b),), 1.0)
    if kind == 1:  # plain tail
        e = rng.uniform(-4.0, -1.3)
        return WeightModel((PowerLogPiece(2.0, INF, c, 0.0, e),), 1.0)
    # log-corrected tail, exponent clear of the -1 boundary
    e = rng.uniform(-4.0, -1.4)
    l = rng.uniform(-2.0, 2.0)
    return WeightModel((PowerLogPiece(2.0, INF, c, 0.0, e, l),), 1.0)


class TestAgreement:
    def test_fifty_random_integrals(self):
        # the generic route promises |err| <= tol (1 + |value|); normalizing
        # the integrand to a unit-sized integral makes that a relative bound
        rng = np.random.default_rng(2024)
        for _ in range(50):
            m = _random_powerlog(rng)
            exact = integrate_exact_powerlog(m)
            assert exact.verdict == CONVERGED
            scale = abs(exact.value)
            generic = integrate(lambda r: float(m(r)) / scale, m.lo_domain,
                                m.r2, tol=4e-9)
            assert generic.verdict == CONVERGED, (m.pieces, generic)
            assert generic.value * scale == pytest.approx(exact.value, rel=1e-8)


class TestMonotonicity:
    def test_nonneg_integrand_monotone_in_interval(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a_exp = rng.uniform(-0.8, 1.5)
            f = lambda r, ae=a_exp: (r - 1.0) ** ae
            full = integrate(f, 1.0, 3.0).value
            for c in (1.5, 2.0, 2.5, 3.0):
                part = integrate(f, 1.0, c).value
                assert part <= full * (1 + 1e-12)


class TestCumulatives:
    def test_left_cumulative_matches_quad(self):
        m = WeightModel((PowerLogPiece(1.0, INF, 1.0, -0.5, -2.0),), 1.0)
        phi = LeftCumulative(m)
        for r in (1.001, 1.5, 4.0, 30.0):
            ref, _ = scipy.integrate.quad(
                lambda t: (t - 1.0) ** -0.5 * t**-2.0, 1.0, r, points=[1.0]
            )
            assert phi(r) == pytest.approx(ref, rel=1e-9)

    def test_right_cumulative_matches_closed_form(self):
        # antiderivative via t = sqrt(r-1): F = t/(1+t^2) + atan t
        m = WeightModel((PowerLogPiece(1.0, INF, 1.0, -0.5, -2.0),), 1.0)
        psi = RightCumulative(m)
        for r in (1.5, 4.0, 30.0):
            t = math.sqrt(r - 1.0)
            ref = math.pi / 2.0 - (t / (1.0 + t * t) + math.atan(t))
            assert psi(r) == pytest.approx(ref, rel=1e-11)

    def test_divergent_flags(self):
        heavy = WeightModel((PowerLogPiece(1.0, INF, 1.0, -1.5, 0.0),), 1.0)
        assert LeftCumulative(heavy).divergent
        assert LeftCumulative(heavy)(2.0) == INF
        slow = WeightModel((PowerLogPiece(1.0, INF, 1.0, 0.0, -1.0),), 1.0)
        assert RightCumulative(slow).divergent

    def test_interval_integrals_sum_to_total(self):
        m = WeightModel(
            (PowerLogPiece(1.0, 2.0, 1.0, -0.25), PowerLogPiece(2.0, 6.0, 1.0, 0.0, -3.0)),
            1.0,
        )
        edges = np.concatenate([[1.0], np.geomspace(1.0 + 1e-8, 6.0, 200)])
        parts = interval_integrals(m, edges)
        total = integrate_exact_powerlog(m, a=1.0, b=6.0)
        assert np.sum(parts) == pytest.approx(total.value, rel=1e-10)
