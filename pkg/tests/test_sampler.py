"""Monte Carlo cross-checks: determinism, CLT agreement, coupling structure."""

import math

import numpy as np
import pytest

from depbound.costs import CostFunction, builtin
from depbound.marginals import Exponential, LogNormal, Rayleigh, Uniform
from depbound.sampler import (
    COUPLINGS,
    McEstimate,
    NonFiniteCostError,
    empirical_correlation,
    mc_expectation,
)
from depbound.transport import (
    comonotonic_expectation,
    countermonotonic_expectation,
    independent_expectation,
)

E1 = Exponential(1.0)
E2 = Exponential(2.0)


class TestDeterminism:
    def test_same_seed_bit_identical(self):
        cost = builtin("sinr")
        a = mc_expectation(cost, E1, E2, "comonotonic", 50_000, seed=7)
        b = mc_expectation(cost, E1, E2, "comonotonic", 50_000, seed=7)
        assert a == b

    def test_different_seeds_differ(self):
        cost = builtin("sinr")
        a = mc_expectation(cost, E1, E2, "independent", 50_000, seed=7)
        b = mc_expectation(cost, E1, E2, "independent", 50_000, seed=8)
        assert a.value != b.value

    def test_batch_partition_invariance(self):
        # Streaming moments must not depend on how draws are chunked.
        cost = builtin("product")
        whole = mc_expectation(cost, E1, E2, "countermonotonic", 30_000, seed=11)
        chunked = mc_expectation(cost, E1, E2, "countermonotonic", 30_000, seed=11,
                                 batch_size=4_096)
        assert chunked.value == pytest.approx(whole.value, rel=1e-12)
        assert chunked.stderr == pytest.approx(whole.stderr, rel=1e-10)

    def test_metadata_round_trip(self):
        est = mc_expectation(builtin("additive"), E1, E2, "independent", 1_000, seed=3)
        assert isinstance(est, McEstimate)
        assert est.n == 1_000
        assert est.seed == 3
        assert est.stderr > 0


class TestValidation:
    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            mc_expectation(builtin("additive"), E1, E2, "independent", 99, seed=0)

    def test_rejects_unknown_coupling(self):
        with pytest.raises(ValueError, match="coupling"):
            mc_expectation(builtin("additive"), E1, E2, "martingale", 1_000, seed=0)

    def test_coupling_names_registry(self):
        assert set(COUPLINGS) == {"comonotonic", "countermonotonic", "independent"}

    def test_overflowing_draws_raise(self):
        fat = LogNormal(0.0, 1_000.0)
        with pytest.raises(NonFiniteCostError, match="overflow"):
            mc_expectation(builtin("product"), fat, fat, "comonotonic", 1_000, seed=1)


class TestAgreement:
    QUAD = {
        "comonotonic": comonotonic_expectation,
        "countermonotonic": countermonotonic_expectation,
        "independent": independent_expectation,
    }

    @pytest.mark.parametrize("coupling", sorted(COUPLINGS))
    def test_matches_quadrature_within_4_sigma(self, coupling):
        cost = builtin("sinr")
        exact = self.QUAD[coupling](cost, E1, E2).value
        est = mc_expectation(cost, E1, E2, coupling, 400_000, seed=20260819)
        assert abs(est.value - exact) < 4 * est.stderr

    def test_additive_all_couplings_share_mean(self):
        cost = builtin("additive")
        target = E1.mean() + E2.mean()
        for coupling in sorted(COUPLINGS):
            est = mc_expectation(cost, E1, E2, coupling, 200_000, seed=5)
            assert abs(est.value - target) < 4 * est.stderr

    def test_dependent_couplings_share_stream(self):
        # Same seed, same uniforms: the two dependent estimates for an
        # additive cost must reconstruct from mirrored marginal draws.
        cost = builtin("additive")
        n, seed = 65_536, 424242
        co = mc_expectation(cost, E1, E2, "comonotonic", n, seed=seed)
        counter = mc_expectation(cost, E1, E2, "countermonotonic", n, seed=seed)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        u = np.maximum(rng.random(n), 2.0**-53)
        expect_co = np.mean(E1.quantile(u) + E2.quantile(u))
        expect_counter = np.mean(E1.quantile(u) + E2.quantile(1.0 - u))
        assert co.value == pytest.approx(float(expect_co), rel=1e-12)
        assert counter.value == pytest.approx(float(expect_counter), rel=1e-12)

    def test_extreme_coupling_brackets_independent(self):
        cost = builtin("prop_fair")
        lo = mc_expectation(cost, E1, E1, "countermonotonic", 300_000, seed=90)
        mid = mc_expectation(cost, E1, E1, "independent", 300_000, seed=91)
        hi = mc_expectation(cost, E1, E1, "comonotonic", 300_000, seed=92)
        guard = 4 * (lo.stderr + mid.stderr + hi.stderr)
        assert lo.value - guard < mid.value < hi.value + guard


class TestCorrelation:
    def test_perfect_lines(self):
        x = np.linspace(0.0, 5.0, 1_000)
        assert empirical_correlation(x, 2 * x + 1) == pytest.approx(1.0)
        assert empirical_correlation(x, -0.5 * x) == pytest.approx(-1.0)

    def test_degenerate_inputs_rejected(self):
        x = np.linspace(0.0, 5.0, 100)
        with pytest.raises(ValueError):
            empirical_correlation(x, np.full(100, 2.0))
        with pytest.raises(ValueError):
            empirical_correlation(x, x[:50])
        with pytest.raises(ValueError):
            empirical_correlation(x[:1], x[:1])

    def test_countermonotonic_exponential_pair(self):
        # Corr(X, Y) under the opposed coupling of two unit exponentials
        # is 1 - pi^2/6.
        rng = np.random.default_rng(314159)
        u = rng.random(500_000)
        rho = empirical_correlation(E1.quantile(u), E1.quantile(1.0 - u))
        assert rho == pytest.approx(1.0 - math.pi**2 / 6.0, abs=5e-3)

    def test_comonotonic_identical_marginals(self):
        rng = np.random.default_rng(2718)
        u = rng.random(100_000)
        x = Rayleigh(1.0).quantile(u)
        assert empirical_correlation(x, x.copy()) == pytest.approx(1.0)


class TestErrorChannel:
    def test_cost_overflow_names_the_point(self):
        blow = CostFunction(name="blow", fn=lambda x, y: np.exp(x * 500.0) + 0.0 * y)
        with pytest.raises(NonFiniteCostError, match="blow"):
            mc_expectation(blow, Uniform(0.5, 3.0), E1, "independent", 1_000, seed=2)
