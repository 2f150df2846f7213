#include "otto/errors.hpp"
#include "otto/thermalization.hpp"

#include "support/frozen.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

namespace {

using namespace otto;
using otto::testing::Gen;
constexpr double kInf = std::numeric_limits<double>::infinity();

ThermalizationParams p1(double gt) { return ThermalizationParams::swap(1.0, 0.6, 1.0, 2.0, gt); }

TEST(Steady, FrozenAndLimits) {
    const auto [a, b] = steady_occupations(3.0, 1.0, 1.0);
    EXPECT_NEAR(a, frozen::kNTildeA, 1e-14);
    EXPECT_NEAR(a + b, 4.0, 1e-14);
    const auto [a0, b0] = steady_occupations(3.0, 1.0, 0.0);
    EXPECT_NEAR(a0, 2.0, 1e-15);
    EXPECT_NEAR(b0, 2.0, 1e-15);
    const auto [ai, bi] = steady_occupations(3.0, 1.0, kInf);
    EXPECT_EQ(ai, 3.0);
    EXPECT_EQ(bi, 1.0);
}

TEST(Steady, FixedPointOfIteration) {
    const ThermalizationParams p = ThermalizationParams::swap(
        1.0, 1.0, inverse_temperature_for(3.0, 1.0), inverse_temperature_for(1.0, 1.0), 1.0);
    const auto traj = recursion_iterate(p, {10.0, 0.0}, 200);
    ASSERT_EQ(traj.size(), 201u);
    const auto [a, b] = steady_occupations(p);
    EXPECT_NEAR(traj.back().first, a, 1e-12);
    EXPECT_NEAR(traj.back().second, b, 1e-12);
    const auto from_zero = recursion_iterate(p, {0.0, 0.0}, 50);
    EXPECT_NEAR(from_zero.back().first, a, 1e-15 * 4);
    EXPECT_NEAR(from_zero.back().second, b, 1e-15 * 4);
}

TEST(Steady, SteadyStartStaysPut) {
    const ThermalizationParams p = p1(0.7);
    const auto s = steady_occupations(p);
    for (const auto& x : recursion_iterate(p, s, 20)) {
        EXPECT_NEAR(x.first, s.first, 1e-14);
        EXPECT_NEAR(x.second, s.second, 1e-14);
    }
}

TEST(Steady, ContractionRate) {
    const ThermalizationParams p = p1(2.0);
    const auto s = steady_occupations(p);
    const auto traj = recursion_iterate(p, {5.0, 0.1}, 6);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double d0 = std::hypot(traj[k - 1].first - s.first, traj[k - 1].second - s.second);
        const double d1 = std::hypot(traj[k].first - s.first, traj[k].second - s.second);
        EXPECT_NEAR(d1 / d0, std::exp(-2.0), 1e-10);
    }
}

TEST(Steady, BetweenBathValues) {
    Gen gen(61);
    for (int i = 0; i < 1000; ++i) {
        const double na = gen.log_uniform(0.01, 10), nb = gen.log_uniform(0.01, 10);
        const auto [a, b] = steady_occupations(na, nb, gen.uniform(0, 10));
        ASSERT_NEAR(a + b, na + nb, 1e-12 * (na + nb));
        ASSERT_GE(a, std::min(na, nb) - 1e-14);
        ASSERT_LE(a, std::max(na, nb) + 1e-14);
    }
}

TEST(Params, RejectsPartialSwap) {
    ThermalizationParams p = p1(1.0);
    p.engine.theta = 1.0;
    EXPECT_THROW(p.validate(), DomainError);
    EXPECT_THROW(p1(-1.0), DomainError);
}

TEST(PartialTur, FrozenP1) {
    const PartialTurReport r = partial_tur_report(p1(1.0));
    EXPECT_NEAR(r.v, frozen::p1::kV_gt1, 1e-12);
    EXPECT_NEAR(r.coth_bound, 2.0 / std::tanh(0.5), 1e-14);
    EXPECT_TRUE(r.v_bound_holds);
    EXPECT_TRUE(r.modified_tur_holds);
    EXPECT_NEAR(r.report.inv_snr_w, frozen::p1::kPartialInvSnr_gt1, 1e-10 * frozen::p1::kPartialInvSnr_gt1);
    EXPECT_LT(r.v_identity_residual, 1e-10);
}

TEST(PartialTur, LongContactRecoversIdeal) {
    const double ideal = tur_report(p1(1.0).engine).inv_snr_w;
    EXPECT_NEAR(partial_tur_report(p1(40.0)).report.inv_snr_w, ideal, 1e-10 * ideal);
}

TEST(PartialTur, ZeroContactSentinel) {
    const PartialTurReport r = partial_tur_report(p1(0.0));
    EXPECT_TRUE(std::isinf(r.report.inv_snr_w));
    EXPECT_EQ(r.moments.mean_w, 0.0);
}

TEST(PartialTur, MeanRescalingByTanh) {
    Gen gen(62);
    for (int i = 0; i < 1000; ++i) {
        const EngineParams e = gen.engine();
        const double gt = gen.uniform(0.05, 8);
        const ThermalizationParams p = ThermalizationParams::swap(e.omega_a, e.omega_b, e.beta_a, e.beta_b, gt);
        const Moments ideal = moments(p.engine);
        const PartialTurReport r = partial_tur_report(p);
        if (std::abs(ideal.mean_w) < 1e-200) continue;
        ASSERT_NEAR(r.moments.mean_w / ideal.mean_w, std::tanh(gt / 2), 1e-12);
        ASSERT_NEAR(r.moments.mean_qh / ideal.mean_qh, std::tanh(gt / 2), 1e-12);
        ASSERT_NEAR(r.report.sigma / tur_report(p.engine).sigma, std::tanh(gt / 2), 1e-12);
    }
}

TEST(PartialTur, SubstitutionRule) {
    Gen gen(63);
    for (int i = 0; i < 200; ++i) {
        const EngineParams e = gen.engine();
        const ThermalizationParams p = ThermalizationParams::swap(e.omega_a, e.omega_b, e.beta_a, e.beta_b,
                                                                  gen.uniform(0.1, 5));
        const WorkHeatPmf pmf = partial_pmf(p);
        const PartialTurReport r = partial_tur_report(p);
        if (std::isinf(r.report.inv_snr_w)) continue;
        const double inv = pmf.var_w() / (pmf.mean_w() * pmf.mean_w());
        ASSERT_NEAR(inv, r.report.inv_snr_w, 1e-9 * inv);
        const Occupations occ = occupations(p.engine);
        ASSERT_NEAR(partial_inverse_snr(occ.n_a, occ.n_b, p.gamma_tau), inv, 1e-9 * inv);
        for (long n = -5; n <= 5; ++n) {
            if (n == 0) continue;
            const JointOutcome o = outcome_for(pmf, n);
            ASSERT_NEAR(-o.w / o.qh, 1.0 - e.omega_b / e.omega_a, 1e-14);
        }
    }
}

TEST(PartialTur, BoundChainOnGrid) {
    // The grid covers both temperature orderings; mute the ordering warning.
    std::ostringstream sink;
    auto* saved = std::clog.rdbuf(sink.rdbuf());
    const int k = 30;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            for (int l = 0; l < k; ++l) {
                const double xa = 0.05 + 4.0 * i / (k - 1);
                const double xb = 0.07 + 4.0 * j / (k - 1);
                const double gt = 0.05 + 6.0 * l / (k - 1);
                if (std::abs(xa - xb) < 1e-9) continue;
                const double v = v_function(xa, xb, gt);
                EXPECT_GE(v, 2.0 / std::tanh(gt / 2) * (1 - 1e-12)) << xa << " " << xb << " " << gt;
                const ThermalizationParams p = ThermalizationParams::swap(1.0, 1.0, xa, xb, gt);
                const PartialTurReport r = partial_tur_report(p);
                EXPECT_TRUE(r.modified_tur_holds);
                EXPECT_LT(r.v_identity_residual, 1e-8);
            }
        }
    }
    std::clog.rdbuf(saved);
}

TEST(PartialTur, SnrOrderedByContactTime) {
    const double na = 3.0;
    for (int i = 1; i < 60; ++i) {
        const double nb = 0.05 * i;
        if (std::abs(nb - na) < 1e-9) continue;
        double prev = 0.0;
        for (double gt : {1.0, 2.0, 3.0, 40.0}) {
            const double snr = 1.0 / partial_inverse_snr(na, nb, gt);
            ASSERT_GT(snr, prev) << nb << " " << gt;
            prev = snr;
        }
    }
}

TEST(EffectiveBeta, FrozenAndRoundTrip) {
    EXPECT_NEAR(effective_inverse_temperature(frozen::kNTildeA, 1.0), frozen::kBetaTilde, 1e-14);
    EXPECT_NEAR(effective_inverse_temperature(occupation(1.7, 0.8), 0.8), 1.7, 1e-12);
    EXPECT_EQ(effective_inverse_temperature(0.0, 1.0), kInf);
}

TEST(EffectiveBeta, DetailedFtWithEffectiveTemperatures) {
    const ThermalizationParams p = p1(1.3);
    const EngineParams eff = effective_engine(p);
    const WorkHeatPmf pmf = partial_pmf(p);
    for (long n = 1; n <= 10; ++n) {
        const double ratio = pmf.probability(n) / pmf.probability(-n);
        const double expect = std::exp((eff.beta_b - eff.beta_a) * n * eff.omega_a +
                                       eff.beta_b * (-double(n)) * (eff.omega_a - eff.omega_b));
        EXPECT_NEAR(ratio, expect, 1e-10 * expect);
    }
    EXPECT_LT(detailed_ft_check(pmf, eff, 10).max_residual, 1e-10);
}

TEST(SnrSweepCsv, Columns) {
    std::ostringstream out;
    write_snr_sweep_csv(out, 3.0, {0.5, 1.0}, {1.0, 2.0});
    EXPECT_EQ(out.str().rfind("n_b,snr_ideal,snr_gt1,snr_gt2\r\n", 0), 0u);
}

}  // namespace
