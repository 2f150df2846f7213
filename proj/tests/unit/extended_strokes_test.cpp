#include "otto/errors.hpp"
#include "otto/extended_strokes.hpp"
#include "otto/special_functions.hpp"

#include "support/frozen.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace otto;
using otto::testing::Gen;

SqueezeParams sq1(double r = 0.5) {
    return {1.0, 0.6, inverse_temperature_for(0.5, 1.0), inverse_temperature_for(0.2, 0.6), r};
}

CubicParams cub1() { return {3.0, 1.0, 0.3, 1.0, Complex(0.3, 0.0)}; }

TEST(Squeeze, FrozenMeanAndVariance) {
    const SqueezeStatistics s = squeeze_moments(sq1());
    EXPECT_NEAR(s.moments.mean_w, frozen::sq1::kMeanW, 1e-14);
    EXPECT_NEAR(s.moments.var_w, frozen::sq1::kVarW, 1e-13);
    EXPECT_LT(s.report.identity_residual, 1e-10);
    EXPECT_TRUE(s.report.flags.shifted_tur);
}

TEST(Squeeze, NoSqueezingIsZeroWork) {
    const SqueezeStatistics s = squeeze_moments(sq1(0.0));
    EXPECT_EQ(s.moments.mean_w, 0.0);
    EXPECT_TRUE(std::isinf(s.report.inv_snr_w));
    EXPECT_EQ(s.report.sigma, 0.0);
}

TEST(Squeeze, AlwaysADud) {
    Gen gen(51);
    for (int i = 0; i < 2000; ++i) {
        SqueezeParams p;
        p.omega_a = gen.log_uniform(0.2, 5);
        p.omega_b = gen.log_uniform(0.2, 5);
        p.beta_a = gen.log_uniform(0.1, 5);
        p.beta_b = gen.log_uniform(0.1, 5);
        p.r = gen.uniform(0.01, 1.5);
        const SqueezeStatistics s = squeeze_moments(p);
        ASSERT_GE(s.moments.mean_w, 0.0);
        ASSERT_LE(s.moments.mean_qh, 0.0);
        ASSERT_LE(s.moments.mean_qc, 0.0);
        const double x = p.beta_a * p.omega_a + p.beta_b * p.omega_b;
        ASSERT_NEAR(s.report.sigma, x / (p.omega_a + p.omega_b) * s.moments.mean_w,
                    1e-12 * s.report.sigma);
        ASSERT_NEAR(s.report.inv_snr_w, affinity_h(x) / s.report.sigma + 1.0, 1e-10 * s.report.inv_snr_w);
        ASSERT_TRUE(s.report.flags.shifted_tur);
        const WorkHeatPmf pmf = squeeze_pmf(p);
        ASSERT_NEAR(pmf.mean_w(), s.moments.mean_w, 1e-10 * std::max(1.0, s.moments.mean_w));
        ASSERT_NEAR(pmf.var_w(), s.moments.var_w, 1e-10 * std::max(1.0, s.moments.var_w));
    }
}

TEST(Squeeze, ValidateRejectsNegativeR) {
    SqueezeParams p = sq1();
    p.r = -0.1;
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(Squeeze, HeisenbergNumberRelation) {
    // <a^dag a>' = N_A cosh^2 r + (N_B + 1) sinh^2 r, read off the oracle.
    for (double r : {0.2, 0.5}) {
        const SqueezeParams p = sq1(r);
        const Occupations occ = p.occupations();
        const FockOracleResult o = joint_distribution(StrokeSpec::two_mode_squeeze(r), occ, p.omega_a,
                                                      p.omega_b, TruncationSpec::for_occupations(occ, 40));
        const double c2 = std::cosh(r) * std::cosh(r), s2 = std::sinh(r) * std::sinh(r);
        const double na_after = occ.n_a + o.mean_delta_energy_a() / p.omega_a;
        const double nb_after = occ.n_b + o.mean_delta_energy_b() / p.omega_b;
        EXPECT_NEAR(na_after, occ.n_a * c2 + (occ.n_b + 1) * s2, 1e-8);
        EXPECT_NEAR(nb_after, occ.n_b * c2 + (occ.n_a + 1) * s2, 1e-8);
    }
}

TEST(Cubic, OracleFedEntropy) {
    const CubicSupportReport rep = cubic_delta_structure(cub1());
    EXPECT_NEAR(rep.mean_qh, frozen::cub1::kMeanQh, 1e-8);
    const Moments m = rep.oracle.moments();
    EXPECT_NEAR(m.mean_w, frozen::cub1::kMeanW, 1e-8);
    // automatic cutoff is n_max = 26 against 40 for the reference; the dropped
    // tail weighs ~(27 omega_a)^2 in the second moment
    EXPECT_NEAR(m.var_qh + m.mean_qh * m.mean_qh, frozen::cub1::kMeanQh2, 1e-6);
    EXPECT_TRUE(rep.entropy.non_negative);
    EXPECT_GE(rep.entropy.sigma_from_qh, 0.0);
    ASSERT_TRUE(rep.entropy.sigma_from_w.has_value());
    EXPECT_NEAR(*rep.entropy.sigma_from_w, rep.entropy.sigma_from_qh, 1e-9);
    EXPECT_TRUE(rep.supported);
    EXPECT_LT(rep.off_support_mass, 1e-10);
    EXPECT_NEAR(rep.efficiency, 1.0 / 3.0, 1e-15);
    EXPECT_LT(rep.max_efficiency_deviation, 1e-12);
    EXPECT_TRUE(cubic_heat_engine_condition(cub1()));
}

TEST(Cubic, NoCouplingIsPointMass) {
    CubicParams p = cub1();
    p.theta_c = 0.0;
    const CubicSupportReport rep = cubic_delta_structure(p);
    const auto it = rep.oracle.joint.find({0, 0});
    ASSERT_NE(it, rep.oracle.joint.end());
    EXPECT_NEAR(it->second, rep.oracle.total_mass, 1e-15);
    EXPECT_EQ(rep.mean_qh, 0.0);
}

TEST(Cubic, WorkFormAbsentAtDegenerateRatio) {
    CubicParams p = cub1();
    p.omega_a = 2.0;
    const CubicEntropy e = cubic_entropy_relation(p, 0.1, 0.0);
    EXPECT_FALSE(e.sigma_from_w.has_value());
}

TEST(Cubic, OccupationFormOfCondition) {
    Gen gen(52);
    for (int i = 0; i < 5000; ++i) {
        CubicParams p;
        p.omega_a = gen.log_uniform(0.2, 5);
        p.omega_b = gen.log_uniform(0.2, 5);
        p.beta_a = gen.log_uniform(0.1, 5);
        p.beta_b = gen.log_uniform(0.1, 5);
        const double lhs = p.beta_a * p.omega_a, rhs = 2 * p.beta_b * p.omega_b;
        if (std::abs(lhs - rhs) < 1e-9 * rhs) continue;
        ASSERT_EQ(cubic_occupation_condition(p), lhs < rhs);
        ASSERT_EQ(cubic_heat_engine_condition(p), lhs < rhs && p.omega_a > 2 * p.omega_b);
    }
}

TEST(Cubic, EntropyNonNegativeFromOracle) {
    Gen gen(53);
    for (int i = 0; i < 6; ++i) {
        CubicParams p;
        p.omega_a = gen.uniform(1.0, 3.0);
        p.omega_b = gen.uniform(0.3, 1.5);
        p.beta_a = gen.uniform(0.5, 1.5);
        p.beta_b = gen.uniform(0.8, 2.0);
        p.theta_c = Complex(gen.uniform(0.05, 0.3), gen.uniform(-0.2, 0.2));
        const CubicSupportReport rep = cubic_delta_structure(p);
        EXPECT_TRUE(rep.entropy.non_negative) << rep.entropy.sigma_from_qh;
        EXPECT_TRUE(rep.supported);
        EXPECT_LT(rep.max_efficiency_deviation, 1e-12);
    }
}

}  // namespace
