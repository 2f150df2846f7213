#include "otto/extended_strokes.hpp"
#include "otto/special_functions.hpp"
#include "otto/work_heat_distribution.hpp"

#include "support/frozen.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace {

using namespace otto;
using otto::testing::Gen;
constexpr double kPi = std::numbers::pi;

EngineParams from_occupations(double n_a, double n_b, double theta, double wa = 1.0, double wb = 0.6) {
    EngineParams p;
    p.omega_a = wa;
    p.omega_b = wb;
    p.beta_a = inverse_temperature_for(n_a, wa);
    p.beta_b = inverse_temperature_for(n_b, wb);
    p.theta = theta;
    return p;
}

TEST(BosonicPmf, SwapValues) {
    const WorkHeatPmf pmf = bosonic_pmf(from_occupations(8, 2, kPi / 2));
    EXPECT_NEAR(pmf.probability(0), 1.0 / 11.0, 1e-13);
    EXPECT_NEAR(pmf.probability(1), 8.0 / 99.0, 1e-13);
    EXPECT_NEAR(pmf.probability(-1), 6.0 / 99.0, 1e-13);
    EXPECT_NEAR(pmf.probability(1) / pmf.probability(-1), 4.0 / 3.0, 1e-12);
}

TEST(BosonicPmf, NoStrokeIsPointMass) {
    const WorkHeatPmf pmf = bosonic_pmf(from_occupations(1.3, 0.4, 0.0));
    EXPECT_EQ(pmf.probability(0), 1.0);
    EXPECT_EQ(pmf.probability(3), 0.0);
    EXPECT_EQ(pmf.probability(-2), 0.0);
}

TEST(BosonicPmf, ZeroTemperatureLimit) {
    // N_B -> 0: no negative outcomes, still normalized.
    const WorkHeatPmf pmf = bosonic_pmf(1.0, 0.6, Occupations{1.5, 0.0}, 0.7);
    EXPECT_EQ(pmf.probability(-1), 0.0);
    const auto s = otto::testing::two_sided_series(pmf.ratio_pos, pmf.ratio_neg, 400);
    EXPECT_NEAR(s.mass, 1.0, 1e-12);
}

TEST(BosonicPmf, NormalizationAndMomentsOnRandomDraws) {
    Gen gen(31);
    for (int i = 0; i < 300; ++i) {
        const EngineParams p = gen.engine_with_occupations(20.0);
        const WorkHeatPmf pmf = bosonic_pmf(p);
        ASSERT_GE(pmf.ratio_pos, 0.0);
        ASSERT_LT(pmf.ratio_pos, 1.0);
        ASSERT_GE(pmf.ratio_neg, 0.0);
        ASSERT_LT(pmf.ratio_neg, 1.0);
        const long cut = pmf.support_cutoff(1e-15);
        double mass = 0.0, m1 = 0.0, m2 = 0.0;
        for (long n = -cut; n <= cut; ++n) {
            const double pr = pmf.probability(n);
            mass += pr;
            m1 += pr * n;
            m2 += pr * double(n) * n;
        }
        ASSERT_NEAR(mass, 1.0, 1e-12);
        const Moments m = moments(p);
        const double mean_w = -pmf.step_w * m1;
        const double var_w = pmf.step_w * pmf.step_w * (m2 - m1 * m1);
        ASSERT_NEAR(mean_w, m.mean_w, 1e-10 * std::max(1.0, std::abs(m.mean_w)));
        ASSERT_NEAR(var_w, m.var_w, 1e-10 * std::max(1.0, m.var_w));
        ASSERT_NEAR(pmf.mean_w(), m.mean_w, 1e-12 * std::max(1.0, std::abs(m.mean_w)));
        ASSERT_NEAR(pmf.var_w(), m.var_w, 1e-12 * std::max(1.0, m.var_w));
    }
}

TEST(BosonicPmf, SupportHasNoEfficiencyFluctuations) {
    const EngineParams p = from_occupations(1.2, 0.4, 0.9);
    const WorkHeatPmf pmf = bosonic_pmf(p);
    for (long n = -30; n <= 30; ++n) {
        if (n == 0) continue;
        const JointOutcome o = outcome_for(pmf, n);
        ASSERT_NEAR(-o.w / o.qh, 1.0 - p.omega_b / p.omega_a, 1e-15);
        ASSERT_DOUBLE_EQ(o.qc, -o.w - o.qh);
    }
}

TEST(DetailedFt, EngineAndOccupationForms) {
    const EngineParams p = from_occupations(8, 2, kPi / 2);
    const FtCheck c = detailed_ft_check(bosonic_pmf(p), p, 40);
    EXPECT_LT(c.max_residual, 1e-10);
    EXPECT_EQ(c.effective_n_max, 40);

    Gen gen(32);
    for (int i = 0; i < 200; ++i) {
        const EngineParams q = gen.engine();
        const WorkHeatPmf pmf = bosonic_pmf(q);
        ASSERT_LT(detailed_ft_check(pmf, q, 20).max_residual, 1e-10);
        const double r1 = pmf.probability(1) / pmf.probability(-1);
        const double r2 = pmf.probability(2) / pmf.probability(-2);
        ASSERT_NEAR(r2, r1 * r1, 1e-10 * r1 * r1);
    }
}

TEST(DetailedFt, EquilibriumRatioIsOne) {
    const EngineParams p = from_occupations(0.7, 0.7, 1.0);
    const WorkHeatPmf pmf = bosonic_pmf(p);
    for (long n = 1; n < 10; ++n) EXPECT_NEAR(pmf.probability(n) / pmf.probability(-n), 1.0, 1e-12);
}

TEST(DetailedFt, UnderflowTruncatesRange) {
    const EngineParams p = from_occupations(0.01, 0.001, kPi / 2);
    const FtCheck c = detailed_ft_check(bosonic_pmf(p), p, 10000);
    EXPECT_LT(c.effective_n_max, 10000);
    EXPECT_LT(c.max_residual, 1e-10);
}

TEST(SqueezePmf, MomentsAndNormalization) {
    SqueezeParams sp{1.0, 0.6, inverse_temperature_for(0.5, 1.0), inverse_temperature_for(0.2, 0.6), 0.5};
    const WorkHeatPmf pmf = squeeze_pmf(sp);
    EXPECT_NEAR(pmf.step_w, 1.6, 1e-15);
    const auto s = otto::testing::two_sided_series(pmf.ratio_pos, pmf.ratio_neg, 400);
    EXPECT_NEAR(s.mass, 1.0, 1e-12);
    EXPECT_NEAR(-pmf.step_w * s.mean, frozen::sq1::kMeanW, 1e-10);
    EXPECT_NEAR(pmf.step_w * pmf.step_w * s.var, frozen::sq1::kVarW, 1e-10);
    const SqueezeParams none{1.0, 0.6, 1.0, 2.0, 0.0};
    EXPECT_EQ(squeeze_pmf(none).probability(0), 1.0);
}

TEST(Sampler, Deterministic) {
    const WorkHeatPmf pmf = bosonic_pmf(from_occupations(8, 2, kPi / 4));
    const auto a = sample(pmf, 1000, 99);
    const auto b = sample(pmf, 1000, 99);
    const auto c = sample(pmf, 1000, 100);
    ASSERT_EQ(a.size(), 1000u);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].n, b[i].n);
        differs = differs || a[i].n != c[i].n;
    }
    EXPECT_TRUE(differs);
}

TEST(Sampler, SymmetricLawHasZeroMean) {
    const WorkHeatPmf pmf = WorkHeatPmf::from_ratios(0.6, 0.6, 1.0, 1.0);
    Sampler s(pmf, 5);
    const int count = 1000000;
    double sum = 0.0;
    for (int i = 0; i < count; ++i) sum += double(s.next_index());
    const double se = std::sqrt(pmf.var_n() / count);
    EXPECT_LT(std::abs(sum / count), 5 * se);
}

TEST(Sampler, ChiSquaredGoodnessOfFit) {
    const WorkHeatPmf pmf = bosonic_pmf(from_occupations(1.2, 0.4, 1.1));
    const int count = 200000;
    std::vector<double> observed(41, 0.0);
    double below = 0, above = 0;
    Sampler s(pmf, 2024);
    for (int i = 0; i < count; ++i) {
        const long n = s.next_index();
        if (n < -20) ++below;
        else if (n > 20) ++above;
        else observed[n + 20] += 1;
    }
    double chi2 = 0.0;
    int bins = 0;
    double tail_expected = 1.0;
    for (long n = -20; n <= 20; ++n) {
        const double e = count * pmf.probability(n);
        tail_expected -= pmf.probability(n);
        if (e < 5) continue;
        chi2 += (observed[n + 20] - e) * (observed[n + 20] - e) / e;
        ++bins;
    }
    const double e_tail = count * tail_expected;
    if (e_tail >= 5) {
        chi2 += (below + above - e_tail) * (below + above - e_tail) / e_tail;
        ++bins;
    }
    boost::math::chi_squared dist(bins - 1);
    EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, 1e-3)));
}

TEST(GenericTur, FrozenSeriesCase) {
    const double bb = frozen::gen1::kBetaB;
    const TwoSidedTur t = generic_two_sided_tur(0.4, 0.2, 1.0, -0.4, 1.0, bb);
    EXPECT_LT(t.ft_constraint_residual, 1e-12);
    EXPECT_NEAR(t.report.inv_snr_w, frozen::gen1::kInvSnr, 1e-12);
    EXPECT_LT(t.report.identity_residual, 1e-12);
    const auto s = otto::testing::two_sided_series(0.4, 0.2, 200);
    EXPECT_NEAR(s.mean, frozen::gen1::kMeanN, 1e-14);
    EXPECT_NEAR(s.var / (s.mean * s.mean), t.report.inv_snr_w, 1e-12);
    EXPECT_TRUE(t.report.flags.shifted_tur);
}

TEST(GenericTur, ReproducesEngineReports) {
    Gen gen(33);
    for (int i = 0; i < 300; ++i) {
        const EngineParams p = gen.engine();
        const TurReport direct = tur_report(p);
        if (std::isinf(direct.inv_snr_w)) continue;
        const TwoSidedTur g = generic_two_sided_tur(bosonic_pmf(p), p.beta_a, p.beta_b);
        ASSERT_NEAR(g.report.inv_snr_w, direct.inv_snr_w, 1e-10 * direct.inv_snr_w);
        ASSERT_NEAR(g.report.sigma, direct.sigma, 1e-10 * std::max(direct.sigma, 1e-300));
        ASSERT_LT(g.ft_constraint_residual, 1e-10);
    }
}

TEST(GenericTur, SqueezeUsesSumAffinity) {
    const SqueezeParams sp{1.0, 0.6, 1.0, 2.0, 0.4};
    const TwoSidedTur g = generic_two_sided_tur(squeeze_pmf(sp), sp.beta_a, sp.beta_b);
    const double x = sp.beta_a * sp.omega_a + sp.beta_b * sp.omega_b;
    EXPECT_NEAR(g.report.inv_snr_w, affinity_h(x) / g.report.sigma + 1.0, 1e-10 * g.report.inv_snr_w);
    EXPECT_LT(g.report.identity_residual, 1e-10);
    EXPECT_NEAR(g.report.inv_snr_w, squeeze_moments(sp).report.inv_snr_w, 1e-10 * g.report.inv_snr_w);
}

TEST(GenericTur, DegenerateRatiosGiveInfinity) {
    const TwoSidedTur t = generic_two_sided_tur(0.3, 0.3, 1.0, -0.5, 1.0, 2.0);
    EXPECT_TRUE(std::isinf(t.report.inv_snr_w));
}

TEST(PmfCsv, HeaderAndRows) {
    const WorkHeatPmf pmf = WorkHeatPmf::from_ratios(0.5, 0.25, 0.4, 1.0);
    std::ostringstream out;
    write_pmf_csv(out, pmf, 1);
    const std::string s = out.str();
    EXPECT_EQ(s.rfind("n,w,q_h,probability\r\n", 0), 0u);
    EXPECT_NE(s.find("\r\n0,0,0,"), std::string::npos);
    EXPECT_NE(s.find("\r\n-1,0.40000000000000002,-1,"), std::string::npos);
}

}  // namespace
