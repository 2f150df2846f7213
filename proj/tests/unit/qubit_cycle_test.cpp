#include "otto/qubit_cycle.hpp"
#include "otto/special_functions.hpp"

#include "support/frozen.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace {

using namespace otto;
using otto::testing::Gen;
constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

QubitEngineParams q1(double theta = kPi / 2) {
    QubitEngineParams p;
    p.omega_a = 1.0;
    p.omega_b = 0.6;
    p.beta_a = 0.2;
    p.beta_b = 2.0;
    p.theta = theta;
    return p;
}

TEST(QubitCharFn, NormalizationAndFt) {
    EXPECT_EQ(qubit_char_fn(q1(), 0.0, 0.0), Complex(1.0, 0.0));
    EXPECT_LT(std::abs(qubit_char_fn(q1(0.0), 0.7, -0.2) - 1.0), 1e-15);
    const QubitEngineParams p = q1();
    const Complex ft = qubit_char_fn(p, kI * p.beta_b, kI * (p.beta_b - p.beta_a));
    EXPECT_LT(std::abs(ft - 1.0), 1e-12);
    const QubitTpmOracle o = qubit_tpm_oracle(p);
    EXPECT_LT(std::abs(o.char_fn(kI * p.beta_b, kI * (p.beta_b - p.beta_a)) - 1.0), 1e-12);
}

TEST(QubitMoments, Frozen) {
    const Moments m = qubit_moments(q1());
    EXPECT_NEAR(m.mean_qh, frozen::q1::kMeanQh, 1e-15);
    const TurReport t = qubit_tur_report(q1());
    EXPECT_NEAR(t.inv_snr_w, frozen::q1::kInvSnr, 1e-12);
    EXPECT_NEAR(t.sigma, frozen::q1::kSigma, 1e-15);
    EXPECT_NEAR(t.inv_snr_w, affinity_h(-1.0) / t.sigma - 1.0, 1e-10 * t.inv_snr_w);
}

TEST(QubitMoments, TrivialCases) {
    QubitEngineParams eq = q1();
    eq.beta_b = eq.beta_a * eq.omega_a / eq.omega_b;
    const Moments m = qubit_moments(eq);
    EXPECT_NEAR(m.mean_qh, 0.0, 1e-15);
    EXPECT_GT(qubit_raw_moment(eq, 0, 2), 0.0);
    const Moments z = qubit_moments(q1(0.0));
    EXPECT_EQ(z.mean_w, 0.0);
    EXPECT_EQ(z.var_w, 0.0);
}

TEST(QubitMoments, MatchFourByFourOracle) {
    Gen gen(41);
    for (int i = 0; i < 300; ++i) {
        const QubitEngineParams p = gen.engine();
        const QubitTpmOracle o = qubit_tpm_oracle(p);
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; a + b <= 4; ++b) {
                const double exact = qubit_raw_moment(p, a, b);
                ASSERT_NEAR(o.raw_moment(a, b), exact, 1e-13 * std::max(1.0, std::abs(exact)));
            }
        }
        const double l = gen.uniform(-3, 3), m = gen.uniform(-3, 3);
        ASSERT_LT(std::abs(o.char_fn(l, m) - qubit_char_fn(p, l, m)), 1e-14);
        const ThreePointPmf a = qubit_pmf(p), b = o.heat_pmf();
        ASSERT_NEAR(a.p_zero, b.p_zero, 1e-15);
        ASSERT_NEAR(a.p_plus, b.p_plus, 1e-15);
        ASSERT_NEAR(a.p_minus, b.p_minus, 1e-15);
    }
}

TEST(QubitPmf, ReproducesMomentsAndFt) {
    Gen gen(42);
    for (int i = 0; i < 500; ++i) {
        const QubitEngineParams p = gen.engine();
        const ThreePointPmf pmf = qubit_pmf(p);
        ASSERT_NEAR(pmf.p_zero + pmf.p_plus + pmf.p_minus, 1.0, 1e-15);
        const double wa = p.omega_a;
        const double m1 = wa * (pmf.p_plus - pmf.p_minus);
        const double m2 = wa * wa * (pmf.p_plus + pmf.p_minus);
        ASSERT_NEAR(m1, qubit_moments(p).mean_qh, 1e-14);
        ASSERT_NEAR(m2, qubit_raw_moment(p, 0, 2), 1e-14);
        const Occupations occ = occupations(p, Statistics::Fermi);
        const double ratio = occ.n_a * (1 - occ.n_b) / (occ.n_b * (1 - occ.n_a));
        ASSERT_NEAR(ratio, std::exp(p.beta_b * p.omega_b - p.beta_a * p.omega_a), 1e-12 * ratio);
        ASSERT_NEAR(pmf.p_plus / pmf.p_minus, ratio, 1e-12 * ratio);
    }
}

TEST(QubitTur, PinnedViolation) {
    const TurReport t = qubit_tur_report(q1());
    EXPECT_LT(t.inv_snr_w, 2.0 / t.sigma);
    EXPECT_FALSE(t.flags.standard_tur);
    EXPECT_TRUE(t.flags.saturable);
}

TEST(QubitTur, IdentityAtBosonicPoint) {
    QubitEngineParams p = q1();
    p.beta_a = 1.0;
    const TurReport t = qubit_tur_report(p);
    EXPECT_LT(t.identity_residual, 1e-10);
}

TEST(QubitTur, SaturableHoldsOnRandomDraws) {
    Gen gen(43);
    for (int i = 0; i < 3000; ++i) {
        const TurReport t = qubit_tur_report(gen.engine());
        if (std::isinf(t.inv_snr_w)) continue;
        ASSERT_TRUE(t.flags.saturable);
        ASSERT_LT(t.identity_residual, 1e-10);
    }
}

TEST(ViolationScan, ShrinksWithTheta) {
    const ViolationScan full = violation_scan(kPi / 2, 80);
    const ViolationScan third = violation_scan(kPi / 3, 80);
    const ViolationScan small = violation_scan(0.05, 80);
    EXPECT_GT(full.area_fraction, 0.0);
    EXPECT_LT(third.area_fraction, full.area_fraction);
    EXPECT_EQ(small.area_fraction, 0.0);
    EXPECT_TRUE(full.saturable_everywhere);
    EXPECT_EQ(full.cells.size(), 80u * 80u);
    for (const auto& c : full.cells) {
        ASSERT_GT(c.n_a, 0.0);
        ASSERT_LT(c.n_a, 0.5);
        ASSERT_GT(c.n_b, 0.0);
        ASSERT_LT(c.n_b, 0.5);
    }
}

TEST(ViolationScan, CsvHeader) {
    std::ostringstream out;
    write_violation_csv(out, violation_scan(kPi / 2, 4));
    EXPECT_EQ(out.str().rfind("n_a,n_b,snr,half_sigma,violated\r\n", 0), 0u);
    int rows = 0;
    for (char c : out.str()) rows += c == '\n';
    EXPECT_EQ(rows, 17);
}

}  // namespace
