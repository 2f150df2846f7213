#pragma once

#include "otto/bosonic_cycle.hpp"
#include "otto/engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace otto {

/// Which stroke produced a pmf. Only used to pick the occupation-ratio form
/// of the detailed fluctuation theorem.
enum class PmfSource { BeamSplitter, TwoModeSqueeze, Generic };

/// Two-sided geometric ("asymmetric Bose-Einstein") law over n in Z:
///   p(n) = norm * ratio_pos^n      for n >= 0
///   p(n) = norm * ratio_neg^|n|    for n < 0
/// Outcome n carries Q_H = n * step_qh and W = -n * step_w.
struct WorkHeatPmf {
    double step_w = 0.0;
    double step_qh = 0.0;
    double ratio_pos = 0.0;
    double ratio_neg = 0.0;
    double norm = 1.0;
    PmfSource source = PmfSource::Generic;

    /// Builds a law from its ratios; norm = (1-x)(1-y)/(1-xy).
    static WorkHeatPmf from_ratios(double x, double y, double step_w, double step_qh,
                                   PmfSource source = PmfSource::Generic);

    double probability(long n) const;
    /// Probability of n >= 0: norm / (1 - ratio_pos).
    double mass_nonnegative() const;

    double mean_n() const;
    double var_n() const;
    double mean_w() const { return -step_w * mean_n(); }
    double mean_qh() const { return step_qh * mean_n(); }
    double var_w() const { return step_w * step_w * var_n(); }

    /// Smallest n_cut with norm * max(x, y)^n_cut / (1 - max(x, y)) < tail.
    long support_cutoff(double tail = 1e-15) const;
};

/// One stochastic outcome of a cycle.
struct JointOutcome {
    long n = 0;
    double w = 0.0;
    double qh = 0.0;
    double qc = 0.0;
    double probability = 0.0;
};

JointOutcome outcome_for(const WorkHeatPmf& pmf, long n);

/// Exact pmf of the beam-splitter engine.
WorkHeatPmf bosonic_pmf(const EngineParams& params);
WorkHeatPmf bosonic_pmf(double omega_a, double omega_b, const Occupations& occ, double sin2_theta);

/// Exact pmf of the two-mode squeezing engine: step_w = omega_a + omega_b.
WorkHeatPmf squeeze_pmf(double omega_a, double omega_b, const Occupations& occ, double r);

struct FtCheck {
    double max_residual = 0.0;
    /// Largest n actually compared (smaller than requested if p(-n) underflows).
    long effective_n_max = 0;
};

/// Compares p(n)/p(-n) against exp[(beta_B - beta_A) q_h + beta_B w] and,
/// for beam-splitter pmfs, against [N_A(N_B+1)/(N_B(N_A+1))]^n, for
/// n = 1..n_max. Returns the largest relative residual.
FtCheck detailed_ft_check(const WorkHeatPmf& pmf, const EngineParams& params, long n_max);

/// Exact inverse-CDF sampler over a WorkHeatPmf. Owns its generator
/// (std::mt19937_64), so independent samplers may run concurrently.
class Sampler {
public:
    Sampler(const WorkHeatPmf& pmf, std::uint64_t seed);

    long next_index();
    JointOutcome next();

private:
    double uniform_open();  // (0, 1]

    WorkHeatPmf pmf_;
    double p_nonnegative_;
    double log_pos_;
    double log_neg_;
    std::mt19937_64 rng_;
};

std::vector<JointOutcome> sample(const WorkHeatPmf& pmf, std::size_t count, std::uint64_t seed);

/// TUR machinery for a generic two-sided geometric law with Q_H = n v and
/// W = n k. The exact relation uses affinity (v + k) beta_B - v beta_A.
struct TwoSidedTur {
    TurReport report;
    /// |ln(x/y) - affinity|: zero when the detailed FT constraint holds.
    double ft_constraint_residual = 0.0;
};

TwoSidedTur generic_two_sided_tur(double x, double y, double v, double k, double beta_a,
                                  double beta_b);

/// generic_two_sided_tur on a pmf (v = step_qh, k = -step_w).
TwoSidedTur generic_two_sided_tur(const WorkHeatPmf& pmf, double beta_a, double beta_b);

/// CSV: n,w,q_h,probability for n in [-n_cut, n_cut].
void write_pmf_csv(std::ostream& out, const WorkHeatPmf& pmf, long n_cut);

/// CSV: draw_index,n,w,q_h.
void write_samples_csv(std::ostream& out, const std::vector<JointOutcome>& draws);

}  // namespace otto
