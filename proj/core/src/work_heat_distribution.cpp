#include "otto/work_heat_distribution.hpp"

#include "otto/csv.hpp"
#include "otto/errors.hpp"
#include "populations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Two-sided geometric law whose generating denominator is
//   A z - (P z^2 + Q) s,   A = 1 + K s.
// With D = sqrt(A^2 - 4 P Q s^2) the ratios are x = 2 P s/(A + D),
// y = 2 Q s/(A + D) and the normalization is 1/D. This is the printed
// (A - D)/(2 Q s) form multiplied through by (A + D), which stays finite
// when P, Q or s vanish.
WorkHeatPmf from_quadratic(double k, double p, double q, double spread2, double s,
                           double step_w, double step_qh, PmfSource source) {
    const double a = 1.0 + k * s;
    const double d = std::sqrt(1.0 + 2.0 * k * s + spread2 * s * s);
    WorkHeatPmf pmf;
    pmf.step_w = step_w;
    pmf.step_qh = step_qh;
    pmf.ratio_pos = 2.0 * p * s / (a + d);
    pmf.ratio_neg = 2.0 * q * s / (a + d);
    pmf.norm = 1.0 / d;
    pmf.source = source;
    return pmf;
}

WorkHeatPmf bosonic_pmf_impl(double omega_a, double omega_b, const detail::Populations& pop,
                             double s) {
    if (pop.n_a < 0.0 || pop.n_b < 0.0) {
        throw DomainError("occupations must be non-negative");
    }
    const double k = pop.n_a + pop.n_b + 2.0 * pop.n_a * pop.n_b;
    return from_quadratic(k, pop.n_a * (pop.n_b + 1.0), pop.n_b * (pop.n_a + 1.0),
                          pop.gap * pop.gap, s, omega_a - omega_b, omega_a,
                          PmfSource::BeamSplitter);
}

}  // namespace

WorkHeatPmf WorkHeatPmf::from_ratios(double x, double y, double step_w, double step_qh,
                                     PmfSource source) {
    if (!(x >= 0.0 && x < 1.0) || !(y >= 0.0 && y < 1.0)) {
        throw DomainError("geometric ratios must lie in [0, 1)");
    }
    WorkHeatPmf pmf;
    pmf.step_w = step_w;
    pmf.step_qh = step_qh;
    pmf.ratio_pos = x;
    pmf.ratio_neg = y;
    pmf.norm = (1.0 - x) * (1.0 - y) / (1.0 - x * y);
    pmf.source = source;
    return pmf;
}

double WorkHeatPmf::probability(long n) const {
    if (n >= 0) {
        return norm * std::pow(ratio_pos, static_cast<double>(n));
    }
    return norm * std::pow(ratio_neg, static_cast<double>(-n));
}

double WorkHeatPmf::mass_nonnegative() const { return norm / (1.0 - ratio_pos); }

double WorkHeatPmf::mean_n() const {
    return (ratio_pos - ratio_neg) / ((1.0 - ratio_pos) * (1.0 - ratio_neg));
}

double WorkHeatPmf::var_n() const {
    const double m = mean_n();
    return (ratio_pos + ratio_neg) / ((1.0 - ratio_pos) * (1.0 - ratio_neg)) + m * m;
}

long WorkHeatPmf::support_cutoff(double tail) const {
    const double m = std::max(ratio_pos, ratio_neg);
    if (m <= 0.0) {
        return 0;
    }
    const double target = tail * (1.0 - m) / norm;
    if (target >= 1.0) {
        return 0;
    }
    return static_cast<long>(std::ceil(std::log(target) / std::log(m)));
}

JointOutcome outcome_for(const WorkHeatPmf& pmf, long n) {
    JointOutcome o;
    o.n = n;
    o.w = -static_cast<double>(n) * pmf.step_w;
    o.qh = static_cast<double>(n) * pmf.step_qh;
    o.qc = -o.w - o.qh;
    o.probability = pmf.probability(n);
    return o;
}

WorkHeatPmf bosonic_pmf(const EngineParams& params) {
    params.validate();
    return bosonic_pmf_impl(params.omega_a, params.omega_b,
                            detail::populations(params, Statistics::Bose), params.sin2_theta());
}

WorkHeatPmf bosonic_pmf(double omega_a, double omega_b, const Occupations& occ,
                        double sin2_theta) {
    return bosonic_pmf_impl(omega_a, omega_b, detail::populations(occ), sin2_theta);
}

WorkHeatPmf squeeze_pmf(double omega_a, double omega_b, const Occupations& occ, double r) {
    if (!(r >= 0.0)) {
        throw DomainError("squeeze parameter must be >= 0");
    }
    if (occ.n_a < 0.0 || occ.n_b < 0.0) {
        throw DomainError("occupations must be non-negative");
    }
    const double sh = std::sinh(r);
    const double s = sh * sh;
    const double na = occ.n_a;
    const double nb = occ.n_b;
    const double k = na + nb + 2.0 * na * nb + 1.0;
    const double m = na + nb + 1.0;
    return from_quadratic(k, na * nb, (na + 1.0) * (nb + 1.0), m * m, s, omega_a + omega_b,
                          omega_a, PmfSource::TwoModeSqueeze);
}

FtCheck detailed_ft_check(const WorkHeatPmf& pmf, const EngineParams& params, long n_max) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Bose);
    double bracket = 0.0;
    if (pmf.source == PmfSource::BeamSplitter) {
        bracket = pop.n_a * (pop.n_b + 1.0) / (pop.n_b * (pop.n_a + 1.0));
    } else if (pmf.source == PmfSource::TwoModeSqueeze) {
        bracket = pop.n_a * pop.n_b / ((pop.n_a + 1.0) * (pop.n_b + 1.0));
    }

    FtCheck check;
    for (long n = 1; n <= n_max; ++n) {
        const double forward = pmf.probability(n);
        const double backward = pmf.probability(-n);
        if (!(forward >= std::numeric_limits<double>::min()) ||
            !(backward >= std::numeric_limits<double>::min())) {
            break;
        }
        const double ratio = forward / backward;
        const auto o = outcome_for(pmf, n);
        const double exponent = (params.beta_b - params.beta_a) * o.qh + params.beta_b * o.w;
        double residual = std::abs(ratio / std::exp(exponent) - 1.0);
        if (bracket > 0.0 && std::isfinite(bracket)) {
            const double expected = std::pow(bracket, static_cast<double>(n));
            residual = std::max(residual, std::abs(ratio / expected - 1.0));
        }
        check.max_residual = std::max(check.max_residual, residual);
        check.effective_n_max = n;
    }
    return check;
}

Sampler::Sampler(const WorkHeatPmf& pmf, std::uint64_t seed)
    : pmf_(pmf),
      p_nonnegative_(pmf.mass_nonnegative()),
      log_pos_(pmf.ratio_pos > 0.0 ? std::log(pmf.ratio_pos) : -kInf),
      log_neg_(pmf.ratio_neg > 0.0 ? std::log(pmf.ratio_neg) : -kInf),
      rng_(seed) {}

double Sampler::uniform_open() {
    // 53 random bits mapped to (0, 1].
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
}

long Sampler::next_index() {
    const double side = uniform_open();
    const double u = uniform_open();
    if (side <= p_nonnegative_) {
        if (std::isinf(log_pos_)) return 0;
        return static_cast<long>(std::floor(std::log(u) / log_pos_));
    }
    if (std::isinf(log_neg_)) return -1;
    return -1 - static_cast<long>(std::floor(std::log(u) / log_neg_));
}

JointOutcome Sampler::next() { return outcome_for(pmf_, next_index()); }

std::vector<JointOutcome> sample(const WorkHeatPmf& pmf, std::size_t count, std::uint64_t seed) {
    Sampler sampler(pmf, seed);
    std::vector<JointOutcome> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(sampler.next());
    }
    return out;
}

TwoSidedTur generic_two_sided_tur(double x, double y, double v, double k, double beta_a,
                                  double beta_b) {
    if (!(x >= 0.0 && x < 1.0) || !(y >= 0.0 && y < 1.0)) {
        throw DomainError("geometric ratios must lie in [0, 1)");
    }
    TwoSidedTur out;
    TurReport& r = out.report;
    r.affinity = (v + k) * beta_b - v * beta_a;
    const double mean_n = (x - y) / ((1.0 - x) * (1.0 - y));
    if (x == y) {
        r.inv_snr_w = kInf;
        r.sigma = 0.0;
    } else {
        r.inv_snr_w = (x + y) * (1.0 - x) * (1.0 - y) / ((x - y) * (x - y)) + 1.0;
        r.sigma = r.affinity * mean_n;
    }
    const double log_ratio = x == y ? 0.0 : std::log(x) - std::log(y);
    out.ft_constraint_residual = std::abs(log_ratio - r.affinity);
    fill_tur_bounds(r, 1.0);
    r.efficiency = -k / v;
    r.efficiency_carnot = 1.0 - beta_a / beta_b;
    return out;
}

TwoSidedTur generic_two_sided_tur(const WorkHeatPmf& pmf, double beta_a, double beta_b) {
    return generic_two_sided_tur(pmf.ratio_pos, pmf.ratio_neg, pmf.step_qh, -pmf.step_w, beta_a,
                                 beta_b);
}

void write_pmf_csv(std::ostream& out, const WorkHeatPmf& pmf, long n_cut) {
    CsvWriter csv(out);
    csv.header({"n", "w", "q_h", "probability"});
    for (long n = -n_cut; n <= n_cut; ++n) {
        const auto o = outcome_for(pmf, n);
        csv.field(n).field(o.w).field(o.qh).field(o.probability);
        csv.end_row();
    }
}

void write_samples_csv(std::ostream& out, const std::vector<JointOutcome>& draws) {
    CsvWriter csv(out);
    csv.header({"draw_index", "n", "w", "q_h"});
    long index = 0;
    for (const auto& d : draws) {
        csv.field(index++).field(d.n).field(d.w).field(d.qh);
        csv.end_row();
    }
}

}  // namespace otto
