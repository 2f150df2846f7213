#include "otto/extended_strokes.hpp"

#include "otto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_common(double omega_a, double omega_b, double beta_a, double beta_b) {
    if (!(omega_a > 0.0) || !(omega_b > 0.0)) throw DomainError("frequencies must be > 0");
    if (!(beta_a > 0.0) || !(beta_b > 0.0)) throw DomainError("inverse temperatures must be > 0");
}

}  // namespace

void SqueezeParams::validate() const {
    validate_common(omega_a, omega_b, beta_a, beta_b);
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("squeeze parameter r must be >= 0");
}

Occupations SqueezeParams::occupations() const {
    return {occupation(beta_a, omega_a), occupation(beta_b, omega_b), Statistics::Bose};
}

void CubicParams::validate() const {
    validate_common(omega_a, omega_b, beta_a, beta_b);
    if (!std::isfinite(theta_c.real()) || !std::isfinite(theta_c.imag())) {
        throw DomainError("cubic coupling must be finite");
    }
}

Occupations CubicParams::occupations() const {
    return {occupation(beta_a, omega_a), occupation(beta_b, omega_b), Statistics::Bose};
}

SqueezeStatistics squeeze_moments(const SqueezeParams& params) {
    params.validate();
    const auto occ = params.occupations();
    const double s = std::pow(std::sinh(params.r), 2);
    const double spread = occ.n_a + occ.n_b + 1.0;
    const double k1 = occ.n_a + occ.n_b + 2.0 * occ.n_a * occ.n_b + 1.0;
    // delta m = delta n; var(delta m) = (K+1) s + (N_A+N_B+1)^2 s^2
    const double var_dm = k1 * s + spread * spread * s * s;
    const double wa = params.omega_a;
    const double wsum = params.omega_a + params.omega_b;

    SqueezeStatistics out;
    Moments& m = out.moments;
    m.mean_qh = -wa * spread * s;
    m.mean_qc = -params.omega_b * spread * s;
    m.mean_w = wsum * spread * s;
    m.var_w = wsum * wsum * var_dm;
    m.var_qh = wa * wa * var_dm;
    m.cov_w_qh = -wa * wsum * var_dm;

    TurReport& r = out.report;
    r.affinity = params.beta_a * params.omega_a + params.beta_b * params.omega_b;
    if (s == 0.0) {
        r.inv_snr_w = kInf;
        r.sigma = 0.0;
    } else {
        r.inv_snr_w = k1 / (spread * spread * s) + 1.0;
        r.sigma = r.affinity * spread * s;
    }
    fill_tur_bounds(r, 1.0);
    r.efficiency = 1.0 + params.omega_b / params.omega_a;  // -W/Q_H on every outcome
    r.efficiency_carnot = 1.0 - params.beta_a / params.beta_b;
    return out;
}

WorkHeatPmf squeeze_pmf(const SqueezeParams& params) {
    params.validate();
    return squeeze_pmf(params.omega_a, params.omega_b, params.occupations(), params.r);
}

CubicEntropy cubic_entropy_relation(const CubicParams& params, double mean_qh,
                                    std::optional<double> mean_w) {
    params.validate();
    const double x = params.beta_a * params.omega_a - 2.0 * params.omega_b * params.beta_b;
    CubicEntropy out;
    out.sigma_from_qh = -(x / params.omega_a) * mean_qh;
    const double step = params.omega_a - 2.0 * params.omega_b;
    if (mean_w && std::abs(step) > kDegenerateRelTol * params.omega_a) {
        out.sigma_from_w = (x / step) * *mean_w;
    }
    // Rounding in an oracle-fed mean can leave a tiny negative value.
    const double tol = 1e-12 * std::max(1.0, std::abs(x / params.omega_a * mean_qh));
    out.non_negative = out.sigma_from_qh >= -tol;
    return out;
}

bool cubic_heat_engine_condition(const CubicParams& params) {
    params.validate();
    return params.beta_a * params.omega_a < 2.0 * params.beta_b * params.omega_b &&
           params.omega_a > 2.0 * params.omega_b;
}

bool cubic_occupation_condition(const CubicParams& params) {
    const auto occ = params.occupations();
    return occ.n_a > occ.n_b * occ.n_b / (2.0 * occ.n_b + 1.0);
}

CubicSupportReport cubic_delta_structure(const CubicParams& params, const TruncationSpec& trunc) {
    params.validate();
    const auto spec = StrokeSpec::cubic_exchange(params.theta_c);
    CubicSupportReport out;
    out.oracle = joint_distribution(spec, params.occupations(), params.omega_a, params.omega_b,
                                    trunc, 1.0, SectorMethod::Exponential);
    out.off_support_mass = out.oracle.off_support_mass(spec.charge_weights());
    out.tail_bound = trunc.tail_bound;
    out.supported = out.off_support_mass <= std::max(1e-10, out.tail_bound);
    out.efficiency = 1.0 - 2.0 * params.omega_b / params.omega_a;
    for (const auto& [key, p] : out.oracle.joint) {
        if (key.first == 0 || p == 0.0) continue;
        const double eta = -out.oracle.w(key.first, key.second) / out.oracle.qh(key.first);
        out.max_efficiency_deviation =
            std::max(out.max_efficiency_deviation, std::abs(eta - out.efficiency));
    }
    const Moments m = out.oracle.moments();
    out.mean_qh = m.mean_qh;
    out.entropy = cubic_entropy_relation(params, m.mean_qh, m.mean_w);
    return out;
}

CubicSupportReport cubic_delta_structure(const CubicParams& params) {
    params.validate();
    const auto occ = params.occupations();
    return cubic_delta_structure(params, TruncationSpec::automatic(occ, 5e-11));
}

}  // namespace otto
