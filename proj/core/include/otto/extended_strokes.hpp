#pragma once

#include "otto/bosonic_cycle.hpp"
#include "otto/engine.hpp"
#include "otto/fock_oracle.hpp"
#include "otto/work_heat_distribution.hpp"

#include <optional>

namespace otto {

/// Engine whose coupling stroke is the two-mode squeezer
/// S_r = exp[r(a^dag b^dag - a b)].
struct SqueezeParams {
    double omega_a = 1.0;
    double omega_b = 1.0;
    double beta_a = 1.0;
    double beta_b = 1.0;
    double r = 0.0;

    void validate() const;
    Occupations occupations() const;
};

/// Engine with V = exp(t a^dag b^2 - t^* a b^dag^2). Conserves 2 a^dag a + b^dag b.
struct CubicParams {
    double omega_a = 1.0;
    double omega_b = 1.0;
    double beta_a = 1.0;
    double beta_b = 1.0;
    Complex theta_c{0.0, 0.0};

    void validate() const;
    Occupations occupations() const;
};

struct SqueezeStatistics {
    Moments moments;
    TurReport report;
};

/// Closed-form squeeze statistics. The engine always absorbs work
/// (<W> >= 0, <Q_H>, <Q_C> <= 0); r = 0 gives the zero-work report
/// (inv_snr_w = inf, sigma = 0).
SqueezeStatistics squeeze_moments(const SqueezeParams& params);

WorkHeatPmf squeeze_pmf(const SqueezeParams& params);

/// Entropy production of the cubic engine from an externally supplied
/// <Q_H> (there is no closed form). The work form is absent when
/// omega_a == 2 omega_b.
struct CubicEntropy {
    double sigma_from_qh = 0.0;
    std::optional<double> sigma_from_w;
    bool non_negative = true;
};

CubicEntropy cubic_entropy_relation(const CubicParams& params, double mean_qh,
                                    std::optional<double> mean_w = std::nullopt);

/// beta_a omega_a < 2 beta_b omega_b and omega_a > 2 omega_b.
bool cubic_heat_engine_condition(const CubicParams& params);

/// Occupation form of beta_a omega_a < 2 beta_b omega_b: N_A > N_B^2/(2 N_B + 1).
bool cubic_occupation_condition(const CubicParams& params);

struct CubicSupportReport {
    FockOracleResult oracle;
    /// Mass with 2 delta_m + delta_n != 0.
    double off_support_mass = 0.0;
    double tail_bound = 0.0;
    /// off_support_mass <= max(1e-10, tail_bound).
    bool supported = true;
    /// 1 - 2 omega_b/omega_a, and the largest deviation of -W/Q_H from it
    /// over outcomes with Q_H != 0.
    double efficiency = 0.0;
    double max_efficiency_deviation = 0.0;
    double mean_qh = 0.0;
    CubicEntropy entropy;
};

CubicSupportReport cubic_delta_structure(const CubicParams& params, const TruncationSpec& trunc);

/// Uses TruncationSpec::automatic with a Gibbs tail below 1e-10.
CubicSupportReport cubic_delta_structure(const CubicParams& params);

}  // namespace otto
