#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace otto {

/// Configuration of the two-mode Otto cycle. Units: hbar = k_B = 1.
///
/// Mode a couples to the hot bath (inverse temperature beta_a), mode b to the
/// cold one. The ordering beta_a < beta_b is conventional, not enforced;
/// see warnings().
struct EngineParams {
    double omega_a = 1.0;
    double omega_b = 1.0;
    double beta_a = 1.0;
    double beta_b = 1.0;
    double theta = 0.0;
    /// Coupling phase. Carried for completeness; no statistic depends on it.
    double phi = 0.0;

    /// Throws DomainError unless frequencies and inverse temperatures are
    /// positive and theta lies in [0, pi/2].
    void validate() const;

    /// Soft-invariant violations (currently: beta_a >= beta_b).
    std::vector<std::string> warnings() const;

    /// Validates, prints any warnings to std::clog, returns the value.
    static EngineParams checked(double omega_a, double omega_b, double beta_a,
                                double beta_b, double theta, double phi = 0.0);

    double temperature_a() const { return 1.0 / beta_a; }
    double temperature_b() const { return 1.0 / beta_b; }
    double sin2_theta() const;
};

enum class Statistics { Bose, Fermi };

/// Mean thermal occupations of the two modes.
struct Occupations {
    double n_a = 0.0;
    double n_b = 0.0;
    Statistics statistics = Statistics::Bose;
};

enum class Regime { HeatEngine, Refrigerator, ThermalAccelerator, Degenerate };

std::string_view to_string(Regime regime);

/// Relative tolerance on the equalities that define the Degenerate regime.
inline constexpr double kDegenerateRelTol = 1e-12;

/// Thermal occupation 1/(e^{beta omega} -/+ 1). Infinite beta is allowed and
/// gives zero.
double occupation(double beta, double omega, Statistics statistics = Statistics::Bose);

/// Inverse of occupation() for Bose statistics: ln((n+1)/n)/omega.
/// Returns +inf for n == 0.
double inverse_temperature_for(double n, double omega);

Occupations occupations(const EngineParams& params, Statistics statistics = Statistics::Bose);

/// Operating regime from the signs of <W> and <Q_H>, which for the hot-a
/// convention reproduces both the (omega, N) and the temperature-ratio
/// criteria. Boundaries (N_A = N_B, omega_A = omega_B, sin theta = 0) are
/// Degenerate.
Regime classify_regime(const EngineParams& params);

}  // namespace otto
