#pragma once

#include "otto/bosonic_cycle.hpp"
#include "otto/engine.hpp"
#include "otto/work_heat_distribution.hpp"

#include <initializer_list>
#include <iosfwd>
#include <utility>
#include <vector>

namespace otto {

/// Swap engine (theta = pi/2) whose baths relax each mode only partially:
/// after a stroke the occupation moves a fraction 1 - e^{-gamma tau}
/// towards the bath value. Both modes share the damping rate.
struct ThermalizationParams {
    EngineParams engine;
    double gamma_tau = 0.0;

    /// Throws DomainError unless engine is valid, theta == pi/2 and
    /// gamma_tau >= 0. Away from the perfect swap the modes leave the
    /// stroke correlated and the bi-Gibbs recursion no longer applies.
    void validate() const;

    static ThermalizationParams swap(double omega_a, double omega_b, double beta_a,
                                     double beta_b, double gamma_tau);
};

/// Periodic steady state (N~_A, N~_B). gamma_tau = inf gives the bath values.
std::pair<double, double> steady_occupations(const ThermalizationParams& params);

/// Same fixed point from explicit bath occupations.
std::pair<double, double> steady_occupations(double n_a, double n_b, double gamma_tau);

/// Occupations after each of `cycles` cycles, starting from n0 (the start
/// is element 0, so the result has cycles + 1 entries).
std::vector<std::pair<double, double>> recursion_iterate(const ThermalizationParams& params,
                                                         std::pair<double, double> n0,
                                                         int cycles);

struct PartialTurReport {
    TurReport report;  // exact_rhs = v / sigma + 1 under partial relaxation
    Moments moments;
    double n_a_tilde = 0.0;
    double n_b_tilde = 0.0;
    double v = 0.0;
    double coth_bound = 0.0;          // 2 coth(gamma_tau / 2)
    double modified_tur_rhs = 0.0;    // (2/sigma) coth(gamma_tau / 2) + 1
    bool v_bound_holds = true;
    bool modified_tur_holds = true;
    /// |inv_snr_w - (v/sigma + 1)| / inv_snr_w. Flagged when above 1e-8.
    double v_identity_residual = 0.0;
};

/// v(beta_a omega_a, beta_b omega_b, gamma tau), the partial-relaxation
/// replacement for h(beta_a omega_a - beta_b omega_b).
double v_function(double x_a, double x_b, double gamma_tau);

/// var(W)/<W>^2 of the swap engine under partial relaxation, in terms of
/// the bath occupations.
double partial_inverse_snr(double n_a, double n_b, double gamma_tau);

/// gamma_tau = 0 or N_A = N_B gives the zero-work sentinel (inv_snr_w = inf).
PartialTurReport partial_tur_report(const ThermalizationParams& params);

/// ln((N~ + 1)/N~)/omega; +inf for N~ = 0.
double effective_inverse_temperature(double n_tilde, double omega);

/// Swap-engine pmf with the steady occupations substituted.
WorkHeatPmf partial_pmf(const ThermalizationParams& params);

/// Effective engine: same frequencies, beta replaced by beta~.
EngineParams effective_engine(const ThermalizationParams& params);

/// SNR of the ideal and partially thermalized engines at fixed N_A over N_B values.
/// CSV: n_b,snr_ideal,snr_gt<value>... (SNR = <W>^2/var(W)).
void write_snr_sweep_csv(std::ostream& out, double n_a, const std::vector<double>& n_b_values,
                         const std::vector<double>& gamma_taus);

}  // namespace otto
