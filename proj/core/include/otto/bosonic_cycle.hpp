#pragma once

#include "otto/engine.hpp"

#include <complex>
#include <optional>

namespace otto {

using Complex = std::complex<double>;

/// First and second moments of work and heat for one engine variant.
struct Moments {
    double mean_w = 0.0;
    double mean_qh = 0.0;
    double mean_qc = 0.0;
    double var_w = 0.0;
    double var_qh = 0.0;
    double cov_w_qh = 0.0;
};

/// Which TUR inequalities hold. The engine-only bounds (work bound and
/// efficiency bound) are evaluated only in the heat-engine regime.
struct TurFlags {
    bool shifted_tur = true;   // inv_snr >= 2/sigma + 1
    bool standard_tur = true;  // inv_snr >= 2/sigma
    bool saturable = true;     // inv_snr >= f(sigma)
    std::optional<bool> work_bound;
    std::optional<bool> efficiency_bound;
};

/// Inverse signal-to-noise ratio of work against entropy production and
/// the bounds built from it. inv_snr_w and the right-hand sides are +inf
/// when the mean work vanishes.
struct TurReport {
    double inv_snr_w = 0.0;
    double sigma = 0.0;
    /// Affinity whose h-value enters the exact relation.
    double affinity = 0.0;
    /// h(affinity)/sigma + 1 (bosonic, squeeze) or h(affinity)/sigma - 1 (qubit).
    double exact_rhs = 0.0;
    double standard_tur_rhs = 0.0;
    double shifted_tur_rhs = 0.0;
    double saturable_rhs = 0.0;
    /// |inv_snr_w - exact_rhs| / inv_snr_w; 0 when both are infinite.
    double identity_residual = 0.0;
    TurFlags flags;
    double efficiency = 0.0;
    double efficiency_carnot = 0.0;
    std::optional<double> efficiency_bound;
};

struct EfficiencyCop {
    double eta = 0.0;
    double eta_carnot = 0.0;
    double zeta = 0.0;
    double zeta_carnot = 0.0;
};

/// Relative slack applied when a TUR flag compares two floating-point sides.
inline constexpr double kBoundSlack = 1e-12;

/// Joint characteristic function of (W, Q_H) under two-point measurement.
/// Complex arguments are allowed; throws PoleError if the denominator
/// vanishes.
Complex char_fn(const EngineParams& params, Complex lambda, Complex mu);

/// Same closed form evaluated on explicit occupations (used for the
/// partial-thermalization substitution).
Complex char_fn(double omega_a, double omega_b, const Occupations& occ, double sin2_theta,
                Complex lambda, Complex mu);

Moments moments(const EngineParams& params);
Moments moments(double omega_a, double omega_b, const Occupations& occ, double sin2_theta);

/// Mixed raw moment <W^order_w Q_H^order_qh> from finite differences of
/// char_fn at the origin (central stencils, two Richardson levels).
/// Throws UnsupportedOrderError when order_w + order_qh > 4.
double moments_from_chi(const EngineParams& params, int order_w, int order_qh);

double entropy_production(const EngineParams& params);

/// Otto efficiency, Carnot efficiency and the refrigerator COPs. Throws
/// DomainError if omega_a == omega_b (COP undefined) or T_A == T_B.
EfficiencyCop efficiency_and_cop(const EngineParams& params);

TurReport tur_report(const EngineParams& params);

/// Fills the bound fields of a report from inv_snr_w, sigma and affinity.
/// offset is +1 for bosonic strokes, -1 for the qubit engine.
void fill_tur_bounds(TurReport& report, double offset);

}  // namespace otto
