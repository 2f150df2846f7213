#include "otto/engine.hpp"

#include "otto/errors.hpp"
#include "populations.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

namespace otto {

namespace {

bool nearly_equal(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

void EngineParams::validate() const {
    if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
        throw DomainError("mode frequencies must be positive");
    }
    if (!(beta_a > 0.0) || !(beta_b > 0.0)) {
        throw DomainError("inverse temperatures must be positive");
    }
    if (!(theta >= 0.0) || theta > std::numbers::pi / 2 + 1e-12) {
        throw DomainError("coupling angle theta must lie in [0, pi/2]");
    }
    if (!std::isfinite(phi)) {
        throw DomainError("coupling phase must be finite");
    }
}

std::vector<std::string> EngineParams::warnings() const {
    std::vector<std::string> out;
    if (beta_a >= beta_b) {
        out.emplace_back("beta_a >= beta_b: mode a is not the hot mode; regime labels assume T_A > T_B");
    }
    return out;
}

EngineParams EngineParams::checked(double omega_a, double omega_b, double beta_a,
                                   double beta_b, double theta, double phi) {
    EngineParams p{omega_a, omega_b, beta_a, beta_b, theta, phi};
    p.validate();
    for (const auto& w : p.warnings()) {
        std::clog << "warning: " << w << '\n';
    }
    return p;
}

double EngineParams::sin2_theta() const {
    const double s = std::sin(theta);
    return s * s;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::HeatEngine: return "heat_engine";
        case Regime::Refrigerator: return "refrigerator";
        case Regime::ThermalAccelerator: return "thermal_accelerator";
        case Regime::Degenerate: return "degenerate";
    }
    return "unknown";
}

double occupation(double beta, double omega, Statistics statistics) {
    if (!(beta > 0.0) || !(omega > 0.0)) {
        throw DomainError("occupation requires beta > 0 and omega > 0");
    }
    const double x = beta * omega;
    if (statistics == Statistics::Bose) {
        // expm1 keeps full precision at high temperature.
        return 1.0 / std::expm1(x);
    }
    // 1/(e^x + 1) = e^{-x}/(1 + e^{-x}); no overflow for large x.
    const double e = std::exp(-x);
    return e / (1.0 + e);
}

double inverse_temperature_for(double n, double omega) {
    if (!(n >= 0.0) || !(omega > 0.0)) {
        throw DomainError("inverse_temperature_for requires n >= 0 and omega > 0");
    }
    if (n == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::log1p(1.0 / n) / omega;
}

Occupations occupations(const EngineParams& params, Statistics statistics) {
    return {occupation(params.beta_a, params.omega_a, statistics),
            occupation(params.beta_b, params.omega_b, statistics), statistics};
}

Regime classify_regime(const EngineParams& params) {
    params.validate();
    const double xa = params.beta_a * params.omega_a;
    const double xb = params.beta_b * params.omega_b;
    if (nearly_equal(xa, xb, kDegenerateRelTol) ||
        nearly_equal(params.omega_a, params.omega_b, kDegenerateRelTol) ||
        params.sin2_theta() < kDegenerateRelTol) {
        return Regime::Degenerate;
    }
    // N_A > N_B  <=>  beta_A omega_A < beta_B omega_B, for both statistics.
    const int dn = sign_of(xb - xa);
    const int dw = sign_of(params.omega_a - params.omega_b);
    const int work = -dw * dn;  // sign of (omega_A - omega_B)(N_B - N_A)
    const int heat_h = dn;
    if (work < 0) {
        return Regime::HeatEngine;
    }
    return heat_h < 0 ? Regime::Refrigerator : Regime::ThermalAccelerator;
}

}  // namespace otto

namespace otto::detail {

Populations populations(const EngineParams& params, Statistics statistics) {
    const double ya = params.beta_a * params.omega_a;
    const double yb = params.beta_b * params.omega_b;
    Populations p;
    p.n_a = occupation(params.beta_a, params.omega_a, statistics);
    p.n_b = occupation(params.beta_b, params.omega_b, statistics);
    if (statistics == Statistics::Bose) {
        // N_A - N_B = e^{yb}(1 - e^{ya - yb}) / (expm1(ya) expm1(yb)), written
        // in terms of e^{-y} so that large y does not overflow.
        p.gap = -std::expm1(ya - yb) * std::exp(-ya) /
                (std::expm1(-ya) * std::expm1(-yb));
        return p;
    }
    // 1/(e^{ya}+1) - 1/(e^{yb}+1) = -expm1(ya - yb) e^{-ya} / ((1 + e^{-ya})(1 + e^{-yb}))
    const double ea = std::exp(-ya);
    const double eb = std::exp(-yb);
    p.gap = -std::expm1(ya - yb) * ea / ((1.0 + ea) * (1.0 + eb));
    return p;
}

}  // namespace otto::detail
