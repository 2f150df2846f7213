#include "otto/thermalization.hpp"

#include "otto/csv.hpp"
#include "otto/errors.hpp"
#include "otto/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void ThermalizationParams::validate() const {
    engine.validate();
    if (std::abs(engine.theta - std::numbers::pi / 2.0) > 1e-12) {
        throw DomainError(
            "partial thermalization needs theta = pi/2: for an imperfect swap the modes leave "
            "the stroke correlated and the bi-Gibbs recursion does not hold");
    }
    if (!(gamma_tau >= 0.0)) throw DomainError("gamma_tau must be >= 0");
}

ThermalizationParams ThermalizationParams::swap(double omega_a, double omega_b, double beta_a,
                                                double beta_b, double gamma_tau) {
    ThermalizationParams p{
        EngineParams::checked(omega_a, omega_b, beta_a, beta_b, std::numbers::pi / 2.0),
        gamma_tau};
    p.validate();
    return p;
}

std::pair<double, double> steady_occupations(double n_a, double n_b, double gamma_tau) {
    const double c = std::exp(-gamma_tau);
    return {(n_a + c * n_b) / (1.0 + c), (n_b + c * n_a) / (1.0 + c)};
}

std::pair<double, double> steady_occupations(const ThermalizationParams& params) {
    params.validate();
    const auto occ = occupations(params.engine);
    return steady_occupations(occ.n_a, occ.n_b, params.gamma_tau);
}

std::vector<std::pair<double, double>> recursion_iterate(const ThermalizationParams& params,
                                                         std::pair<double, double> n0,
                                                         int cycles) {
    params.validate();
    if (n0.first < 0.0 || n0.second < 0.0) throw DomainError("occupations must be >= 0");
    if (cycles < 0) throw DomainError("cycles must be >= 0");
    const auto occ = occupations(params.engine);
    const double c = std::exp(-params.gamma_tau);
    const double keep = -std::expm1(-params.gamma_tau);
    std::vector<std::pair<double, double>> path{n0};
    path.reserve(static_cast<std::size_t>(cycles) + 1);
    for (int k = 0; k < cycles; ++k) {
        const auto [a, b] = path.back();
        path.emplace_back(c * b + keep * occ.n_a, c * a + keep * occ.n_b);
    }
    return path;
}

double v_function(double x_a, double x_b, double gamma_tau) {
    const double c = std::exp(-gamma_tau);
    const double x = x_a - x_b;
    const double num = (1.0 + c) * (1.0 + c) * (std::cosh(x_a) + std::cosh(x_b)) -
                       (1.0 + c * c) * std::cosh(x) - c * (4.0 + c) - 1.0;
    const double den =
        -std::expm1(-2.0 * gamma_tau) * (std::sinh(x_a) - std::sinh(x_b) - std::sinh(x));
    return x * num / den;
}

double partial_inverse_snr(double n_a, double n_b, double gamma_tau) {
    const double c = std::exp(-gamma_tau);
    const double one_minus_c = -std::expm1(-gamma_tau);
    const double gap = n_a - n_b;
    const double num = (1.0 + c * c) * (n_a * (n_a + 1.0) + n_b * (n_b + 1.0)) +
                       2.0 * c * (n_a + n_b + 2.0 * n_a * n_b);
    return num / (one_minus_c * one_minus_c * gap * gap);
}

PartialTurReport partial_tur_report(const ThermalizationParams& params) {
    params.validate();
    const EngineParams& e = params.engine;
    const auto occ = occupations(e);
    const auto [ta, tb] = steady_occupations(occ.n_a, occ.n_b, params.gamma_tau);

    PartialTurReport out;
    out.n_a_tilde = ta;
    out.n_b_tilde = tb;
    out.moments = moments(e.omega_a, e.omega_b, Occupations{ta, tb, Statistics::Bose}, 1.0);

    TurReport& r = out.report;
    const double xa = e.beta_a * e.omega_a;
    const double xb = e.beta_b * e.omega_b;
    r.affinity = xa - xb;
    r.efficiency = 1.0 - e.omega_b / e.omega_a;
    r.efficiency_carnot = 1.0 - e.beta_a / e.beta_b;

    const bool zero_work = params.gamma_tau == 0.0 ||
                           std::abs(occ.n_a - occ.n_b) <=
                               kDegenerateRelTol * std::max(occ.n_a, occ.n_b);
    out.coth_bound = params.gamma_tau > 0.0 ? 2.0 / std::tanh(params.gamma_tau / 2.0) : kInf;
    if (zero_work) {
        r.inv_snr_w = kInf;
        r.sigma = 0.0;
        fill_tur_bounds(r, 1.0);
        out.v = kInf;
        out.modified_tur_rhs = kInf;
        return out;
    }

    // Ideal sigma at theta = pi/2, rescaled by tanh(gamma tau / 2).
    r.sigma = r.affinity * (occ.n_b - occ.n_a) * std::tanh(params.gamma_tau / 2.0);
    r.inv_snr_w = partial_inverse_snr(occ.n_a, occ.n_b, params.gamma_tau);
    fill_tur_bounds(r, 1.0);

    out.v = v_function(xa, xb, params.gamma_tau);
    r.exact_rhs = out.v / r.sigma + 1.0;
    r.identity_residual = std::abs(r.inv_snr_w - r.exact_rhs) / r.inv_snr_w;
    out.v_identity_residual = r.identity_residual;
    out.modified_tur_rhs = out.coth_bound / r.sigma + 1.0;
    out.v_bound_holds = out.v >= out.coth_bound * (1.0 - kBoundSlack);
    out.modified_tur_holds = r.inv_snr_w >= out.modified_tur_rhs * (1.0 - kBoundSlack);
    return out;
}

double effective_inverse_temperature(double n_tilde, double omega) {
    if (!(n_tilde >= 0.0)) throw DomainError("occupation must be >= 0");
    if (!(omega > 0.0)) throw DomainError("frequency must be > 0");
    return inverse_temperature_for(n_tilde, omega);
}

WorkHeatPmf partial_pmf(const ThermalizationParams& params) {
    const auto [ta, tb] = steady_occupations(params);
    return bosonic_pmf(params.engine.omega_a, params.engine.omega_b,
                       Occupations{ta, tb, Statistics::Bose}, 1.0);
}

EngineParams effective_engine(const ThermalizationParams& params) {
    const auto [ta, tb] = steady_occupations(params);
    EngineParams e = params.engine;
    e.beta_a = effective_inverse_temperature(ta, e.omega_a);
    e.beta_b = effective_inverse_temperature(tb, e.omega_b);
    return e;
}

void write_snr_sweep_csv(std::ostream& out, double n_a, const std::vector<double>& n_b_values,
                         const std::vector<double>& gamma_taus) {
    CsvWriter csv(out);
    std::vector<std::string> names{"n_b", "snr_ideal"};
    for (double gt : gamma_taus) names.push_back("snr_gt" + format_number(gt));
    csv.header(names);
    for (double n_b : n_b_values) {
        const double gap = n_a - n_b;
        const double k = n_a + n_b + 2.0 * n_a * n_b;
        csv.field(n_b).field(gap == 0.0 ? 0.0 : 1.0 / (k / (gap * gap) + 1.0));
        for (double gt : gamma_taus) {
            csv.field(gap == 0.0 || gt == 0.0 ? 0.0 : 1.0 / partial_inverse_snr(n_a, n_b, gt));
        }
        csv.end_row();
    }
}

}  // namespace otto
