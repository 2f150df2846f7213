#include "otto/bosonic_cycle.hpp"

#include "otto/errors.hpp"
#include "otto/special_functions.hpp"
#include "populations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^w - 1 for complex w without cancellation near w = 0.
Complex expm1_complex(Complex w) {
    const double a = w.real();
    const double b = w.imag();
    const double half_sin = std::sin(0.5 * b);
    const double re = std::expm1(a) * std::cos(b) - 2.0 * half_sin * half_sin;
    const double im = std::exp(a) * std::sin(b);
    return {re, im};
}

Complex char_fn_impl(double omega_a, double omega_b, const detail::Populations& pop,
                     double s, Complex lambda, Complex mu) {
    const Complex u = mu * omega_a - lambda * (omega_a - omega_b);
    const Complex iu{-u.imag(), u.real()};
    // 1 - s[K(cos u - 1) + i(N_A - N_B) sin u] rewritten with z = e^{iu} as
    // 1 + s[P(1 - z) + Q(1 - 1/z)], P = N_A(N_B + 1), Q = N_B(N_A + 1).
    const double p = pop.n_a * (pop.n_b + 1.0);
    const double q = pop.n_b * (pop.n_a + 1.0);
    const Complex denom = 1.0 - s * (p * expm1_complex(iu) + q * expm1_complex(-iu));
    if (std::abs(denom) < 1e-300) {
        throw PoleError("characteristic function evaluated at a pole");
    }
    return 1.0 / denom;
}

Moments moments_impl(double omega_a, double omega_b, const detail::Populations& pop, double s) {
    const double k = pop.n_a + pop.n_b + 2.0 * pop.n_a * pop.n_b;
    const double spread = (k + pop.gap * pop.gap * s) * s;
    const double dw = omega_a - omega_b;
    Moments m;
    m.mean_w = -dw * pop.gap * s;
    m.mean_qh = omega_a * pop.gap * s;
    m.mean_qc = -omega_b * pop.gap * s;
    m.var_w = dw * dw * spread;
    m.var_qh = omega_a * omega_a * spread;
    m.cov_w_qh = -omega_a * dw * spread;
    return m;
}

// Central finite-difference weights at offsets -2..2 for derivative orders 0..4.
constexpr std::array<std::array<double, 5>, 5> kStencils{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

// Base step in u = mu omega_a - lambda (omega_a - omega_b) per total order,
// before dividing by the width of chi. Roundoff grows like eps/h^order.
constexpr std::array<double, 5> kBaseStep{0.0, 5e-2, 5e-2, 8e-2, 1e-1};

Complex mixed_difference(const EngineParams& params, int nw, int nq, double hw, double hq) {
    Complex acc{0.0, 0.0};
    const auto& sw = kStencils[static_cast<std::size_t>(nw)];
    const auto& sq = kStencils[static_cast<std::size_t>(nq)];
    for (int i = 0; i < 5; ++i) {
        if (sw[i] == 0.0) continue;
        for (int j = 0; j < 5; ++j) {
            if (sq[j] == 0.0) continue;
            acc += sw[i] * sq[j] * char_fn(params, Complex{(i - 2) * hw, 0.0}, Complex{(j - 2) * hq, 0.0});
        }
    }
    return acc / (std::pow(hw, nw) * std::pow(hq, nq));
}

}  // namespace

Complex char_fn(const EngineParams& params, Complex lambda, Complex mu) {
    params.validate();
    return char_fn_impl(params.omega_a, params.omega_b,
                        detail::populations(params, Statistics::Bose), params.sin2_theta(),
                        lambda, mu);
}

Complex char_fn(double omega_a, double omega_b, const Occupations& occ, double sin2_theta,
                Complex lambda, Complex mu) {
    return char_fn_impl(omega_a, omega_b, detail::populations(occ), sin2_theta, lambda, mu);
}

Moments moments(const EngineParams& params) {
    params.validate();
    return moments_impl(params.omega_a, params.omega_b,
                        detail::populations(params, Statistics::Bose), params.sin2_theta());
}

Moments moments(double omega_a, double omega_b, const Occupations& occ, double sin2_theta) {
    return moments_impl(omega_a, omega_b, detail::populations(occ), sin2_theta);
}

double moments_from_chi(const EngineParams& params, int order_w, int order_qh) {
    if (order_w < 0 || order_qh < 0 || order_w + order_qh > 4) {
        throw UnsupportedOrderError("moments_from_chi supports total order 0..4");
    }
    params.validate();
    const int order = order_w + order_qh;
    if (order == 0) {
        return 1.0;
    }
    // The Taylor coefficients of chi in u grow like (s(K + gap^2))^j, so the
    // stencil shrinks with that width.
    const auto pop = detail::populations(params, Statistics::Bose);
    const double s = params.sin2_theta();
    const double k = pop.n_a + pop.n_b + 2.0 * pop.n_a * pop.n_b;
    const double width = std::sqrt(1.0 + s * (k + pop.gap * pop.gap));
    const double dw = std::abs(params.omega_a - params.omega_b);
    if (order_w > 0 && dw == 0.0) {
        return 0.0;  // W vanishes identically
    }
    const double base = kBaseStep[static_cast<std::size_t>(order)] / width;
    const double hw = order_w > 0 ? base / dw : 0.0;
    const double hq = base / params.omega_a;

    // Error expansion is even in h: two Richardson levels cancel h^2 and h^4.
    const Complex d0 = mixed_difference(params, order_w, order_qh, hw, hq);
    const Complex d1 = mixed_difference(params, order_w, order_qh, hw / 2, hq / 2);
    const Complex d2 = mixed_difference(params, order_w, order_qh, hw / 4, hq / 4);
    const Complex r0 = (4.0 * d1 - d0) / 3.0;
    const Complex r1 = (4.0 * d2 - d1) / 3.0;
    const Complex derivative = (16.0 * r1 - r0) / 15.0;

    // <W^n Q^m> = (-i)^{n+m} d^{n+m} chi.
    Complex phase{1.0, 0.0};
    for (int i = 0; i < order; ++i) {
        phase *= Complex{0.0, -1.0};
    }
    return (phase * derivative).real();
}

double entropy_production(const EngineParams& params) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Bose);
    const double affinity = params.beta_a * params.omega_a - params.beta_b * params.omega_b;
    // Both factors share a sign, so the product is >= 0 up to rounding.
    return std::max(0.0, -affinity * pop.gap * params.sin2_theta());
}

EfficiencyCop efficiency_and_cop(const EngineParams& params) {
    params.validate();
    if (params.omega_a == params.omega_b) {
        throw DomainError("coefficient of performance undefined for omega_a == omega_b");
    }
    EfficiencyCop e;
    e.eta = 1.0 - params.omega_b / params.omega_a;
    e.eta_carnot = 1.0 - params.beta_a / params.beta_b;  // 1 - T_B/T_A
    e.zeta = params.omega_b / (params.omega_a - params.omega_b);
    const double tb = params.temperature_b();
    const double ta = params.temperature_a();
    e.zeta_carnot = ta == tb ? kInf : tb / (ta - tb);
    return e;
}

void fill_tur_bounds(TurReport& r, double offset) {
    const double sigma = r.sigma;
    if (sigma > 0.0) {
        r.exact_rhs = affinity_h(r.affinity) / sigma + offset;
        r.standard_tur_rhs = 2.0 / sigma;
        r.shifted_tur_rhs = 2.0 / sigma + 1.0;
    } else {
        r.exact_rhs = kInf;
        r.standard_tur_rhs = kInf;
        r.shifted_tur_rhs = kInf;
    }
    r.saturable_rhs = saturable_tur_bound(std::max(0.0, sigma));

    const auto holds = [&](double rhs) {
        if (std::isinf(r.inv_snr_w)) return true;
        return r.inv_snr_w >= rhs * (1.0 - kBoundSlack);
    };
    r.flags.shifted_tur = holds(r.shifted_tur_rhs);
    r.flags.standard_tur = holds(r.standard_tur_rhs);
    r.flags.saturable = holds(r.saturable_rhs);

    if (std::isinf(r.inv_snr_w) && std::isinf(r.exact_rhs)) {
        r.identity_residual = 0.0;
    } else {
        r.identity_residual = std::abs(r.inv_snr_w - r.exact_rhs) / std::abs(r.inv_snr_w);
    }
}

TurReport tur_report(const EngineParams& params) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Bose);
    const double s = params.sin2_theta();
    const Moments m = moments(params);

    TurReport r;
    r.affinity = params.beta_a * params.omega_a - params.beta_b * params.omega_b;
    r.sigma = entropy_production(params);
    const double k = pop.n_a + pop.n_b + 2.0 * pop.n_a * pop.n_b;
    const bool zero_mean = s == 0.0 || pop.gap == 0.0 ||
                           std::abs(pop.gap) <= kDegenerateRelTol * std::max(pop.n_a, pop.n_b);
    if (zero_mean) {
        r.inv_snr_w = kInf;
        r.sigma = 0.0;
    } else {
        r.inv_snr_w = k / (pop.gap * pop.gap * s) + 1.0;
    }
    fill_tur_bounds(r, 1.0);

    r.efficiency = 1.0 - params.omega_b / params.omega_a;
    r.efficiency_carnot = 1.0 - params.beta_a / params.beta_b;
    if (classify_regime(params) == Regime::HeatEngine && m.var_w > 0.0) {
        const double tb = params.temperature_b();
        const double extracted = -m.mean_w;
        const double work_rhs = m.var_w * (r.efficiency_carnot / r.efficiency - 1.0) / (2.0 * tb);
        r.flags.work_bound = extracted <= work_rhs * (1.0 + kBoundSlack);
        r.efficiency_bound = r.efficiency_carnot / (1.0 + 2.0 * tb * extracted / m.var_w);
        r.flags.efficiency_bound = r.efficiency <= *r.efficiency_bound * (1.0 + kBoundSlack);
    }
    return r;
}

}  // namespace otto
