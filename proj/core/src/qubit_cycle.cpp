#include "otto/qubit_cycle.hpp"

#include "otto/csv.hpp"
#include "otto/errors.hpp"
#include "populations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <utility>

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// <Q_H^j> from the three-point law: odd powers see N_A - N_B, even powers
// see N_A + N_B - 2 N_A N_B.
double heat_raw_moment(double omega_a, const detail::Populations& pop, double s, int j) {
    if (j == 0) return 1.0;
    const double scale = std::pow(omega_a, j);
    if (j % 2 == 1) {
        return scale * pop.gap * s;
    }
    return scale * (pop.n_a + pop.n_b - 2.0 * pop.n_a * pop.n_b) * s;
}

TurReport qubit_tur_impl(const detail::Populations& pop, double s, double affinity) {
    TurReport r;
    r.affinity = affinity;
    const double l = pop.n_a + pop.n_b - 2.0 * pop.n_a * pop.n_b;
    if (s == 0.0 || pop.gap == 0.0) {
        r.inv_snr_w = kInf;
        r.sigma = 0.0;
    } else {
        r.inv_snr_w = l / (pop.gap * pop.gap * s) - 1.0;
        r.sigma = std::max(0.0, -affinity * pop.gap * s);
    }
    fill_tur_bounds(r, -1.0);
    return r;
}

double fermi_exponent(double n) { return std::log((1.0 - n) / n); }

}  // namespace

Complex qubit_char_fn(const QubitEngineParams& params, Complex lambda, Complex mu) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Fermi);
    const double s = params.sin2_theta();
    const Complex u = mu * params.omega_a - lambda * (params.omega_a - params.omega_b);
    const double l = pop.n_a + pop.n_b - 2.0 * pop.n_a * pop.n_b;
    return 1.0 + s * (l * (std::cos(u) - 1.0) + Complex{0.0, pop.gap} * std::sin(u));
}

double qubit_raw_moment(const QubitEngineParams& params, int order_w, int order_qh) {
    if (order_w < 0 || order_qh < 0) {
        throw UnsupportedOrderError("moment orders must be non-negative");
    }
    params.validate();
    const auto pop = detail::populations(params, Statistics::Fermi);
    const double ratio = (params.omega_b - params.omega_a) / params.omega_a;
    return std::pow(ratio, order_w) *
           heat_raw_moment(params.omega_a, pop, params.sin2_theta(), order_w + order_qh);
}

Moments qubit_moments(const QubitEngineParams& params) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Fermi);
    const double s = params.sin2_theta();
    const double ratio = (params.omega_b - params.omega_a) / params.omega_a;
    const double q1 = heat_raw_moment(params.omega_a, pop, s, 1);
    const double q2 = heat_raw_moment(params.omega_a, pop, s, 2);
    Moments m;
    m.mean_qh = q1;
    m.var_qh = q2 - q1 * q1;
    m.mean_w = ratio * q1;
    m.mean_qc = -m.mean_w - m.mean_qh;
    m.var_w = ratio * ratio * m.var_qh;
    m.cov_w_qh = ratio * m.var_qh;
    return m;
}

ThreePointPmf qubit_pmf(const QubitEngineParams& params) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Fermi);
    const double s = params.sin2_theta();
    ThreePointPmf p;
    p.p_plus = pop.n_a * (1.0 - pop.n_b) * s;
    p.p_minus = pop.n_b * (1.0 - pop.n_a) * s;
    p.p_zero = 1.0 - (pop.n_a + pop.n_b - 2.0 * pop.n_a * pop.n_b) * s;
    return p;
}

TurReport qubit_tur_report(const QubitEngineParams& params) {
    params.validate();
    const auto pop = detail::populations(params, Statistics::Fermi);
    const double affinity = params.beta_a * params.omega_a - params.beta_b * params.omega_b;
    TurReport r = qubit_tur_impl(pop, params.sin2_theta(), affinity);
    r.efficiency = 1.0 - params.omega_b / params.omega_a;
    r.efficiency_carnot = 1.0 - params.beta_a / params.beta_b;
    return r;
}

TurReport qubit_tur_from_occupations(double n_a, double n_b, double theta) {
    if (!(n_a > 0.0 && n_a < 0.5) || !(n_b > 0.0 && n_b < 0.5)) {
        throw DomainError("qubit occupations must lie in (0, 1/2)");
    }
    const double st = std::sin(theta);
    const double affinity = fermi_exponent(n_a) - fermi_exponent(n_b);
    return qubit_tur_impl({n_a, n_b, n_a - n_b}, st * st, affinity);
}

ViolationScan violation_scan(double theta, int resolution) {
    if (resolution < 1) {
        throw DomainError("violation scan needs resolution >= 1");
    }
    ViolationScan scan;
    scan.theta = theta;
    scan.resolution = resolution;
    scan.cells.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
    const double step = 0.5 / resolution;
    long violated = 0;
    for (int i = 0; i < resolution; ++i) {
        const double n_a = (i + 0.5) * step;
        for (int j = 0; j < resolution; ++j) {
            const double n_b = (j + 0.5) * step;
            const TurReport r = qubit_tur_from_occupations(n_a, n_b, theta);
            ViolationCell cell;
            cell.n_a = n_a;
            cell.n_b = n_b;
            cell.snr = std::isinf(r.inv_snr_w) ? 0.0 : 1.0 / r.inv_snr_w;
            cell.half_sigma = 0.5 * r.sigma;
            cell.violated = cell.snr > cell.half_sigma;
            cell.saturable_holds = r.flags.saturable;
            violated += cell.violated ? 1 : 0;
            scan.saturable_everywhere = scan.saturable_everywhere && cell.saturable_holds;
            scan.cells.push_back(cell);
        }
    }
    scan.area_fraction = static_cast<double>(violated) / static_cast<double>(scan.cells.size());
    return scan;
}

void write_violation_csv(std::ostream& out, const ViolationScan& scan) {
    CsvWriter csv(out);
    csv.header({"n_a", "n_b", "snr", "half_sigma", "violated"});
    for (const auto& c : scan.cells) {
        csv.field(c.n_a).field(c.n_b).field(c.snr).field(c.half_sigma).field(c.violated ? 1 : 0);
        csv.end_row();
    }
}

Complex QubitTpmOracle::char_fn(Complex lambda, Complex mu) const {
    Complex acc{0.0, 0.0};
    for (const auto& o : outcomes) {
        acc += o.probability * std::exp(Complex{0.0, 1.0} * (lambda * o.w + mu * o.qh));
    }
    return acc;
}

double QubitTpmOracle::raw_moment(int order_w, int order_qh) const {
    double acc = 0.0;
    for (const auto& o : outcomes) {
        acc += o.probability * std::pow(o.w, order_w) * std::pow(o.qh, order_qh);
    }
    return acc;
}

ThreePointPmf QubitTpmOracle::heat_pmf() const {
    ThreePointPmf p{0.0, 0.0, 0.0};
    for (const auto& o : outcomes) {
        if (o.delta_a == 0) p.p_zero += o.probability;
        if (o.delta_a == -1) p.p_plus += o.probability;
        if (o.delta_a == 1) p.p_minus += o.probability;
    }
    return p;
}

QubitTpmOracle qubit_tpm_oracle(const QubitEngineParams& params) {
    params.validate();
    // Gibbs weights from the Hamiltonian H = -omega |0><0| directly, not via
    // the occupation helpers: level 0 has energy -omega, level 1 energy 0.
    const auto level_weights = [](double beta, double omega) {
        // Boltzmann factors e^{beta omega} and 1, both divided by e^{beta omega}.
        const double w0 = 1.0;
        const double w1 = std::exp(-beta * omega);
        return std::array<double, 2>{w0 / (w0 + w1), w1 / (w0 + w1)};
    };
    const auto pa = level_weights(params.beta_a, params.omega_a);
    const auto pb = level_weights(params.beta_b, params.omega_b);

    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    // Basis |a b>, index 2a + b; a, b = 1 is the excited level.
    const std::array<std::array<double, 4>, 4> u{{
        {1.0, 0.0, 0.0, 0.0},
        {0.0, c, s, 0.0},
        {0.0, -s, c, 0.0},
        {0.0, 0.0, 0.0, 1.0},
    }};

    std::map<std::pair<int, int>, double> joint;
    for (int i = 0; i < 4; ++i) {
        const int ai = i / 2;
        const int bi = i % 2;
        const double p0 = pa[static_cast<std::size_t>(ai)] * pb[static_cast<std::size_t>(bi)];
        for (int f = 0; f < 4; ++f) {
            const double amp = u[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)];
            const double p = p0 * amp * amp;
            if (p == 0.0) continue;
            joint[{f / 2 - ai, f % 2 - bi}] += p;
        }
    }

    QubitTpmOracle oracle;
    for (const auto& [key, p] : joint) {
        QubitTpmOutcome o;
        o.delta_a = key.first;
        o.delta_b = key.second;
        const double de_a = params.omega_a * key.first;
        const double de_b = params.omega_b * key.second;
        o.w = de_a + de_b;
        o.qh = -de_a;
        o.probability = p;
        oracle.outcomes.push_back(o);
    }
    return oracle;
}

}  // namespace otto
