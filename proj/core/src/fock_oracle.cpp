#include "otto/fock_oracle.hpp"

#include "otto/csv.hpp"
#include "otto/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

namespace otto {

namespace {

int squeeze_padding(int n_max) { return std::max(16, n_max / 2); }

// Labels of one conserved-charge block, ordered so that the "raising" term
// of the generator maps basis[k] to basis[k + 1].
std::vector<std::pair<int, int>> sector_basis(StrokeKind kind, int charge, int n_max) {
    std::vector<std::pair<int, int>> basis;
    switch (kind) {
        case StrokeKind::BeamSplitter:  // m + n = charge
            for (int m = 0; m <= charge; ++m) basis.emplace_back(m, charge - m);
            break;
        case StrokeKind::CubicExchange:  // 2m + n = charge
            for (int m = 0; 2 * m <= charge; ++m) basis.emplace_back(m, charge - 2 * m);
            break;
        case StrokeKind::TwoModeSqueeze: {  // m - n = charge, both <= n_max + pad
            const int limit = n_max + squeeze_padding(n_max);
            for (int n = std::max(0, -charge); n <= limit && n + charge <= limit; ++n) {
                basis.emplace_back(n + charge, n);
            }
            break;
        }
    }
    return basis;
}

std::pair<int, int> charge_range(StrokeKind kind, int n_max) {
    switch (kind) {
        case StrokeKind::BeamSplitter: return {0, 2 * n_max};
        case StrokeKind::CubicExchange: return {0, 3 * n_max};
        case StrokeKind::TwoModeSqueeze: return {-n_max, n_max};
    }
    return {0, -1};
}

// <basis[k+1]| G |basis[k]> for the raising part of the generator.
Complex raising_element(const StrokeSpec& spec, std::pair<int, int> state) {
    const double m = state.first;
    const double n = state.second;
    switch (spec.kind) {
        case StrokeKind::BeamSplitter:  // a^dag b
            return spec.coupling * std::sqrt((m + 1.0) * n);
        case StrokeKind::CubicExchange:  // a^dag b^2
            return spec.coupling * std::sqrt((m + 1.0) * n * (n - 1.0));
        case StrokeKind::TwoModeSqueeze:  // a^dag b^dag
            return spec.coupling * std::sqrt((m + 1.0) * (n + 1.0));
    }
    return {};
}

Eigen::MatrixXcd exponentiate_block(const StrokeSpec& spec,
                                    const std::vector<std::pair<int, int>>& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const bool real = spec.coupling.imag() == 0.0;
    if (real) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index k = 0; k + 1 < dim; ++k) {
            const double v = raising_element(spec, basis[static_cast<std::size_t>(k)]).real();
            g(k + 1, k) = v;
            g(k, k + 1) = -v;
        }
        return g.exp().cast<Complex>();
    }
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index k = 0; k + 1 < dim; ++k) {
        const Complex v = raising_element(spec, basis[static_cast<std::size_t>(k)]);
        g(k + 1, k) = v;
        g(k, k + 1) = -std::conj(v);
    }
    return g.exp();
}

// Beam-splitter block N + 1 from block N. With U^dag a U = c a + e^{i phi} s b,
//   A = U a^dag U^dag = c a^dag - e^{-i phi} s b^dag,
//   B = U b^dag U^dag = e^{i phi} s a^dag + c b^dag,
// and |m, n> = [sqrt(m) a^dag |m-1, n> + sqrt(n) b^dag |m, n-1>] / (m + n), so
//   U|m, n> = [sqrt(m) A U|m-1, n> + sqrt(n) B U|m, n-1>] / (m + n).
// Using both routes for every column (rather than one) keeps rounding
// errors from growing with N.
Eigen::MatrixXcd ladder_step(const StrokeSpec& spec, const Eigen::MatrixXcd& prev, int n) {
    const double magnitude = std::abs(spec.coupling);
    const Complex phase = magnitude > 0.0 ? spec.coupling / magnitude : Complex{1.0, 0.0};
    const double c = std::cos(magnitude);
    const double s = std::sin(magnitude);
    const Complex a1 = c;
    const Complex b1 = -std::conj(phase) * s;
    const Complex a2 = phase * s;
    const Complex b2 = c;

    // prev is sector n; result is sector n + 1, columns j = m of |m, n+1-m>.
    const Eigen::Index dim = n + 2;
    std::vector<double> root(static_cast<std::size_t>(dim) + 1);
    for (std::size_t k = 0; k < root.size(); ++k) root[k] = std::sqrt(static_cast<double>(k));
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
    const double inv = 1.0 / static_cast<double>(n + 1);
    const auto raise = [&](Eigen::Index src_col, Eigen::Index dst_col, Complex ca, Complex cb,
                           double weight) {
        for (Eigen::Index k = 0; k <= n; ++k) {
            const Complex v = prev(k, src_col) * weight;
            // a^dag |k, n-k> = sqrt(k+1) |k+1, n-k>;  b^dag |k, n-k> = sqrt(n-k+1) |k, n-k+1>
            next(k + 1, dst_col) += ca * root[static_cast<std::size_t>(k + 1)] * v;
            next(k, dst_col) += cb * root[static_cast<std::size_t>(n - k + 1)] * v;
        }
    };
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Eigen::Index m = j;
        const Eigen::Index nb = n + 1 - j;
        if (m > 0) raise(j - 1, j, a1, b1, root[static_cast<std::size_t>(m)] * inv);
        if (nb > 0) raise(j, j, a2, b2, root[static_cast<std::size_t>(nb)] * inv);
    }
    return next;
}

// Squeeze blocks live on m, n <= n_max + pad; mass an interior state sends
// into the outer half of the padding measures the influence of the wall.
double column_defect(const SectorBlock& block, StrokeKind kind, int n_max) {
    const int retained = n_max + squeeze_padding(n_max) / 2;
    double defect = 0.0;
    const auto dim = static_cast<Eigen::Index>(block.basis.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto [mi, ni] = block.basis[static_cast<std::size_t>(i)];
        if (kind == StrokeKind::TwoModeSqueeze && 2 * (mi + ni) > n_max) {
            continue;
        }
        double norm2 = 0.0;
        for (Eigen::Index f = 0; f < dim; ++f) {
            const auto [mf, nf] = block.basis[static_cast<std::size_t>(f)];
            if (kind == StrokeKind::TwoModeSqueeze && (mf > retained || nf > retained)) {
                continue;
            }
            norm2 += std::norm(block.u(f, i));
        }
        defect = std::max(defect, std::abs(1.0 - norm2));
    }
    return defect;
}

bool use_ladder(const StrokeSpec& spec, int n_max, SectorMethod method) {
    if (method == SectorMethod::Ladder) {
        if (spec.kind != StrokeKind::BeamSplitter) {
            throw DomainError("ladder construction is only available for the beam splitter");
        }
        return true;
    }
    if (method == SectorMethod::Auto) {
        return spec.kind == StrokeKind::BeamSplitter && 2 * n_max + 1 > kLadderThreshold;
    }
    return false;
}

int suggest_n_max(const Occupations& occ, double tail) {
    return TruncationSpec::automatic(occ, 0.5 * tail).n_max;
}

std::vector<double> gibbs_weights(double n, int n_max) {
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (n == 0.0) {
        p[0] = 1.0;
        return p;
    }
    // p(k) = (1 - q) q^k with q = N/(N+1), accumulated in log space.
    const double log_q = std::log(n) - std::log1p(n);
    const double log_norm = -std::log1p(n);
    for (int k = 0; k <= n_max; ++k) {
        p[static_cast<std::size_t>(k)] = std::exp(log_norm + k * log_q);
    }
    return p;
}

// Dense accumulator over (delta_m, delta_n).
class JointAccumulator {
public:
    JointAccumulator(StrokeKind kind, int n_max) : n_max_(n_max) {
        int max_m = 0;
        int max_n = 0;
        switch (kind) {
            case StrokeKind::BeamSplitter: max_m = max_n = 2 * n_max; break;
            case StrokeKind::CubicExchange: max_m = 3 * n_max / 2; max_n = 3 * n_max; break;
            case StrokeKind::TwoModeSqueeze: max_m = max_n = n_max + squeeze_padding(n_max); break;
        }
        rows_ = n_max + max_m + 1;
        cols_ = n_max + max_n + 1;
        acc_.assign(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), 0.0);
    }

    void add(const SectorBlock& block, const std::vector<double>& pa, const std::vector<double>& pb) {
        const auto dim = static_cast<Eigen::Index>(block.basis.size());
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto [mi, ni] = block.basis[static_cast<std::size_t>(i)];
            if (mi > n_max_ || ni > n_max_) continue;
            const double w = pa[static_cast<std::size_t>(mi)] * pb[static_cast<std::size_t>(ni)];
            if (w == 0.0) continue;
            for (Eigen::Index f = 0; f < dim; ++f) {
                const double p = w * std::norm(block.u(f, i));
                if (p == 0.0) continue;
                const auto [mf, nf] = block.basis[static_cast<std::size_t>(f)];
                at(mf - mi, nf - ni) += p;
            }
        }
    }

    void export_to(FockOracleResult& out) const {
        double total = 0.0;
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) {
                const double p = acc_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                                      static_cast<std::size_t>(c)];
                if (p > 0.0) {
                    out.joint[{r - n_max_, c - n_max_}] = p;
                    total += p;
                }
            }
        }
        out.total_mass = total;
    }

private:
    double& at(int dm, int dn) {
        return acc_[static_cast<std::size_t>(dm + n_max_) * static_cast<std::size_t>(cols_) +
                    static_cast<std::size_t>(dn + n_max_)];
    }

    int n_max_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> acc_;
};

}  // namespace

std::string_view to_string(StrokeKind kind) {
    switch (kind) {
        case StrokeKind::BeamSplitter: return "beam_splitter";
        case StrokeKind::TwoModeSqueeze: return "two_mode_squeeze";
        case StrokeKind::CubicExchange: return "cubic_exchange";
    }
    return "unknown";
}

StrokeSpec StrokeSpec::beam_splitter(double theta, double phi) {
    return {StrokeKind::BeamSplitter, std::polar(theta, phi)};
}

StrokeSpec StrokeSpec::two_mode_squeeze(double r) {
    if (!(r >= 0.0)) throw DomainError("squeeze parameter must be >= 0");
    return {StrokeKind::TwoModeSqueeze, Complex{r, 0.0}};
}

StrokeSpec StrokeSpec::cubic_exchange(Complex theta_c) {
    return {StrokeKind::CubicExchange, theta_c};
}

std::pair<int, int> StrokeSpec::charge_weights() const {
    switch (kind) {
        case StrokeKind::BeamSplitter: return {1, 1};
        case StrokeKind::TwoModeSqueeze: return {1, -1};
        case StrokeKind::CubicExchange: return {2, 1};
    }
    return {0, 0};
}

double gibbs_tail_bound(double n_a, double n_b, int n_max) {
    // log(1 - q^{n_max+1}) per mode, kept accurate when the tail is tiny
    const auto log_kept = [n_max](double n) {
        if (n == 0.0) return 0.0;
        const double log_q = std::log(n) - std::log1p(n);
        return std::log1p(-std::exp((n_max + 1.0) * log_q));
    };
    return std::max(0.0, -std::expm1(log_kept(n_a) + log_kept(n_b)));
}

TruncationSpec TruncationSpec::for_occupations(const Occupations& occ, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    return {n_max, gibbs_tail_bound(occ.n_a, occ.n_b, n_max)};
}

TruncationSpec TruncationSpec::automatic(const Occupations& occ, double per_mode_tail) {
    int n_max = 1;
    for (double n : {occ.n_a, occ.n_b}) {
        if (n <= 0.0) continue;
        const double log_q = std::log(n) - std::log1p(n);
        // q^{n_max + 1} < tail  <=>  n_max + 1 > log(tail)/log(q)
        const int needed = static_cast<int>(std::floor(std::log(per_mode_tail) / log_q));
        n_max = std::max(n_max, needed);
    }
    return for_occupations(occ, n_max);
}

Complex Stroke::amplitude(int m_out, int n_out, int m_in, int n_in) const {
    const auto [ca, cb] = spec.charge_weights();
    const int charge = ca * m_in + cb * n_in;
    if (ca * m_out + cb * n_out != charge) return {};
    for (const auto& block : sectors) {
        if (block.charge != charge) continue;
        std::optional<Eigen::Index> fi;
        std::optional<Eigen::Index> ii;
        for (std::size_t k = 0; k < block.basis.size(); ++k) {
            if (block.basis[k] == std::pair{m_out, n_out}) fi = static_cast<Eigen::Index>(k);
            if (block.basis[k] == std::pair{m_in, n_in}) ii = static_cast<Eigen::Index>(k);
        }
        if (fi && ii) return block.u(*fi, *ii);
        return {};
    }
    return {};
}

void for_each_sector(const StrokeSpec& spec, int n_max, SectorMethod method,
                     const std::function<void(const SectorBlock&)>& visit) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    const bool ladder = use_ladder(spec, n_max, method);
    const auto [first, last] = charge_range(spec.kind, n_max);
    SectorBlock block;
    for (int charge = first; charge <= last; ++charge) {
        block.charge = charge;
        block.basis = sector_basis(spec.kind, charge, n_max);
        if (ladder) {
            block.u = charge == 0 ? Eigen::MatrixXcd::Identity(1, 1)
                                  : ladder_step(spec, block.u, charge - 1);
        } else {
            block.u = exponentiate_block(spec, block.basis);
        }
        block.unitarity_defect = column_defect(block, spec.kind, n_max);
        if (block.unitarity_defect > kUnitarityTolerance) {
            throw TruncationError("stroke truncation too small: unitarity defect " +
                                      format_number(block.unitarity_defect) + " in sector " +
                                      std::to_string(charge),
                                  2 * n_max);
        }
        visit(block);
    }
}

Stroke build_stroke(const StrokeSpec& spec, int n_max, SectorMethod method) {
    Stroke stroke;
    stroke.spec = spec;
    stroke.n_max = n_max;
    for_each_sector(spec, n_max, method, [&](const SectorBlock& block) {
        stroke.unitarity_defect = std::max(stroke.unitarity_defect, block.unitarity_defect);
        stroke.sectors.push_back(block);
    });
    return stroke;
}

namespace {

void check_tail(const Occupations& occ, const TruncationSpec& trunc, double tail_tolerance) {
    if (trunc.tail_bound > tail_tolerance) {
        throw TruncationError("Gibbs tail " + std::to_string(trunc.tail_bound) +
                                  " exceeds tolerance at n_max = " + std::to_string(trunc.n_max),
                              suggest_n_max(occ, tail_tolerance));
    }
}

}  // namespace

FockOracleResult joint_distribution(const StrokeSpec& spec, const Occupations& occ,
                                    double omega_a, double omega_b, const TruncationSpec& trunc,
                                    double tail_tolerance, SectorMethod method) {
    check_tail(occ, trunc, tail_tolerance);
    const auto pa = gibbs_weights(occ.n_a, trunc.n_max);
    const auto pb = gibbs_weights(occ.n_b, trunc.n_max);
    JointAccumulator acc(spec.kind, trunc.n_max);
    FockOracleResult out;
    for_each_sector(spec, trunc.n_max, method, [&](const SectorBlock& block) {
        out.unitarity_defect = std::max(out.unitarity_defect, block.unitarity_defect);
        acc.add(block, pa, pb);
    });
    acc.export_to(out);
    out.omega_a = omega_a;
    out.omega_b = omega_b;
    out.n_max = trunc.n_max;
    out.tail_bound = trunc.tail_bound;
    return out;
}

FockOracleResult joint_distribution(const Stroke& stroke, const Occupations& occ,
                                    double omega_a, double omega_b, const TruncationSpec& trunc,
                                    double tail_tolerance) {
    if (trunc.n_max != stroke.n_max) {
        throw DomainError("truncation does not match the stroke's n_max");
    }
    check_tail(occ, trunc, tail_tolerance);
    const auto pa = gibbs_weights(occ.n_a, trunc.n_max);
    const auto pb = gibbs_weights(occ.n_b, trunc.n_max);
    JointAccumulator acc(stroke.spec.kind, trunc.n_max);
    for (const auto& block : stroke.sectors) {
        acc.add(block, pa, pb);
    }
    FockOracleResult out;
    acc.export_to(out);
    out.omega_a = omega_a;
    out.omega_b = omega_b;
    out.n_max = trunc.n_max;
    out.tail_bound = trunc.tail_bound;
    out.unitarity_defect = stroke.unitarity_defect;
    return out;
}

Moments FockOracleResult::moments() const {
    double ew = 0.0, eq = 0.0, ew2 = 0.0, eq2 = 0.0, ewq = 0.0, eqc = 0.0;
    for (const auto& [key, p] : joint) {
        const double wv = w(key.first, key.second);
        const double qv = qh(key.first);
        ew += p * wv;
        eq += p * qv;
        ew2 += p * wv * wv;
        eq2 += p * qv * qv;
        ewq += p * wv * qv;
        eqc += p * (-omega_b * key.second);
    }
    Moments m;
    m.mean_w = ew;
    m.mean_qh = eq;
    m.mean_qc = eqc;
    m.var_w = ew2 - ew * ew;
    m.var_qh = eq2 - eq * eq;
    m.cov_w_qh = ewq - ew * eq;
    return m;
}

double FockOracleResult::mean_delta_energy_a() const {
    double acc = 0.0;
    for (const auto& [key, p] : joint) acc += p * omega_a * key.first;
    return acc;
}

double FockOracleResult::mean_delta_energy_b() const {
    double acc = 0.0;
    for (const auto& [key, p] : joint) acc += p * omega_b * key.second;
    return acc;
}

double FockOracleResult::off_support_mass(std::pair<int, int> weights) const {
    double acc = 0.0;
    for (const auto& [key, p] : joint) {
        if (weights.first * key.first + weights.second * key.second != 0) acc += p;
    }
    return acc;
}

std::map<long, double> FockOracleResult::heat_marginal() const {
    std::map<long, double> out;
    for (const auto& [key, p] : joint) out[-static_cast<long>(key.first)] += p;
    return out;
}

double total_variation(const FockOracleResult& oracle, const WorkHeatPmf& pmf) {
    const auto marginal = oracle.heat_marginal();
    const long cut = pmf.support_cutoff(1e-18);
    long lo = -cut;
    long hi = cut;
    if (!marginal.empty()) {
        lo = std::min(lo, marginal.begin()->first);
        hi = std::max(hi, marginal.rbegin()->first);
    }
    double diff = 0.0;
    double pmf_in_range = 0.0;
    for (long n = lo; n <= hi; ++n) {
        const double p = pmf.probability(n);
        const auto it = marginal.find(n);
        const double o = it == marginal.end() ? 0.0 : it->second;
        diff += std::abs(o - p);
        pmf_in_range += p;
    }
    return 0.5 * (diff + std::max(0.0, 1.0 - pmf_in_range));
}

Complex char_fn_oracle(const FockOracleResult& joint, Complex lambda, Complex mu) {
    Complex acc{0.0, 0.0};
    const Complex i{0.0, 1.0};
    for (const auto& [key, p] : joint.joint) {
        acc += p * std::exp(i * (lambda * joint.w(key.first, key.second) + mu * joint.qh(key.first)));
    }
    return acc;
}

Complex char_fn_oracle(const StrokeSpec& spec, const Occupations& occ, double omega_a,
                       double omega_b, Complex lambda, Complex mu, const TruncationSpec& trunc,
                       CharFnRoute route) {
    if (route == CharFnRoute::TwoPointMeasurement) {
        return char_fn_oracle(joint_distribution(spec, occ, omega_a, omega_b, trunc), lambda, mu);
    }
    if (spec.kind != StrokeKind::BeamSplitter) {
        throw DomainError("phase-rotated route applies to the beam splitter only");
    }
    if (lambda.imag() != 0.0 || mu.imag() != 0.0) {
        throw DomainError("phase-rotated route needs real lambda and mu");
    }
    const double psi = lambda.real() * (omega_a - omega_b) - mu.real() * omega_a;
    StrokeSpec rotated = spec;
    rotated.coupling = spec.coupling * std::polar(1.0, psi);

    const auto pa = gibbs_weights(occ.n_a, trunc.n_max);
    const auto pb = gibbs_weights(occ.n_b, trunc.n_max);
    Complex acc{0.0, 0.0};
    for (int charge = 0; charge <= 2 * trunc.n_max; ++charge) {
        const auto basis = sector_basis(spec.kind, charge, trunc.n_max);
        const Eigen::MatrixXcd u = exponentiate_block(spec, basis);
        const Eigen::MatrixXcd v = exponentiate_block(rotated, basis);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto [m, n] = basis[i];
            if (m > trunc.n_max || n > trunc.n_max) continue;
            const double w = pa[static_cast<std::size_t>(m)] * pb[static_cast<std::size_t>(n)];
            if (w == 0.0) continue;
            const auto col = static_cast<Eigen::Index>(i);
            acc += w * u.col(col).dot(v.col(col));  // conjugates the first argument
        }
    }
    return acc;
}

void write_joint_csv(std::ostream& out, const FockOracleResult& result) {
    CsvWriter csv(out);
    csv.header({"delta_m", "delta_n", "w", "q_h", "probability", "tail_bound"});
    for (const auto& [key, p] : result.joint) {
        csv.field(key.first)
            .field(key.second)
            .field(result.w(key.first, key.second))
            .field(result.qh(key.first))
            .field(p)
            .field(result.tail_bound);
        csv.end_row();
    }
}

}  // namespace otto
