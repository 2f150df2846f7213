#include "otto_cli/commands.hpp"

#include "otto_cli/json_config.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include "otto/bosonic_cycle.hpp"
#include "otto/csv.hpp"
#include "otto/engine.hpp"
#include "otto/errors.hpp"
#include "otto/extended_strokes.hpp"
#include "otto/fock_oracle.hpp"
#include "otto/qubit_cycle.hpp"
#include "otto/special_functions.hpp"
#include "otto/thermalization.hpp"
#include "otto/work_heat_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace otto::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToleranceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values become strings; -0 prints as 0.
Json num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x + 0.0;
}

Json opt_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

Json opt_num(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

// Owns the --output file, or forwards to the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw DomainError("cannot open output file '" + path + "'");
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

void write_json(const std::string& path, std::ostream& out, const Json& j) {
    Sink sink(path, out);
    *sink << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- engine flags

struct EngineFlags {
    double wa = 1.0;
    double wb = 0.6;
    std::optional<double> ba;
    std::optional<double> bb;
    std::optional<double> na;
    std::optional<double> nb;
    std::optional<double> theta;
    std::optional<double> theta_frac;
    double phi = 0.0;

    void add(CLI::App* app) {
        app->add_option("--wa", wa, "Frequency of mode a")->capture_default_str();
        app->add_option("--wb", wb, "Frequency of mode b")->capture_default_str();
        auto* o_ba = app->add_option("--ba", ba, "Inverse temperature of the hot bath (default 1)");
        auto* o_bb = app->add_option("--bb", bb, "Inverse temperature of the cold bath (default 2)");
        auto* o_na = app->add_option("--na", na, "Occupation of mode a; sets --ba");
        auto* o_nb = app->add_option("--nb", nb, "Occupation of mode b; sets --bb");
        o_na->excludes(o_ba);
        o_nb->excludes(o_bb);
        auto* o_t = app->add_option("--theta", theta, "Coupling angle in radians (default pi/2)");
        auto* o_tf = app->add_option("--theta-frac", theta_frac, "Coupling angle as a fraction of pi");
        o_t->excludes(o_tf);
        app->add_option("--phi", phi, "Coupling phase (no statistic depends on it)")
            ->capture_default_str();
    }

    double angle() const {
        if (theta) return *theta;
        if (theta_frac) return *theta_frac * kPi;
        return kPi / 2.0;
    }

    static double beta_from(double n, double omega, Statistics stats) {
        if (stats == Statistics::Bose) {
            if (!(n > 0.0)) throw DomainError("occupation must be > 0");
            return inverse_temperature_for(n, omega);
        }
        if (!(n > 0.0 && n < 0.5)) throw DomainError("qubit occupation must lie in (0, 1/2)");
        return std::log((1.0 - n) / n) / omega;
    }

    EngineParams params(Statistics stats, std::ostream& err) const {
        EngineParams p;
        p.omega_a = wa;
        p.omega_b = wb;
        p.theta = angle();
        p.phi = phi;
        if (!(wa > 0.0) || !(wb > 0.0)) throw DomainError("frequencies must be > 0");
        p.beta_a = na ? beta_from(*na, wa, stats) : ba.value_or(1.0);
        p.beta_b = nb ? beta_from(*nb, wb, stats) : bb.value_or(2.0);
        p.validate();
        for (const auto& w : p.warnings()) err << "warning: " << w << "\n";
        return p;
    }
};

Json params_json(const EngineParams& p) {
    return Json{{"omega_a", num(p.omega_a)}, {"omega_b", num(p.omega_b)},
                {"beta_a", num(p.beta_a)},   {"beta_b", num(p.beta_b)},
                {"theta", num(p.theta)},     {"phi", num(p.phi)}};
}

Json moments_json(const Moments& m) {
    return Json{{"mean_w", num(m.mean_w)},   {"mean_qh", num(m.mean_qh)},
                {"mean_qc", num(m.mean_qc)}, {"var_w", num(m.var_w)},
                {"var_qh", num(m.var_qh)},   {"cov_w_qh", num(m.cov_w_qh)}};
}

Json tur_json(const TurReport& r) {
    return Json{{"inv_snr_w", num(r.inv_snr_w)},
                {"sigma", num(r.sigma)},
                {"affinity", num(r.affinity)},
                {"exact_rhs", num(r.exact_rhs)},
                {"identity_residual", num(r.identity_residual)},
                {"standard_tur_rhs", num(r.standard_tur_rhs)},
                {"shifted_tur_rhs", num(r.shifted_tur_rhs)},
                {"saturable_rhs", num(r.saturable_rhs)},
                {"standard_tur_satisfied", r.flags.standard_tur},
                {"shifted_tur_satisfied", r.flags.shifted_tur},
                {"saturable_satisfied", r.flags.saturable},
                {"work_bound_satisfied", opt_bool(r.flags.work_bound)},
                {"efficiency_bound_satisfied", opt_bool(r.flags.efficiency_bound)},
                {"efficiency_bound", opt_num(r.efficiency_bound)}};
}

Json pmf_head(const WorkHeatPmf& pmf, int half_width) {
    Json rows = Json::array();
    for (long n = -half_width; n <= half_width; ++n) {
        const auto o = outcome_for(pmf, n);
        rows.push_back(Json{{"n", n}, {"w", num(o.w)}, {"q_h", num(o.qh)},
                            {"probability", num(o.probability)}});
    }
    return rows;
}

Json document(std::string_view command) {
    return Json{{"schema", 1}, {"command", command}};
}

// ---------------------------------------------------------------- report

struct ReportOptions {
    EngineFlags engine;
    std::string variant = "bosonic";
    double r = 0.5;
    double tc_re = 0.3;
    double tc_im = 0.0;
    int n_max = 0;
    int head = 5;
    std::string output;
};

void add_stroke_options(CLI::App* app, double& r, double& tc_re, double& tc_im) {
    app->add_option("--r", r, "Squeeze magnitude (squeeze variant)")->capture_default_str();
    app->add_option("--tc-re", tc_re, "Real part of the cubic coupling")->capture_default_str();
    app->add_option("--tc-im", tc_im, "Imaginary part of the cubic coupling")->capture_default_str();
}

SqueezeParams squeeze_params(const EngineParams& p, double r) {
    return SqueezeParams{p.omega_a, p.omega_b, p.beta_a, p.beta_b, r};
}

CubicParams cubic_params(const EngineParams& p, double re, double im) {
    return CubicParams{p.omega_a, p.omega_b, p.beta_a, p.beta_b, Complex{re, im}};
}

Json efficiency_json(const EngineParams& p) {
    try {
        const auto e = efficiency_and_cop(p);
        return Json{{"eta", num(e.eta)},
                    {"eta_carnot", num(e.eta_carnot)},
                    {"zeta", num(e.zeta)},
                    {"zeta_carnot", num(e.zeta_carnot)}};
    } catch (const DomainError&) {
        return Json{{"eta", num(1.0 - p.omega_b / p.omega_a)},
                    {"eta_carnot", num(1.0 - p.beta_a / p.beta_b)},
                    {"zeta", nullptr},
                    {"zeta_carnot", nullptr}};
    }
}

int cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
    Json j = document("report");
    j["variant"] = o.variant;
    if (o.variant == "bosonic") {
        const auto p = o.engine.params(Statistics::Bose, err);
        const auto occ = occupations(p);
        j["params"] = params_json(p);
        j["occupations"] = Json{{"n_a", num(occ.n_a)}, {"n_b", num(occ.n_b)}};
        j["regime"] = to_string(classify_regime(p));
        j["moments"] = moments_json(moments(p));
        j["tur"] = tur_json(tur_report(p));
        j["efficiency"] = efficiency_json(p);
        j["pmf_head"] = pmf_head(bosonic_pmf(p), o.head);
        j["formulas"] = Json{
            {"mean_w", "-(wa-wb)(NA-NB) sin^2(theta)"},
            {"var_w", "(wa-wb)^2 [K + (NA-NB)^2 sin^2(theta)] sin^2(theta), K = NA+NB+2 NA NB"},
            {"sigma", "(ba wa - bb wb)(NB-NA) sin^2(theta)"},
            {"inv_snr_w", "h(ba wa - bb wb)/sigma + 1, h(x) = x coth(x/2)"},
            {"pmf", "two-sided geometric in n; W = -n (wa-wb), Q_H = n wa"}};
    } else if (o.variant == "qubit") {
        const auto p = o.engine.params(Statistics::Fermi, err);
        const auto occ = occupations(p, Statistics::Fermi);
        const auto pmf = qubit_pmf(p);
        j["params"] = params_json(p);
        j["occupations"] = Json{{"n_a", num(occ.n_a)}, {"n_b", num(occ.n_b)}};
        j["regime"] = to_string(classify_regime(p));
        j["moments"] = moments_json(qubit_moments(p));
        j["tur"] = tur_json(qubit_tur_report(p));
        j["efficiency"] = efficiency_json(p);
        j["pmf_head"] = Json::array(
            {Json{{"n", -1}, {"w", num(p.omega_a - p.omega_b)}, {"q_h", num(-p.omega_a)},
                  {"probability", num(pmf.p_minus)}},
             Json{{"n", 0}, {"w", 0.0}, {"q_h", 0.0}, {"probability", num(pmf.p_zero)}},
             Json{{"n", 1}, {"w", num(p.omega_b - p.omega_a)}, {"q_h", num(p.omega_a)},
                  {"probability", num(pmf.p_plus)}}});
        j["formulas"] = Json{
            {"occupation", "1/(exp(beta omega) + 1)"},
            {"inv_snr_w", "h(ba wa - bb wb)/sigma - 1"},
            {"pmf", "three-point: p(+1) = NA(1-NB) sin^2(theta), p(-1) = NB(1-NA) sin^2(theta)"}};
    } else if (o.variant == "squeeze") {
        const auto p = o.engine.params(Statistics::Bose, err);
        const auto sp = squeeze_params(p, o.r);
        const auto st = squeeze_moments(sp);
        const auto occ = sp.occupations();
        j["params"] = params_json(p);
        j["params"].erase("theta");
        j["params"].erase("phi");
        j["params"]["r"] = num(o.r);
        j["occupations"] = Json{{"n_a", num(occ.n_a)}, {"n_b", num(occ.n_b)}};
        j["regime"] = "dud";
        j["moments"] = moments_json(st.moments);
        j["tur"] = tur_json(st.report);
        j["pmf_head"] = pmf_head(squeeze_pmf(sp), o.head);
        j["formulas"] = Json{
            {"mean_w", "(wa+wb)(NA+NB+1) sinh^2(r)"},
            {"sigma", "(ba wa + bb wb)(NA+NB+1) sinh^2(r)"},
            {"inv_snr_w", "h(ba wa + bb wb)/sigma + 1"},
            {"pmf", "two-sided geometric in n; W = -n (wa+wb), Q_H = n wa"}};
    } else {  // cubic
        const auto p = o.engine.params(Statistics::Bose, err);
        const auto cp = cubic_params(p, o.tc_re, o.tc_im);
        const auto rep = o.n_max > 0
                             ? cubic_delta_structure(
                                   cp, TruncationSpec::for_occupations(cp.occupations(), o.n_max))
                             : cubic_delta_structure(cp);
        const auto m = rep.oracle.moments();
        j["params"] = params_json(p);
        j["params"].erase("theta");
        j["params"].erase("phi");
        j["params"]["theta_c"] = Json::array({num(o.tc_re), num(o.tc_im)});
        j["heat_engine_condition"] = cubic_heat_engine_condition(cp);
        j["occupation_condition"] = cubic_occupation_condition(cp);
        j["oracle"] = Json{{"n_max", rep.oracle.n_max},
                           {"tail_bound", num(rep.tail_bound)},
                           {"total_mass", num(rep.oracle.total_mass)},
                           {"off_support_mass", num(rep.off_support_mass)},
                           {"supported", rep.supported}};
        j["moments"] = moments_json(m);
        j["efficiency"] = Json{{"eta", num(rep.efficiency)},
                               {"max_deviation", num(rep.max_efficiency_deviation)}};
        j["sigma"] = Json{{"from_qh", num(rep.entropy.sigma_from_qh)},
                          {"from_w", opt_num(rep.entropy.sigma_from_w)},
                          {"non_negative", rep.entropy.non_negative}};
        j["formulas"] = Json{
            {"sigma", "-(ba wa - 2 bb wb)/wa <Q_H> = (ba wa - 2 bb wb)/(wa - 2 wb) <W>"},
            {"support", "2 delta_m + delta_n = 0; -W/Q_H = 1 - 2 wb/wa"}};
    }
    write_json(o.output, out, j);
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    EngineFlags engine;
    std::string variable;
    double start = 0.0;
    double stop = 1.0;
    int points = 2;
    std::vector<std::string> outputs;
    std::vector<double> gamma_taus;
    std::string variant = "bosonic";
    std::string output;
};

std::vector<double> grid(double start, double stop, int points) {
    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        xs[static_cast<std::size_t>(i)] = i == points - 1 ? stop : start + t * (stop - start);
    }
    return xs;
}

// One sweep point: every quantity a column may ask for.
struct Point {
    Moments m;
    TurReport r;
    std::string regime;
    double efficiency = 0.0;
    std::optional<double> efficiency_bound;
    // thermalization extras
    double v = 0.0;
    double coth_bound = 0.0;
    double modified_tur_rhs = 0.0;
    double n_a_tilde = 0.0;
    double n_b_tilde = 0.0;
    std::vector<double> snr_gt;
};

double var_bound(double mean_w, double factor) {
    return mean_w == 0.0 ? 0.0 : mean_w * mean_w * factor;
}

const std::vector<std::string>& engine_columns() {
    static const std::vector<std::string> names{
        "mean_w",    "mean_qh",  "mean_qc",   "var_w",       "var_qh",
        "cov_w_qh",  "sigma",    "half_sigma", "inv_snr_w",  "snr_w",
        "exact_rhs", "var_w_bound_shifted",    "var_w_bound_standard",
        "var_w_bound_saturable", "efficiency", "efficiency_bound", "regime"};
    return names;
}

const std::vector<std::string>& n_b_columns() {
    static const std::vector<std::string> names{"mean_w", "mean_qh", "var_w", "sigma",
                                                "half_sigma", "inv_snr_w", "snr_w",
                                                "snr_ideal"};
    return names;
}

const std::vector<std::string>& gamma_tau_columns() {
    static const std::vector<std::string> names{
        "mean_w", "mean_qh", "var_w", "sigma", "inv_snr_w", "snr_w", "v", "coth_bound",
        "modified_tur_rhs", "n_a_tilde", "n_b_tilde"};
    return names;
}

void emit(CsvWriter& csv, const Point& pt, const std::string& name) {
    const double snr = std::isinf(pt.r.inv_snr_w) ? 0.0 : 1.0 / pt.r.inv_snr_w;
    if (name == "mean_w") csv.field(pt.m.mean_w + 0.0);
    else if (name == "mean_qh") csv.field(pt.m.mean_qh + 0.0);
    else if (name == "mean_qc") csv.field(pt.m.mean_qc + 0.0);
    else if (name == "var_w") csv.field(pt.m.var_w + 0.0);
    else if (name == "var_qh") csv.field(pt.m.var_qh + 0.0);
    else if (name == "cov_w_qh") csv.field(pt.m.cov_w_qh + 0.0);
    else if (name == "sigma") csv.field(pt.r.sigma + 0.0);
    else if (name == "half_sigma") csv.field(pt.r.sigma / 2.0 + 0.0);
    else if (name == "inv_snr_w") csv.field(pt.r.inv_snr_w);
    else if (name == "snr_w" || name == "snr_ideal") csv.field(snr);
    else if (name == "exact_rhs") csv.field(pt.r.exact_rhs);
    else if (name == "var_w_bound_shifted") csv.field(var_bound(pt.m.mean_w, pt.r.shifted_tur_rhs));
    else if (name == "var_w_bound_standard") csv.field(var_bound(pt.m.mean_w, pt.r.standard_tur_rhs));
    else if (name == "var_w_bound_saturable") csv.field(var_bound(pt.m.mean_w, pt.r.saturable_rhs));
    else if (name == "efficiency") csv.field(pt.efficiency);
    else if (name == "efficiency_bound") csv.field(pt.efficiency_bound.value_or(std::nan("")));
    else if (name == "regime") csv.field(std::string_view{pt.regime});
    else if (name == "v") csv.field(pt.v);
    else if (name == "coth_bound") csv.field(pt.coth_bound);
    else if (name == "modified_tur_rhs") csv.field(pt.modified_tur_rhs);
    else if (name == "n_a_tilde") csv.field(pt.n_a_tilde);
    else if (name == "n_b_tilde") csv.field(pt.n_b_tilde);
}

Point engine_point(const EngineParams& p, bool qubit) {
    Point pt;
    if (qubit) {
        pt.m = qubit_moments(p);
        pt.r = qubit_tur_report(p);
    } else {
        pt.m = moments(p);
        pt.r = tur_report(p);
    }
    pt.regime = std::string(to_string(classify_regime(p)));
    pt.efficiency = pt.r.efficiency;
    pt.efficiency_bound = pt.r.efficiency_bound;
    return pt;
}

// Bosonic or qubit statistics straight from occupations.
Point occupation_point(double n_a, double n_b, double omega_a, double omega_b, double theta,
                       bool qubit, const std::vector<double>& gamma_taus) {
    Point pt;
    const double s = std::pow(std::sin(theta), 2);
    if (qubit) {
        pt.r = qubit_tur_from_occupations(n_a, n_b, theta);
        const double gap = n_a - n_b;
        const double l = n_a + n_b - 2.0 * n_a * n_b;
        pt.m.mean_qh = omega_a * gap * s;
        pt.m.mean_w = -(omega_a - omega_b) * gap * s;
        pt.m.var_w = std::pow(omega_a - omega_b, 2) * (l * s - gap * gap * s * s);
    } else {
        pt.m = moments(omega_a, omega_b, Occupations{n_a, n_b, Statistics::Bose}, s);
        const double gap = n_a - n_b;
        const double k = n_a + n_b + 2.0 * n_a * n_b;
        const double x = std::log1p(1.0 / n_a) - std::log1p(1.0 / n_b);  // ba wa - bb wb
        pt.r.affinity = x;
        if (gap == 0.0 || s == 0.0) {
            pt.r.inv_snr_w = std::numeric_limits<double>::infinity();
            pt.r.sigma = 0.0;
        } else {
            pt.r.inv_snr_w = k / (gap * gap * s) + 1.0;
            pt.r.sigma = x * (n_b - n_a) * s;
        }
        fill_tur_bounds(pt.r, 1.0);
        for (double gt : gamma_taus) {
            pt.snr_gt.push_back(gap == 0.0 || gt == 0.0 ? 0.0
                                                        : 1.0 / partial_inverse_snr(n_a, n_b, gt));
        }
    }
    return pt;
}

void check_columns(const std::vector<std::string>& requested,
                   const std::vector<std::string>& allowed, const std::string& variable) {
    for (const auto& name : requested) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            std::string msg = "unknown output '" + name + "' for variable " + variable + "; choose from";
            for (const auto& a : allowed) msg += " " + a;
            throw UsageError(msg);
        }
    }
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    if (o.points < 2) throw DomainError("--points must be >= 2");
    const bool qubit = o.variant == "qubit";
    const double lo = std::min(o.start, o.stop);
    const double hi = std::max(o.start, o.stop);

    std::vector<std::string> columns = o.outputs;
    std::vector<Point> rows;
    const auto xs = grid(o.start, o.stop, o.points);

    if (o.variable == "omega_b_ratio" || o.variable == "theta") {
        if (o.variable == "omega_b_ratio" && !(lo > 0.0)) {
            throw DomainError("omega_b_ratio range must be > 0");
        }
        if (o.variable == "theta" && (lo < 0.0 || hi > kPi / 2.0 + 1e-12)) {
            throw DomainError("theta range must lie in [0, pi/2]");
        }
        if (!o.gamma_taus.empty()) throw UsageError("--gamma-taus applies to the n_b sweep only");
        if (columns.empty()) columns = {"mean_w", "mean_qh", "sigma"};
        check_columns(columns, engine_columns(), o.variable);
        const auto base = o.engine.params(qubit ? Statistics::Fermi : Statistics::Bose, err);
        for (double x : xs) {
            EngineParams p = base;
            if (o.variable == "theta") p.theta = x;
            else p.omega_b = x * base.omega_a;
            p.validate();
            rows.push_back(engine_point(p, qubit));
        }
    } else if (o.variable == "n_b") {
        const double theta = o.engine.angle();
        if (qubit ? (lo <= 0.0 || hi >= 0.5) : lo < 0.0) {
            throw DomainError(qubit ? "n_b range must lie in (0, 1/2)" : "n_b range must be >= 0");
        }
        if (!o.gamma_taus.empty()) {
            if (qubit) throw UsageError("--gamma-taus applies to the bosonic engine only");
            if (std::abs(theta - kPi / 2.0) > 1e-12) {
                throw DomainError("partial thermalization needs theta = pi/2");
            }
            for (double gt : o.gamma_taus) {
                if (!(gt >= 0.0)) throw DomainError("gamma_tau must be >= 0");
            }
        }
        if (columns.empty()) columns = {"snr_ideal"};
        check_columns(columns, n_b_columns(), o.variable);
        const auto base = o.engine.params(qubit ? Statistics::Fermi : Statistics::Bose, err);
        const double n_a = o.engine.na ? *o.engine.na
                                       : occupation(base.beta_a, base.omega_a,
                                                    qubit ? Statistics::Fermi : Statistics::Bose);
        for (double x : xs) {
            rows.push_back(
                occupation_point(n_a, x, base.omega_a, base.omega_b, theta, qubit, o.gamma_taus));
        }
    } else {  // gamma_tau
        if (lo < 0.0) throw DomainError("gamma_tau range must be >= 0");
        if (qubit) throw UsageError("the gamma_tau sweep is for the bosonic swap engine");
        if (columns.empty()) columns = {"snr_w", "sigma", "v", "coth_bound"};
        check_columns(columns, gamma_tau_columns(), o.variable);
        const auto base = o.engine.params(Statistics::Bose, err);
        for (double x : xs) {
            ThermalizationParams tp{base, x};
            const auto rep = partial_tur_report(tp);
            Point pt;
            pt.m = rep.moments;
            pt.r = rep.report;
            pt.v = rep.v;
            pt.coth_bound = rep.coth_bound;
            pt.modified_tur_rhs = rep.modified_tur_rhs;
            pt.n_a_tilde = rep.n_a_tilde;
            pt.n_b_tilde = rep.n_b_tilde;
            rows.push_back(pt);
        }
    }

    Sink sink(o.output, out);
    CsvWriter csv(*sink);
    std::vector<std::string> header{o.variable};
    header.insert(header.end(), columns.begin(), columns.end());
    for (double gt : o.gamma_taus) header.push_back("snr_gt" + format_number(gt));
    csv.header(header);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv.field(xs[i]);
        for (const auto& c : columns) emit(csv, rows[i], c);
        for (double v : rows[i].snr_gt) csv.field(v);
        csv.end_row();
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sample

struct SampleOptions {
    EngineFlags engine;
    std::string variant = "bosonic";
    double r = 0.5;
    long count = 1000;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::optional<double> check_sigmas;
    std::string output;
};

int cmd_sample(const SampleOptions& o, std::ostream& out, std::ostream& err) {
    if (o.count < 1) throw DomainError("--count must be >= 1");
    const auto p = o.engine.params(Statistics::Bose, err);
    const WorkHeatPmf pmf =
        o.variant == "squeeze" ? squeeze_pmf(squeeze_params(p, o.r)) : bosonic_pmf(p);

    if (o.format == "csv" && !o.check_sigmas) {
        const auto draws = sample(pmf, static_cast<std::size_t>(o.count), o.seed);
        Sink sink(o.output, out);
        write_samples_csv(*sink, draws);
        return kExitOk;
    }

    // Streaming summary: Welford for mean and central moments of W.
    Sampler sampler(pmf, o.seed);
    double mean = 0.0, m2 = 0.0;
    std::vector<double> ws;
    ws.reserve(static_cast<std::size_t>(o.count));
    for (long i = 0; i < o.count; ++i) {
        const double w = sampler.next().w;
        ws.push_back(w);
        const double d = w - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (w - mean);
    }
    const double n = static_cast<double>(o.count);
    const double var = o.count > 1 ? m2 / (n - 1.0) : 0.0;
    double m4 = 0.0;
    for (double w : ws) m4 += std::pow(w - mean, 4);
    m4 /= n;
    const double se_mean = std::sqrt(var / n);
    const double se_var = std::sqrt(std::max(0.0, m4 - var * var) / n);
    const double exact_mean = pmf.mean_w();
    const double exact_var = pmf.var_w();
    const double z_mean = se_mean > 0.0 ? std::abs(mean - exact_mean) / se_mean : 0.0;
    const double z_var = se_var > 0.0 ? std::abs(var - exact_var) / se_var : 0.0;

    Json j = document("sample");
    j["variant"] = o.variant;
    j["count"] = o.count;
    j["seed"] = o.seed;
    j["mean_w"] = Json{{"empirical", num(mean)}, {"exact", num(exact_mean)},
                       {"standard_error", num(se_mean)}, {"z", num(z_mean)}};
    j["var_w"] = Json{{"empirical", num(var)}, {"exact", num(exact_var)},
                      {"standard_error", num(se_var)}, {"z", num(z_var)}};
    bool ok = true;
    if (o.check_sigmas) {
        ok = z_mean <= *o.check_sigmas && z_var <= *o.check_sigmas;
        j["check_sigmas"] = num(*o.check_sigmas);
        j["pass"] = ok;
    }
    write_json(o.output, out, j);
    if (!ok) throw ToleranceFailure("sample moments outside the requested standard errors");
    return kExitOk;
}

// ---------------------------------------------------------------- oracle-compare

struct OracleOptions {
    EngineFlags engine;
    std::string variant = "bosonic";
    double r = 0.5;
    double tc_re = 0.3;
    double tc_im = 0.0;
    int n_max = 0;
    double tol = 1e-7;
    double tail_tol = 1e-10;
    double lambda = 0.3;
    double mu = 0.7;
    std::string joint_csv;
    std::string output;
};

class Checks {
public:
    void add(const std::string& name, double value, double limit) {
        const bool ok = value <= limit;
        pass_ = pass_ && ok;
        j_[name] = Json{{"value", num(value)}, {"limit", num(limit)}, {"pass", ok}};
    }
    void add_flag(const std::string& name, bool ok) {
        pass_ = pass_ && ok;
        j_[name] = Json{{"pass", ok}};
    }
    bool pass() const { return pass_; }
    const Json& json() const { return j_; }

private:
    Json j_ = Json::object();
    bool pass_ = true;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void moment_checks(Checks& c, const Moments& oracle, const Moments& closed, double tol) {
    c.add("mean_w", rel(oracle.mean_w, closed.mean_w), tol);
    c.add("mean_qh", rel(oracle.mean_qh, closed.mean_qh), tol);
    c.add("var_w", rel(oracle.var_w, closed.var_w), tol);
    c.add("var_qh", rel(oracle.var_qh, closed.var_qh), tol);
    c.add("cov_w_qh", rel(oracle.cov_w_qh, closed.cov_w_qh), tol);
}

TruncationSpec pick_truncation(const Occupations& occ, int n_max) {
    return n_max > 0 ? TruncationSpec::for_occupations(occ, n_max) : TruncationSpec::automatic(occ);
}

Json oracle_json(const FockOracleResult& r) {
    return Json{{"n_max", r.n_max},
                {"tail_bound", num(r.tail_bound)},
                {"total_mass", num(r.total_mass)},
                {"unitarity_defect", num(r.unitarity_defect)}};
}

void maybe_write_joint(const std::string& path, const FockOracleResult& r, std::ostream& out) {
    if (path.empty()) return;
    Sink sink(path, out);
    write_joint_csv(*sink, r);
}

int cmd_oracle_compare(const OracleOptions& o, std::ostream& out, std::ostream& err) {
    Json j = document("oracle-compare");
    j["variant"] = o.variant;
    Checks c;
    const Complex lambda{o.lambda, 0.0};
    const Complex mu{o.mu, 0.0};

    if (o.variant == "qubit") {
        const auto p = o.engine.params(Statistics::Fermi, err);
        const auto oracle = qubit_tpm_oracle(p);
        const auto a = oracle.heat_pmf();
        const auto b = qubit_pmf(p);
        const double tv = 0.5 * (std::abs(a.p_zero - b.p_zero) + std::abs(a.p_plus - b.p_plus) +
                                 std::abs(a.p_minus - b.p_minus));
        j["params"] = params_json(p);
        c.add("total_variation", tv, o.tol);
        Moments om;
        const double ew = oracle.raw_moment(1, 0);
        const double eq = oracle.raw_moment(0, 1);
        om.mean_w = ew;
        om.mean_qh = eq;
        om.var_w = oracle.raw_moment(2, 0) - ew * ew;
        om.var_qh = oracle.raw_moment(0, 2) - eq * eq;
        om.cov_w_qh = oracle.raw_moment(1, 1) - ew * eq;
        moment_checks(c, om, qubit_moments(p), o.tol);
        c.add("char_fn", std::abs(oracle.char_fn(lambda, mu) - qubit_char_fn(p, lambda, mu)), o.tol);
    } else if (o.variant == "bosonic") {
        const auto p = o.engine.params(Statistics::Bose, err);
        const auto occ = occupations(p);
        const auto spec = StrokeSpec::beam_splitter(p.theta, p.phi);
        const auto trunc = pick_truncation(occ, o.n_max);
        const auto oracle = joint_distribution(spec, occ, p.omega_a, p.omega_b, trunc, o.tail_tol);
        maybe_write_joint(o.joint_csv, oracle, out);
        j["params"] = params_json(p);
        j["oracle"] = oracle_json(oracle);
        c.add("total_variation", total_variation(oracle, bosonic_pmf(p)), o.tol);
        moment_checks(c, oracle.moments(), moments(p), o.tol);
        const Complex tpm = char_fn_oracle(oracle, lambda, mu);
        c.add("char_fn", std::abs(tpm - char_fn(p, lambda, mu)), o.tol);
        if (trunc.n_max <= 100) {
            const Complex rotated = char_fn_oracle(spec, occ, p.omega_a, p.omega_b, lambda, mu,
                                                   trunc, CharFnRoute::PhaseRotatedStroke);
            c.add("char_fn_routes", std::abs(rotated - tpm), o.tol);
        }
        c.add("off_support_mass", oracle.off_support_mass(spec.charge_weights()),
              std::max(1e-12, trunc.tail_bound));
    } else if (o.variant == "squeeze") {
        const auto p = o.engine.params(Statistics::Bose, err);
        const auto sp = squeeze_params(p, o.r);
        const auto occ = sp.occupations();
        const auto spec = StrokeSpec::two_mode_squeeze(o.r);
        const auto trunc = pick_truncation(occ, o.n_max);
        const auto oracle = joint_distribution(spec, occ, p.omega_a, p.omega_b, trunc, o.tail_tol);
        maybe_write_joint(o.joint_csv, oracle, out);
        j["params"] = params_json(p);
        j["params"].erase("theta");
        j["params"].erase("phi");
        j["params"]["r"] = num(o.r);
        j["oracle"] = oracle_json(oracle);
        c.add("total_variation", total_variation(oracle, squeeze_pmf(sp)), o.tol);
        moment_checks(c, oracle.moments(), squeeze_moments(sp).moments, o.tol);
        c.add("off_support_mass", oracle.off_support_mass(spec.charge_weights()),
              std::max(1e-12, trunc.tail_bound));
    } else {  // cubic
        const auto p = o.engine.params(Statistics::Bose, err);
        const auto cp = cubic_params(p, o.tc_re, o.tc_im);
        const auto occ = cp.occupations();
        const auto trunc = pick_truncation(occ, o.n_max);
        if (trunc.tail_bound > o.tail_tol) {
            throw TruncationError("Gibbs tail exceeds --tail-tol",
                                  TruncationSpec::automatic(occ, 0.5 * o.tail_tol).n_max);
        }
        const auto rep = cubic_delta_structure(cp, trunc);
        maybe_write_joint(o.joint_csv, rep.oracle, out);
        j["params"] = params_json(p);
        j["params"].erase("theta");
        j["params"].erase("phi");
        j["params"]["theta_c"] = Json::array({num(o.tc_re), num(o.tc_im)});
        j["oracle"] = oracle_json(rep.oracle);
        c.add("off_support_mass", rep.off_support_mass, std::max(1e-10, rep.tail_bound));
        c.add("efficiency_deviation", rep.max_efficiency_deviation, o.tol);
        c.add_flag("sigma_non_negative", rep.entropy.non_negative);
        if (rep.entropy.sigma_from_w) {
            c.add("sigma_forms", rel(*rep.entropy.sigma_from_w, rep.entropy.sigma_from_qh), o.tol);
        }
    }
    j["tolerance"] = num(o.tol);
    j["checks"] = c.json();
    j["pass"] = c.pass();
    write_json(o.output, out, j);
    if (!c.pass()) throw ToleranceFailure("oracle comparison outside tolerance");
    return kExitOk;
}

// ---------------------------------------------------------------- violation-scan

struct ScanOptions {
    std::optional<double> theta;
    std::optional<double> theta_frac;
    int resolution = 200;
    std::string format = "csv";
    std::string output;
};

int cmd_violation_scan(const ScanOptions& o, std::ostream& out) {
    if (o.resolution < 1) throw DomainError("--resolution must be >= 1");
    const double theta = o.theta ? *o.theta : o.theta_frac ? *o.theta_frac * kPi : kPi / 2.0;
    if (theta < 0.0 || theta > kPi / 2.0 + 1e-12) throw DomainError("theta must lie in [0, pi/2]");
    const auto scan = violation_scan(theta, o.resolution);
    if (o.format == "csv") {
        Sink sink(o.output, out);
        write_violation_csv(*sink, scan);
        return kExitOk;
    }
    const auto violated = std::count_if(scan.cells.begin(), scan.cells.end(),
                                        [](const ViolationCell& c) { return c.violated; });
    Json j = document("violation-scan");
    j["theta"] = num(theta);
    j["resolution"] = o.resolution;
    j["violated_cells"] = violated;
    j["area_fraction"] = num(scan.area_fraction);
    j["saturable_everywhere"] = scan.saturable_everywhere;
    write_json(o.output, out, j);
    return kExitOk;
}

// ---------------------------------------------------------------- thermalization

struct ThermalOptions {
    EngineFlags engine;
    double gamma_tau = 1.0;
    int cycles = 0;
    double start_a = 0.0;
    double start_b = 0.0;
    std::string output;
};

int cmd_thermalization(const ThermalOptions& o, std::ostream& out, std::ostream& err) {
    const auto e = o.engine.params(Statistics::Bose, err);
    const ThermalizationParams tp{e, o.gamma_tau};
    const auto rep = partial_tur_report(tp);
    const auto eff = effective_engine(tp);

    Json j = document("thermalization");
    j["params"] = params_json(e);
    j["params"]["gamma_tau"] = num(o.gamma_tau);
    j["steady_occupations"] = Json{{"n_a", num(rep.n_a_tilde)}, {"n_b", num(rep.n_b_tilde)}};
    j["effective_beta"] = Json{{"beta_a", num(eff.beta_a)}, {"beta_b", num(eff.beta_b)}};
    j["rescaling"] = num(std::tanh(o.gamma_tau / 2.0));
    j["moments"] = moments_json(rep.moments);
    j["tur"] = tur_json(rep.report);
    j["v"] = num(rep.v);
    j["coth_bound"] = num(rep.coth_bound);
    j["v_bound_satisfied"] = rep.v_bound_holds;
    j["modified_tur_rhs"] = num(rep.modified_tur_rhs);
    j["modified_tur_satisfied"] = rep.modified_tur_holds;
    j["v_identity_residual"] = num(rep.v_identity_residual);
    j["v_identity_flagged"] = rep.v_identity_residual > 1e-8;
    if (o.cycles > 0) {
        Json path = Json::array();
        for (const auto& [a, b] : recursion_iterate(tp, {o.start_a, o.start_b}, o.cycles)) {
            path.push_back(Json::array({num(a), num(b)}));
        }
        j["trajectory"] = path;
    }
    write_json(o.output, out, j);
    return kExitOk;
}

// ---------------------------------------------------------------- wiring

void add_output(CLI::App* app, std::string& output) {
    app->add_option("-o,--output", output, "Write to this file instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact work and heat statistics of two-mode quantum Otto engines", "otto"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);

    ReportOptions report;
    auto* c_report = app.add_subcommand("report", "Single-point moments, TUR report and pmf head (JSON)");
    report.engine.add(c_report);
    c_report->add_option("--variant", report.variant, "Engine variant")
        ->check(CLI::IsMember({"bosonic", "qubit", "squeeze", "cubic"}))
        ->capture_default_str();
    add_stroke_options(c_report, report.r, report.tc_re, report.tc_im);
    c_report->add_option("--n-max", report.n_max, "Fock cutoff for the cubic oracle (0: automatic)");
    c_report->add_option("--pmf-head", report.head, "Half-width of the pmf excerpt")
        ->capture_default_str();
    add_output(c_report, report.output);

    SweepOptions sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Parameter sweep (CSV)");
    sweep.engine.add(c_sweep);
    c_sweep->add_option("--variable", sweep.variable, "Swept variable")
        ->required()
        ->check(CLI::IsMember({"omega_b_ratio", "n_b", "gamma_tau", "theta"}));
    c_sweep->add_option("--start", sweep.start, "First value")->required();
    c_sweep->add_option("--stop", sweep.stop, "Last value")->required();
    c_sweep->add_option("--points", sweep.points, "Number of points (>= 2)")->required();
    c_sweep->add_option("--outputs", sweep.outputs, "Columns to emit")->delimiter(',');
    c_sweep->add_option("--gamma-taus", sweep.gamma_taus,
                        "n_b sweep: add an SNR column per thermalization strength")
        ->delimiter(',');
    c_sweep->add_option("--variant", sweep.variant, "Engine variant")
        ->check(CLI::IsMember({"bosonic", "qubit"}))
        ->capture_default_str();
    add_output(c_sweep, sweep.output);

    SampleOptions samp;
    auto* c_sample = app.add_subcommand("sample", "Draw (n, W, Q_H) outcomes");
    samp.engine.add(c_sample);
    c_sample->add_option("--variant", samp.variant, "Engine variant")
        ->check(CLI::IsMember({"bosonic", "squeeze"}))
        ->capture_default_str();
    c_sample->add_option("--r", samp.r, "Squeeze magnitude (squeeze variant)")->capture_default_str();
    c_sample->add_option("--count", samp.count, "Number of draws")->capture_default_str();
    c_sample->add_option("--seed", samp.seed, "Generator seed")->capture_default_str();
    c_sample->add_option("--format", samp.format, "csv (draws) or json (summary)")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    c_sample->add_option("--check-sigmas", samp.check_sigmas,
                         "Fail (exit 3) if mean or variance of W is further than this many "
                         "standard errors from the exact value");
    add_output(c_sample, samp.output);

    OracleOptions orc;
    auto* c_oracle = app.add_subcommand("oracle-compare", "Closed forms against the Fock-space oracle");
    orc.engine.add(c_oracle);
    c_oracle->add_option("--variant", orc.variant, "Engine variant")
        ->check(CLI::IsMember({"bosonic", "qubit", "squeeze", "cubic"}))
        ->capture_default_str();
    add_stroke_options(c_oracle, orc.r, orc.tc_re, orc.tc_im);
    c_oracle->add_option("--n-max", orc.n_max, "Fock cutoff per mode (0: automatic)");
    c_oracle->add_option("--tol", orc.tol, "Tolerance for every check")->capture_default_str();
    c_oracle->add_option("--tail-tol", orc.tail_tol, "Largest accepted Gibbs tail mass")
        ->capture_default_str();
    c_oracle->add_option("--lambda", orc.lambda, "Work argument of the characteristic function")
        ->capture_default_str();
    c_oracle->add_option("--mu", orc.mu, "Heat argument of the characteristic function")
        ->capture_default_str();
    c_oracle->add_option("--joint-csv", orc.joint_csv, "Also write the oracle joint distribution");
    add_output(c_oracle, orc.output);

    ScanOptions scan;
    auto* c_scan = app.add_subcommand("violation-scan", "Qubit TUR violation map over (N_A, N_B)");
    auto* s_t = c_scan->add_option("--theta", scan.theta, "Coupling angle in radians (default pi/2)");
    auto* s_tf = c_scan->add_option("--theta-frac", scan.theta_frac, "Coupling angle as a fraction of pi");
    s_t->excludes(s_tf);
    c_scan->add_option("--resolution", scan.resolution, "Grid cells per axis")->capture_default_str();
    c_scan->add_option("--format", scan.format, "csv (grid) or json (summary)")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    add_output(c_scan, scan.output);

    ThermalOptions therm;
    auto* c_therm = app.add_subcommand("thermalization", "Swap engine with partial thermalization (JSON)");
    therm.engine.add(c_therm);
    c_therm->add_option("--gamma-tau", therm.gamma_tau, "Damping rate times contact time")
        ->capture_default_str();
    c_therm->add_option("--cycles", therm.cycles, "Also report this many cycles of the recursion");
    c_therm->add_option("--start-a", therm.start_a, "Initial occupation of mode a for --cycles");
    c_therm->add_option("--start-b", therm.start_b, "Initial occupation of mode b for --cycles");
    add_output(c_therm, therm.output);

    std::vector<std::string> names;
    for (const CLI::App* sub : app.get_subcommands({})) names.push_back(sub->get_name());
    std::string active;
    for (int i = 1; i < argc && active.empty(); ++i) {
        if (std::find(names.begin(), names.end(), argv[i]) != names.end()) active = argv[i];
    }
    app.config_formatter(std::make_shared<JsonConfig>(active, names));
    app.set_config("--config", "", "JSON file supplying any flag; flags on the command line win");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_report->parsed()) return cmd_report(report, out, err);
        if (c_sweep->parsed()) return cmd_sweep(sweep, out, err);
        if (c_sample->parsed()) return cmd_sample(samp, out, err);
        if (c_oracle->parsed()) return cmd_oracle_compare(orc, out, err);
        if (c_scan->parsed()) return cmd_violation_scan(scan, out);
        if (c_therm->parsed()) return cmd_thermalization(therm, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ToleranceFailure& e) {
        err << "tolerance failure: " << e.what() << "\n";
        return kExitTolerance;
    } catch (const TruncationError& e) {
        err << "error: " << e.what() << " (try --n-max " << e.suggested_n_max() << ")\n";
        return kExitDomain;
    } catch (const std::logic_error& e) {  // DomainError, UnsupportedOrderError
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::runtime_error& e) {  // PoleError
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"otto"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace otto::cli
