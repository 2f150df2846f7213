#pragma once

#include "otto/bosonic_cycle.hpp"
#include "otto/engine.hpp"
#include "otto/work_heat_distribution.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

namespace otto {

// Brute-force two-point-measurement oracle on a truncated two-mode Fock
// space. Everything here is computed from Fock matrix elements and Gibbs
// weights only; none of the Gaussian closed forms is used.

enum class StrokeKind { BeamSplitter, TwoModeSqueeze, CubicExchange };

std::string_view to_string(StrokeKind kind);

/// Unitary stroke exp(G) with
///   BeamSplitter:   G = xi a^dag b - xi^* a b^dag        (xi = theta e^{i phi})
///   TwoModeSqueeze: G = r (a^dag b^dag - a b)
///   CubicExchange:  G = t a^dag b^2 - t^* a b^dag^2
struct StrokeSpec {
    StrokeKind kind = StrokeKind::BeamSplitter;
    Complex coupling{0.0, 0.0};

    static StrokeSpec beam_splitter(double theta, double phi = 0.0);
    static StrokeSpec two_mode_squeeze(double r);
    static StrokeSpec cubic_exchange(Complex theta_c);

    /// Weights (c_a, c_b) of the conserved charge c_a a^dag a + c_b b^dag b.
    std::pair<int, int> charge_weights() const;
};

/// Per-mode photon cutoff and the exact Gibbs mass it discards.
struct TruncationSpec {
    int n_max = 0;
    double tail_bound = 0.0;

    static TruncationSpec for_occupations(const Occupations& occ, int n_max);
    /// Smallest n_max whose per-mode tail (N/(N+1))^{n_max+1} is below per_mode_tail.
    static TruncationSpec automatic(const Occupations& occ, double per_mode_tail = 1e-12);
};

/// 1 - prod_X (1 - (N_X/(N_X+1))^{n_max+1}).
double gibbs_tail_bound(double n_a, double n_b, int n_max);

/// One conserved-charge block of the stroke. u(f, i) = <basis[f]| U |basis[i]>.
struct SectorBlock {
    int charge = 0;
    std::vector<std::pair<int, int>> basis;  // Fock labels (m, n)
    Eigen::MatrixXcd u;
    /// max over interior columns of |1 - retained column norm^2|.
    double unitarity_defect = 0.0;
};

enum class SectorMethod {
    Auto,         // exponential, except ladder for beam splitters whose largest block exceeds kLadderThreshold
    Exponential,  // dense matrix exponential of each block's generator
    Ladder,       // beam splitter only: sector N+1 from sector N via the mode map
};

inline constexpr int kLadderThreshold = 160;

/// Largest tolerated unitarity defect on retained interior states.
inline constexpr double kUnitarityTolerance = 1e-8;

class Stroke {
public:
    StrokeSpec spec;
    int n_max = 0;
    std::vector<SectorBlock> sectors;
    /// Largest block defect. Beam-splitter and cubic blocks are complete
    /// charge sectors, so their defect is pure rounding; squeeze blocks are
    /// computed on m, n <= n_max + pad and measure how much an interior state
    /// (m + n <= n_max/2) sends past n_max + pad/2.
    double unitarity_defect = 0.0;

    /// Amplitude <m', n'| U |m, n>; zero across charge sectors or outside the stored space.
    Complex amplitude(int m_out, int n_out, int m_in, int n_in) const;
};

/// Builds every block that an initial state with m, n <= n_max can reach.
/// Throws TruncationError when the unitarity defect exceeds kUnitarityTolerance.
Stroke build_stroke(const StrokeSpec& spec, int n_max, SectorMethod method = SectorMethod::Auto);

/// Streams the same blocks without storing them (large beam-splitter runs).
void for_each_sector(const StrokeSpec& spec, int n_max, SectorMethod method,
                     const std::function<void(const SectorBlock&)>& visit);

/// Joint two-point-measurement statistics of the quanta changes
/// (delta_m, delta_n) = (m' - m, n' - n).
struct FockOracleResult {
    std::map<std::pair<int, int>, double> joint;
    double omega_a = 1.0;
    double omega_b = 1.0;
    int n_max = 0;
    double tail_bound = 0.0;
    double total_mass = 0.0;
    double unitarity_defect = 0.0;

    double w(int delta_m, int delta_n) const { return omega_a * delta_m + omega_b * delta_n; }
    double qh(int delta_m) const { return -omega_a * delta_m; }

    Moments moments() const;
    double mean_delta_energy_a() const;
    double mean_delta_energy_b() const;
    /// Mass with c_a delta_m + c_b delta_n != 0.
    double off_support_mass(std::pair<int, int> charge_weights) const;
    /// Heat marginal indexed by n = -delta_m (Q_H = n omega_a).
    std::map<long, double> heat_marginal() const;
};

/// Enumerates Gibbs-weighted initial states (m, n <= trunc.n_max) through
/// the stroke. Refuses with TruncationError (suggesting an n_max) when
/// trunc.tail_bound exceeds tail_tolerance.
FockOracleResult joint_distribution(const StrokeSpec& spec, const Occupations& occ,
                                    double omega_a, double omega_b, const TruncationSpec& trunc,
                                    double tail_tolerance = 1.0,
                                    SectorMethod method = SectorMethod::Auto);

FockOracleResult joint_distribution(const Stroke& stroke, const Occupations& occ,
                                    double omega_a, double omega_b, const TruncationSpec& trunc,
                                    double tail_tolerance = 1.0);

/// Total variation between the oracle heat marginal and a closed-form pmf,
/// including the pmf mass the oracle never reaches.
double total_variation(const FockOracleResult& oracle, const WorkHeatPmf& pmf);

enum class CharFnRoute {
    TwoPointMeasurement,  // sum over the joint: <exp(i lambda W + i mu Q_H)>
    PhaseRotatedStroke,   // Tr[U_theta^dag U_xi rho_0], beam splitter only
};

/// Characteristic function from the oracle. PhaseRotatedStroke exponentiates
/// the stroke with xi = theta e^{i(lambda(omega_a - omega_b) - mu omega_a)},
/// so lambda and mu must be real on that route.
Complex char_fn_oracle(const StrokeSpec& spec, const Occupations& occ, double omega_a,
                       double omega_b, Complex lambda, Complex mu, const TruncationSpec& trunc,
                       CharFnRoute route = CharFnRoute::TwoPointMeasurement);

Complex char_fn_oracle(const FockOracleResult& joint, Complex lambda, Complex mu);

/// CSV: delta_m,delta_n,w,q_h,probability,tail_bound.
void write_joint_csv(std::ostream& out, const FockOracleResult& result);

}  // namespace otto
