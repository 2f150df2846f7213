#pragma once

#include "otto/bosonic_cycle.hpp"
#include "otto/engine.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace otto {

/// The two-qubit engine takes the same parameters as the bosonic one;
/// occupations are Fermi-Dirac and H_X = -omega_X |0><0|.
using QubitEngineParams = EngineParams;

/// Heat outcomes Q_H in {0, +omega_A, -omega_A}.
struct ThreePointPmf {
    double p_zero = 1.0;
    double p_plus = 0.0;
    double p_minus = 0.0;
};

Complex qubit_char_fn(const QubitEngineParams& params, Complex lambda, Complex mu);

Moments qubit_moments(const QubitEngineParams& params);

/// Raw moment <W^order_w Q_H^order_qh> (any non-negative orders).
double qubit_raw_moment(const QubitEngineParams& params, int order_w, int order_qh);

ThreePointPmf qubit_pmf(const QubitEngineParams& params);

/// Qubit TUR report: exact_rhs = h(affinity)/sigma - 1. The standard TUR flag
/// may legitimately be false here.
TurReport qubit_tur_report(const QubitEngineParams& params);

/// SNR <W>^2/var(W) against sigma/2 on an (N_A, N_B) grid over (0, 1/2)^2.
/// Cell centers are used, so the grid never touches the boundary.
struct ViolationCell {
    double n_a = 0.0;
    double n_b = 0.0;
    double snr = 0.0;
    double half_sigma = 0.0;
    bool violated = false;
    bool saturable_holds = true;
};

struct ViolationScan {
    double theta = 0.0;
    int resolution = 0;
    std::vector<ViolationCell> cells;  // row-major in n_a, then n_b
    double area_fraction = 0.0;
    bool saturable_everywhere = true;
};

/// The grid is over occupations directly; the affinity is recovered from
/// N_X = 1/(e^{y_X} + 1), so frequencies and temperatures never appear.
ViolationScan violation_scan(double theta, int resolution);

/// Qubit TUR report at one (N_A, N_B, theta) point.
TurReport qubit_tur_from_occupations(double n_a, double n_b, double theta);

/// CSV: n_a,n_b,snr,half_sigma,violated.
void write_violation_csv(std::ostream& out, const ViolationScan& scan);

/// Exact two-point-measurement reference on the 4-dim two-qubit space:
/// enumerates all 16 (initial, final) basis pairs.
struct QubitTpmOutcome {
    int delta_a = 0;  // excitation change of qubit A (-1, 0, +1)
    int delta_b = 0;
    double w = 0.0;
    double qh = 0.0;
    double probability = 0.0;
};

struct QubitTpmOracle {
    std::vector<QubitTpmOutcome> outcomes;  // aggregated by (delta_a, delta_b)

    Complex char_fn(Complex lambda, Complex mu) const;
    double raw_moment(int order_w, int order_qh) const;
    ThreePointPmf heat_pmf() const;
};

QubitTpmOracle qubit_tpm_oracle(const QubitEngineParams& params);

}  // namespace otto
