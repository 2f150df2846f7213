#pragma once

#include "otto/engine.hpp"

namespace otto::detail {

/// Occupations plus their difference, computed without cancellation when
/// derived from (beta, omega).
struct Populations {
    double n_a = 0.0;
    double n_b = 0.0;
    double gap = 0.0;  // n_a - n_b
};

Populations populations(const EngineParams& params, Statistics statistics);

inline Populations populations(const Occupations& occ) {
    return {occ.n_a, occ.n_b, occ.n_a - occ.n_b};
}

}  // namespace otto::detail
