#include "otto/special_functions.hpp"

#include "otto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otto {

namespace detail {

double affinity_h_series(double x) {
    const double x2 = x * x;
    // x coth(x/2) = 2 + x^2/6 - x^4/360 + x^6/15120 - ...
    return 2.0 + x2 * (1.0 / 6.0 + x2 * (-1.0 / 360.0 + x2 * (1.0 / 15120.0)));
}

double affinity_h_direct(double x) {
    const double ax = std::abs(x);
    return ax / std::tanh(0.5 * ax);
}

}  // namespace detail

double affinity_h(double x) {
    if (std::isinf(x)) {
        return std::numeric_limits<double>::infinity();
    }
    if (std::abs(x) < kAffinitySeriesThreshold) {
        return detail::affinity_h_series(x);
    }
    return detail::affinity_h_direct(x);
}

double inverse_x_tanh_x(double y) {
    if (!(y >= 0.0)) {
        throw DomainError("inverse_x_tanh_x requires y >= 0");
    }
    if (y == 0.0) {
        return 0.0;
    }
    if (std::isinf(y)) {
        return y;
    }
    constexpr double tol = 1e-14;
    // x tanh x <= x^2 and >= x - 1 bracket the root in [0, max(1, y + 1)].
    double lo = 0.0;
    double hi = std::max(1.0, y + 1.0);
    double x = std::min(std::sqrt(y), y + 1.0);
    for (int it = 0; it < 200; ++it) {
        const double t = std::tanh(x);
        const double fx = x * t - y;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double dfx = t + x * (1.0 - t * t);
        double next = x - fx / dfx;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= tol * std::max(1.0, x) || hi - lo <= tol) {
            return next;
        }
        x = next;
    }
    return x;
}

double saturable_tur_bound(double sigma) {
    if (!(sigma >= 0.0)) {
        throw DomainError("saturable_tur_bound requires sigma >= 0");
    }
    if (sigma == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double s = std::sinh(inverse_x_tanh_x(0.5 * sigma));
    return 1.0 / (s * s);
}

}  // namespace otto
