#pragma once

namespace otto {

/// Below this |x| the affinity function h uses its Taylor series.
inline constexpr double kAffinitySeriesThreshold = 1e-4;

/// h(x) = x coth(x/2), continuously extended with h(0) = 2. Even in x.
double affinity_h(double x);

/// g(y): the non-negative solution of x tanh(x) = y, for y >= 0.
double inverse_x_tanh_x(double y);

/// Saturable TUR bound f(sigma) = csch^2(g(sigma/2)). Returns +inf at
/// sigma == 0; throws DomainError for sigma < 0.
double saturable_tur_bound(double sigma);

namespace detail {
double affinity_h_series(double x);
double affinity_h_direct(double x);
}  // namespace detail

}  // namespace otto
