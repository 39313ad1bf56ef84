#pragma once

namespace cte {

/// Digamma function psi(x) for x > 0, absolute error below 1e-10.
/// Throws std::domain_error for x <= 0.
double digamma(double x);

} // namespace cte
