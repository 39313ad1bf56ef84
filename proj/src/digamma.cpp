#include "cte/digamma.hpp"

#include <cmath>
#include <stdexcept>

namespace cte {

double digamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error("digamma: argument must be positive and finite");
    }
    // Shift upward with psi(x) = psi(x + 1) - 1/x until the asymptotic
    // series is accurate to rounding (first omitted term ~1e-15 at x = 10).
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^2n)
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

} // namespace cte
