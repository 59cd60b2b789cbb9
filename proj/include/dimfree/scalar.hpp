#ifndef DIMFREE_SCALAR_HPP
#define DIMFREE_SCALAR_HPP

#include <cmath>
#include <string>

#include "dimfree/error.hpp"

namespace dimfree {

// Bennett rate (t+1)log(t+1) - t.
inline double bennett_rate(double t) {
    detail::require(!(t < 0.0), Errc::NegativeArgument, "bennett_rate needs t >= 0, got " + std::to_string(t));
    if (std::isinf(t)) return t;
    if (t < 0.25) {
        // sum_{n>=2} (-1)^n t^n / (n(n-1)); avoids the cancellation near 0.
        double sum = 0.0, pw = t;
        for (int n = 2; n < 60; ++n) {
            pw *= t;
            double term = pw / (n * (n - 1.0));
            sum += (n % 2 == 0) ? term : -term;
            if (term < 1e-18 * sum) break;
        }
        return sum;
    }
    return (t + 1.0) * std::log1p(t) - t;
}

// Offset making e^{K theta} - K theta + offset tangent to y = theta.
inline double exponential_offset(int k) {
    detail::require(k >= 1, Errc::NonPositiveArgument, "order must be >= 1");
    double inv = 1.0 / k;
    return (1.0 + inv) * (std::log1p(inv) - 1.0);
}

// Offset making 3 theta^2 / (6 - 2 c theta) + offset tangent to y = theta.
// Written as 3 / ((c+3) + sqrt(6c+9)) to stay accurate for small c.
inline double rational_offset(double c) {
    detail::require(c > 0.0, Errc::NonPositiveArgument, "scale c must be > 0");
    return 3.0 / ((c + 3.0) + std::sqrt(6.0 * c + 9.0));
}

// Offset making theta^{K+1} + offset tangent to y = theta.
inline double power_offset(int k) {
    detail::require(k >= 1, Errc::NonPositiveArgument, "order must be >= 1");
    double kd = k;
    return kd / (kd + 1.0) * std::exp(-std::log(kd + 1.0) / kd);
}

} // namespace dimfree

#endif
