#ifndef DIMFREE_BOUNDS_CORE_HPP
#define DIMFREE_BOUNDS_CORE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dimfree/error.hpp"
#include "dimfree/partitions.hpp"
#include "dimfree/scalar.hpp"

namespace dimfree {

// Scalar functions dominating max{theta, theta^K} (or max{theta, theta^2}) on their domain.
class DominatingFunction {
public:
    enum class Kind { Exponential, Rational, Power, Quadratic };

    // e^{K theta} - K theta + exponential_offset(K)
    static DominatingFunction exponential(int k) {
        detail::require(k >= 1, Errc::NonPositiveArgument, "order must be >= 1");
        return DominatingFunction(Kind::Exponential, k, 0.0);
    }
    // 3 theta^2 / (6 - 2 c theta) + rational_offset(c), theta in (0, 3/c).
    // Stays above theta^2 only for c >= ~0.7994; above theta for every c.
    static DominatingFunction rational(double c) {
        detail::require(c > 0.0, Errc::NonPositiveArgument, "scale c must be > 0");
        return DominatingFunction(Kind::Rational, 2, c);
    }
    // theta^{K+1} + power_offset(K)
    static DominatingFunction power(int k) {
        detail::require(k >= 1, Errc::NonPositiveArgument, "order must be >= 1");
        return DominatingFunction(Kind::Power, k, 0.0);
    }
    // theta^2 + 1/4
    static DominatingFunction quadratic() { return DominatingFunction(Kind::Quadratic, 2, 0.0); }

    Kind kind() const { return kind_; }
    int order() const { return k_; }
    double scale() const { return c_; }

    double domain_upper() const {
        return kind_ == Kind::Rational ? 3.0 / c_ : std::numeric_limits<double>::infinity();
    }

    bool in_domain(double theta) const { return theta > 0.0 && theta < domain_upper(); }

    // Evaluates without the strict positivity check so optimizers may probe theta = 0.
    double value_unchecked(double theta) const {
        switch (kind_) {
        case Kind::Exponential: {
            double kt = k_ * theta;
            return std::exp(kt) - kt + exponential_offset(k_);
        }
        case Kind::Rational:
            return 3.0 * theta * theta / (6.0 - 2.0 * c_ * theta) + rational_offset(c_);
        case Kind::Power:
            return std::pow(theta, k_ + 1) + power_offset(k_);
        case Kind::Quadratic:
            return theta * theta + 0.25;
        }
        return 0.0;
    }

    double operator()(double theta) const {
        detail::require(in_domain(theta), Errc::DomainViolation,
                        "theta=" + std::to_string(theta) + " outside the function's domain");
        return value_unchecked(theta);
    }

    // Abscissa where the function touches y = theta.
    double tangency_point() const {
        switch (kind_) {
        case Kind::Exponential:
            return std::log1p(1.0 / k_) / k_;
        case Kind::Rational: {
            double s = std::sqrt(6.0 * c_ + 9.0);
            return 6.0 * s / ((s + 3.0) * (2.0 * c_ + 3.0));
        }
        case Kind::Power:
            return std::exp(-std::log(k_ + 1.0) / k_);
        case Kind::Quadratic:
            return 0.5;
        }
        return 0.0;
    }

    std::string name() const {
        switch (kind_) {
        case Kind::Exponential: return "exponential(K=" + std::to_string(k_) + ")";
        case Kind::Rational: return "rational(c=" + std::to_string(c_) + ")";
        case Kind::Power: return "power(K=" + std::to_string(k_) + ")";
        case Kind::Quadratic: return "quadratic";
        }
        return "unknown";
    }

private:
    DominatingFunction(Kind kind, int k, double c) : kind_(kind), k_(k), c_(c) {}

    Kind kind_;
    int k_;
    double c_;
};

// Envelope values mu(B_k) aggregated over the whole index set and over a partition.
struct EnvelopeSummary {
    std::vector<double> envelopes;
    IndexPartition partition;
    double whole = 0.0;       // (1 + max mu)^K - 1
    double partitioned = 0.0; // sum_i (1 + max_{k in block i} mu)^{|block i|} - 1
    int tau = 0;              // largest block size
};

// (1+u)^p - 1 without cancellation for small u.
inline double growth_term(double u, int p) { return std::expm1(p * std::log1p(u)); }

inline EnvelopeSummary summarize_envelopes(const std::vector<double>& envelopes,
                                           const IndexPartition& partition) {
    detail::require(!envelopes.empty(), Errc::EmptyInput, "no envelope values");
    detail::require(partition.element_count() == static_cast<int>(envelopes.size()),
                    Errc::PartitionMismatch,
                    "partition covers " + std::to_string(partition.element_count()) +
                        " indices but " + std::to_string(envelopes.size()) + " envelopes given");
    for (double u : envelopes)
        detail::require(u >= 0.0 && std::isfinite(u), Errc::NegativeArgument,
                        "envelope values must be finite and >= 0");
    EnvelopeSummary s;
    s.envelopes = envelopes;
    s.partition = partition;
    s.tau = partition.tau();
    double umax = *std::max_element(envelopes.begin(), envelopes.end());
    s.whole = growth_term(umax, static_cast<int>(envelopes.size()));
    for (const auto& block : partition.blocks()) {
        double bmax = 0.0;
        for (int k : block) bmax = std::max(bmax, envelopes[static_cast<size_t>(k)]);
        s.partitioned += growth_term(bmax, static_cast<int>(block.size()));
    }
    return s;
}

struct LaplaceOptimum {
    double theta = 0.0;
    double bound = 0.0;
};

// inf over theta of exp(-theta t + g(theta) phi), by geometric bracketing then golden section.
inline LaplaceOptimum laplace_infimum(double t, double phi, const DominatingFunction& g) {
    detail::require(t > 0.0, Errc::NonPositiveArgument, "t must be > 0");
    detail::require(phi >= 0.0, Errc::NegativeArgument, "phi must be >= 0");
    const bool bounded = g.kind() == DominatingFunction::Kind::Rational;
    const double theta_cap = bounded ? 0.999 * g.domain_upper() : 1e4;

    auto h = [&](double theta) {
        double v = -theta * t + g.value_unchecked(theta) * phi;
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    if (phi == 0.0) return {theta_cap, std::exp(-theta_cap * t)};

    // Walk a geometric grid until the objective starts increasing.
    const double ratio = 1.1;
    double prev = 0.0, cur = 1e-8;
    double h_cur = h(cur);
    double lo = 0.0, hi = theta_cap;
    bool found = false;
    while (cur < theta_cap) {
        double next = std::min(cur * ratio, theta_cap);
        double h_next = h(next);
        if (h_next > h_cur) {
            lo = prev;
            hi = next;
            found = true;
            break;
        }
        prev = cur;
        cur = next;
        h_cur = h_next;
        if (next >= theta_cap) break;
    }
    if (!found) {
        lo = prev;
        hi = theta_cap;
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 300 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = h(x2);
        }
    }
    double theta = f1 <= f2 ? x1 : x2;
    double best = std::min(f1, f2);
    if (!found && h(theta_cap) < best) {
        theta = theta_cap;
        best = h(theta_cap);
    }
    detail::require(std::isfinite(best), Errc::OptimizerDidNotConverge,
                    "Laplace objective did not reach a finite minimum");
    return {theta, std::exp(best)};
}

} // namespace dimfree

#endif
