#ifndef DIMFREE_APPS_APPROX_HPP
#define DIMFREE_APPS_APPROX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dimfree/error.hpp"
#include "dimfree/matfun.hpp"
#include "dimfree/parallel.hpp"
#include "dimfree/rng.hpp"
#include "dimfree/tailbounds.hpp"

namespace dimfree {

// B = sum_l B_l estimated by averaging K copies of R = B_l / p_l (drawn with probability p_l).
struct ApproxScenario {
    std::vector<Matrix> summands;
    std::vector<double> probabilities;
    int k = 1;
    MatrixFunctional f = MatrixFunctional::spectral_norm();
    double epsilon = 1.0;
    double c = 1.0; // free parameter of the expectation multiplier
};

inline void validate(const ApproxScenario& sc) {
    detail::require(!sc.summands.empty(), Errc::EmptyInput, "no summands");
    detail::require(sc.summands.size() == sc.probabilities.size(), Errc::ShapeMismatch,
                    "one probability per summand");
    const auto r = sc.summands.front().rows(), c = sc.summands.front().cols();
    for (const auto& b : sc.summands)
        detail::require(b.rows() == r && b.cols() == c, Errc::ShapeMismatch, "summands differ in shape");
    double total = 0.0;
    for (double p : sc.probabilities) {
        detail::require(p > 0.0, Errc::WeightError, "probabilities must be positive");
        total += p;
    }
    detail::require(std::abs(total - 1.0) <= 1e-12, Errc::WeightError, "probabilities must sum to 1");
    detail::require(sc.k >= 1, Errc::NonPositiveArgument, "K must be >= 1");
    detail::require(sc.epsilon > 0.0, Errc::NonPositiveArgument, "epsilon must be > 0");
    detail::require(sc.c > 0.0, Errc::NonPositiveArgument, "c must be > 0");
}

inline Matrix target_matrix(const ApproxScenario& sc) {
    Matrix b = Matrix::Zero(sc.summands.front().rows(), sc.summands.front().cols());
    for (const auto& x : sc.summands) b += x;
    return b;
}

// sum_l p_l (B_l / p_l); equals the target up to rounding.
inline Matrix estimator_mean(const ApproxScenario& sc) {
    Matrix m = Matrix::Zero(sc.summands.front().rows(), sc.summands.front().cols());
    for (size_t l = 0; l < sc.summands.size(); ++l)
        m += sc.probabilities[l] * (sc.summands[l] / sc.probabilities[l]);
    return m;
}

// Largest single-copy deviation mu(B_l / p_l - B) over all outcomes.
inline double worst_copy_deviation(const ApproxScenario& sc) {
    Matrix b = target_matrix(sc);
    double u = 0.0;
    for (size_t l = 0; l < sc.summands.size(); ++l)
        u = std::max(u, sc.f(sc.summands[l] / sc.probabilities[l] - b));
    return u;
}

// Copy-deviation threshold sqrt(1 + 2 eps mu(B)) - 1.
inline double copy_deviation_threshold(double epsilon, double mu_b) {
    return std::sqrt(1.0 + 2.0 * epsilon * mu_b) - 1.0;
}

// Smallest epsilon for which every possible copy meets the deviation threshold.
inline double smallest_admissible_epsilon(const ApproxScenario& sc) {
    double u = worst_copy_deviation(sc);
    double mu_b = sc.f(target_matrix(sc));
    detail::require(mu_b > 0.0, Errc::ZeroMuB, "mu(B) is zero");
    return ((u + 1.0) * (u + 1.0) - 1.0) / (2.0 * mu_b);
}

struct ApproxResult {
    double mean_error_ratio = 0.0;
    double standard_error = 0.0;
    double bound_ratio = 0.0;
    bool condition_ok = true;
    bool within_bound = true; // mean <= bound + 3 SE (meaningful when condition_ok)
    int trials = 0;
};

inline std::size_t sample_index(const std::vector<double>& cumulative, Engine& e) {
    double u = uniform01(e) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

// Trial i uses engine (seed, 0, i).
inline ApproxResult run_approximation(const ApproxScenario& sc, int trials, std::uint64_t seed, unsigned threads = 1) {
    validate(sc);
    detail::require(trials >= 1, Errc::NonPositiveArgument, "trials must be >= 1");
    const Matrix b = target_matrix(sc);
    const double mu_b = sc.f(b);
    detail::require(mu_b > 0.0, Errc::ZeroMuB, "mu(B) is zero");

    const size_t n_terms = sc.summands.size();
    std::vector<Matrix> copies(n_terms);
    std::vector<double> dev(n_terms), cumulative(n_terms);
    double acc = 0.0;
    for (size_t l = 0; l < n_terms; ++l) {
        copies[l] = sc.summands[l] / sc.probabilities[l];
        dev[l] = sc.f(copies[l] - b);
        acc += sc.probabilities[l];
        cumulative[l] = acc;
    }
    const double threshold = copy_deviation_threshold(sc.epsilon, mu_b);
    const double slack = 1e-12 * std::max(1.0, threshold);

    std::vector<double> ratio(static_cast<size_t>(trials));
    std::vector<char> ok(static_cast<size_t>(trials));
    parallel_for(ratio.size(), threads, [&](std::size_t i) {
        Engine e = keyed_engine(seed, 0, i);
        Matrix sum = Matrix::Zero(b.rows(), b.cols());
        bool cond = true;
        for (int kk = 0; kk < sc.k; ++kk) {
            std::size_t l = sample_index(cumulative, e);
            sum += copies[l];
            cond = cond && dev[l] <= threshold + slack;
        }
        ratio[i] = sc.f(sum / sc.k - b) / mu_b;
        ok[i] = cond ? 1 : 0;
    });

    ApproxResult r;
    r.trials = trials;
    r.mean_error_ratio = std::accumulate(ratio.begin(), ratio.end(), 0.0) / trials;
    if (trials > 1) {
        double ss = 0.0;
        for (double v : ratio) ss += (v - r.mean_error_ratio) * (v - r.mean_error_ratio);
        r.standard_error = std::sqrt(ss / (trials - 1)) / std::sqrt(static_cast<double>(trials));
    }
    r.condition_ok = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    r.bound_ratio = sc.epsilon * expectation_multiplier(sc.c);
    r.within_bound = r.mean_error_ratio <= r.bound_ratio + 3.0 * r.standard_error;
    return r;
}

// ceil(2 m2 ln(m+n) / eps^2 + 2 L ln(m+n) / (3 eps)), at least 1.
inline long long tropp_sample_count(int m, int n, double m2, double l, double epsilon) {
    detail::require(m >= 1 && n >= 1, Errc::NonPositiveArgument, "dimensions must be >= 1");
    detail::require(m2 >= 0.0 && l >= 0.0 && epsilon > 0.0, Errc::NonPositiveArgument,
                    "need m2 >= 0, L >= 0, epsilon > 0");
    const double lg = std::log(static_cast<double>(m) + n);
    double v = 2.0 * m2 * lg / (epsilon * epsilon) + 2.0 * l * lg / (3.0 * epsilon);
    return std::max(1LL, static_cast<long long>(std::ceil(v)));
}

struct CopyMoments {
    double m2 = 0.0; // max(||E R R^T||, ||E R^T R||)
    double L = 0.0;  // max ||R||
};

inline CopyMoments copy_moments(const ApproxScenario& sc) {
    validate(sc);
    const auto r = sc.summands.front().rows(), c = sc.summands.front().cols();
    Matrix left = Matrix::Zero(r, r), right = Matrix::Zero(c, c);
    CopyMoments out;
    for (size_t l = 0; l < sc.summands.size(); ++l) {
        Matrix x = sc.summands[l] / sc.probabilities[l];
        left += sc.probabilities[l] * x * x.transpose();
        right += sc.probabilities[l] * x.transpose() * x;
        out.L = std::max(out.L, sigma_max(x));
    }
    out.m2 = std::max(sigma_max(left), sigma_max(right));
    return out;
}

} // namespace dimfree

#endif
