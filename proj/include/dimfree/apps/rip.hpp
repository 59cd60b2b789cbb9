#ifndef DIMFREE_APPS_RIP_HPP
#define DIMFREE_APPS_RIP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dimfree/bounds_core.hpp"
#include "dimfree/empirical.hpp"
#include "dimfree/error.hpp"
#include "dimfree/matfun.hpp"
#include "dimfree/parallel.hpp"
#include "dimfree/partitions.hpp"
#include "dimfree/rng.hpp"

namespace dimfree {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

// Calls fn(const std::vector<int>&) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(static_cast<size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        fn(static_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
}

// Sorted k-subset of {0..n-1}, uniform.
inline std::vector<int> random_subset(int n, int k, Engine& e) {
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        auto j = static_cast<size_t>(i) + uniform_index(e, static_cast<std::uint64_t>(n - i));
        std::swap(pool[static_cast<size_t>(i)], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

inline Matrix restrict_columns(const Matrix& a, const std::vector<int>& cols) {
    Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
    return out;
}

namespace detail {

inline void validate_subset(const std::vector<int>& subset, int n) {
    require(!subset.empty(), Errc::BadSubset, "subset is empty");
    std::vector<int> s(subset);
    std::sort(s.begin(), s.end());
    require(std::adjacent_find(s.begin(), s.end()) == s.end(), Errc::BadSubset, "subset has repeated columns");
    require(s.front() >= 0 && s.back() < n, Errc::BadSubset, "subset column out of range");
}

inline bool sigma_min_condition_full(const std::vector<Matrix>& parts) {
    Matrix sum = Matrix::Zero(parts.front().rows(), parts.front().cols());
    double rhs = 0.0;
    for (const auto& p : parts) {
        sum += p;
        rhs += sigma_min(p);
    }
    const double k = static_cast<double>(parts.size());
    return sigma_min(sum) >= rhs / (k * k);
}

} // namespace detail

// sigma_min of the summed restriction >= (sum of summand sigma_min) / K^2.
inline bool check_sigma_min_condition(const std::vector<Matrix>& summands, const std::vector<int>& subset) {
    detail::require(!summands.empty(), Errc::EmptyInput, "no summands");
    const auto m = summands.front().rows(), n = summands.front().cols();
    for (const auto& p : summands)
        detail::require(p.rows() == m && p.cols() == n, Errc::ShapeMismatch, "summands differ in shape");
    detail::validate_subset(subset, static_cast<int>(n));
    std::vector<Matrix> parts;
    parts.reserve(summands.size());
    for (const auto& p : summands) parts.push_back(restrict_columns(p, subset));
    return detail::sigma_min_condition_full(parts);
}

struct ConditionRatio {
    int m = 0, n = 0, k = 0;
    double success_ratio = 0.0;
};

inline const std::vector<std::pair<int, int>>& default_condition_sizes() {
    static const std::vector<std::pair<int, int>> s{{1, 5}, {5, 20}, {10, 80}, {15, 200}, {20, 400}};
    return s;
}

inline const std::vector<int>& default_condition_k_grid() {
    static const std::vector<int> k{2, 5, 10, 15, 20, 25, 30};
    return k;
}

// The summation condition on full matrices. Repeat r of cell (size i, K) draws
// summand k from stream (i, K) at index r * 65536 + k.
inline std::vector<ConditionRatio> condition51_experiment(const std::vector<std::pair<int, int>>& sizes,
                                                          const std::vector<int>& k_grid, int repeats,
                                                          std::uint64_t seed,
                                                          Distribution dist = Distribution::StdGaussian,
                                                          unsigned threads = 1) {
    detail::require(repeats >= 1, Errc::NonPositiveArgument, "repeats must be >= 1");
    for (auto [m, n] : sizes) detail::require(m >= 1 && n >= 1, Errc::ShapeMismatch, "sizes must be >= 1");
    for (int k : k_grid) detail::require(k >= 1 && k < 65536, Errc::NonPositiveArgument, "K out of range");
    std::vector<ConditionRatio> out;
    for (size_t si = 0; si < sizes.size(); ++si) {
        for (int k : k_grid) {
            auto [m, n] = sizes[si];
            RandomMatrixModel model{dist, m, n, 1.0, false, seed, (static_cast<std::uint64_t>(si) << 32) | static_cast<std::uint64_t>(k)};
            std::vector<char> ok(static_cast<size_t>(repeats));
            parallel_for(ok.size(), threads, [&](std::size_t r) {
                std::vector<Matrix> parts;
                parts.reserve(static_cast<size_t>(k));
                for (int kk = 0; kk < k; ++kk) parts.push_back(draw(model, r * 65536 + static_cast<std::uint64_t>(kk)));
                ok[r] = detail::sigma_min_condition_full(parts) ? 1 : 0;
            });
            double hits = std::accumulate(ok.begin(), ok.end(), 0.0);
            out.push_back({m, n, k, hits / repeats});
        }
    }
    return out;
}

// Column j carries `value` at row j mod m.
inline Matrix build_tiled_envelope(double value, int m, int n) {
    detail::require(m >= 1 && n >= m, Errc::ShapeMismatch, "tiled envelope needs 1 <= m <= n");
    detail::require(value >= 0.0, Errc::NegativeArgument, "value must be >= 0");
    Matrix a = Matrix::Zero(m, n);
    for (int j = 0; j < n; ++j) a(j % m, j) = value;
    return a;
}

// Largest sigma_max over s-column restrictions of the tiled envelope.
inline double tiled_envelope_max_sigma(double value, int m, int n, int s) {
    int per_row = (n + m - 1) / m;
    return value * std::sqrt(static_cast<double>(std::min(s, per_row)));
}

struct RipScenario {
    int m = 10, n = 20, s = 3, k = 4;
    RandomMatrixModel model; // per summand; rows/cols must equal m/n
    double delta = 0.5;
    IndexPartition partition;
    std::optional<double> c1, c2;
};

inline void validate(const RipScenario& sc) {
    detail::require(sc.m >= 1 && sc.n >= 1 && sc.s >= 1 && sc.s < sc.n, Errc::ShapeMismatch, "need 1 <= s < n");
    detail::require(sc.k >= 1, Errc::NonPositiveArgument, "K must be >= 1");
    detail::require(sc.model.rows == sc.m && sc.model.cols == sc.n, Errc::ShapeMismatch,
                    "model shape differs from m x n");
    detail::require(sc.delta > 0.0 && sc.delta < 1.0, Errc::DomainViolation, "delta must lie in (0, 1)");
    detail::require(sc.partition.element_count() == sc.k, Errc::PartitionMismatch, "partition must cover 1..K");
    if (sc.c1) detail::require(*sc.c1 > 0.0, Errc::NonPositiveArgument, "c1 must be > 0");
    if (sc.c2) detail::require(*sc.c2 > 0.0, Errc::NonPositiveArgument, "c2 must be > 0");
}

struct RipBound {
    double bound = 1.0; // union bound clipped to [0, 1]
    double raw = 0.0;   // unclipped union bound
    bool vacuous = true;
    bool constants_feasible = false;
    std::optional<double> constant_form; // 2 e^{(1+offset) phi} e^{-c2 m}, clipped
};

inline RipBound rip_failure_bound(const RipScenario& sc, double phi_bar, int tau, double t) {
    detail::require(phi_bar > 0.0 && t > 0.0 && tau >= 1, Errc::NonPositiveArgument,
                    "phi_bar, t and tau must be positive");
    const double s = sc.s, n = sc.n, m = sc.m;
    const double pre = std::log(2.0) + (1.0 + exponential_offset(tau)) * phi_bar;
    const double rate = phi_bar * bennett_rate(t / (tau * phi_bar));
    const double log_raw = pre + s * std::log(std::exp(1.0) * n / s) - rate;
    RipBound r;
    r.raw = std::exp(log_raw);
    r.bound = std::min(1.0, r.raw);
    r.vacuous = r.raw >= 1.0;
    if (sc.c1 && sc.c2) {
        bool cond1 = s <= *sc.c1 * m / std::log(std::exp(1.0) * n / s);
        bool cond2 = *sc.c2 <= rate / m - *sc.c1;
        r.constants_feasible = cond1 && cond2;
        if (r.constants_feasible) r.constant_form = std::min(1.0, std::exp(pre - *sc.c2 * m));
    }
    return r;
}

// Largest deviation of restricted singular values from 1 over all s-column subsets.
inline double brute_force_rip_constant(const Matrix& p, int s) {
    const int n = static_cast<int>(p.cols());
    detail::require(s >= 1 && s <= n, Errc::BadSubset, "need 1 <= s <= n");
    detail::require(binomial(n, s) <= 1e6, Errc::TooManySubsets, "more than 1e6 subsets");
    double delta = 0.0;
    for_each_subset(n, s, [&](const std::vector<int>& idx) {
        auto sv = singular_values(restrict_columns(p, idx));
        double lo = static_cast<Eigen::Index>(idx.size()) > p.rows() ? 0.0 : sv.back();
        delta = std::max({delta, sv.front() - 1.0, 1.0 - lo});
    });
    return delta;
}

struct RipEnvelopes {
    std::vector<double> a; // per summand: max over subsets of the sigma_max envelope
    std::vector<double> b; // per summand: same for the pseudoinverse
    double phi_bar = 0.0;
    int tau = 1;
    int subsets_checked = 0;
    bool exhaustive = false;
};

// Heuristic certification: B_gamma envelopes of restricted sigma_max (and of the
// pseudoinverse) maximized over subsets, exhaustive when at most max_subsets exist.
inline RipEnvelopes certify_rip_envelopes(const RipScenario& sc, int n_obs, double gamma, int max_subsets = 1000,
                                          unsigned threads = 1) {
    validate(sc);
    detail::require(n_obs >= 1 && max_subsets >= 1, Errc::NonPositiveArgument, "counts must be >= 1");
    std::vector<std::vector<int>> subsets;
    RipEnvelopes env;
    if (binomial(sc.n, sc.s) <= max_subsets) {
        env.exhaustive = true;
        for_each_subset(sc.n, sc.s, [&](const std::vector<int>& idx) { subsets.push_back(idx); });
    } else {
        Engine e = keyed_engine(sc.model.seed, 0x73756273ULL, 0);
        for (int i = 0; i < max_subsets; ++i) subsets.push_back(random_subset(sc.n, sc.s, e));
    }
    env.subsets_checked = static_cast<int>(subsets.size());

    env.a.assign(static_cast<size_t>(sc.k), 0.0);
    env.b.assign(static_cast<size_t>(sc.k), 0.0);
    std::vector<std::pair<double, double>> per_k(static_cast<size_t>(sc.k));
    parallel_for(per_k.size(), threads, [&](std::size_t k) {
        RandomMatrixModel model = sc.model;
        model.stream = 0x10000ULL + k;
        std::vector<Matrix> obs;
        for (int i = 0; i < n_obs; ++i) obs.push_back(draw(model, static_cast<std::uint64_t>(i)));
        double amax = 0.0, bmax = 0.0;
        std::vector<double> hi(static_cast<size_t>(n_obs)), inv(static_cast<size_t>(n_obs));
        for (const auto& idx : subsets) {
            for (int i = 0; i < n_obs; ++i) {
                auto sp = pinv_spectrum(restrict_columns(obs[static_cast<size_t>(i)], idx));
                hi[static_cast<size_t>(i)] = sp.sigma_max;
                inv[static_cast<size_t>(i)] = sp.sigma_max_pinv;
            }
            amax = std::max(amax, construct_b_gamma(hi, gamma).mu_b_gamma);
            bool finite = std::all_of(inv.begin(), inv.end(), [](double v) { return std::isfinite(v); });
            bmax = finite ? std::max(bmax, construct_b_gamma(inv, gamma).mu_b_gamma)
                          : std::numeric_limits<double>::infinity();
        }
        per_k[k] = {amax, bmax};
    });
    for (int k = 0; k < sc.k; ++k) {
        env.a[static_cast<size_t>(k)] = per_k[static_cast<size_t>(k)].first;
        env.b[static_cast<size_t>(k)] = per_k[static_cast<size_t>(k)].second;
    }

    const double tile = tiled_envelope_max_sigma(1.0, sc.m, sc.n, sc.s);
    double phi_a = 0.0, phi_b = 0.0;
    for (const auto& block : sc.partition.blocks()) {
        double u = 0.0, v = 0.0;
        for (int k : block) {
            u = std::max(u, tile * env.a[static_cast<size_t>(k)]);
            v = std::max(v, tile * env.b[static_cast<size_t>(k)]);
        }
        phi_a += growth_term(u, static_cast<int>(block.size()));
        phi_b += std::isfinite(v) ? growth_term(v, static_cast<int>(block.size())) : v;
    }
    env.phi_bar = std::max(phi_a, phi_b);
    env.tau = sc.partition.tau();
    return env;
}

// Sum of the K summands of trial `trial` (streams 0..K-1).
inline Matrix draw_rip_measurement(const RipScenario& sc, std::uint64_t trial) {
    Matrix p = Matrix::Zero(sc.m, sc.n);
    for (int k = 0; k < sc.k; ++k) {
        RandomMatrixModel model = sc.model;
        model.stream = static_cast<std::uint64_t>(k);
        p += draw(model, trial);
    }
    return p;
}

} // namespace dimfree

#endif
