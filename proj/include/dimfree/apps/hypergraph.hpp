#ifndef DIMFREE_APPS_HYPERGRAPH_HPP
#define DIMFREE_APPS_HYPERGRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dimfree/apps/approx.hpp"
#include "dimfree/apps/rip.hpp"
#include "dimfree/error.hpp"
#include "dimfree/matfun.hpp"
#include "dimfree/parallel.hpp"
#include "dimfree/rng.hpp"

namespace dimfree {

// Edges are symmetric matrices with 0 <= M_e <= I; weights come from an external solver.
struct QuantumHypergraph {
    int dimension = 1;
    std::vector<Matrix> edges;
    std::vector<double> weights;
};

inline double psd_tolerance(int d) { return 1e-9 * d; }

inline void validate(const QuantumHypergraph& h) {
    detail::require(h.dimension >= 1, Errc::ShapeMismatch, "dimension must be >= 1");
    detail::require(!h.edges.empty(), Errc::EmptyInput, "no edges");
    detail::require(h.edges.size() == h.weights.size(), Errc::ShapeMismatch, "one weight per edge");
    const double tol = psd_tolerance(h.dimension);
    for (const auto& m : h.edges) {
        detail::require(m.rows() == h.dimension && m.cols() == h.dimension, Errc::ShapeMismatch,
                        "edge matrix has the wrong size");
        auto ev = eigenvalues_desc(m);
        detail::require(ev.back() >= -tol && ev.front() <= 1.0 + tol, Errc::DomainViolation,
                        "edge eigenvalues must lie in [0, 1]");
    }
    for (double w : h.weights)
        detail::require(w >= 0.0 && std::isfinite(w), Errc::NegativeArgument, "weights must be >= 0");
}

// lambda_min(sum w_e M_e) >= 1 - tol.
inline bool is_fractional_cover(const QuantumHypergraph& h) {
    Matrix s = Matrix::Zero(h.dimension, h.dimension);
    for (size_t e = 0; e < h.edges.size(); ++e) s += h.weights[e] * h.edges[e];
    return lambda_min(s) >= 1.0 - psd_tolerance(h.dimension);
}

// True when the distinct edges among `picks` sum to at least the identity.
inline bool covers(const QuantumHypergraph& h, std::vector<std::size_t> picks) {
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    Matrix s = Matrix::Zero(h.dimension, h.dimension);
    for (auto e : picks) s += h.edges[e];
    return lambda_min(s) >= 1.0 - psd_tolerance(h.dimension);
}

struct CoverSampleResult {
    double cover_found_rate = 0.0;
    double covf = 0.0;
    double phi = 0.0;           // 3 ceil(K/2)
    double failure_bound = 0.0; // e^{phi/4} exp(-K^2 / (16 phi covf^2)), unclipped
    double bound_rate = 0.0;    // max(0, 1 - failure_bound)
    bool condition_holds = false; // covf <= K / (6 ceil(K/2))
};

inline CoverSampleResult cover_bound(int k, double covf) {
    detail::require(k >= 1, Errc::NonPositiveArgument, "K must be >= 1");
    CoverSampleResult r;
    const double half = std::ceil(k / 2.0);
    r.covf = covf;
    r.phi = 3.0 * half;
    r.failure_bound = std::exp(r.phi / 4.0 - (double(k) * k) / (16.0 * r.phi * covf * covf));
    r.bound_rate = std::max(0.0, 1.0 - r.failure_bound);
    r.condition_holds = covf <= k / (6.0 * half);
    return r;
}

// K i.i.d. edges with probability w_e / covf per trial; trial i uses engine (seed, 0, i).
inline CoverSampleResult hypergraph_cover_sample(const QuantumHypergraph& h, int k, int trials, std::uint64_t seed,
                                                 unsigned threads = 1) {
    validate(h);
    detail::require(trials >= 1, Errc::NonPositiveArgument, "trials must be >= 1");
    detail::require(is_fractional_cover(h), Errc::NotAFractionalCover, "weights do not certify sum w M >= I");
    double covf = 0.0;
    std::vector<double> cumulative;
    for (double w : h.weights) {
        covf += w;
        cumulative.push_back(covf);
    }
    CoverSampleResult r = cover_bound(k, covf);
    std::vector<char> hit(static_cast<size_t>(trials));
    parallel_for(hit.size(), threads, [&](std::size_t i) {
        Engine e = keyed_engine(seed, 0, i);
        std::vector<std::size_t> picks;
        for (int j = 0; j < k; ++j) picks.push_back(sample_index(cumulative, e));
        hit[i] = covers(h, picks) ? 1 : 0;
    });
    double found = 0.0;
    for (char c : hit) found += c;
    r.cover_found_rate = found / trials;
    return r;
}

// Exact probability that K weighted draws form a cover, by enumerating all |E|^K sequences.
inline double exact_cover_probability(const QuantumHypergraph& h, int k) {
    validate(h);
    const std::size_t ne = h.edges.size();
    detail::require(std::pow(static_cast<double>(ne), k) <= 1e7, Errc::TooManySubsets, "too many sequences");
    double covf = 0.0;
    for (double w : h.weights) covf += w;
    std::vector<std::size_t> seq(static_cast<size_t>(k), 0);
    double total = 0.0;
    for (;;) {
        double p = 1.0;
        for (auto e : seq) p *= h.weights[e] / covf;
        if (p > 0.0 && covers(h, seq)) total += p;
        int pos = k - 1;
        while (pos >= 0 && ++seq[static_cast<size_t>(pos)] == ne) seq[static_cast<size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return total;
}

// Smallest number of distinct edges forming a cover, searching sizes up to max_size.
inline std::optional<int> exhaustive_cover_number(const QuantumHypergraph& h, int max_size) {
    validate(h);
    detail::require(h.dimension <= 4 && h.edges.size() <= 12, Errc::DomainViolation,
                    "exhaustive search limited to d <= 4 and at most 12 edges");
    const int ne = static_cast<int>(h.edges.size());
    for (int s = 1; s <= std::min(max_size, ne); ++s) {
        bool found = false;
        for_each_subset(ne, s, [&](const std::vector<int>& idx) {
            if (found) return;
            std::vector<std::size_t> picks(idx.begin(), idx.end());
            found = covers(h, picks);
        });
        if (found) return s;
    }
    return std::nullopt;
}

} // namespace dimfree

#endif
