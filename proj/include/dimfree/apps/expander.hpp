#ifndef DIMFREE_APPS_EXPANDER_HPP
#define DIMFREE_APPS_EXPANDER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dimfree/bounds_core.hpp"
#include "dimfree/error.hpp"
#include "dimfree/matfun.hpp"
#include "dimfree/parallel.hpp"
#include "dimfree/partitions.hpp"
#include "dimfree/rng.hpp"
#include "dimfree/scalar.hpp"

namespace dimfree {

// Undirected d-regular multigraph on vertices 0..n-1.
class ExpanderGraph {
public:
    ExpanderGraph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n), adj_(static_cast<size_t>(n)) {
        detail::require(n >= 2, Errc::ShapeMismatch, "graph needs at least two vertices");
        for (auto [u, v] : edges) {
            detail::require(u >= 0 && u < n && v >= 0 && v < n, Errc::IndexOutOfRange, "edge endpoint out of range");
            detail::require(u != v, Errc::ShapeMismatch, "self-loops are not supported");
            adj_[static_cast<size_t>(u)].push_back(v);
            adj_[static_cast<size_t>(v)].push_back(u);
        }
        d_ = static_cast<int>(adj_.front().size());
        for (const auto& a : adj_)
            detail::require(static_cast<int>(a.size()) == d_, Errc::ShapeMismatch, "graph is not regular");
        detail::require(d_ >= 1, Errc::Disconnected, "graph has no edges");

        Matrix a = normalized_adjacency();
        spectrum_ = eigenvalues_desc(a);
    }

    int vertex_count() const { return n_; }
    int degree() const { return d_; }
    const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<size_t>(v)); }
    const std::vector<double>& spectrum() const { return spectrum_; }

    // Entry (i, j) = (edges between i and j) / d.
    Matrix normalized_adjacency() const {
        Matrix a = Matrix::Zero(n_, n_);
        for (int u = 0; u < n_; ++u)
            for (int v : adj_[static_cast<size_t>(u)]) a(u, v) += 1.0 / d_;
        return a;
    }

    bool connected() const {
        std::vector<char> seen(static_cast<size_t>(n_), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj_[static_cast<size_t>(u)])
                if (!seen[static_cast<size_t>(v)]) {
                    seen[static_cast<size_t>(v)] = 1;
                    ++count;
                    stack.push_back(v);
                }
        }
        return count == n_;
    }

private:
    int n_;
    int d_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<double> spectrum_;
};

inline ExpanderGraph complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return ExpanderGraph(n, e);
}

inline ExpanderGraph cycle_graph(int n) {
    detail::require(n >= 3, Errc::ShapeMismatch, "cycle needs n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return ExpanderGraph(n, e);
}

// Configuration model; rejects self-loops, repeated edges and disconnected draws.
inline ExpanderGraph random_regular_graph(int n, int d, std::uint64_t seed, int max_rejections = 1000) {
    detail::require(n >= 2 && d >= 1 && d < n, Errc::ShapeMismatch, "need 1 <= d < n");
    detail::require((static_cast<long long>(n) * d) % 2 == 0, Errc::ShapeMismatch, "n * d must be even");
    for (int attempt = 0; attempt <= max_rejections; ++attempt) {
        Engine e = keyed_engine(seed, 0x72726567ULL, static_cast<std::uint64_t>(attempt));
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < d; ++j) stubs.push_back(v);
        for (size_t i = stubs.size() - 1; i > 0; --i)
            std::swap(stubs[i], stubs[uniform_index(e, i + 1)]);
        std::vector<std::pair<int, int>> edges;
        bool simple = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = std::min(stubs[i], stubs[i + 1]), v = std::max(stubs[i], stubs[i + 1]);
            if (u == v) {
                simple = false;
                break;
            }
            edges.emplace_back(u, v);
        }
        if (!simple) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        ExpanderGraph g(n, edges);
        if (g.connected()) return g;
    }
    throw Error(Errc::Disconnected, "no simple connected regular graph after " + std::to_string(max_rejections) +
                                        " rejections");
}

// One `u v` pair per line, 1-based; `#` starts a comment.
inline ExpanderGraph parse_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    std::string line;
    int n = 0, line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u)) continue;
        std::string rest;
        detail::require(static_cast<bool>(ls >> v) && !(ls >> rest), Errc::ParseError,
                        "line " + std::to_string(line_no) + ": expected two vertex ids");
        detail::require(u >= 1 && v >= 1 && u <= 1000000 && v <= 1000000, Errc::ParseError,
                        "line " + std::to_string(line_no) + ": vertex ids must be in 1..1000000");
        edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
        n = std::max({n, static_cast<int>(u), static_cast<int>(v)});
    }
    detail::require(!edges.empty(), Errc::ParseError, "edge list is empty");
    return ExpanderGraph(n, edges);
}

// 1 - lambda_2 of the normalized adjacency.
inline double spectral_gap(const ExpanderGraph& g, double tol = 1e-10) {
    double gap = 1.0 - g.spectrum().at(1);
    detail::require(gap > tol, Errc::Disconnected, "spectral gap is zero; graph is disconnected");
    return gap;
}

// y_1 uniform, then each step to a uniformly chosen incident edge endpoint.
inline std::vector<int> stationary_walk(const ExpanderGraph& g, int k, std::uint64_t seed, std::uint64_t index = 0) {
    detail::require(k >= 1, Errc::NonPositiveArgument, "walk length must be >= 1");
    Engine e = keyed_engine(seed, 0x77616c6bULL, index);
    std::vector<int> walk;
    walk.reserve(static_cast<size_t>(k));
    int y = static_cast<int>(uniform_index(e, static_cast<std::uint64_t>(g.vertex_count())));
    walk.push_back(y);
    for (int i = 1; i < k; ++i) {
        const auto& nb = g.neighbors(y);
        y = nb[uniform_index(e, nb.size())];
        walk.push_back(y);
    }
    return walk;
}

// Envelope ln(n/t)/gap for every walk step.
inline double expander_envelope(double t, int n, double gap) {
    detail::require(t > 0.0 && gap > 0.0, Errc::NonPositiveArgument, "t and gap must be > 0");
    detail::require(t < n, Errc::DomainViolation, "t must be below n");
    return std::log(n / t) / gap;
}

inline double expander_growth(double t, int n, double gap, const IndexPartition& partition) {
    const double u = expander_envelope(t, n, gap);
    double phi = 0.0;
    for (const auto& b : partition.blocks()) phi += growth_term(u, static_cast<int>(b.size()));
    return phi;
}

enum class ExpanderForm { Bennett, Azuma };

// Bound on P{ ||(1/K) sum f(y_k)|| > t } for walks of length K.
inline double expander_tail(double t, int n, double gap, int k, const IndexPartition& partition, ExpanderForm form) {
    detail::require(k >= 1, Errc::NonPositiveArgument, "K must be >= 1");
    detail::require(partition.element_count() == k, Errc::PartitionMismatch, "partition must cover 1..K");
    const double phi = expander_growth(t, n, gap, partition);
    if (phi == 0.0) return 0.0;
    if (form == ExpanderForm::Azuma) return std::exp(phi / 4.0 - (double(k) * k * t * t) / (16.0 * phi));
    const int tau = partition.tau();
    return std::exp(phi * (1.0 + exponential_offset(tau)) - phi * bennett_rate(k * t / (2.0 * tau * phi)));
}

// floor(8 ln(2d) / (x^2 + 2x)) with x = ln(n/t)/gap, capped at k_max.
inline long long max_walk_length(int n, double t, double gap, int d, long long k_max = 1000000) {
    detail::require(d >= 1, Errc::NonPositiveArgument, "d must be >= 1");
    const double x = expander_envelope(t, n, gap);
    const double denom = x * x + 2.0 * x;
    if (denom <= 0.0) return k_max;
    const double rhs = 8.0 * std::log(2.0 * d) / denom;
    if (rhs >= static_cast<double>(k_max)) return k_max;
    return static_cast<long long>(std::floor(rhs));
}

// Random symmetric matrices on the vertices, centered to sum to zero, scaled so the
// largest Frobenius norm is 1.
inline std::vector<Matrix> make_vertex_function(int n, int dim, std::uint64_t seed) {
    detail::require(n >= 2 && dim >= 1, Errc::ShapeMismatch, "need n >= 2 and dim >= 1");
    std::vector<Matrix> f;
    Matrix mean = Matrix::Zero(dim, dim);
    for (int v = 0; v < n; ++v) {
        Engine e = keyed_engine(seed, 0x76666e63ULL, static_cast<std::uint64_t>(v));
        Matrix s(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) s(i, j) = std_normal(e);
        f.push_back(0.5 * (s + s.transpose()));
        mean += f.back();
    }
    mean /= n;
    double fro = 0.0;
    for (auto& m : f) {
        m -= mean;
        fro = std::max(fro, m.norm());
    }
    detail::require(fro > 0.0, Errc::DomainViolation, "vertex function is identically zero");
    for (auto& m : f) m /= fro;
    return f;
}

inline void validate_vertex_function(const std::vector<Matrix>& f, int n) {
    detail::require(static_cast<int>(f.size()) == n, Errc::ShapeMismatch, "one matrix per vertex");
    Matrix sum = Matrix::Zero(f.front().rows(), f.front().cols());
    for (const auto& m : f) {
        detail::require(m.rows() == sum.rows() && m.cols() == sum.cols(), Errc::ShapeMismatch,
                        "vertex matrices differ in shape");
        detail::require(is_hermitian(m), Errc::NonHermitian, "vertex matrices must be symmetric");
        detail::require(m.norm() <= 1.0 + 1e-12, Errc::DomainViolation, "Frobenius norm exceeds 1");
        sum += m;
    }
    detail::require(sum.cwiseAbs().maxCoeff() <= 1e-9 * n, Errc::DomainViolation, "vertex function must sum to zero");
}

// Spectral norm of the walk average for each trial; trial i walks with index i.
inline std::vector<double> expander_walk_deviations(const ExpanderGraph& g, const std::vector<Matrix>& f, int k,
                                                    int trials, std::uint64_t seed, unsigned threads = 1) {
    validate_vertex_function(f, g.vertex_count());
    detail::require(trials >= 1, Errc::NonPositiveArgument, "trials must be >= 1");
    std::vector<double> out(static_cast<size_t>(trials));
    parallel_for(out.size(), threads, [&](std::size_t i) {
        auto walk = stationary_walk(g, k, seed, i);
        Matrix sum = Matrix::Zero(f.front().rows(), f.front().cols());
        for (int y : walk) sum += f[static_cast<size_t>(y)];
        out[i] = sigma_max(sum / k);
    });
    return out;
}

} // namespace dimfree

#endif
