#ifndef DIMFREE_COMPARE_HPP
#define DIMFREE_COMPARE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "dimfree/bounds_core.hpp"
#include "dimfree/empirical.hpp"
#include "dimfree/matfun.hpp"
#include "dimfree/parallel.hpp"
#include "dimfree/partitions.hpp"
#include "dimfree/tailbounds.hpp"

namespace dimfree {

enum class PairingKind { Consecutive, Sorted };

struct CompareSettings {
    int k = 5;
    double c = 1.0;
    int dim = 5;
    std::uint64_t seed = 0;
    int n_eval = 100;
    int n_center = 1000;
    double gamma = 0.02;
    PairingKind pairing = PairingKind::Consecutive;
    int grid_points = 200;
    std::optional<std::vector<double>> grid;
};

struct CompareResult {
    std::vector<double> samples; // lambda_max of the sum, evaluation draws
    double center = 0.0;         // mean lambda_max over the centering draws
    double median_deviation = 0.0;
    VarianceProxy proxy;
    EnvelopeSummary summary;
    TailCurve h_tv, h_ad, h_df;

    double df_at(double t) const { return partitioned_tail(t, summary).bernstein; }
    double ad_at(double t, int dim) const { return ad_tail(t, {static_cast<double>(dim), proxy.v, proxy.L, 1.0}); }
};

// Summands X_k = c (S_k + S_k^T) / 2 with Gaussian S_k (stream k). Draws 0..n_eval-1
// are evaluated, the next n_center draws give the centering mean. Envelopes use the
// spectral norm, since lambda_max of a summand can be negative.
inline CompareResult compare_experiment(const CompareSettings& cs, unsigned threads = 1) {
    detail::require(cs.k >= 1, Errc::NonPositiveArgument, "K must be >= 1");
    detail::require(cs.c > 0.0, Errc::NonPositiveArgument, "c must be > 0");
    detail::require(cs.dim >= 1 && cs.n_eval >= 1 && cs.n_center >= 1, Errc::NonPositiveArgument,
                    "dimension and draw counts must be >= 1");
    const int k = cs.k, d = cs.dim;
    const size_t total = static_cast<size_t>(cs.n_eval + cs.n_center);

    std::vector<double> lam(total);
    std::vector<Matrix> sq(static_cast<size_t>(cs.n_eval));
    std::vector<std::vector<double>> norms(static_cast<size_t>(cs.n_eval), std::vector<double>(static_cast<size_t>(k)));
    std::vector<double> lmax(static_cast<size_t>(cs.n_eval), -std::numeric_limits<double>::infinity());

    parallel_for(total, threads, [&](std::size_t i) {
        Matrix sum = Matrix::Zero(d, d);
        const bool eval = i < static_cast<size_t>(cs.n_eval);
        if (eval) sq[i] = Matrix::Zero(d, d);
        for (int kk = 0; kk < k; ++kk) {
            RandomMatrixModel m{Distribution::StdGaussian, d, d, cs.c, true, cs.seed, static_cast<std::uint64_t>(kk)};
            Matrix x = draw(m, i);
            sum += x;
            if (eval) {
                sq[i].noalias() += x * x;
                auto ev = eigenvalues_desc(x);
                norms[i][static_cast<size_t>(kk)] = std::max(std::abs(ev.front()), std::abs(ev.back()));
                lmax[i] = std::max(lmax[i], ev.front());
            }
        }
        lam[i] = lambda_max(sum);
    });

    CompareResult r;
    r.samples.assign(lam.begin(), lam.begin() + cs.n_eval);
    r.center = std::accumulate(lam.begin() + cs.n_eval, lam.end(), 0.0) / cs.n_center;

    Matrix second = Matrix::Zero(d, d);
    for (const auto& m : sq) second += m;
    second /= static_cast<double>(cs.n_eval);
    r.proxy.v = lambda_max(second);
    r.proxy.L = *std::max_element(lmax.begin(), lmax.end());

    std::vector<double> env(static_cast<size_t>(k));
    for (int kk = 0; kk < k; ++kk) {
        std::vector<double> col(static_cast<size_t>(cs.n_eval));
        for (int i = 0; i < cs.n_eval; ++i) col[static_cast<size_t>(i)] = norms[static_cast<size_t>(i)][static_cast<size_t>(kk)];
        env[static_cast<size_t>(kk)] = construct_b_gamma(col, cs.gamma).mu_b_gamma;
    }
    IndexPartition part = cs.pairing == PairingKind::Sorted ? sorted_pairing_partition(env) : pairing_partition(k);
    r.summary = summarize_envelopes(env, part);

    std::vector<double> dev;
    for (double s : r.samples) dev.push_back(std::abs(s - r.center));
    std::sort(dev.begin(), dev.end());
    const size_t mid = dev.size() / 2;
    r.median_deviation = dev.size() % 2 ? dev[mid] : 0.5 * (dev[mid - 1] + dev[mid]);

    std::vector<double> grid;
    if (cs.grid) {
        grid = *cs.grid;
    } else {
        double scale = std::max(dev.back(), 1e-12);
        grid = geometric_grid(0.01 * scale, 10.0 * scale, cs.grid_points);
    }
    r.h_tv = empirical_tail(r.samples, r.center, grid, "h_TV");
    r.h_ad = make_curve("h_AD", grid, [&](double t) { return r.ad_at(t, d); });
    r.h_df = make_curve("h_DF", grid, [&](double t) { return r.df_at(t); });
    return r;
}

} // namespace dimfree

#endif
