#ifndef DIMFREE_EMPIRICAL_HPP
#define DIMFREE_EMPIRICAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dimfree/error.hpp"
#include "dimfree/matfun.hpp"
#include "dimfree/parallel.hpp"
#include "dimfree/rng.hpp"
#include "dimfree/tailbounds.hpp"

namespace dimfree {

enum class Distribution { StdGaussian, Uniform, Rademacher };

inline const char* distribution_name(Distribution d) {
    switch (d) {
    case Distribution::StdGaussian: return "gaussian";
    case Distribution::Uniform: return "uniform";
    case Distribution::Rademacher: return "rademacher";
    }
    return "unknown";
}

struct RandomMatrixModel {
    Distribution distribution = Distribution::StdGaussian;
    int rows = 1;
    int cols = 1;
    double scale = 1.0;
    bool symmetrize = false; // emit scale * (S + S^T) / 2
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline double sample_entry(Distribution d, Engine& e) {
    switch (d) {
    case Distribution::StdGaussian: return std_normal(e);
    case Distribution::Uniform: return uniform_pm1(e);
    case Distribution::Rademacher: return rademacher(e);
    }
    return 0.0;
}

// Draw number `index` of the model; the same (seed, stream, index) gives the same matrix.
inline Matrix draw(const RandomMatrixModel& model, std::uint64_t index) {
    detail::require(model.rows >= 1 && model.cols >= 1, Errc::ShapeMismatch, "dimensions must be >= 1");
    detail::require(model.scale > 0.0, Errc::NonPositiveArgument, "scale must be > 0");
    detail::require(!model.symmetrize || model.rows == model.cols, Errc::ShapeMismatch,
                    "symmetrize requires a square model");
    Engine e = keyed_engine(model.seed, model.stream, index);
    Matrix s(model.rows, model.cols);
    for (int j = 0; j < model.cols; ++j)
        for (int i = 0; i < model.rows; ++i) s(i, j) = sample_entry(model.distribution, e);
    if (model.symmetrize) {
        Matrix sym = 0.5 * (s + s.transpose());
        return model.scale * sym;
    }
    return model.scale * s;
}

// Mean of log(mu(X) + 1) over draws 0..n-1.
inline double estimate_log_mu_expectation(const RandomMatrixModel& model, const MatrixFunctional& f,
                                          int n, unsigned threads = 1) {
    detail::require(n >= 1, Errc::NonPositiveArgument, "N must be >= 1");
    std::vector<double> logs(static_cast<size_t>(n));
    parallel_for(logs.size(), threads, [&](std::size_t i) { logs[i] = std::log1p(f(draw(model, i))); });
    return std::accumulate(logs.begin(), logs.end(), 0.0) / n;
}

struct EnvelopeEstimate {
    double mu_b_gamma = 0.0;
    double sample_mean_mu = 0.0;
    double sample_log_mean = 0.0; // mean of log(mu + 1)
    double gamma = 0.0;
    int n = 0;
};

// Smallest admissible envelope value: mean mu + gamma * exp(mean log(mu + 1)).
inline EnvelopeEstimate construct_b_gamma(const std::vector<double>& mu_values, double gamma) {
    detail::require(!mu_values.empty(), Errc::EmptyInput, "no observations");
    detail::require(gamma >= 0.0, Errc::NegativeArgument, "gamma must be >= 0");
    EnvelopeEstimate r;
    r.n = static_cast<int>(mu_values.size());
    r.gamma = gamma;
    double sum = 0.0, log_sum = 0.0;
    for (double v : mu_values) {
        detail::require(v >= 0.0, Errc::NegativeArgument, "functional values must be >= 0");
        sum += v;
        log_sum += std::log1p(v);
    }
    r.sample_mean_mu = sum / r.n;
    r.sample_log_mean = log_sum / r.n;
    r.mu_b_gamma = r.sample_mean_mu + gamma * std::exp(r.sample_log_mean);
    return r;
}

inline EnvelopeEstimate construct_b_gamma(const std::vector<Matrix>& observations, const MatrixFunctional& f,
                                          double gamma) {
    detail::require(!observations.empty(), Errc::EmptyInput, "no observations");
    std::vector<double> mu;
    mu.reserve(observations.size());
    for (const auto& x : observations) mu.push_back(f(x));
    return construct_b_gamma(mu, gamma);
}

// Haar-like orthogonal factor from the QR of a Gaussian matrix, with signs fixed.
inline Matrix random_orthogonal(int n, std::uint64_t seed) {
    Engine e = keyed_engine(seed, 0x6f727468ULL, static_cast<std::uint64_t>(n));
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = std_normal(e);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0.0) q.col(i) *= -1.0;
    return q;
}

// Matrix whose top-j spectrum is weights * mu_target and whose remaining spectrum is zero.
inline Matrix synthesize_from_mu(const MatrixFunctional& f, double mu_target, const std::vector<double>& weights,
                                 int m, int n, std::uint64_t seed = 0) {
    using Kind = MatrixFunctional::Kind;
    detail::require(mu_target >= 0.0, Errc::NegativeArgument, "target must be >= 0");
    detail::require(m >= 1 && n >= 1, Errc::ShapeMismatch, "dimensions must be >= 1");
    detail::require(f.kind() == Kind::SpectralNorm || f.kind() == Kind::KyFanSingularSum ||
                        f.kind() == Kind::AbsTopEigSum,
                    Errc::DomainViolation, "synthesis needs a singular-value or eigenvalue functional");
    const int j = f.j();
    detail::require(static_cast<int>(weights.size()) == j, Errc::WeightError,
                    "expected " + std::to_string(j) + " weights");
    double total = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        detail::require(weights[i] > 0.0, Errc::WeightError, "weights must be positive");
        if (i > 0) detail::require(weights[i] <= weights[i - 1], Errc::WeightError, "weights must be descending");
        total += weights[i];
    }
    detail::require(std::abs(total - 1.0) <= 1e-10, Errc::WeightError, "weights must sum to 1");

    if (f.kind() == Kind::AbsTopEigSum) {
        detail::require(m == n, Errc::ShapeMismatch, "eigenvalue synthesis needs a square matrix");
        detail::require(j <= n, Errc::IndexOutOfRange, "more weights than dimensions");
        Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < j; ++i) lam(i) = weights[static_cast<size_t>(i)] * mu_target;
        Matrix v = random_orthogonal(n, seed);
        Matrix b = v * lam.asDiagonal() * v.transpose();
        return 0.5 * (b + b.transpose());
    }
    detail::require(j <= std::min(m, n), Errc::IndexOutOfRange, "more weights than min(m, n)");
    Matrix sigma = Matrix::Zero(m, n);
    for (int i = 0; i < j; ++i) sigma(i, i) = weights[static_cast<size_t>(i)] * mu_target;
    Matrix u = random_orthogonal(m, seed);
    Matrix v = random_orthogonal(n, seed + 1);
    return u * sigma * v.transpose();
}

// Fraction of samples with |x - center| >= t at each grid point.
inline TailCurve empirical_tail(const std::vector<double>& samples, double center, const std::vector<double>& grid,
                                std::string label = "h_TV") {
    detail::require(!samples.empty(), Errc::EmptyInput, "no samples");
    std::vector<double> dev;
    dev.reserve(samples.size());
    for (double s : samples) dev.push_back(std::abs(s - center));
    std::sort(dev.begin(), dev.end());
    const double n = static_cast<double>(dev.size());
    return make_curve(std::move(label), grid, [&](double t) {
        auto it = std::lower_bound(dev.begin(), dev.end(), t);
        return static_cast<double>(dev.end() - it) / n;
    });
}

struct VarianceProxy {
    double v = 0.0; // lambda_max of sum_k mean_i X_{k,i}^2
    double L = 0.0; // max over k, i of lambda_max(X_{k,i})
};

// draws[k] holds the observations of summand k.
inline VarianceProxy estimate_v_L(const std::vector<std::vector<Matrix>>& draws) {
    detail::require(!draws.empty(), Errc::EmptyInput, "no summands");
    int d = -1;
    Matrix second;
    double l = -std::numeric_limits<double>::infinity();
    for (const auto& obs : draws) {
        detail::require(!obs.empty(), Errc::EmptyInput, "summand without observations");
        Matrix acc;
        for (const auto& x : obs) {
            if (d < 0) {
                d = static_cast<int>(x.rows());
                second = Matrix::Zero(d, d);
            }
            detail::require(x.rows() == d && x.cols() == d, Errc::ShapeMismatch,
                            "all observations must share one square shape");
            Matrix h = symmetrized(x);
            if (acc.size() == 0) acc = Matrix::Zero(d, d);
            acc.noalias() += h * h;
            l = std::max(l, lambda_max(h));
        }
        second += acc / static_cast<double>(obs.size());
    }
    return {lambda_max(second), l};
}

struct GammaSuccess {
    double gamma = 0.0;
    double success_ratio = 0.0;
};

// For each gamma: fraction of repeats where the reference mean of log(mu(X) + 1)
// (ref_n draws, stream 0) is at most log(mu(B_gamma) + 1), with B_gamma built
// from n fresh draws (stream r + 1 for repeat r). Scale theta is fixed at 1.
inline std::vector<GammaSuccess> bgamma_success_experiment(const RandomMatrixModel& model,
                                                           const MatrixFunctional& f,
                                                           const std::vector<double>& gamma_grid, int n,
                                                           int repeats, int ref_n, unsigned threads = 1) {
    detail::require(n >= 1 && repeats >= 1 && ref_n >= 1, Errc::NonPositiveArgument, "counts must be >= 1");
    detail::require(!gamma_grid.empty(), Errc::EmptyInput, "empty gamma grid");
    RandomMatrixModel ref_model = model;
    ref_model.stream = 0;
    const double reference = estimate_log_mu_expectation(ref_model, f, ref_n, threads);

    std::vector<std::vector<double>> mu(static_cast<size_t>(repeats));
    parallel_for(mu.size(), threads, [&](std::size_t r) {
        RandomMatrixModel rm = model;
        rm.stream = r + 1;
        auto& row = mu[r];
        row.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) row[static_cast<size_t>(i)] = f(draw(rm, static_cast<std::uint64_t>(i)));
    });

    std::vector<GammaSuccess> out;
    for (double g : gamma_grid) {
        int ok = 0;
        for (const auto& row : mu)
            if (reference <= std::log1p(construct_b_gamma(row, g).mu_b_gamma)) ++ok;
        out.push_back({g, static_cast<double>(ok) / repeats});
    }
    return out;
}

} // namespace dimfree

#endif
