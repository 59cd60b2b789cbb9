#ifndef DIMFREE_MATFUN_HPP
#define DIMFREE_MATFUN_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dimfree/error.hpp"

namespace dimfree {

using Matrix = Eigen::MatrixXd;

inline constexpr double hermitian_tol = 1e-10;

enum class MatrixDomain { GeneralRectangular, Hermitian };

// Descending order; stable so equal values keep their original order.
inline void sort_descending(std::vector<double>& v) {
    std::stable_sort(v.begin(), v.end(), [](double a, double b) { return a > b; });
}

inline std::vector<double> singular_values(const Matrix& a) {
    if (a.size() == 0) return {};
    detail::require(a.allFinite(), Errc::DecompositionFailure, "matrix has non-finite entries");
    Eigen::JacobiSVD<Matrix> svd(a);
    detail::require(svd.info() == Eigen::Success, Errc::DecompositionFailure, "SVD did not converge");
    const auto& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    sort_descending(out);
    return out;
}

inline double sigma_max(const Matrix& a) {
    auto s = singular_values(a);
    return s.empty() ? 0.0 : s.front();
}

inline double sigma_min(const Matrix& a) {
    auto s = singular_values(a);
    return s.empty() ? 0.0 : s.back();
}

inline bool is_hermitian(const Matrix& a, double tol = hermitian_tol) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    double scale = a.cwiseAbs().maxCoeff();
    double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    return asym <= tol * scale;
}

// Validates near-symmetry and returns (A + A^T)/2.
inline Matrix symmetrized(const Matrix& a) {
    detail::require(a.rows() == a.cols(), Errc::ShapeMismatch, "Hermitian input must be square");
    detail::require(is_hermitian(a), Errc::NonHermitian, "asymmetry exceeds tolerance");
    return 0.5 * (a + a.transpose());
}

// Eigenvalues of a symmetric matrix, descending.
inline std::vector<double> eigenvalues_desc(const Matrix& a) {
    Matrix h = symmetrized(a);
    if (h.size() == 0) return {};
    detail::require(h.allFinite(), Errc::DecompositionFailure, "matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    detail::require(es.info() == Eigen::Success, Errc::DecompositionFailure,
                    "eigendecomposition did not converge");
    const auto& ev = es.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    sort_descending(out);
    return out;
}

inline double lambda_max(const Matrix& a) {
    auto ev = eigenvalues_desc(a);
    detail::require(!ev.empty(), Errc::EmptyInput, "empty matrix");
    return ev.front();
}

inline double lambda_min(const Matrix& a) {
    auto ev = eigenvalues_desc(a);
    detail::require(!ev.empty(), Errc::EmptyInput, "empty matrix");
    return ev.back();
}

struct PinvSpectrum {
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    // 1/sigma_min when full rank, +inf otherwise.
    double sigma_max_pinv = 0.0;
    bool rank_deficient = false;
    // Largest singular value of the pseudoinverse over the retained (nonzero) spectrum.
    double sigma_max_pinv_nonzero = 0.0;
};

inline PinvSpectrum pinv_spectrum(const Matrix& a) {
    PinvSpectrum out;
    auto s = singular_values(a);
    if (s.empty()) {
        out.rank_deficient = true;
        out.sigma_max_pinv = std::numeric_limits<double>::infinity();
        return out;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * eps * s.front();
    out.sigma_max = s.front();
    out.sigma_min = s.back();
    double smallest_kept = 0.0;
    for (double v : s)
        if (v > tol) smallest_kept = v;
    out.rank_deficient = !(s.back() > tol);
    out.sigma_max_pinv_nonzero = smallest_kept > 0.0 ? 1.0 / smallest_kept : 0.0;
    out.sigma_max_pinv = out.rank_deficient ? std::numeric_limits<double>::infinity()
                                            : 1.0 / s.back();
    return out;
}

class MatrixFunctional {
public:
    enum class Kind { SpectralNorm, KyFanSingularSum, AbsTopEigSum, FrobeniusNorm, Custom };
    using CustomFn = std::function<double(const Matrix&)>;

    static MatrixFunctional spectral_norm() {
        return MatrixFunctional(Kind::SpectralNorm, 1, MatrixDomain::GeneralRectangular);
    }
    static MatrixFunctional ky_fan(int j) {
        detail::require(j >= 1, Errc::IndexOutOfRange, "Ky Fan order must be >= 1");
        return MatrixFunctional(Kind::KyFanSingularSum, j, MatrixDomain::GeneralRectangular);
    }
    static MatrixFunctional abs_top_eig_sum(int j) {
        detail::require(j >= 1, Errc::IndexOutOfRange, "eigenvalue count must be >= 1");
        return MatrixFunctional(Kind::AbsTopEigSum, j, MatrixDomain::Hermitian);
    }
    static MatrixFunctional frobenius() {
        return MatrixFunctional(Kind::FrobeniusNorm, 0, MatrixDomain::GeneralRectangular);
    }
    // The caller is responsible for non-negativity, homogeneity and subadditivity.
    static MatrixFunctional custom(std::string name, CustomFn fn,
                                   MatrixDomain domain = MatrixDomain::GeneralRectangular) {
        MatrixFunctional f(Kind::Custom, 0, domain);
        f.name_ = std::move(name);
        f.fn_ = std::move(fn);
        return f;
    }

    Kind kind() const { return kind_; }
    int j() const { return j_; }
    MatrixDomain domain() const { return domain_; }

    std::string name() const {
        switch (kind_) {
        case Kind::SpectralNorm: return "spectral_norm";
        case Kind::KyFanSingularSum: return "ky_fan_" + std::to_string(j_);
        case Kind::AbsTopEigSum: return "abs_top_eig_sum_" + std::to_string(j_);
        case Kind::FrobeniusNorm: return "frobenius";
        case Kind::Custom: return name_;
        }
        return "unknown";
    }

    double operator()(const Matrix& a) const;

private:
    MatrixFunctional(Kind k, int j, MatrixDomain d) : kind_(k), j_(j), domain_(d) {}

    Kind kind_;
    int j_;
    MatrixDomain domain_;
    std::string name_;
    CustomFn fn_;
};

inline double eval_mu(const MatrixFunctional& f, const Matrix& a) {
    using Kind = MatrixFunctional::Kind;
    if (f.domain() == MatrixDomain::Hermitian) {
        detail::require(a.rows() == a.cols(), Errc::ShapeMismatch,
                        "functional requires a square Hermitian matrix");
        detail::require(is_hermitian(a), Errc::NonHermitian, "asymmetry exceeds tolerance");
    }
    switch (f.kind()) {
    case Kind::SpectralNorm:
        return sigma_max(a);
    case Kind::KyFanSingularSum: {
        detail::require(f.j() <= std::min(a.rows(), a.cols()), Errc::IndexOutOfRange,
                        "Ky Fan order exceeds min(m, n)");
        auto s = singular_values(a);
        return std::accumulate(s.begin(), s.begin() + f.j(), 0.0);
    }
    case Kind::AbsTopEigSum: {
        detail::require(f.j() <= a.rows(), Errc::IndexOutOfRange, "eigenvalue count exceeds n");
        auto ev = eigenvalues_desc(a);
        return std::abs(std::accumulate(ev.begin(), ev.begin() + f.j(), 0.0));
    }
    case Kind::FrobeniusNorm:
        detail::require(a.allFinite(), Errc::DecompositionFailure, "matrix has non-finite entries");
        return a.norm();
    case Kind::Custom: {
        Matrix in = f.domain() == MatrixDomain::Hermitian ? symmetrized(a) : a;
        return f(in);
    }
    }
    return 0.0;
}

inline double MatrixFunctional::operator()(const Matrix& a) const {
    if (kind_ == Kind::Custom) return fn_(a);
    return eval_mu(*this, a);
}

} // namespace dimfree

#endif
