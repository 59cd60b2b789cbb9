#ifndef DIMFREE_TAILBOUNDS_HPP
#define DIMFREE_TAILBOUNDS_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dimfree/bounds_core.hpp"
#include "dimfree/error.hpp"
#include "dimfree/partitions.hpp"
#include "dimfree/scalar.hpp"

namespace dimfree {

// Bennett form, its Bernstein relaxation, and the sub-Gaussian / sub-exponential split.
struct TailTriple {
    double bennett = 0.0;
    double bernstein = 0.0;
    double split = 0.0;
};

namespace detail {

inline void require_positive(double v, const char* what) {
    require(v > 0.0, Errc::NonPositiveArgument, std::string(what) + " must be > 0");
}

inline TailTriple bennett_family(double t, int order, double phi) {
    require_positive(t, "t");
    require_positive(phi, "phi");
    const double ord = order;
    const double log_pre = (1.0 + exponential_offset(order)) * phi;
    TailTriple r;
    r.bennett = std::exp(log_pre - phi * bennett_rate(t / (ord * phi)));
    r.bernstein = std::exp(log_pre - (0.5 * t * t) / (ord * ord * phi + ord * t / 3.0));
    if (t < 3.0 * ord * phi)
        r.split = std::exp(log_pre - t * t / (4.0 * ord * ord * phi));
    else
        r.split = std::exp(log_pre - 3.0 * t / (4.0 * ord));
    return r;
}

} // namespace detail

// Whole-index-set bound with growth phi = (1 + max mu)^K - 1.
inline TailTriple whole_set_tail(double t, int k, double phi) {
    detail::require(k >= 1, Errc::NonPositiveArgument, "K must be >= 1");
    return detail::bennett_family(t, k, phi);
}

// Partition bound: the whole-set forms with (partitioned growth, largest block) in place of (phi, K).
inline TailTriple partitioned_tail(double t, int tau, double phi_partitioned) {
    detail::require(tau >= 1, Errc::NonPositiveArgument, "tau must be >= 1");
    return detail::bennett_family(t, tau, phi_partitioned);
}

inline TailTriple partitioned_tail(double t, const EnvelopeSummary& s) {
    return partitioned_tail(t, s.tau, s.partitioned);
}

// Pairing-partition Gaussian-type bound e^{phi/4} exp(-t^2 / (4 phi)).
inline double azuma_tail(double t, double phi_pair) {
    detail::require_positive(t, "t");
    detail::require_positive(phi_pair, "phi");
    return std::exp(phi_pair / 4.0 - t * t / (4.0 * phi_pair));
}

struct SeriesTail {
    double psi = 0.0;
    double psi_partitioned = 0.0;
    TailTriple whole;
    TailTriple partitioned;
};

// Sum of fixed matrices A_k weighted by independent scalars with E|xi_k| <= c.
inline SeriesTail series_tail(double t, double c, const std::vector<double>& mu_a,
                              const IndexPartition& partition) {
    detail::require_positive(t, "t");
    detail::require_positive(c, "c");
    std::vector<double> scaled(mu_a);
    for (double& v : scaled) v *= c;
    EnvelopeSummary s = summarize_envelopes(scaled, partition);
    SeriesTail r;
    r.psi = s.whole;
    r.psi_partitioned = s.partitioned;
    r.whole = whole_set_tail(t, static_cast<int>(mu_a.size()), s.whole);
    r.partitioned = partitioned_tail(t, s.tau, s.partitioned);
    return r;
}

enum class MartingaleForm { Bennett, Azuma };

// Martingale difference sequences: the Bennett argument is t / (2 tau phi).
inline double martingale_tail(double t, double phi, int tau, MartingaleForm form) {
    detail::require_positive(t, "t");
    detail::require_positive(phi, "phi");
    if (form == MartingaleForm::Azuma) return azuma_tail(t, phi);
    detail::require(tau >= 1, Errc::NonPositiveArgument, "tau must be >= 1");
    return std::exp(phi * (1.0 + exponential_offset(tau)) - phi * bennett_rate(t / (2.0 * tau * phi)));
}

// Multiplier sqrt(2 a) + c a / 3 with a = rational_offset(c). Equal to 1 for every c > 0.
inline double expectation_multiplier(double c) {
    double a = rational_offset(c);
    return std::sqrt(2.0 * a) + c * a / 3.0;
}

inline double expectation_bound(double phi_pair, double c) {
    detail::require(phi_pair >= 0.0, Errc::NegativeArgument, "phi must be >= 0");
    detail::require_positive(c, "c");
    return phi_pair * expectation_multiplier(c);
}

inline double expectation_bound_power(double phi_partitioned) {
    detail::require(phi_partitioned >= 0.0, Errc::NegativeArgument, "phi must be >= 0");
    return phi_partitioned;
}

struct SupremumThresholds {
    double small_t = 0.0; // sqrt(4 beta (eps + (2 ln 2 - 1) beta))
    double large_t = 0.0; // (4/3)(eps + (2 ln 2 - 1) beta)
};

// Levels exceeded by sup_i |X_i| with probability at most e^{-eps}, given E|X_i| <= beta.
inline SupremumThresholds supremum_thresholds(double beta, double eps) {
    detail::require_positive(beta, "beta");
    detail::require_positive(eps, "epsilon");
    const double g1 = bennett_rate(1.0);
    SupremumThresholds r;
    r.small_t = std::sqrt(4.0 * beta * (eps + g1 * beta));
    r.large_t = 4.0 / 3.0 * (eps + g1 * beta);
    return r;
}

// Dimension-dependent baselines.
struct AdIdParams {
    double dim = 1.0;
    double v = 0.0;
    double L = 1.0;
    double intdim = 1.0;
};

inline double ad_tail(double t, const AdIdParams& p) {
    detail::require_positive(t, "t");
    detail::require(p.dim >= 1.0 && p.v >= 0.0 && p.L >= 0.0, Errc::NonPositiveArgument,
                    "need dim >= 1, v >= 0, L >= 0");
    double denom = p.v + p.L * t / 3.0;
    detail::require(denom > 0.0, Errc::NonPositiveArgument, "v and L are both zero");
    return p.dim * std::exp(-(0.5 * t * t) / denom);
}

// Defined only for t >= sqrt(v) + L/3.
inline std::optional<double> id_tail(double t, const AdIdParams& p) {
    if (!(t >= std::sqrt(p.v) + p.L / 3.0) || t <= 0.0) return std::nullopt;
    double denom = p.v + p.L * t / 3.0;
    if (!(denom > 0.0)) return std::nullopt;
    return 4.0 * p.intdim * std::exp(-(0.5 * t * t) / denom);
}

// A bound or empirical frequency sampled on a t-grid. Values above 1 are kept as is.
struct TailCurve {
    std::string label;
    std::vector<double> t;
    std::vector<double> values;
    std::string params;
    std::optional<unsigned long long> seed;

    bool vacuous(size_t i) const { return values.at(i) > 1.0; }
};

template <class F>
TailCurve make_curve(std::string label, const std::vector<double>& grid, F&& fn, std::string params = {}) {
    TailCurve c;
    c.label = std::move(label);
    c.t = grid;
    c.params = std::move(params);
    c.values.reserve(grid.size());
    for (double t : grid) c.values.push_back(fn(t));
    return c;
}

// Round-trip decimal formatting; same bytes for the same double on every run.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Long format: one row per (curve, t).
inline void write_curves_csv(std::ostream& os, const std::vector<TailCurve>& curves) {
    os << "t,bound,label,vacuous\n";
    for (const auto& c : curves)
        for (size_t i = 0; i < c.t.size(); ++i)
            os << format_double(c.t[i]) << ',' << format_double(c.values[i]) << ',' << c.label << ','
               << (c.vacuous(i) ? "true" : "false") << '\n';
}

// Ascending grids.
inline std::vector<double> geometric_grid(double lo, double hi, int points) {
    detail::require(lo > 0.0 && hi >= lo && points >= 1, Errc::NonPositiveArgument,
                    "geometric grid needs 0 < lo <= hi and points >= 1");
    std::vector<double> g(static_cast<size_t>(points));
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) g[static_cast<size_t>(i)] = lo * std::exp(step * i);
    g.back() = hi;
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
    detail::require(hi >= lo && points >= 1, Errc::NonPositiveArgument,
                    "linear grid needs lo <= hi and points >= 1");
    std::vector<double> g(static_cast<size_t>(points));
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < points; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return g;
}

} // namespace dimfree

#endif
