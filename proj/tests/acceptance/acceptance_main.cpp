// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dimfree/apps/approx.hpp"
#include "dimfree/apps/expander.hpp"
#include "dimfree/apps/hypergraph.hpp"
#include "dimfree/apps/rip.hpp"
#include "dimfree/bounds_core.hpp"
#include "dimfree/compare.hpp"
#include "dimfree/empirical.hpp"
#include "dimfree/tailbounds.hpp"
#include "runner.hpp"

using namespace dimfree;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

const Distribution all_dists[] = {Distribution::StdGaussian, Distribution::Uniform, Distribution::Rademacher};

// 1. log-mu moment estimates at 50x10
Outcome moment_estimates() {
    const double expected[] = {2.3630, 1.8681, 2.3408};
    Outcome o;
    for (int i = 0; i < 3; ++i) {
        RandomMatrixModel m{all_dists[i], 50, 10, 1.0, false, 2024, 0};
        double v = estimate_log_mu_expectation(m, MatrixFunctional::spectral_norm(), 3000, 0);
        bool ok = std::abs(v - expected[i]) <= 0.05;
        o.pass = o.pass && ok;
        o.detail += std::string(distribution_name(all_dists[i])) + "=" + fmt("%.4f", v) + (ok ? " " : "(!) ");
    }
    return o;
}

// 2. scalar constants against hand-derived values
Outcome scalar_exactness() {
    struct Row {
        const char* name;
        double got, want;
    } rows[] = {
        {"rate(1)", bennett_rate(1.0), 2 * std::log(2.0) - 1},
        {"exp_offset(2)", exponential_offset(2), 1.5 * (std::log(1.5) - 1)},
        {"rat_offset(1)", rational_offset(1.0), 3 * (4 - std::sqrt(15.0))},
        {"pow_offset(2)", power_offset(2), (2.0 / 3.0) / std::sqrt(3.0)},
    };
    Outcome o;
    double worst = 0;
    for (const auto& r : rows) {
        double e = std::abs(r.got - r.want);
        worst = std::max(worst, e);
        if (e > 1e-12) {
            o.pass = false;
            o.detail += std::string(r.name) + " off by " + fmt("%.3g", e) + " ";
        }
    }
    o.detail += "max error " + fmt("%.3g", worst);
    return o;
}

// 3. dominance over max{theta, theta^K} and tangency residuals
Outcome dominance_and_tangency() {
    std::mt19937_64 eng(3);
    auto unif = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
    auto ok = [](double g, double target) { return g >= target * (1 - 1e-12); };
    const int n = 10000;
    int fail_exp = 0, fail_rat = 0, fail_pow = 0, fail_quad = 0;
    double rat_fail_cmax = 0;
    for (int i = 0; i < n; ++i) {
        int k = static_cast<int>(unif(1, 11));
        double th = unif(1e-9, 5.0);
        double target = std::max(th, std::pow(th, k));
        fail_exp += !ok(DominatingFunction::exponential(k)(th), target);
        fail_pow += !ok(DominatingFunction::power(k)(th), target);
        fail_quad += !ok(DominatingFunction::quadratic()(th), std::max(th, th * th));
        double c = std::exp(unif(std::log(0.01), std::log(100.0)));
        double th2 = unif(0.0, 3.0 / c);
        if (th2 <= 0.0) th2 = 1e-12;
        if (!ok(DominatingFunction::rational(c)(th2), std::max(th2, th2 * th2))) {
            ++fail_rat;
            rat_fail_cmax = std::max(rat_fail_cmax, c);
        }
    }
    double worst_res = 0;
    for (const auto& g : {DominatingFunction::exponential(2), DominatingFunction::rational(1.0),
                          DominatingFunction::power(2), DominatingFunction::quadratic()}) {
        double th = g.tangency_point();
        worst_res = std::max(worst_res, std::abs(g(th) - th));
    }
    Outcome o;
    o.pass = fail_exp == 0 && fail_rat == 0 && fail_pow == 0 && fail_quad == 0 && worst_res <= 1e-9;
    o.detail = "violations exp=" + std::to_string(fail_exp) + " rational=" + std::to_string(fail_rat) +
               " power=" + std::to_string(fail_pow) + " quadratic=" + std::to_string(fail_quad) + "/" +
               std::to_string(n) + ", tangency residual " + fmt("%.2g", worst_res);
    if (fail_rat) o.detail += "; rational form dips below theta^2 for c up to " + fmt("%.4f", rat_fail_cmax);
    return o;
}

// 4. sqrt(2a) + c a / 3 = 1 with a = rational_offset(c)
Outcome offset_identity() {
    double worst = 0, worst_bound = 0;
    for (int i = 1; i <= 1000; ++i) {
        double c = 0.01 * std::pow(1e4, i / 1000.0);
        double a = rational_offset(c);
        worst = std::max(worst, std::abs(std::sqrt(2 * a) + c * a / 3 - 1));
        for (double phi : {0.1, 1.0, 7.5}) worst_bound = std::max(worst_bound, std::abs(expectation_bound(phi, c) - phi) / phi);
    }
    return {worst <= 1e-12 && worst_bound <= 1e-12,
            "identity residual " + fmt("%.2g", worst) + ", expectation bound rel. error " + fmt("%.2g", worst_bound)};
}

// 5. closed forms against the numeric Laplace infimum
Outcome closed_form_vs_numeric() {
    std::mt19937_64 eng(5);
    auto unif = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
    auto logu = [&](double lo, double hi) { return std::exp(unif(std::log(lo), std::log(hi))); };
    double worst_b = 0, worst_q = 0;
    for (int rep = 0; rep < 500; ++rep) {
        int k = static_cast<int>(unif(1, 11));
        double phi = logu(0.01, 20.0);
        double t = logu(0.01, 10.0) * k * phi;
        double closed = whole_set_tail(t, k, phi).bennett;
        double num = laplace_infimum(t, phi, DominatingFunction::exponential(k)).bound;
        worst_b = std::max(worst_b, std::abs(num / closed - 1));

        double tq = logu(0.01, 30.0) * std::sqrt(phi);
        double az = azuma_tail(tq, phi);
        double numq = laplace_infimum(tq, phi, DominatingFunction::quadratic()).bound;
        worst_q = std::max(worst_q, std::abs(numq / az - 1));
    }
    return {worst_b <= 1e-6 && worst_q <= 1e-6,
            "max rel. error bennett " + fmt("%.2g", worst_b) + ", quadratic " + fmt("%.2g", worst_q) + " over 500 triples"};
}

// 6. B_gamma success ratios at 50x10, N=100, 100 repeats
Outcome bgamma_success() {
    Outcome o;
    std::vector<double> grid = linear_grid(0.001, 0.02, 20);
    for (Distribution d : all_dists) {
        RandomMatrixModel m{d, 50, 10, 1.0, false, 606, 0};
        auto rows = bgamma_success_experiment(m, MatrixFunctional::spectral_norm(), grid, 100, 100, 3000, 0);
        bool mono = true;
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = i + 1; j < rows.size(); ++j) mono = mono && rows[j].success_ratio >= rows[i].success_ratio - 0.05;
        double last = rows.back().success_ratio;
        bool ok = mono && last >= 0.99;
        o.pass = o.pass && ok;
        o.detail += std::string(distribution_name(d)) + ": first " + fmt("%.2f", rows.front().success_ratio) + " last " +
                    fmt("%.2f", last) + (mono ? "" : " non-monotone") + "; ";
    }
    return o;
}

// 7. qualitative comparison of DF, AD and the empirical tail
Outcome compare_properties() {
    const int seeds = 20;
    int dominated = 0;
    std::vector<double> r5, r20;
    bool c_order = true;
    std::vector<double> common = geometric_grid(0.05, 200.0, 100);
    for (int s = 0; s < seeds; ++s) {
        CompareSettings a;
        a.k = 5;
        a.c = 1.0;
        a.seed = static_cast<std::uint64_t>(s);
        auto ra = compare_experiment(a, 0);
        bool all = true;
        for (size_t i = 0; i < ra.h_df.values.size(); ++i) all = all && ra.h_df.values[i] >= ra.h_tv.values[i];
        dominated += all;
        r5.push_back(ra.df_at(ra.median_deviation) / ra.ad_at(ra.median_deviation, a.dim));

        CompareSettings b = a;
        b.k = 20;
        auto rb = compare_experiment(b, 0);
        r20.push_back(rb.df_at(rb.median_deviation) / rb.ad_at(rb.median_deviation, b.dim));

        b.grid = common;
        CompareSettings h = b;
        h.c = 0.5;
        auto full = compare_experiment(b, 0), half = compare_experiment(h, 0);
        for (size_t i = 0; i < common.size(); ++i) c_order = c_order && half.h_df.values[i] <= full.h_df.values[i];
    }
    double m5 = median(r5), m20 = median(r20);
    bool a_ok = dominated >= 0.95 * seeds, b_ok = m5 < m20;
    return {a_ok && b_ok && c_order,
            "(a) DF >= TV on full grid in " + std::to_string(dominated) + "/" + std::to_string(seeds) +
                " seeds; (b) median DF/AD at median t: K=5 " + fmt("%.3g", m5) + " vs K=20 " + fmt("%.3g", m20) +
                "; (c) c=0.5 below c=1 pointwise: " + (c_order ? "yes" : "no")};
}

// 8. summation condition success ratios
Outcome condition_ratios() {
    const auto& sizes = default_condition_sizes();
    auto rows = condition51_experiment(sizes, default_condition_k_grid(), 2000, 808, Distribution::StdGaussian, 0);
    Outcome o;
    double worst_large_k = 1.0;
    int order_violations = 0;
    for (const auto& r : rows)
        if (r.k >= 10) worst_large_k = std::min(worst_large_k, r.success_ratio);
    for (int k : default_condition_k_grid()) {
        double small = -1, big = -1;
        for (const auto& r : rows) {
            if (r.k != k) continue;
            if (r.m == sizes.front().first && r.n == sizes.front().second) small = r.success_ratio;
            if (r.m == sizes.back().first && r.n == sizes.back().second) big = r.success_ratio;
        }
        if (big < small - 0.03) ++order_violations;
    }
    o.pass = worst_large_k >= 0.95 && order_violations == 0;
    o.detail = "min ratio for K >= 10: " + fmt("%.4f", worst_large_k) + ", largest-vs-smallest size order violations: " +
               std::to_string(order_violations);
    return o;
}

// 9. RIP failure frequency against the clipped bound
Outcome rip_consistency() {
    Outcome o;
    int scenarios = 0, informative = 0;
    double worst_gap = -1;
    for (int k : {2, 4, 8}) {
        for (double delta : {0.3, 0.5, 0.8}) {
            RipScenario sc;
            sc.k = k;
            sc.model = RandomMatrixModel{Distribution::StdGaussian, 10, 20, 1.0 / std::sqrt(10.0 * k), false,
                                         static_cast<std::uint64_t>(900 + k), 0};
            sc.delta = delta;
            sc.partition = pairing_partition(k);
            auto env = certify_rip_envelopes(sc, 20, 0.02, 1000, 0);
            auto bound = rip_failure_bound(sc, env.phi_bar, env.tau, 1.0 + delta);
            std::vector<double> ds(200);
            parallel_for(ds.size(), 0, [&](std::size_t i) { ds[i] = brute_force_rip_constant(draw_rip_measurement(sc, i), 3); });
            double freq = 0;
            for (double v : ds) freq += v >= delta;
            freq /= ds.size();
            worst_gap = std::max(worst_gap, freq - bound.bound);
            informative += bound.bound < 1.0;
            ++scenarios;
            o.pass = o.pass && freq <= bound.bound + 0.05;
        }
    }
    o.detail = std::to_string(scenarios) + " scenarios x 200 seeds, max(freq - bound) " + fmt("%.3f", worst_gap) + ", " +
               std::to_string(informative) + " with bound < 1";
    return o;
}

// 10. sampled approximation against its expectation bound
Outcome approximation_bound() {
    std::mt19937_64 eng(10);
    auto unif = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
    int within = 0, total = 0;
    for (int s = 0; s < 50; ++s) {
        ApproxScenario sc;
        int count = static_cast<int>(unif(2, 21)), rows = static_cast<int>(unif(2, 9)), cols = static_cast<int>(unif(2, 9));
        Distribution d = all_dists[s % 3];
        double tot = 0;
        for (int l = 0; l < count; ++l) {
            RandomMatrixModel m{d, rows, cols, std::exp(unif(-1, 1)), false, static_cast<std::uint64_t>(1000 + s),
                                static_cast<std::uint64_t>(l)};
            sc.summands.push_back(draw(m, 0));
            double w = s % 2 ? sc.f(sc.summands.back()) : 1.0;
            sc.probabilities.push_back(w);
            tot += w;
        }
        for (double& w : sc.probabilities) w /= tot;
        sc.epsilon = smallest_admissible_epsilon(sc) * unif(1.0, 2.0);
        sc.k = static_cast<int>(unif(1, 60));
        auto r = run_approximation(sc, 300, static_cast<std::uint64_t>(s), 0);
        if (!r.condition_ok) continue;
        ++total;
        within += r.mean_error_ratio <= sc.epsilon + 3 * r.standard_error;
    }
    ApproxScenario two;
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1;
    b(1, 1) = 1;
    two.summands = {a, b};
    two.probabilities = {0.5, 0.5};
    two.k = 1;
    two.epsilon = 1.0;
    auto r1 = run_approximation(two, 1000, 1, 0);
    bool two_ok = std::abs(r1.mean_error_ratio - 1.0) <= 1e-12 && r1.standard_error <= 1e-12;
    return {total == 50 && within >= 0.95 * total && two_ok,
            std::to_string(within) + "/" + std::to_string(total) + " scenarios within eps + 3 SE; two-block K=1 ratio " +
                fmt("%.3f", r1.mean_error_ratio) + " SE " + fmt("%.1g", r1.standard_error)};
}

// 11. spectral gaps and walk step uniformity
Outcome graph_checks() {
    double gk4 = spectral_gap(complete_graph(4)), gc4 = spectral_gap(cycle_graph(4));
    bool gaps = std::abs(gk4 - 4.0 / 3.0) <= 1e-10 && std::abs(gc4 - 1.0) <= 1e-10;
    auto g = random_regular_graph(10, 3, 11);
    const int seeds = 100000, n = g.vertex_count();
    std::vector<int> first(static_cast<size_t>(n)), second(static_cast<size_t>(n));
    for (int s = 0; s < seeds; ++s) {
        auto w = stationary_walk(g, 2, static_cast<std::uint64_t>(s));
        first[static_cast<size_t>(w[0])]++;
        second[static_cast<size_t>(w[1])]++;
    }
    const double p = 1.0 / n, sd = std::sqrt(seeds * p * (1 - p));
    double worst = 0;
    for (int v = 0; v < n; ++v)
        worst = std::max({worst, std::abs(first[static_cast<size_t>(v)] - seeds * p) / sd,
                          std::abs(second[static_cast<size_t>(v)] - seeds * p) / sd});
    return {gaps && worst <= 3.0, "gap K4 " + fmt("%.12f", gk4) + ", C4 " + fmt("%.12f", gc4) +
                                      ", worst vertex count deviation " + fmt("%.2f", worst) + " sigma"};
}

// 12. hypergraph cover sampler
Outcome hypergraph_checks() {
    QuantumHypergraph h;
    h.dimension = 2;
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1;
    b(1, 1) = 1;
    h.edges = {a, b};
    h.weights = {1, 1};
    auto r = hypergraph_cover_sample(h, 4, 10000, 12, 0);
    double exact = exact_cover_probability(h, 4);
    bool rate_ok = std::abs(r.cover_found_rate - 14.0 / 16.0) <= 0.02 && std::abs(exact - 0.875) <= 1e-12;
    int nonvacuous = 0;
    bool bound_ok = true;
    for (int k = 1; k <= 64; ++k) {
        auto s = hypergraph_cover_sample(h, k, 2000, 1200 + static_cast<std::uint64_t>(k), 0);
        if (s.failure_bound < 1.0) {
            ++nonvacuous;
            bound_ok = bound_ok && 1.0 - s.cover_found_rate <= s.failure_bound + 0.05;
        }
    }
    return {rate_ok && bound_ok, "rate " + fmt("%.4f", r.cover_found_rate) + " (exact " + fmt("%.4f", exact) +
                                     "); bound nonvacuous for " + std::to_string(nonvacuous) + " of K=1..64"};
}

// 13. repeated runs write byte-identical CSVs
Outcome determinism() {
    namespace fs = std::filesystem;
    const char* configs[] = {
        R"({"experiment": "bounds-eval", "seed": 1, "params": {"envelopes": [1, 0.5, 0.8, 0.2], "ad": {"dim": 4, "v": 2, "L": 1}}})",
        R"({"experiment": "compare-df-ad", "seed": 2, "params": {"K": 4, "n_center": 200}})",
        R"({"experiment": "bgamma", "seed": 3, "params": {"rows": 20, "cols": 5, "n": 50, "repeats": 20, "ref_n": 300}})",
        R"({"experiment": "rip-condition", "seed": 4, "params": {"sizes": [[5, 20]], "K_grid": [2, 10], "repeats": 200}})",
        R"({"experiment": "rip-certify", "seed": 5, "params": {"m": 6, "n": 10, "s": 2, "trials": 30, "n_obs": 10}})",
        R"({"experiment": "approx", "seed": 6, "params": {"count": 8, "rows": 4, "cols": 4, "K_grid": [1, 4], "trials": 100}})",
        R"({"experiment": "expander", "seed": 7, "params": {"graph": {"kind": "random_regular", "n": 20, "d": 3}, "trials": 300}})",
        R"({"experiment": "hypergraph", "seed": 8, "params": {"hypergraph": {"dimension": 2, "edges": [
            {"matrix": [[1, 0], [0, 0]], "weight": 1}, {"matrix": [[0, 0], [0, 1]], "weight": 1}]}, "trials": 500}})",
        R"({"experiment": "process-supremum", "seed": 9, "params": {"betas": [0.5, 1], "epsilons": [1, 2]}})",
    };
    fs::path root = fs::temp_directory_path() / ("dimfree-acceptance-" + std::to_string(std::random_device{}()));
    int same = 0, total = 0;
    std::string bad;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (const char* text : configs) {
        cli::Config cfg = cli::parse_config(text);
        auto a = cli::run_and_write(cfg, {1, (root / cfg.experiment / "a").string()});
        auto b = cli::run_and_write(cfg, {0, (root / cfg.experiment / "b").string()});
        for (const auto& f : a.files) {
            if (f == "report.json") continue; // carries timestamps
            ++total;
            if (slurp(a.directory / f) == slurp(b.directory / f))
                ++same;
            else
                bad += " " + cfg.experiment + "/" + f;
        }
    }
    fs::remove_all(root);
    return {same == total && total > 0,
            std::to_string(same) + "/" + std::to_string(total) + " CSVs identical across reruns" + bad};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "log-mu moment estimates", moment_estimates},
        {2, "scalar constants", scalar_exactness},
        {3, "dominance and tangency", dominance_and_tangency},
        {4, "rational offset identity", offset_identity},
        {5, "closed forms vs numeric infimum", closed_form_vs_numeric},
        {6, "B_gamma success ratios", bgamma_success},
        {7, "DF/AD/TV comparison properties", compare_properties},
        {8, "summation condition ratios", condition_ratios},
        {9, "RIP frequency vs bound", rip_consistency},
        {10, "approximation expectation bound", approximation_bound},
        {11, "graph spectra and walk uniformity", graph_checks},
        {12, "hypergraph cover sampler", hypergraph_checks},
        {13, "byte-identical reruns", determinism},
    };
    // criterion -> runtime cap in seconds
    const std::vector<std::pair<int, double>> caps{{1, 60}, {6, 300}, {8, 600}};
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto [id, cap] : caps)
            if (id == c.id && secs >= cap) {
                o.pass = false;
                o.detail += "; exceeded " + fmt("%.0f", cap) + " s";
            }
        failed += !o.pass;
        std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
