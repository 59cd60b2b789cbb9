#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "config_reader.hpp"
#include "dimfree/apps/approx.hpp"
#include "dimfree/apps/expander.hpp"
#include "dimfree/apps/hypergraph.hpp"
#include "dimfree/apps/rip.hpp"
#include "dimfree/compare.hpp"
#include "dimfree/empirical.hpp"
#include "dimfree/tailbounds.hpp"

namespace dimfree::cli {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// ---- CSV assembly ----

class Csv {
public:
    Csv(const Config& cfg, const std::vector<std::string>& columns) {
        os_ << "# " << tool_name << ' ' << tool_version << " config_sha256=" << cfg.digest << '\n';
        os_ << "# experiment=" << cfg.experiment << " seed=" << cfg.seed << '\n';
        cells(columns);
    }
    void cells(const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) os_ << (i ? "," : "") << row[i];
        os_ << '\n';
    }
    std::string str() const { return os_.str(); }
    std::ostream& stream() { return os_; }

private:
    std::ostringstream os_;
};

std::string num(double v) { return format_double(v); }
std::string num(long long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

// ---- shared parameter parsers ----

std::vector<double> parse_grid(ObjectReader& r, const std::string& key, bool allow_zero = false) {
    const json& v = r.raw(key);
    const std::string w = r.where(key);
    std::vector<double> g;
    if (v.is_array()) {
        if (v.empty()) ObjectReader::fail(w, "grid is empty");
        for (size_t i = 0; i < v.size(); ++i)
            g.push_back(ObjectReader::check_number(v[i], w + "[" + std::to_string(i) + "]", 0.0, 1e300, !allow_zero));
    } else {
        ObjectReader o(v, w);
        std::string kind = o.choice("kind", "geometric", {"geometric", "linear"});
        bool geo = kind == "geometric";
        double lo = o.number("min", std::nullopt, 0.0, 1e300, geo || !allow_zero);
        double hi = o.number("max", std::nullopt, 0.0, 1e300, true);
        long long pts = o.integer("points", std::nullopt, 1, 100000);
        o.finish();
        if (hi < lo) ObjectReader::fail(w, "max must be >= min");
        g = geo ? geometric_grid(lo, hi, static_cast<int>(pts)) : linear_grid(lo, hi, static_cast<int>(pts));
    }
    for (size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) ObjectReader::fail(w, "grid must be strictly increasing");
    return g;
}

MatrixFunctional parse_functional(ObjectReader& r, const std::string& key) {
    if (!r.has(key)) return MatrixFunctional::spectral_norm();
    const json& v = r.raw(key);
    const std::string w = r.where(key);
    std::string kind;
    long long j = 1;
    if (v.is_string()) {
        kind = v.get<std::string>();
    } else {
        ObjectReader o(v, w);
        kind = o.choice("kind", "spectral_norm", {"spectral_norm", "ky_fan", "abs_top_eig_sum", "frobenius"});
        if (kind == "ky_fan" || kind == "abs_top_eig_sum") j = o.integer("j", 1, 1, 100000);
        o.finish();
    }
    if (kind == "spectral_norm") return MatrixFunctional::spectral_norm();
    if (kind == "ky_fan") return MatrixFunctional::ky_fan(static_cast<int>(j));
    if (kind == "abs_top_eig_sum") return MatrixFunctional::abs_top_eig_sum(static_cast<int>(j));
    if (kind == "frobenius") return MatrixFunctional::frobenius();
    ObjectReader::fail(w, "unknown functional '" + kind + "'");
}

Distribution parse_distribution(ObjectReader& r, const std::string& key = "distribution") {
    std::string d = r.choice(key, "gaussian", {"gaussian", "uniform", "rademacher"});
    if (d == "uniform") return Distribution::Uniform;
    if (d == "rademacher") return Distribution::Rademacher;
    return Distribution::StdGaussian;
}

// Named partitions need the envelopes only for "sorted-pairing".
IndexPartition parse_partition(ObjectReader& r, const std::string& key, int k, const std::vector<double>& env = {}) {
    if (!r.has(key)) return pairing_partition(k);
    const json& v = r.raw(key);
    const std::string w = r.where(key);
    try {
        if (v.is_string()) {
            std::string s = v.get<std::string>();
            if (s == "pairing") return pairing_partition(k);
            if (s == "whole") return whole_set_partition(k);
            if (s == "singletons") return singleton_partition(k);
            if (s == "sorted-pairing") {
                if (env.empty()) ObjectReader::fail(w, "sorted-pairing needs envelope values");
                return sorted_pairing_partition(env);
            }
            ObjectReader::fail(w, "unknown partition '" + s + "'");
        }
        if (!v.is_array()) ObjectReader::fail(w, "expected a name or a list of 1-based blocks");
        std::vector<std::vector<int>> blocks;
        for (size_t b = 0; b < v.size(); ++b) {
            if (!v[b].is_array()) ObjectReader::fail(w, "each block must be an array");
            std::vector<int> block;
            for (size_t i = 0; i < v[b].size(); ++i)
                block.push_back(static_cast<int>(ObjectReader::check_integer(
                    v[b][i], w + "[" + std::to_string(b) + "][" + std::to_string(i) + "]", 1, 1000000)));
            blocks.push_back(block);
        }
        return IndexPartition::from_one_based(k, blocks);
    } catch (const Error& e) {
        ObjectReader::fail(w, e.what());
    }
}

std::filesystem::path resolve_input(const Config& cfg, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : cfg.base_dir / path;
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- bounds-eval ----

struct BoundsParams {
    int k = 1;
    double phi = 0.0;
    std::optional<double> phi_partitioned;
    int tau = 1;
    std::vector<double> grid;
    std::optional<AdIdParams> ad;
};

BoundsParams parse_bounds(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    BoundsParams p;
    if (r.has("envelopes")) {
        std::vector<double> env = r.number_list("envelopes", std::nullopt, 0.0, 1e6);
        p.k = static_cast<int>(env.size());
        IndexPartition part = parse_partition(r, "partition", p.k, env);
        EnvelopeSummary s = summarize_envelopes(env, part);
        if (!(s.whole > 0.0)) ObjectReader::fail("params.envelopes", "at least one envelope must be positive");
        if (!std::isfinite(s.whole)) ObjectReader::fail("params.envelopes", "growth overflows");
        p.phi = s.whole;
        p.phi_partitioned = s.partitioned;
        p.tau = s.tau;
    } else {
        p.k = static_cast<int>(r.integer("K", std::nullopt, 1, 1000000));
        p.phi = r.number("phi", std::nullopt, 0.0, 1e300, true);
        bool has_pp = r.has("phi_partitioned"), has_tau = r.has("tau");
        if (has_pp != has_tau) ObjectReader::fail("params", "phi_partitioned and tau must be given together");
        if (has_pp) {
            p.phi_partitioned = r.number("phi_partitioned", std::nullopt, 0.0, 1e300, true);
            p.tau = static_cast<int>(r.integer("tau", std::nullopt, 1, p.k));
        }
    }
    if (r.has("t_grid")) {
        p.grid = parse_grid(r, "t_grid");
    } else {
        double scale = p.k * p.phi;
        if (!std::isfinite(10.0 * scale)) ObjectReader::fail("params", "K * phi too large for the default grid");
        p.grid = geometric_grid(0.01 * scale, 10.0 * scale, 200);
    }
    if (r.has("ad")) {
        ObjectReader a(r.raw("ad"), "params.ad");
        AdIdParams ad;
        ad.dim = a.number("dim", std::nullopt, 1.0, 1e300);
        ad.v = a.number("v", std::nullopt, 0.0, 1e300);
        ad.L = a.number("L", std::nullopt, 0.0, 1e300);
        ad.intdim = a.number("intdim", ad.dim, 1.0, 1e300);
        a.finish();
        if (ad.v == 0.0 && ad.L == 0.0) ObjectReader::fail("params.ad", "v and L cannot both be zero");
        p.ad = ad;
    }
    r.finish();
    return p;
}

ExperimentOutput run_bounds(const Config& cfg, const BoundsParams& p, unsigned) {
    std::vector<TailCurve> curves;
    auto triple = [&](const std::string& prefix, auto fn) {
        std::vector<TailTriple> v;
        for (double t : p.grid) v.push_back(fn(t));
        TailCurve b{prefix + "_bennett", p.grid, {}, {}, {}}, z{prefix + "_bernstein", p.grid, {}, {}, {}},
            s{prefix + "_split", p.grid, {}, {}, {}};
        for (const auto& x : v) {
            b.values.push_back(x.bennett);
            z.values.push_back(x.bernstein);
            s.values.push_back(x.split);
        }
        curves.push_back(b);
        curves.push_back(z);
        curves.push_back(s);
    };
    triple("whole", [&](double t) { return whole_set_tail(t, p.k, p.phi); });
    if (p.phi_partitioned) {
        triple("partitioned", [&](double t) { return partitioned_tail(t, p.tau, *p.phi_partitioned); });
        if (p.tau <= 2) curves.push_back(make_curve("azuma", p.grid, [&](double t) { return azuma_tail(t, *p.phi_partitioned); }));
    }
    if (p.ad) {
        curves.push_back(make_curve("ad", p.grid, [&](double t) { return ad_tail(t, *p.ad); }));
        TailCurve id{"id", {}, {}, {}, {}};
        for (double t : p.grid)
            if (auto v = id_tail(t, *p.ad)) {
                id.t.push_back(t);
                id.values.push_back(*v);
            }
        curves.push_back(id);
    }
    Csv csv(cfg, {});
    std::string head = csv.str();
    head.erase(head.size() - 1); // drop the empty column row
    std::ostringstream body;
    write_curves_csv(body, curves);
    ExperimentOutput out;
    out.files.push_back({"bounds.csv", head + body.str()});
    out.summary = {{"K", p.k}, {"phi", p.phi}, {"tau", p.tau}};
    if (p.phi_partitioned) out.summary["phi_partitioned"] = *p.phi_partitioned;
    return out;
}

// ---- compare-df-ad ----

CompareSettings parse_compare(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    CompareSettings cs;
    cs.seed = cfg.seed;
    cs.k = static_cast<int>(r.integer("K", 5, 1, 10000));
    cs.c = r.number("c", 1.0, 0.0, 1e6, true);
    cs.dim = static_cast<int>(r.integer("dim", 5, 1, 500));
    cs.n_eval = static_cast<int>(r.integer("n_eval", 100, 1, 10000000));
    cs.n_center = static_cast<int>(r.integer("n_center", 1000, 1, 10000000));
    cs.gamma = r.number("gamma", 0.02, 0.0, 1e6);
    cs.pairing = r.choice("pairing", "consecutive", {"consecutive", "sorted"}) == "sorted" ? PairingKind::Sorted
                                                                                          : PairingKind::Consecutive;
    cs.grid_points = static_cast<int>(r.integer("grid_points", 200, 2, 100000));
    if (r.has("t_grid")) cs.grid = parse_grid(r, "t_grid");
    r.finish();
    return cs;
}

ExperimentOutput run_compare(const Config& cfg, const CompareSettings& cs, unsigned threads) {
    CompareResult res = compare_experiment(cs, threads);
    Csv csv(cfg, {"t", "h_TV", "h_AD", "h_DF"});
    for (size_t i = 0; i < res.h_tv.t.size(); ++i)
        csv.cells({num(res.h_tv.t[i]), num(res.h_tv.values[i]), num(res.h_ad.values[i]), num(res.h_df.values[i])});
    ExperimentOutput out;
    out.files.push_back({"compare.csv", csv.str()});
    out.summary = {{"center", res.center},
                   {"median_deviation", res.median_deviation},
                   {"v_hat", res.proxy.v},
                   {"L_hat", res.proxy.L},
                   {"phi_partitioned", res.summary.partitioned},
                   {"tau", res.summary.tau},
                   {"envelopes", res.summary.envelopes},
                   {"partition", res.summary.partition.to_string()}};
    return out;
}

// ---- bgamma ----

struct BGammaParams {
    RandomMatrixModel model;
    MatrixFunctional f = MatrixFunctional::spectral_norm();
    std::vector<double> grid;
    int n = 100, repeats = 100, ref_n = 3000;
};

RandomMatrixModel parse_model(ObjectReader& r, const Config& cfg, int rows, int cols) {
    RandomMatrixModel m;
    m.distribution = parse_distribution(r);
    m.rows = static_cast<int>(r.integer("rows", rows, 1, 10000));
    m.cols = static_cast<int>(r.integer("cols", cols, 1, 10000));
    m.scale = r.number("scale", 1.0, 0.0, 1e6, true);
    m.symmetrize = r.boolean("symmetrize", false);
    m.seed = cfg.seed;
    if (m.symmetrize && m.rows != m.cols) ObjectReader::fail("params.symmetrize", "requires rows == cols");
    return m;
}

void check_functional_fits(const MatrixFunctional& f, int rows, int cols) {
    if (f.domain() == MatrixDomain::Hermitian && rows != cols)
        ObjectReader::fail("params.functional", "eigenvalue functional needs square matrices");
    if ((f.kind() == MatrixFunctional::Kind::KyFanSingularSum && f.j() > std::min(rows, cols)) ||
        (f.kind() == MatrixFunctional::Kind::AbsTopEigSum && f.j() > rows))
        ObjectReader::fail("params.functional", "order j exceeds the matrix size");
}

BGammaParams parse_bgamma(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    BGammaParams p;
    p.model = parse_model(r, cfg, 50, 10);
    p.f = parse_functional(r, "functional");
    check_functional_fits(p.f, p.model.rows, p.model.cols);
    if (p.f.domain() == MatrixDomain::Hermitian && !p.model.symmetrize)
        ObjectReader::fail("params.functional", "eigenvalue functional needs symmetrize = true");
    p.grid = r.has("gamma_grid") ? parse_grid(r, "gamma_grid", true) : linear_grid(0.0, 0.02, 21);
    p.n = static_cast<int>(r.integer("n", 100, 1, 10000000));
    p.repeats = static_cast<int>(r.integer("repeats", 100, 1, 10000000));
    p.ref_n = static_cast<int>(r.integer("ref_n", 3000, 1, 10000000));
    r.finish();
    return p;
}

ExperimentOutput run_bgamma(const Config& cfg, const BGammaParams& p, unsigned threads) {
    auto rows = bgamma_success_experiment(p.model, p.f, p.grid, p.n, p.repeats, p.ref_n, threads);
    Csv csv(cfg, {"gamma", "success_ratio"});
    for (const auto& r : rows) csv.cells({num(r.gamma), num(r.success_ratio)});
    ExperimentOutput out;
    out.files.push_back({"bgamma.csv", csv.str()});
    RandomMatrixModel ref = p.model;
    ref.stream = 0;
    out.summary = {{"distribution", distribution_name(p.model.distribution)},
                   {"functional", p.f.name()},
                   {"reference_log_mean", estimate_log_mu_expectation(ref, p.f, p.ref_n, threads)}};
    return out;
}

// ---- rip-condition ----

struct ConditionParams {
    std::vector<std::pair<int, int>> sizes;
    std::vector<int> k_grid;
    int repeats = 2000;
    Distribution dist = Distribution::StdGaussian;
};

ConditionParams parse_condition(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    ConditionParams p;
    if (r.has("sizes")) {
        const json& v = r.raw("sizes");
        if (!v.is_array() || v.empty()) ObjectReader::fail("params.sizes", "expected a list of [m, n] pairs");
        for (size_t i = 0; i < v.size(); ++i) {
            std::string w = "params.sizes[" + std::to_string(i) + "]";
            if (!v[i].is_array() || v[i].size() != 2) ObjectReader::fail(w, "expected [m, n]");
            p.sizes.emplace_back(static_cast<int>(ObjectReader::check_integer(v[i][0], w + "[0]", 1, 10000)),
                                 static_cast<int>(ObjectReader::check_integer(v[i][1], w + "[1]", 1, 10000)));
        }
    } else {
        p.sizes = default_condition_sizes();
    }
    if (r.has("K_grid")) {
        for (long long k : r.integer_list("K_grid", std::nullopt, 1, 65535)) p.k_grid.push_back(static_cast<int>(k));
    } else {
        p.k_grid = default_condition_k_grid();
    }
    p.repeats = static_cast<int>(r.integer("repeats", 2000, 1, 10000000));
    p.dist = parse_distribution(r);
    r.finish();
    return p;
}

ExperimentOutput run_condition(const Config& cfg, const ConditionParams& p, unsigned threads) {
    auto rows = condition51_experiment(p.sizes, p.k_grid, p.repeats, cfg.seed, p.dist, threads);
    Csv csv(cfg, {"m", "n", "K", "success_ratio"});
    for (const auto& r : rows) csv.cells({num(r.m), num(r.n), num(r.k), num(r.success_ratio)});
    ExperimentOutput out;
    out.files.push_back({"condition51.csv", csv.str()});
    out.summary = {{"repeats", p.repeats}, {"distribution", distribution_name(p.dist)}};
    return out;
}

// ---- rip-certify ----

struct CertifyParams {
    RipScenario sc;
    std::vector<double> deltas;
    int n_obs = 20;
    double gamma = 0.02;
    int max_subsets = 1000;
    int trials = 200;
};

CertifyParams parse_certify(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    CertifyParams p;
    RipScenario& sc = p.sc;
    sc.m = static_cast<int>(r.integer("m", 10, 1, 1000));
    sc.n = static_cast<int>(r.integer("n", 20, 2, 1000));
    sc.s = static_cast<int>(r.integer("s", 3, 1, sc.n - 1));
    sc.k = static_cast<int>(r.integer("K", 4, 1, 10000));
    if (sc.m > sc.n) ObjectReader::fail("params.m", "must be <= n for the tiled envelope");
    sc.model.distribution = parse_distribution(r);
    sc.model.rows = sc.m;
    sc.model.cols = sc.n;
    sc.model.scale = r.number("scale", 1.0 / std::sqrt(double(sc.m) * sc.k), 0.0, 1e6, true);
    sc.model.seed = cfg.seed;
    p.deltas = r.number_list("deltas", std::vector<double>{0.5}, 0.0, 1.0, true);
    for (double d : p.deltas)
        if (d >= 1.0) ObjectReader::fail("params.deltas", "each delta must be < 1");
    sc.delta = p.deltas.front();
    sc.partition = parse_partition(r, "partition", sc.k);
    if (r.has("c1")) sc.c1 = r.number("c1", std::nullopt, 0.0, 1e6, true);
    if (r.has("c2")) sc.c2 = r.number("c2", std::nullopt, 0.0, 1e6, true);
    p.n_obs = static_cast<int>(r.integer("n_obs", 20, 1, 1000000));
    p.gamma = r.number("gamma", 0.02, 0.0, 1e6);
    p.max_subsets = static_cast<int>(r.integer("max_subsets", 1000, 1, 1000000));
    p.trials = static_cast<int>(r.integer("trials", 200, 1, 1000000));
    r.finish();
    if (binomial(sc.n, sc.s) > 1e6) ObjectReader::fail("params.s", "brute-force check needs C(n, s) <= 1e6");
    try {
        validate(sc);
    } catch (const Error& e) {
        ObjectReader::fail("params", e.what());
    }
    return p;
}

ExperimentOutput run_certify(const Config& cfg, const CertifyParams& p, unsigned threads) {
    const RipScenario& sc = p.sc;
    RipEnvelopes env = certify_rip_envelopes(sc, p.n_obs, p.gamma, p.max_subsets, threads);
    std::vector<double> delta_s(static_cast<size_t>(p.trials));
    parallel_for(delta_s.size(), threads,
                 [&](std::size_t i) { delta_s[i] = brute_force_rip_constant(draw_rip_measurement(sc, i), sc.s); });
    Csv csv(cfg, {"subset_count", "delta_s", "bound", "empirical_failure_rate"});
    json per_delta = json::array();
    for (double d : p.deltas) {
        RipScenario at = sc;
        at.delta = d;
        RipBound b = std::isfinite(env.phi_bar) ? rip_failure_bound(at, env.phi_bar, env.tau, 1.0 + d) : RipBound{};
        double fails = 0;
        for (double v : delta_s) fails += v >= d ? 1 : 0;
        csv.cells({num(env.subsets_checked), num(d), num(b.bound), num(fails / p.trials)});
        json row = {{"delta", d}, {"raw_bound", b.raw}, {"vacuous", b.vacuous}, {"constants_feasible", b.constants_feasible}};
        if (b.constant_form) row["constant_form"] = *b.constant_form;
        per_delta.push_back(row);
    }
    ExperimentOutput out;
    out.files.push_back({"rip.csv", csv.str()});
    out.summary = {{"phi_bar", std::isfinite(env.phi_bar) ? json(env.phi_bar) : json("inf")},
                   {"tau", env.tau},
                   {"exhaustive_subsets", env.exhaustive},
                   {"certification", "heuristic: B_gamma envelopes maximized over the checked subsets"},
                   {"envelopes_a", env.a},
                   {"per_delta", per_delta}};
    return out;
}

// ---- approx ----

struct ApproxParams {
    int count = 20, rows = 10, cols = 10;
    Distribution dist = Distribution::StdGaussian;
    bool proportional = true;
    std::vector<int> k_grid;
    std::optional<double> epsilon; // empty means the smallest admissible value
    double c = 1.0;
    int trials = 500;
    MatrixFunctional f = MatrixFunctional::spectral_norm();
};

ApproxParams parse_approx(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    ApproxParams p;
    p.count = static_cast<int>(r.integer("count", 20, 1, 100000));
    p.rows = static_cast<int>(r.integer("rows", 10, 1, 2000));
    p.cols = static_cast<int>(r.integer("cols", 10, 1, 2000));
    p.dist = parse_distribution(r);
    p.proportional = r.choice("sampling", "proportional", {"proportional", "uniform"}) == "proportional";
    for (long long k : r.integer_list("K_grid", std::vector<long long>{1, 5, 10, 50, 100}, 1, 10000000))
        p.k_grid.push_back(static_cast<int>(k));
    if (r.has("epsilon")) {
        const json& e = r.raw("epsilon");
        if (e.is_string()) {
            if (e.get<std::string>() != "auto") ObjectReader::fail("params.epsilon", "expected a number or \"auto\"");
        } else {
            p.epsilon = ObjectReader::check_number(e, "params.epsilon", 0.0, 1e300, true);
        }
    }
    p.c = r.number("c", 1.0, 0.0, 1e6, true);
    p.trials = static_cast<int>(r.integer("trials", 500, 1, 10000000));
    p.f = parse_functional(r, "functional");
    if (p.f.domain() == MatrixDomain::Hermitian) ObjectReader::fail("params.functional", "use a singular-value functional");
    check_functional_fits(p.f, p.rows, p.cols);
    r.finish();
    return p;
}

ExperimentOutput run_approx(const Config& cfg, const ApproxParams& p, unsigned threads) {
    ApproxScenario sc;
    sc.f = p.f;
    sc.c = p.c;
    double tot = 0.0;
    for (int l = 0; l < p.count; ++l) {
        RandomMatrixModel m{p.dist, p.rows, p.cols, 1.0, false, cfg.seed, static_cast<std::uint64_t>(l)};
        sc.summands.push_back(draw(m, 0));
        double w = p.proportional ? p.f(sc.summands.back()) : 1.0;
        sc.probabilities.push_back(w);
        tot += w;
    }
    detail::require(tot > 0.0, Errc::ZeroMuB, "all summands are zero");
    for (double& w : sc.probabilities) w /= tot;
    sc.epsilon = p.epsilon ? *p.epsilon : smallest_admissible_epsilon(sc);
    CopyMoments mom = copy_moments(sc);
    Csv csv(cfg, {"K", "epsilon", "mean_error_ratio", "standard_error", "bound_ratio", "condition_ok", "within_bound",
                  "tropp_K"});
    for (int k : p.k_grid) {
        sc.k = k;
        ApproxResult res = run_approximation(sc, p.trials, cfg.seed, threads);
        csv.cells({num(k), num(sc.epsilon), num(res.mean_error_ratio), num(res.standard_error), num(res.bound_ratio),
                   flag(res.condition_ok), flag(res.within_bound),
                   num(tropp_sample_count(p.rows, p.cols, mom.m2, mom.L, sc.epsilon * p.f(target_matrix(sc))))});
    }
    ExperimentOutput out;
    out.files.push_back({"approx.csv", csv.str()});
    out.summary = {{"mu_B", p.f(target_matrix(sc))},
                   {"worst_copy_deviation", worst_copy_deviation(sc)},
                   {"epsilon", sc.epsilon},
                   {"m2", mom.m2},
                   {"L", mom.L}};
    return out;
}

// ---- expander ----

struct ExpanderParams {
    std::string kind = "random_regular";
    int n = 50, d = 3;
    std::vector<std::pair<int, int>> edges; // edge_list input, 0-based
    int dim = 2, k = 10, trials = 2000;
    std::vector<double> grid;
};

ExpanderParams parse_expander(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    ExpanderParams p;
    if (r.has("graph")) {
        ObjectReader g(r.raw("graph"), "params.graph");
        p.kind = g.choice("kind", "random_regular", {"random_regular", "complete", "cycle", "edge_list"});
        if (p.kind == "edge_list") {
            std::string path = g.has("path") ? g.raw("path").is_string() ? g.raw("path").get<std::string>() : ""
                                             : "";
            if (path.empty()) ObjectReader::fail("params.graph.path", "expected a file path");
            std::istringstream in(read_text(resolve_input(cfg, path)));
            try {
                ExpanderGraph parsed = parse_edge_list(in);
                p.n = parsed.vertex_count();
                p.d = parsed.degree();
                // parallel edges appear once per copy in the neighbor lists
                for (int u = 0; u < p.n; ++u)
                    for (int v : parsed.neighbors(u))
                        if (u < v) p.edges.emplace_back(u, v);
            } catch (const Error& e) {
                ObjectReader::fail("params.graph.path", e.what());
            }
        } else {
            p.n = static_cast<int>(g.integer("n", 50, p.kind == "cycle" ? 3 : 2, 100000));
            if (p.kind == "random_regular") {
                p.d = static_cast<int>(g.integer("d", 3, 1, p.n - 1));
                if ((static_cast<long long>(p.n) * p.d) % 2) ObjectReader::fail("params.graph", "n * d must be even");
            }
        }
        g.finish();
    }
    p.dim = static_cast<int>(r.integer("dim", 2, 1, 200));
    p.k = static_cast<int>(r.integer("K", 10, 1, 10000000));
    p.trials = static_cast<int>(r.integer("trials", 2000, 1, 10000000));
    p.grid = r.has("t_grid") ? parse_grid(r, "t_grid") : linear_grid(0.02, 1.0, 50);
    r.finish();
    if (p.grid.back() >= p.n) ObjectReader::fail("params.t_grid", "t must stay below the vertex count");
    return p;
}

ExperimentOutput run_expander(const Config& cfg, const ExpanderParams& p, unsigned threads) {
    ExpanderGraph g = p.kind == "complete" ? complete_graph(p.n)
                      : p.kind == "cycle"  ? cycle_graph(p.n)
                      : p.kind == "edge_list" ? ExpanderGraph(p.n, p.edges)
                                              : random_regular_graph(p.n, p.d, cfg.seed);
    const double gap = spectral_gap(g);
    auto f = make_vertex_function(g.vertex_count(), p.dim, cfg.seed);
    auto dev = expander_walk_deviations(g, f, p.k, p.trials, cfg.seed, threads);
    TailCurve emp = empirical_tail(dev, 0.0, p.grid, "empirical");
    IndexPartition part = pairing_partition(p.k);
    Csv csv(cfg, {"t", "empirical", "bennett", "azuma"});
    for (size_t i = 0; i < p.grid.size(); ++i) {
        double t = p.grid[i];
        csv.cells({num(t), num(emp.values[i]),
                   num(expander_tail(t, g.vertex_count(), gap, p.k, part, ExpanderForm::Bennett)),
                   num(expander_tail(t, g.vertex_count(), gap, p.k, part, ExpanderForm::Azuma))});
    }
    ExperimentOutput out;
    out.files.push_back({"expander.csv", csv.str()});
    out.summary = {{"vertices", g.vertex_count()}, {"degree", g.degree()}, {"spectral_gap", gap}};
    return out;
}

// ---- hypergraph ----

struct HypergraphParams {
    QuantumHypergraph h;
    std::vector<int> k_grid;
    int trials = 10000;
};

QuantumHypergraph parse_hypergraph_json(const json& j, const std::string& w) {
    ObjectReader o(j, w);
    QuantumHypergraph h;
    h.dimension = static_cast<int>(o.integer("dimension", std::nullopt, 1, 1000));
    const json& edges = o.raw("edges");
    if (!edges.is_array() || edges.empty()) ObjectReader::fail(w + ".edges", "expected a non-empty array");
    for (size_t e = 0; e < edges.size(); ++e) {
        std::string we = w + ".edges[" + std::to_string(e) + "]";
        ObjectReader eo(edges[e], we);
        const json& m = eo.raw("matrix");
        if (!m.is_array() || static_cast<int>(m.size()) != h.dimension)
            ObjectReader::fail(we + ".matrix", "expected " + std::to_string(h.dimension) + " rows");
        Matrix mat(h.dimension, h.dimension);
        for (int i = 0; i < h.dimension; ++i) {
            const json& row = m[static_cast<size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != h.dimension)
                ObjectReader::fail(we + ".matrix", "row " + std::to_string(i) + " has the wrong length");
            for (int j2 = 0; j2 < h.dimension; ++j2)
                mat(i, j2) = ObjectReader::check_number(row[static_cast<size_t>(j2)], we + ".matrix", -1e300, 1e300);
        }
        if (!is_hermitian(mat)) ObjectReader::fail(we + ".matrix", "must be symmetric");
        h.edges.push_back(symmetrized(mat));
        h.weights.push_back(eo.number("weight", std::nullopt, 0.0, 1e300));
        eo.finish();
    }
    o.finish();
    try {
        validate(h);
    } catch (const Error& e) {
        ObjectReader::fail(w, e.what());
    }
    if (!is_fractional_cover(h)) ObjectReader::fail(w, "weights do not certify sum w M >= I");
    return h;
}

HypergraphParams parse_hypergraph(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    HypergraphParams p;
    bool inline_h = r.has("hypergraph"), file_h = r.has("hypergraph_file");
    if (inline_h == file_h) ObjectReader::fail("params", "give exactly one of hypergraph or hypergraph_file");
    if (inline_h) {
        p.h = parse_hypergraph_json(r.raw("hypergraph"), "params.hypergraph");
    } else {
        const json& path = r.raw("hypergraph_file");
        if (!path.is_string()) ObjectReader::fail("params.hypergraph_file", "expected a file path");
        std::string text = read_text(resolve_input(cfg, path.get<std::string>()));
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            ObjectReader::fail("params.hypergraph_file", std::string("invalid JSON: ") + e.what());
        }
        p.h = parse_hypergraph_json(j, "hypergraph_file");
    }
    for (long long k : r.integer_list("K_grid", std::vector<long long>{1, 2, 4, 8, 16}, 1, 100000))
        p.k_grid.push_back(static_cast<int>(k));
    p.trials = static_cast<int>(r.integer("trials", 10000, 1, 100000000));
    r.finish();
    return p;
}

ExperimentOutput run_hypergraph(const Config& cfg, const HypergraphParams& p, unsigned threads) {
    Csv csv(cfg, {"K", "cover_found_rate", "bound_rate", "covf", "condition_holds"});
    json bounds = json::array();
    for (int k : p.k_grid) {
        auto r = hypergraph_cover_sample(p.h, k, p.trials, cfg.seed, threads);
        csv.cells({num(k), num(r.cover_found_rate), num(r.bound_rate), num(r.covf), flag(r.condition_holds)});
        bounds.push_back({{"K", k}, {"failure_bound", r.failure_bound}, {"phi", r.phi}});
    }
    ExperimentOutput out;
    out.files.push_back({"hypergraph.csv", csv.str()});
    out.summary = {{"edges", p.h.edges.size()}, {"dimension", p.h.dimension}, {"bounds", bounds}};
    return out;
}

// ---- process-supremum ----

struct SupremumParams {
    std::vector<double> betas, epsilons;
};

SupremumParams parse_supremum(const Config& cfg) {
    ObjectReader r(cfg.params, "params");
    SupremumParams p;
    p.betas = r.number_list("betas", std::vector<double>{1.0}, 0.0, 1e300, true);
    p.epsilons = r.number_list("epsilons", std::vector<double>{1.0}, 0.0, 1e300, true);
    r.finish();
    return p;
}

ExperimentOutput run_supremum(const Config& cfg, const SupremumParams& p, unsigned) {
    Csv csv(cfg, {"beta", "epsilon", "small_t_threshold", "large_t_threshold"});
    for (double b : p.betas)
        for (double e : p.epsilons) {
            auto s = supremum_thresholds(b, e);
            csv.cells({num(b), num(e), num(s.small_t), num(s.large_t)});
        }
    ExperimentOutput out;
    out.files.push_back({"supremum.csv", csv.str()});
    return out;
}

template <class Parse, class Run>
ExperimentEntry entry(std::string name, Parse parse, Run run) {
    return {std::move(name), [parse](const Config& c) { (void)parse(c); },
            [parse, run](const Config& c, unsigned t) { return run(c, parse(c), t); }};
}

} // namespace

const std::vector<ExperimentEntry>& experiment_table() {
    static const std::vector<ExperimentEntry> table{
        entry("bounds-eval", parse_bounds, run_bounds),
        entry("compare-df-ad", parse_compare, run_compare),
        entry("bgamma", parse_bgamma, run_bgamma),
        entry("rip-condition", parse_condition, run_condition),
        entry("rip-certify", parse_certify, run_certify),
        entry("approx", parse_approx, run_approx),
        entry("expander", parse_expander, run_expander),
        entry("hypergraph", parse_hypergraph, run_hypergraph),
        entry("process-supremum", parse_supremum, run_supremum),
    };
    return table;
}

const ExperimentEntry* find_experiment(const std::string& name) {
    for (const auto& e : experiment_table())
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace dimfree::cli
