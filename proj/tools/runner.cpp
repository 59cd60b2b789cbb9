#include "runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "config_reader.hpp"
#include "dimfree/error.hpp"
#include "experiments.hpp"

namespace dimfree::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : experiment_table()) v.push_back(e.name);
        return v;
    }();
    return names;
}

Config parse_config(std::string_view text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    ObjectReader r(j, "");
    Config cfg;
    cfg.raw = j;
    cfg.base_dir = base_dir;
    const json& exp = r.raw("experiment");
    if (!exp.is_string()) ObjectReader::fail("experiment", "expected a string");
    cfg.experiment = exp.get<std::string>();
    const ExperimentEntry* entry = find_experiment(cfg.experiment);
    if (!entry) {
        std::string list;
        for (const auto& n : experiment_names()) list += (list.empty() ? "" : ", ") + n;
        ObjectReader::fail("experiment", "unknown experiment '" + cfg.experiment + "' (expected one of " + list + ")");
    }
    const json& seed = r.raw("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        ObjectReader::fail("seed", "expected a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();
    if (r.has("output_dir")) {
        const json& o = r.raw("output_dir");
        if (!o.is_string() || o.get<std::string>().empty()) ObjectReader::fail("output_dir", "expected a path");
        cfg.output_dir = o.get<std::string>();
    }
    if (r.has("params")) {
        cfg.params = r.raw("params");
        if (!cfg.params.is_object()) ObjectReader::fail("params", "expected an object");
    }
    r.finish();
    cfg.digest = sha256_hex(json{{"experiment", cfg.experiment}, {"seed", cfg.seed}, {"params", cfg.params}}.dump());
    try {
        entry->validate(cfg);
    } catch (const Error& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    return cfg;
}

Config load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading config " + path.string());
    return parse_config(ss.str(), path.parent_path());
}

ExperimentOutput run_experiment(const Config& cfg, unsigned threads) {
    const ExperimentEntry* entry = find_experiment(cfg.experiment);
    if (!entry) throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    return entry->run(cfg, threads);
}

fs::path resolve_output_dir(const Config& cfg, const RunOptions& opts) {
    if (opts.out_dir) return *opts.out_dir;
    if (const char* env = std::getenv("DIMFREE_OUTPUT_DIR"); env && *env) return env;
    if (cfg.output_dir) return *cfg.output_dir;
    return "dimfree-out";
}

namespace {

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("error writing " + p.string());
}

} // namespace

RunReport run_and_write(const Config& cfg, const RunOptions& opts) {
    const std::string started = utc_now();
    ExperimentOutput out = run_experiment(cfg, opts.threads);
    const std::string finished = utc_now();

    json files = json::array();
    for (const auto& f : out.files)
        files.push_back({{"name", f.name}, {"sha256", sha256_hex(f.content)}, {"bytes", f.content.size()}});
    json report = {{"tool", tool_name},
                   {"version", tool_version},
                   {"experiment", cfg.experiment},
                   {"config", cfg.raw},
                   {"config_sha256", cfg.digest},
                   {"seed", cfg.seed},
                   {"threads", opts.threads},
                   {"started_utc", started},
                   {"finished_utc", finished},
                   {"files", files},
                   {"summary", out.summary}};

    RunReport rep;
    rep.directory = resolve_output_dir(cfg, opts);
    std::error_code ec;
    fs::create_directories(rep.directory, ec);
    if (ec) throw IoError("cannot create " + rep.directory.string() + ": " + ec.message());
    for (const auto& f : out.files) {
        write_file(rep.directory / f.name, f.content);
        rep.files.push_back(f.name);
    }
    write_file(rep.directory / "report.json", report.dump(2) + "\n");
    rep.files.push_back("report.json");
    return rep;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Dimension-free matrix tail bounds: experiment runner"};
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.require_subcommand(1);

    std::string run_path, validate_path;
    RunOptions opts;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV plus report.json");
    run->add_option("config", run_path, "Config file (JSON)")->required();
    run->add_option("--threads", opts.threads, "Worker threads (0 = hardware concurrency)");
    run->add_option("--out", out_dir, "Output directory");
    auto* val = app.add_subcommand("validate", "Check a config without running it");
    val->add_option("config", validate_path, "Config file (JSON)")->required();
    app.add_subcommand("list", "List experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Success : ConfigFailure;
    }

    try {
        if (app.got_subcommand("list")) {
            for (const auto& n : experiment_names()) std::cout << n << '\n';
            return Success;
        }
        if (val->parsed()) {
            Config cfg = load_config(validate_path);
            std::cout << "ok " << cfg.experiment << " config_sha256=" << cfg.digest << '\n';
            return Success;
        }
        Config cfg = load_config(run_path);
        if (!out_dir.empty()) opts.out_dir = out_dir;
        RunReport rep = run_and_write(cfg, opts);
        for (const auto& f : rep.files) std::cout << (rep.directory / f).string() << '\n';
        return Success;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return IoFailure;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return NumericalFailure;
    } catch (const std::bad_alloc&) {
        std::cerr << "numerical error: out of memory\n";
        return NumericalFailure;
    }
}

} // namespace dimfree::cli
