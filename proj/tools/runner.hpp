#ifndef DIMFREE_TOOLS_RUNNER_HPP
#define DIMFREE_TOOLS_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dimfree::cli {

inline constexpr const char* tool_name = "dimfree-tails";
inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { Success = 0, ConfigFailure = 2, NumericalFailure = 3, IoFailure = 4 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string experiment;
    std::uint64_t seed = 0;
    std::optional<std::string> output_dir;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json raw; // the config as given, echoed in report.json
    // Digest of the config without output_dir, so relocating a run keeps CSV bytes equal.
    std::string digest;
    // Directory of the config file; relative data paths resolve against it.
    std::filesystem::path base_dir;
};

// Parses and fully validates a config, including the experiment parameters.
// Throws ConfigError for malformed content and IoError for unreadable files.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

struct OutputFile {
    std::string name;
    std::string content;
};

struct ExperimentOutput {
    std::vector<OutputFile> files;
    nlohmann::json summary = nlohmann::json::object();
};

// Runs the experiment without touching the filesystem (inputs were read during parsing).
// Throws dimfree::Error on numerical failure.
ExperimentOutput run_experiment(const Config& cfg, unsigned threads);

struct RunOptions {
    unsigned threads = 0;
    std::optional<std::string> out_dir;
};

// --out, then DIMFREE_OUTPUT_DIR, then the config value, then "dimfree-out".
std::filesystem::path resolve_output_dir(const Config& cfg, const RunOptions& opts);

struct RunReport {
    std::filesystem::path directory;
    std::vector<std::string> files; // including report.json
};

// Runs and writes CSVs plus report.json. Throws IoError when writing fails.
RunReport run_and_write(const Config& cfg, const RunOptions& opts);

std::string sha256_hex(std::string_view data);

const std::vector<std::string>& experiment_names();

// Entry point used by the executable; returns the process exit code.
int cli_main(int argc, char** argv);

} // namespace dimfree::cli

#endif
