#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "compproc/config.hpp"

namespace compproc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;   ///< computation incomplete, not certified, or partial failure
inline constexpr int kExitInvalid = 2;  ///< bad flags, config or model

struct Options {
    std::string command;
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::filesystem::path out_dir = ".";
    std::vector<std::string> overrides;  ///< key=value, applied after the config file
};

/// Files produced by one command, keyed by file name, plus the status.
struct Outputs {
    std::map<std::string, std::string> files;
    std::string summary;  ///< printed to stdout
    bool ok = true;
};

[[nodiscard]] const std::vector<std::string>& commands();

/// Runs `command` on an already resolved configuration without touching the
/// file system. Throws ConfigError on invalid input.
[[nodiscard]] Outputs execute(const std::string& command, const Config& config, unsigned workers);

/// Loads the config, applies overrides, executes and writes every output
/// file atomically into out_dir. Returns the process exit status.
int run(const Options& options, std::ostream& out, std::ostream& err);

/// Command-line front end.
int main(int argc, char** argv);

}  // namespace compproc::cli
