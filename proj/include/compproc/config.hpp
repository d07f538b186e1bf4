#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compproc/rates.hpp"

namespace compproc {

struct KeySpec {
    std::string_view key;
    std::string_view help;
};

/// Every key accepted in a configuration file or a --set override.
[[nodiscard]] std::span<const KeySpec> config_schema();

/// Flat key=value configuration.
///
/// Lines are `key = value`; text after '#' is a comment and blank lines are
/// ignored. Keys outside config_schema() are rejected, so a typo never
/// silently falls back to a default. Every getter records the effective value
/// it returned; resolved() lists them for output headers.
class Config {
public:
    Config() = default;

    /// Throws ConfigError naming the origin and line on malformed input.
    [[nodiscard]] static Config parse(std::string_view text, const std::string& origin = "<text>");
    [[nodiscard]] static Config load(const std::filesystem::path& path);

    /// Applies a `key=value` override; later assignments win.
    void set(std::string_view assignment);
    void set(const std::string& key, const std::string& value);

    [[nodiscard]] bool has(const std::string& key) const;

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    [[nodiscard]] std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated integers, e.g. `0,1,2`.
    [[nodiscard]] std::vector<std::int64_t> get_int_list(const std::string& key,
                                                         const std::vector<std::int64_t>& fallback) const;
    /// Comma-separated states written x1:x2, e.g. `50:50,100:100`.
    [[nodiscard]] std::vector<State> get_states(const std::string& key,
                                                const std::vector<State>& fallback) const;

    /// Keys read so far with the values used, plus set keys never read, in key order.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> resolved() const;

private:
    const std::string* lookup(const std::string& key) const;
    void record(const std::string& key, const std::string& value) const;

    std::map<std::string, std::string> values_;
    mutable std::map<std::string, std::string> used_;
};

/// Builds and validates the model described by the `type` key
/// (I, II, urn or example2). Throws ConfigError listing every violated
/// hypothesis.
[[nodiscard]] Model build_model(const Config& config);

}  // namespace compproc
