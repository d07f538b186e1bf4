#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compproc/config.hpp"

namespace compproc {

/// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_number(double v);

/// One `[section]` block of key=value lines.
class Record {
public:
    explicit Record(std::string section) : section_(std::move(section)) {}

    Record& add(const std::string& key, const std::string& value);
    Record& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
    Record& add(const std::string& key, bool value) { return add(key, value ? "true" : "false"); }
    Record& add(const std::string& key, double value) { return add(key, format_number(value)); }
    Record& add(const std::string& key, std::int64_t value) { return add(key, std::to_string(value)); }
    Record& add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }
    Record& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
    Record& add(const std::string& key, unsigned value) { return add(key, std::to_string(value)); }
    Record& add(const std::string& key, const State& s) { return add(key, to_string(s)); }

    template <class T>
    Record& add(const std::string& key, const std::optional<T>& value)
    {
        return value ? add(key, *value) : add(key, "none");
    }

    [[nodiscard]] std::string render() const;

private:
    std::string section_;
    std::vector<std::pair<std::string, std::string>> fields_;
};

/// `# compproc <version>` followed by one `# key=value` line per resolved
/// config entry. Worker counts are never part of it.
[[nodiscard]] std::string file_header(const Config& config, std::string_view command);

/// Comma-separated table with a header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    /// Throws std::invalid_argument when the cell count differs from the columns.
    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }
    [[nodiscard]] std::string render() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes through a sibling temporary file and renames it into place, so a
/// reader never sees a partial file. Throws Error on I/O failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace compproc
