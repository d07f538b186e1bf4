#include "compproc/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#ifndef COMPPROC_VERSION
#define COMPPROC_VERSION "unknown"
#endif

namespace compproc {

std::string format_number(double v) { return fmt::format("{}", v); }

Record& Record::add(const std::string& key, const std::string& value)
{
    fields_.emplace_back(key, value);
    return *this;
}

std::string Record::render() const
{
    std::string out = "[" + section_ + "]\n";
    for (const auto& [key, value] : fields_) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::string file_header(const Config& config, std::string_view command)
{
    std::string out = fmt::format("# compproc {}\n# command={}\n", COMPPROC_VERSION, command);
    for (const auto& [key, value] : config.resolved()) {
        out += fmt::format("# {}={}\n", key, value);
    }
    return out;
}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != columns_.size()) {
        throw std::invalid_argument("CSV row width mismatch");
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::render() const
{
    auto line = [](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += cells[i];
        }
        out += '\n';
        return out;
    };
    std::string out = line(columns_);
    for (const auto& r : rows_) {
        out += line(r);
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace compproc
