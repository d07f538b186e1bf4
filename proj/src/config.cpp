#include "compproc/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace compproc {

namespace {

constexpr std::array kSchema{
    // model
    KeySpec{"type", "model family: I, II, urn or example2"},
    KeySpec{"lambda1", "immigration rate of coordinate 1 (types I, II)"},
    KeySpec{"lambda2", "immigration rate of coordinate 2 (types I, II)"},
    KeySpec{"alpha1", "linear birth rate of coordinate 1 (types I, II)"},
    KeySpec{"alpha2", "linear birth rate of coordinate 2 (types I, II)"},
    KeySpec{"beta1", "interaction death rate of coordinate 1 (type II)"},
    KeySpec{"beta2", "interaction death rate of coordinate 2 (type II)"},
    KeySpec{"strict", "type II: require lambda1, lambda2 > 0 (default true)"},
    KeySpec{"g1.c", "type I: scale of g1"},
    KeySpec{"g1.rho", "type I: index of g1"},
    KeySpec{"g1.eta", "type I: log exponent of g1"},
    KeySpec{"g2.c", "type I: scale of g2"},
    KeySpec{"g2.rho", "type I: index of g2"},
    KeySpec{"g2.eta", "type I: log exponent of g2"},
    KeySpec{"alpha", "urn: balls added of the drawn colour"},
    KeySpec{"beta", "urn: balls added of the other colour"},
    KeySpec{"a", "example2: birth rate of coordinate 1"},
    KeySpec{"b", "example2: birth rate of coordinate 2"},
    KeySpec{"gamma", "example2: per-capita death rate of coordinate 1"},
    KeySpec{"delta", "example2: per-capita death rate of coordinate 2"},
    KeySpec{"epsilon", "example2: rate of the (x1-1, x2+1) move per x1*x2"},
    // experiment
    KeySpec{"x1", "initial x1"},
    KeySpec{"x2", "initial x2"},
    KeySpec{"seed", "master seed"},
    KeySpec{"runs", "number of trajectories"},
    KeySpec{"max_jumps", "jump cap per trajectory"},
    KeySpec{"max_time", "continuous-time cap per trajectory"},
    KeySpec{"stop_on_boundary", "stop when a coordinate reaches 0"},
    KeySpec{"stop_below_y0", "stop when x1 = 0 or x2 < y0; 'auto' uses the diagnostics y0"},
    KeySpec{"jump_chain", "simulate the embedded jump chain"},
    KeySpec{"full_log", "keep every jump of a trajectory"},
    KeySpec{"decimation", "keep every n-th jump when not logging fully"},
    KeySpec{"strip_level", "always keep jumps touching coordinates <= this level"},
    KeySpec{"burn_in", "burn-in fraction for classify"},
    KeySpec{"confined_target", "fraction of confined runs reported as the target"},
    KeySpec{"starts", "start list for hitting, x1:x2 separated by commas"},
    KeySpec{"function", "Lyapunov function: power or log"},
    KeySpec{"nu", "power function exponent nu"},
    KeySpec{"mu", "power function exponent mu"},
    KeySpec{"strip", "strip levels scanned by lyapunov, comma separated"},
    KeySpec{"x_hi", "upper end of the certificate scan"},
    KeySpec{"sample_stride", "x stride of the G f samples written to CSV"},
    KeySpec{"drift_epsilon", "drift margin of the corner hitting bound"},
    KeySpec{"window", "side of the square window scanned for the corner bound"},
    KeySpec{"n_steps", "urn path length"},
    KeySpec{"n_max", "urn moment recursion length"},
    KeySpec{"record_stride", "stride of recorded rows in path and moment CSVs"},
    KeySpec{"terms", "number of series terms K"},
    KeySpec{"margin", "series verdict ratio margin"},
    KeySpec{"tol", "series verdict tail tolerance"},
    KeySpec{"min_segment", "minimum pre-stopping length for lln"},
    KeySpec{"csv", "write CSV output next to the summary"},
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

void require_known(const std::string& key)
{
    const bool known = std::any_of(kSchema.begin(), kSchema.end(),
                                   [&](const KeySpec& k) { return k.key == key; });
    if (!known) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("key '" + key + "': cannot parse '" + text + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

}  // namespace

std::span<const KeySpec> config_schema() { return kSchema; }

Config Config::parse(std::string_view text, const std::string& origin)
{
    Config cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("{}:{}: expected key = value", origin, number));
        }
        try {
            cfg.set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", origin, number, e.what()));
        }
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

void Config::set(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value)
{
    require_known(key);
    if (value.empty()) {
        throw ConfigError("key '" + key + "' has an empty value");
    }
    values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string* Config::lookup(const std::string& key) const
{
    require_known(key);
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

void Config::record(const std::string& key, const std::string& value) const { used_[key] = value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    const auto* v = lookup(key);
    const std::string out = v ? *v : fallback;
    record(key, out);
    return out;
}

double Config::get_double(const std::string& key, double fallback) const
{
    const auto* v = lookup(key);
    const double out = v ? parse_number<double>(key, *v) : fallback;
    record(key, fmt::format("{}", out));
    return out;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const
{
    const auto* v = lookup(key);
    const auto out = v ? parse_number<std::int64_t>(key, *v) : fallback;
    record(key, std::to_string(out));
    return out;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const
{
    const auto* v = lookup(key);
    const auto out = v ? parse_number<std::uint64_t>(key, *v) : fallback;
    record(key, std::to_string(out));
    return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    const auto* v = lookup(key);
    bool out = fallback;
    if (v) {
        if (*v == "true" || *v == "1" || *v == "yes") {
            out = true;
        } else if (*v == "false" || *v == "0" || *v == "no") {
            out = false;
        } else {
            throw ConfigError("key '" + key + "': expected a boolean, got '" + *v + "'");
        }
    }
    record(key, out ? "true" : "false");
    return out;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key,
                                               const std::vector<std::int64_t>& fallback) const
{
    const auto* v = lookup(key);
    std::vector<std::int64_t> out = fallback;
    if (v) {
        out.clear();
        for (const auto& item : split(*v, ',')) {
            out.push_back(parse_number<std::int64_t>(key, item));
        }
    }
    std::string text;
    for (std::size_t i = 0; i < out.size(); ++i) {
        text += (i ? "," : "") + std::to_string(out[i]);
    }
    record(key, text);
    return out;
}

std::vector<State> Config::get_states(const std::string& key,
                                      const std::vector<State>& fallback) const
{
    const auto* v = lookup(key);
    std::vector<State> out = fallback;
    if (v) {
        out.clear();
        for (const auto& item : split(*v, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) {
                throw ConfigError("key '" + key + "': expected x1:x2, got '" + item + "'");
            }
            const State s{parse_number<std::int64_t>(key, parts[0]),
                          parse_number<std::int64_t>(key, parts[1])};
            if (s.x1 < 0 || s.x2 < 0) {
                throw ConfigError("key '" + key + "': negative coordinate in '" + item + "'");
            }
            out.push_back(s);
        }
    }
    std::string text;
    for (std::size_t i = 0; i < out.size(); ++i) {
        text += fmt::format("{}{}:{}", i ? "," : "", out[i].x1, out[i].x2);
    }
    record(key, text);
    return out;
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const
{
    // Keys that were set but never read still belong to the record.
    auto merged = used_;
    for (const auto& [key, value] : values_) {
        merged.emplace(key, value);
    }
    return {merged.begin(), merged.end()};
}

Model build_model(const Config& c)
{
    const auto type = c.get_string("type", "II");
    Model model;
    if (type == "I") {
        TypeIModel m;
        m.lambda1 = c.get_double("lambda1", 1.0);
        m.lambda2 = c.get_double("lambda2", 1.0);
        m.alpha1 = c.get_double("alpha1", 1.0);
        m.alpha2 = c.get_double("alpha2", 1.0);
        m.g1 = InteractionFunction(c.get_double("g1.c", 1.0), c.get_double("g1.rho", 1.0),
                                   c.get_double("g1.eta", 0.0));
        m.g2 = InteractionFunction(c.get_double("g2.c", 1.0), c.get_double("g2.rho", 1.0),
                                   c.get_double("g2.eta", 0.0));
        model = m;
    } else if (type == "II") {
        TypeIIModel m;
        m.lambda1 = c.get_double("lambda1", 1.0);
        m.lambda2 = c.get_double("lambda2", 1.0);
        m.alpha1 = c.get_double("alpha1", 0.0);
        m.alpha2 = c.get_double("alpha2", 0.0);
        m.beta1 = c.get_double("beta1", 1.0);
        m.beta2 = c.get_double("beta2", 1.0);
        m.strict_theorem2 = c.get_bool("strict", true);
        model = m;
    } else if (type == "urn") {
        model = AuxUrnModel{c.get_double("alpha", 1.0), c.get_double("beta", 1.0)};
    } else if (type == "example2") {
        const std::array<std::pair<const char*, double>, 5> params{{
            {"a", c.get_double("a", 1.0)},
            {"b", c.get_double("b", 1.0)},
            {"gamma", c.get_double("gamma", 1.0)},
            {"delta", c.get_double("delta", 1.0)},
            {"epsilon", c.get_double("epsilon", 1.0)},
        }};
        std::string bad;
        for (const auto& [key, value] : params) {
            if (!(std::isfinite(value) && value >= 0.0)) {
                bad += fmt::format(" {}>=0 required;", key);
            }
        }
        if (!bad.empty()) {
            throw ConfigError("invalid reuter-example2 model:" + bad);
        }
        model = reuter_example2(params[0].second, params[1].second, params[2].second,
                                params[3].second, params[4].second);
    } else {
        throw ConfigError("key 'type': expected I, II, urn or example2, got '" + type + "'");
    }
    require_valid(model);
    return model;
}

}  // namespace compproc
