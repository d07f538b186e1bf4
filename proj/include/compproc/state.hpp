#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace compproc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The chain sits at a state with total rate zero.
class AbsorbingStateError : public Error {
public:
    using Error::Error;
};

/// A count or a rate left its representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A test function is undefined (or not finite) at a state the generator needs.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A point of the nonnegative integer quadrant.
struct State {
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;

    friend auto operator<=>(const State&, const State&) = default;

    [[nodiscard]] bool on_boundary() const noexcept { return x1 == 0 || x2 == 0; }
    [[nodiscard]] bool interior() const noexcept { return x1 > 0 && x2 > 0; }
};

inline std::string to_string(const State& s)
{
    return "(" + std::to_string(s.x1) + "," + std::to_string(s.x2) + ")";
}

/// Returns s shifted by (dx1, dx2). Throws OverflowError past 2^63-1 and
/// std::logic_error if a coordinate would go negative.
inline State shifted(const State& s, int dx1, int dx2)
{
    constexpr auto max = std::numeric_limits<std::int64_t>::max();
    if ((dx1 > 0 && s.x1 > max - dx1) || (dx2 > 0 && s.x2 > max - dx2)) {
        throw OverflowError("count overflow past 2^63-1 at state " + to_string(s));
    }
    State out{s.x1 + dx1, s.x2 + dx2};
    if (out.x1 < 0 || out.x2 < 0) {
        throw std::logic_error("move leaves the quadrant from " + to_string(s));
    }
    return out;
}

}  // namespace compproc
