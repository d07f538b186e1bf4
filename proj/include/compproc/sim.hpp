#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "compproc/rates.hpp"

namespace compproc {

// ---------------------------------------------------------------------------
// Random streams
//
// Every trajectory owns one SplitMix64 stream. SplitMix64 is a counter
// generator: the k-th output is mix(seed + k * golden), so a stream is fully
// determined by its 64-bit seed.
//
// Splitting rule: the stream seed of trajectory i under master seed m is
// derive_seed(m, i) = mix(m + (i + 1) * golden), i.e. the (i+1)-th SplitMix64
// output started at m.
//
// Each simulated event consumes exactly two uniforms: the first selects the
// move by inverse CDF over the fixed transition order, the second drives the
// exponential holding time (drawn, then discarded, by the jump chain).
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

[[nodiscard]] constexpr std::uint64_t splitmix_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix_mix(master + (index + 1) * kGolden);
}

[[nodiscard]] std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept
    {
        ++draws_;
        state_ += kGolden;
        return splitmix_mix(state_);
    }

    /// Uniform on the open interval (0, 1), 52-bit resolution.
    double uniform() noexcept
    {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

private:
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

// ---------------------------------------------------------------------------
// Stopping and recording
// ---------------------------------------------------------------------------

struct StopRule {
    std::uint64_t max_jumps = std::numeric_limits<std::uint64_t>::max();
    double max_time = std::numeric_limits<double>::infinity();
    bool stop_on_boundary = false;
    /// Stop when x1 == 0 or x2 < y0.
    std::optional<std::int64_t> stop_below_y0;

    /// At least one of the caps must be finite.
    [[nodiscard]] bool bounded() const noexcept
    {
        return max_jumps != std::numeric_limits<std::uint64_t>::max() ||
               max_time < std::numeric_limits<double>::infinity();
    }
};

enum class StopReason { MaxJumps, MaxTime, Boundary, BelowY0 };

[[nodiscard]] const char* to_string(StopReason r) noexcept;

/// Which events a Trajectory keeps. With full_log every jump is stored.
/// Otherwise an event is kept when it is a multiple of `decimation`, when
/// either endpoint of the jump has a coordinate <= strip_level (so every level
/// change of a coordinate confined near an axis is kept), or when it is the
/// final jump.
struct Recording {
    bool full_log = false;
    std::uint64_t decimation = 1000;
    std::int64_t strip_level = 8;
};

struct Event {
    std::uint64_t n = 0;  ///< jump index, starting at 1
    double time = 0.0;
    State state;
};

struct Trajectory {
    State initial;
    std::vector<Event> events;
    State final_state;
    std::uint64_t jumps = 0;
    double final_time = 0.0;  ///< time of the last jump (n for the jump chain)
    StopReason stopped_by = StopReason::MaxJumps;
    std::uint64_t seed = 0;
    bool jump_chain = false;
    Recording recording;

    /// Stopped by the boundary or y0 clause, i.e. the hitting time was observed.
    [[nodiscard]] bool hit() const noexcept
    {
        return stopped_by == StopReason::Boundary || stopped_by == StopReason::BelowY0;
    }
};

struct StepResult {
    double holding_time = 0.0;
    State next;
};

/// One CTMC event: exponential holding time with the total rate and a move
/// drawn proportionally to its rate. Throws AbsorbingStateError when the
/// total rate is zero.
StepResult step(const Model& model, const State& s, RandomStream& rng);

/// Exact event-driven simulation until a stop clause fires.
[[nodiscard]] Trajectory simulate(const Model& model, const State& initial, const StopRule& stop,
                                  std::uint64_t seed, const Recording& recording = {});

/// Embedded jump chain: same state sequence as simulate() under the same seed,
/// with jump n recorded at time n.
[[nodiscard]] Trajectory simulate_jump_chain(const Model& model, const State& initial,
                                             const StopRule& stop, std::uint64_t seed,
                                             const Recording& recording = {});

struct TrajectorySummary {
    std::uint64_t seed = 0;
    StopReason stopped_by = StopReason::MaxJumps;
    std::uint64_t jumps = 0;
    State final_state;
    double final_time = 0.0;
    std::optional<std::uint64_t> tau_jumps;
    std::optional<double> tau_time;
    std::optional<std::string> error;
};

[[nodiscard]] TrajectorySummary summarize(const Trajectory& t);

struct BatchOptions {
    unsigned workers = 1;
    bool jump_chain = false;
};

/// Independent runs, one per seed, summarized in seed-list order. Only the
/// summaries are kept. Errors of a single run are recorded in its summary.
/// Throws std::invalid_argument on duplicate seeds.
[[nodiscard]] std::vector<TrajectorySummary> batch(const Model& model, const State& initial,
                                                   const StopRule& stop,
                                                   std::span<const std::uint64_t> seeds,
                                                   const BatchOptions& options = {});

/// Evaluates fn(0..count-1) on `workers` threads; results come back in index
/// order. The exception of the lowest failing index is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))>
{
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(work);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

}  // namespace compproc
