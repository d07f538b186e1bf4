#include "compproc/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace compproc {

std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count)
{
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) {
        seeds[i] = derive_seed(master, i);
    }
    return seeds;
}

const char* to_string(StopReason r) noexcept
{
    switch (r) {
    case StopReason::MaxJumps: return "max_jumps";
    case StopReason::MaxTime: return "max_time";
    case StopReason::Boundary: return "boundary";
    case StopReason::BelowY0: return "below_y0";
    }
    return "unknown";
}

namespace {

const State& pick_target(const TransitionList& list, double u)
{
    const double target = u * list.total();
    double acc = 0.0;
    for (const auto& t : list) {
        acc += t.rate;
        if (target < acc) {
            return t.target;
        }
    }
    return list[list.size() - 1].target;
}

TransitionList checked_transitions(const Model& model, const State& s)
{
    auto list = enumerate_transitions(model, s);
    if (list.absorbing()) {
        throw AbsorbingStateError("absorbing state " + to_string(s));
    }
    return list;
}

std::optional<StopReason> state_stop(const StopRule& stop, const State& s)
{
    if (stop.stop_on_boundary && s.on_boundary()) {
        return StopReason::Boundary;
    }
    if (stop.stop_below_y0 && (s.x1 == 0 || s.x2 < *stop.stop_below_y0)) {
        return StopReason::BelowY0;
    }
    return std::nullopt;
}

bool retain(const Recording& rec, const State& from, const State& to, std::uint64_t n)
{
    if (rec.full_log || n % rec.decimation == 0) {
        return true;
    }
    const auto low = std::min({from.x1, from.x2, to.x1, to.x2});
    return low <= rec.strip_level;
}

Trajectory run(const Model& model, const State& initial, const StopRule& stop,
               std::uint64_t seed, const Recording& recording, bool jump_chain)
{
    if (!stop.bounded()) {
        throw std::invalid_argument("stop rule needs a finite max_jumps or max_time");
    }
    if (recording.decimation == 0) {
        throw std::invalid_argument("decimation must be positive");
    }
    Trajectory traj;
    traj.initial = initial;
    traj.seed = seed;
    traj.jump_chain = jump_chain;
    traj.recording = recording;

    RandomStream rng(seed);
    State s = initial;
    double time = 0.0;
    std::uint64_t n = 0;
    for (;;) {
        if (auto reason = state_stop(stop, s)) {
            traj.stopped_by = *reason;
            break;
        }
        if (n >= stop.max_jumps) {
            traj.stopped_by = StopReason::MaxJumps;
            break;
        }
        const auto list = checked_transitions(model, s);
        const double u_move = rng.uniform();
        const double u_time = rng.uniform();
        const double next_time =
            jump_chain ? static_cast<double>(n + 1) : time - std::log(u_time) / list.total();
        if (next_time > stop.max_time) {
            traj.stopped_by = StopReason::MaxTime;
            break;
        }
        const State next = pick_target(list, u_move);
        ++n;
        if (retain(recording, s, next, n)) {
            traj.events.push_back({n, next_time, next});
        }
        s = next;
        time = next_time;
    }
    if (n > 0 && (traj.events.empty() || traj.events.back().n != n)) {
        traj.events.push_back({n, time, s});
    }
    traj.final_state = s;
    traj.jumps = n;
    traj.final_time = time;
    return traj;
}

}  // namespace

StepResult step(const Model& model, const State& s, RandomStream& rng)
{
    const auto list = checked_transitions(model, s);
    const double u_move = rng.uniform();
    const double u_time = rng.uniform();
    return {-std::log(u_time) / list.total(), pick_target(list, u_move)};
}

Trajectory simulate(const Model& model, const State& initial, const StopRule& stop,
                    std::uint64_t seed, const Recording& recording)
{
    return run(model, initial, stop, seed, recording, false);
}

Trajectory simulate_jump_chain(const Model& model, const State& initial, const StopRule& stop,
                               std::uint64_t seed, const Recording& recording)
{
    return run(model, initial, stop, seed, recording, true);
}

TrajectorySummary summarize(const Trajectory& t)
{
    TrajectorySummary s;
    s.seed = t.seed;
    s.stopped_by = t.stopped_by;
    s.jumps = t.jumps;
    s.final_state = t.final_state;
    s.final_time = t.final_time;
    if (t.hit()) {
        s.tau_jumps = t.jumps;
        s.tau_time = t.final_time;
    }
    return s;
}

std::vector<TrajectorySummary> batch(const Model& model, const State& initial, const StopRule& stop,
                                     std::span<const std::uint64_t> seeds,
                                     const BatchOptions& options)
{
    std::vector<std::uint64_t> sorted(seeds.begin(), seeds.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("batch seeds must be distinct");
    }
    // Summaries only: keep nothing but the final jump.
    const Recording minimal{false, std::numeric_limits<std::uint64_t>::max(), -1};
    return parallel_map(seeds.size(), options.workers, [&](std::size_t i) {
        try {
            const auto t = options.jump_chain
                               ? simulate_jump_chain(model, initial, stop, seeds[i], minimal)
                               : simulate(model, initial, stop, seeds[i], minimal);
            return summarize(t);
        } catch (const std::exception& e) {
            TrajectorySummary failed;
            failed.seed = seeds[i];
            failed.error = e.what();
            return failed;
        }
    });
}

}  // namespace compproc
