#include "compproc/classify.hpp"

#include <algorithm>
#include <stdexcept>

namespace compproc {

namespace {

std::int64_t expected_kappa(const Model& model, int major_axis)
{
    if (std::holds_alternative<TypeIModel>(model)) {
        return 1;
    }
    if (const auto* m = std::get_if<TypeIIModel>(&model)) {
        const double alpha = major_axis == 1 ? m->alpha1 : m->alpha2;
        return alpha > 0.0 ? 1 : 2;
    }
    throw std::invalid_argument("classify supports type I and type II models only");
}

}  // namespace

ClassificationResult classify(const Model& model, const Trajectory& trajectory,
                              double burn_in_fraction)
{
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    }
    ClassificationResult out;
    const auto& fin = trajectory.final_state;
    out.major_axis = fin.x1 >= fin.x2 ? 1 : 2;
    out.kappa_expected = expected_kappa(model, out.major_axis);

    const auto total = trajectory.jumps;
    out.burn_in_jump =
        static_cast<std::uint64_t>(burn_in_fraction * static_cast<double>(total));
    out.window_jumps = total - out.burn_in_jump;
    if (out.window_jumps < kMinWindowJumps) {
        throw DomainError("trajectory too short: " + std::to_string(out.window_jumps) +
                          " jumps after burn-in");
    }

    auto minor = [&](const State& s) { return out.major_axis == 1 ? s.x2 : s.x1; };

    // State at the burn-in jump: last retained event at or before it.
    State start = trajectory.initial;
    auto it = trajectory.events.begin();
    for (; it != trajectory.events.end() && it->n <= out.burn_in_jump; ++it) {
        start = it->state;
    }

    std::int64_t level = minor(start);
    std::int64_t kappa = level;
    std::vector<std::int64_t> path{level};
    ++out.level_visit_counts[level];
    for (; it != trajectory.events.end(); ++it) {
        const auto next = minor(it->state);
        if (next == level) {
            continue;
        }
        level = next;
        kappa = std::max(kappa, level);
        ++out.level_visit_counts[level];
        path.push_back(level);
    }
    out.kappa_observed = kappa;
    out.confined = kappa <= out.kappa_expected;

    if (kappa > 0) {
        bool seen_zero = false;
        bool seen_top = false;
        for (const auto v : path) {
            if (v == 0) {
                if (seen_zero && seen_top) {
                    ++out.oscillations;
                }
                seen_zero = true;
                seen_top = false;
            } else if (v == kappa && seen_zero) {
                seen_top = true;
            }
        }
    }

    const auto major = out.major_axis == 1 ? fin.x1 : fin.x2;
    out.escape_slope = total > 0 ? static_cast<double>(major) / static_cast<double>(total) : 0.0;
    return out;
}

}  // namespace compproc
