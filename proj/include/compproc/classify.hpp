#pragma once

#include <cstdint>
#include <map>

#include "compproc/rates.hpp"
#include "compproc/sim.hpp"

namespace compproc {

/// Late-window picture of a run that has left the origin along one axis.
struct ClassificationResult {
    bool confined = false;
    int major_axis = 1;                ///< coordinate with the larger final value
    std::int64_t kappa_observed = 0;   ///< max of the minor coordinate after burn-in
    std::int64_t kappa_expected = 1;   ///< 1 when the major coordinate's alpha > 0, else 2
    /// Number of sojourns at each level of the minor coordinate after burn-in.
    std::map<std::int64_t, std::uint64_t> level_visit_counts;
    /// Completed excursions 0 -> kappa_observed -> 0 after burn-in.
    std::uint64_t oscillations = 0;
    double escape_slope = 0.0;         ///< final major coordinate / jump count
    std::uint64_t burn_in_jump = 0;
    std::uint64_t window_jumps = 0;
};

inline constexpr std::uint64_t kMinWindowJumps = 1000;

/// Classifies a trajectory of a type I or type II model. The minor coordinate
/// is reconstructed from the retained events, which is exact for every level
/// up to the recording's strip_level. Throws DomainError when fewer than
/// kMinWindowJumps jumps follow the burn-in, and std::invalid_argument for
/// other model families or a burn-in fraction outside [0, 1).
[[nodiscard]] ClassificationResult classify(const Model& model, const Trajectory& trajectory,
                                            double burn_in_fraction = 0.5);

}  // namespace compproc
