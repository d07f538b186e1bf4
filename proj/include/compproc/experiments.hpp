#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "compproc/linear.hpp"
#include "compproc/sim.hpp"

namespace compproc {

struct HittingStats {
    State start;
    std::uint64_t runs = 0;
    std::uint64_t hits = 0;
    std::uint64_t censored = 0;  ///< stopped by a cap before the boundary
    std::uint64_t failed = 0;    ///< runs that raised an error
    double hit_fraction = 0.0;
    /// Means over the hitting runs, with standard errors of the mean.
    double mean_tau_jumps = 0.0;
    double se_tau_jumps = 0.0;
    double mean_tau_time = 0.0;
    double se_tau_time = 0.0;
};

/// Monte Carlo hitting statistics of the boundary, one entry per start. The
/// same seed list is used at every start; `caps` supplies max_jumps and
/// max_time, and stop_on_boundary is forced on.
[[nodiscard]] std::vector<HittingStats> hitting_stats(const Model& model,
                                                      std::span<const State> starts,
                                                      std::span<const std::uint64_t> seeds,
                                                      const StopRule& caps, unsigned workers = 1);

struct LlnResult {
    std::uint64_t segment_length = 0;  ///< jumps strictly before the stopping time
    bool hit = false;
    bool inconclusive = true;          ///< segment shorter than the minimum
    double slope = 0.0;                ///< least-squares slope of S_n on n, second half
    double rho_tilde = 0.0;
    double relative_gap = 0.0;         ///< |slope - rho_tilde| / |rho_tilde|
    double liminf_T_proxy = 0.0;       ///< min of T_n / n over the second half
    std::uint64_t points = 0;          ///< retained events used in the fit
};

inline constexpr std::uint64_t kMinLlnSegment = 10000;

/// Fits S_n against n over the second half of the pre-stopping segment of a
/// jump-chain trajectory. The fit uses the retained events, so a full log
/// gives the exact least-squares slope. Throws std::invalid_argument for a
/// continuous-time trajectory.
[[nodiscard]] LlnResult lln_check(const Trajectory& jump_chain, const LinearDiagnostics& diag,
                                  std::uint64_t min_segment = kMinLlnSegment);

struct GrowthExponent {
    std::uint64_t n = 0;
    double S = 0.0;          ///< S at the final state, i.e. S_{n ^ tau}
    double exponent = 0.0;   ///< ln max(S, 1) / ln n
};

/// Growth exponent of the stopped functional S at horizon n = jump count cap.
[[nodiscard]] GrowthExponent stopped_growth_exponent(const Trajectory& jump_chain,
                                                     const LinearDiagnostics& diag,
                                                     std::uint64_t n);

}  // namespace compproc
