#pragma once

#include <cstdint>
#include <vector>

#include "compproc/rates.hpp"

namespace compproc {

/// Multiplier a_n(j) = 1 + (alpha - beta) j / (s + (alpha + beta) n), s = (alpha + beta) S0.
[[nodiscard]] double urn_multiplier(const AuxUrnModel& u, std::int64_t S0, std::uint64_t n, int j);

struct UrnSample {
    std::uint64_t n = 0;
    State state;           ///< (X_n, Y_n)
    std::int64_t S = 0;    ///< X_n + Y_n = S0 + n
    std::int64_t U = 0;    ///< X_n - Y_n
    double Z = 0.0;        ///< U_n / prod_{k<n} a_k(1)
    double scaled_diff = 0.0;  ///< n^-rho U_n (0 at n = 0)
};

struct UrnDiagnostics {
    double rho = 0.0;
    std::vector<UrnSample> path;  ///< every record_stride-th step plus the last
    UrnSample last;
    /// max over visited states of |E[Z_{n+1} | state] - Z_n| / max(|Z_n|, 1),
    /// with the expectation taken by enumerating the two moves.
    double max_martingale_residual = 0.0;
};

/// Runs the urn's two-move chain for n_steps steps from `initial`. Uses the
/// same stream layout as the jump-chain simulator (two uniforms per step), so
/// the state path equals simulate_jump_chain under the same seed.
/// Throws std::invalid_argument at the initial state (0,0).
[[nodiscard]] UrnDiagnostics urn_simulate(const AuxUrnModel& u, const State& initial,
                                          std::uint64_t n_steps, std::uint64_t seed,
                                          std::uint64_t record_stride = 1,
                                          bool check_martingale = true);

struct MomentPoint {
    std::uint64_t n = 0;
    double mean_U = 0.0;
    double mean_U2 = 0.0;
    double scaled_U2 = 0.0;    ///< n^-2rho E[U_n^2]
    double running_max = 0.0;  ///< max over 1 <= m <= n of the scaled value
};

struct UrnMoments {
    double rho = 0.0;
    std::uint64_t n_max = 0;
    std::vector<MomentPoint> points;
    MomentPoint last;
    /// Relative growth of the running max between n_max / 10 and n_max.
    double late_relative_change = 0.0;
    /// rho > 1/2 and late_relative_change < 1e-3.
    bool bounded = false;
};

inline constexpr std::uint64_t kMaxMomentSteps = 10'000'000;

/// Exact moment recursion E[U_{n+1}] = E[U_n] a_n(1), E[U_{n+1}^2] = E[U_n^2] a_n(2) + 1
/// started at the deterministic initial state. `checkpoints` are recorded in
/// addition to every record_stride-th n. Throws std::invalid_argument when
/// n_max exceeds kMaxMomentSteps.
[[nodiscard]] UrnMoments urn_moment_recursion(const AuxUrnModel& u, const State& initial,
                                              std::uint64_t n_max,
                                              std::uint64_t record_stride = 0,
                                              const std::vector<std::uint64_t>& checkpoints = {});

/// Friedman correspondence at one state: W = alpha X + beta Y, B = beta X + alpha Y.
/// Drawing a white ball (probability W / (W + B)) must be the X-move of the urn.
struct FriedmanImage {
    double W = 0.0;
    double B = 0.0;
    double p_white = 0.0;  ///< W / (W + B)
    double p_right = 0.0;  ///< X-move probability of the auxiliary chain
    /// (W, B) after each move must equal the image of the moved state.
    bool moves_consistent = false;
};

[[nodiscard]] FriedmanImage friedman_image(const AuxUrnModel& u, const State& s);

}  // namespace compproc
