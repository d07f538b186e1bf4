#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "compproc/rates.hpp"

namespace compproc {

/// Level-k extremes of the total birth and death rates on the antidiagonal
/// x1 + x2 = k. Index k of each vector holds level k; unused entries are 0.
///   r[k]        max of a + b over x1, x2 > 0       (k >= 2)
///   s[k]        min of c + d over x1, x2 > 0       (k >= 2)
///   r_tilde[k]  max of a + b over x1, x2 >= 0      (k >= 0)
///   s_tilde[k]  min of c + d over x1, x2 >= 0      (k >= 1)
struct ReuterSequences {
    std::vector<double> r;
    std::vector<double> s;
    std::vector<double> r_tilde;
    std::vector<double> s_tilde;
};

/// Enumerates the antidiagonals of a Reuter model up to level K.
[[nodiscard]] ReuterSequences reuter_sequences(const ReuterModel& m, std::size_t K);

/// Closed form for symmetric linear rates (lambda, alpha, beta on both
/// coordinates): r_k = r~_k = 2 lambda + alpha k, s_k = beta k, s~_k = 0.
[[nodiscard]] ReuterSequences symmetric_linear_sequences(double lambda, double alpha, double beta,
                                                         std::size_t K);

enum class Verdict { Diverges, Converges, Inconclusive, Undefined };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct SeriesOptions {
    double margin = 0.05;
    double tol = 1e-6;
    /// Number of trailing term ratios averaged (geometrically) for the tail.
    std::size_t tail_window = 10;
};

struct SeriesSummary {
    std::vector<double> partial_sums;  ///< nondecreasing; +inf once the sum overflows
    double last_term = 0.0;
    double term_ratio_tail = 0.0;
    /// Estimated remainder after the last term relative to the partial sum.
    double relative_tail = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

struct SeriesReport {
    std::size_t K = 0;
    SeriesSummary A;        ///< sum_{k>=2} (s_2..s_k) / (r_2..r_k)
    SeriesSummary A_tilde;  ///< sum_{k>=1} (r~_1..r~_{k-1}) / (s~_1..s~_k)
};

inline constexpr std::size_t kDefaultSeriesTerms = 200;

/// Partial sums computed in the log domain. Throws std::invalid_argument when
/// K < 10 or some r_k (k >= 2) is not positive. A_tilde is Undefined when an
/// s_tilde_k vanishes.
[[nodiscard]] SeriesReport reuter_series(const ReuterSequences& seq, std::size_t K,
                                         const SeriesOptions& options = {});

}  // namespace compproc
