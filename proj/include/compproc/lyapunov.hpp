#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "compproc/rates.hpp"

namespace compproc {

using TestFunction = std::function<double(const State&)>;

/// Strip function for the x1-axis, 0 < nu < mu:
///   x^-nu - x^-mu  if y == 0,   x^-nu  if y == 1,   1  if y >= 2,
/// with x = x1, y = x2. Undefined (DomainError) at x = 0 on the first two rows.
struct PowerLyapunov {
    double nu = 0.3;
    double mu = 0.6;

    [[nodiscard]] double operator()(const State& s) const;
};

/// Logarithmic strip function used when the escaping coordinate has alpha = 0:
///   1/ln x - 1/ln^3 x - (l1/l2)/(x ln^2 x) + 1/(x ln^3 x)   if y == 0
///   1/ln x - 1/ln^3 x                                        if y == 1
///   1/ln x                                                   if y == 2
///   1                                                        if y >= 3
/// Undefined (DomainError) for x < 2 on the first three rows.
struct LogLyapunov {
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    [[nodiscard]] double operator()(const State& s) const;
};

using LyapunovFunction = std::variant<PowerLyapunov, LogLyapunov>;

[[nodiscard]] std::string function_id(const LyapunovFunction& f);
/// First x at which every strip row of f is defined (1 for power, 2 for log).
[[nodiscard]] std::int64_t scan_start(const LyapunovFunction& f);
[[nodiscard]] TestFunction as_test_function(const LyapunovFunction& f);

/// Parameter-window violations for using f with model: 0 < nu < mu, plus
/// mu < min(rho1, rho2) for type I and mu < 1 for type II.
[[nodiscard]] std::vector<std::string> check_parameter_window(const PowerLyapunov& f,
                                                              const Model& model);

/// G f(s) = sum over transitions of rate * (f(target) - f(s)).
/// Throws DomainError naming the state when f is undefined or not finite at s
/// or at one of its targets.
[[nodiscard]] double apply_generator(const Model& model, const TestFunction& f, const State& s);

struct GeneratorSample {
    State state;
    double value = 0.0;
};

struct CertifyOptions {
    /// Lower end of the scan; 0 selects the function's own start.
    std::int64_t x_lo = 0;
    unsigned workers = 1;
    bool record_samples = false;
    /// Samples are kept for x <= 100 and every sample_stride-th x beyond.
    std::int64_t sample_stride = 1000;
};

/// Result of scanning G f on the strip rows for x in [x_lo, x_hi], then
/// extending the scan to 2 * x_hi.
struct CertificateReport {
    std::string function_id;
    std::int64_t x_lo = 1;
    std::int64_t x_hi = 0;
    std::vector<std::int64_t> strip;
    /// Smallest N with G f <= 0 for every scanned x > N on every row.
    std::int64_t minimal_N = 0;
    /// Same quantity after doubling x_hi.
    std::int64_t minimal_N_doubled = 0;
    /// States in (x_hi, 2 x_hi] with G f > 0; must be empty when certified.
    std::vector<GeneratorSample> violations;
    bool stable = false;
    bool certified = false;
    std::uint64_t scanned = 0;
    /// States where G f is undefined (excluded from the scan).
    std::vector<State> skipped;
    std::vector<GeneratorSample> samples;
};

[[nodiscard]] CertificateReport certify(const Model& model, const LyapunovFunction& f,
                                        std::span<const std::int64_t> strip, std::int64_t x_hi,
                                        const CertifyOptions& options = {});

[[nodiscard]] CertificateReport certify(const Model& model, const TestFunction& f,
                                        const std::string& id,
                                        std::span<const std::int64_t> strip, std::int64_t x_hi,
                                        const CertifyOptions& options);

/// Analytically dominant term of G f on one strip row:
///   coefficient * x^x_exponent * L^log_exponent,
/// where L = ln(1+x) when log_of_one_plus_x, else ln x.
struct LeadingTerm {
    double coefficient = 0.0;
    double x_exponent = 0.0;
    double log_exponent = 0.0;
    bool log_of_one_plus_x = false;
    /// True when the parameters place this term strictly above every other term.
    bool dominant = false;
    std::string form;
    std::string note;

    [[nodiscard]] int sign() const noexcept { return (coefficient > 0) - (coefficient < 0); }
    [[nodiscard]] double evaluate(double x) const;
};

/// Hand-derived coefficient table for (type I, power), (type II with
/// alpha1 > 0, power) and (type II with alpha1 = 0, log). Throws
/// std::invalid_argument for any other pairing or row.
[[nodiscard]] LeadingTerm leading_order(const Model& model, const LyapunovFunction& f,
                                        std::int64_t y_level);

using Region = std::function<bool(const State&)>;

struct ScanWindow {
    std::int64_t x_max = 200;
    std::int64_t y_max = 200;
};

struct HittingBound {
    bool verified = false;
    double epsilon = 0.0;
    std::uint64_t checked = 0;
    std::optional<GeneratorSample> violation;
    /// f(start) / epsilon when verified and start lies in the region, else 0.
    double bound = 0.0;
};

/// Checks G f <= -epsilon at every region state of the window; when it holds,
/// the mean exit time from the region started at `start` is at most
/// f(start) / epsilon.
[[nodiscard]] HittingBound expected_hitting_bound(const Model& model, const TestFunction& f,
                                                  const Region& region, double epsilon,
                                                  const State& start, const ScanWindow& window);

/// {x1 >= 1, x2 >= c} union {x2 >= 1, x1 >= c}.
[[nodiscard]] Region corner_region(std::int64_t c);

/// Smallest c such that the drift of x1 + x2 is <= -epsilon on
/// corner_region(c) within the window; nullopt when no such c <= window.
[[nodiscard]] std::optional<std::int64_t> corner_drift_threshold(const Model& model, double epsilon,
                                                                 const ScanWindow& window);

}  // namespace compproc
