#pragma once

#include <cstdint>
#include <optional>

#include "compproc/rates.hpp"

namespace compproc {

enum class Regime { Subcritical, Critical, Supercritical };

[[nodiscard]] const char* to_string(Regime r) noexcept;

/// Derived constants of the linear-interaction (type II) process.
///
/// All formulas assume alpha1 >= alpha2. When the user model has
/// alpha1 < alpha2 the coordinates are exchanged first (`swapped`), `model`
/// holds the relabeled parameters, and every State-taking function below
/// performs the same exchange on its argument.
struct LinearDiagnostics {
    TypeIIModel model;
    bool swapped = false;

    double r = 0.0;          ///< positive root of beta2 r^2 + (alpha1 - alpha2) r - beta1
    double D = 0.0;          ///< sqrt((alpha1 - alpha2)^2 + 4 beta1 beta2)
    double d = 0.0;          ///< offset of the line U = 0
    double rho_tilde = 0.0;  ///< alpha1 alpha2 - beta1 beta2
    /// Coefficients of R = (lambda1 + lambda2) + k S + l T; undefined when rho_tilde == 0.
    std::optional<double> k;
    std::optional<double> l;
    double Q1 = 0.0;
    double Q3 = 0.0;
    double cubic_coeff = 0.0;  ///< beta1 + alpha1 r + alpha2 r^2 + beta2 r^3
    std::int64_t y0 = 0;       ///< smallest y >= 0 with cubic_coeff * y + Q3 > 0
    Regime regime = Regime::Critical;

    /// User coordinates to the relabeled ones (identity unless swapped).
    [[nodiscard]] State internal(const State& s) const noexcept
    {
        return swapped ? State{s.x2, s.x1} : s;
    }
};

/// Relative tolerance under which |rho_tilde| counts as zero.
inline constexpr double kCriticalTolerance = 1e-12;

[[nodiscard]] LinearDiagnostics linear_diagnostics(const TypeIIModel& m);

struct Functionals {
    double R = 0.0;
    double S = 0.0;
    double T = 0.0;
    double U = 0.0;
};

[[nodiscard]] Functionals functionals(const LinearDiagnostics& diag, const State& s);

/// One jump-chain step of U^2 at an interior state.
///   lhs            exact E[U'^2] by enumerating the four moves (prob rate/R)
///   rhs_main       U^2 (1 + 2 (alpha1 + r beta2) / R)
///   rhs_remainder  (2 U Q1 + Q2) / R
///   reduced        cubic_coeff * y + Q3, which equals 2 U Q1 + Q2 for every x
struct UnSquaredStep {
    double lhs = 0.0;
    double rhs_main = 0.0;
    double rhs_remainder = 0.0;
    double Q2 = 0.0;
    double reduced = 0.0;
    bool remainder_positive = false;
};

/// Throws DomainError at a non-interior state.
[[nodiscard]] UnSquaredStep un_squared_one_step(const LinearDiagnostics& diag, const State& s);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;

    [[nodiscard]] double relative_error() const noexcept;
};

/// Enumerated E[S' - S] against rho_tilde + (2 l1 b2 (a2 + b1) + 2 l2 b1 (a1 + b2)) / R.
[[nodiscard]] IdentityCheck s_drift_one_step(const LinearDiagnostics& diag, const State& s);

/// Symmetric parameters only: enumerated E[(x' - y')^2] against
/// U^2 (1 + 2 (alpha + beta) / (2 lambda + (alpha + beta)(x + y))) + 1, U = x - y.
/// Throws std::invalid_argument when the model is not symmetric.
[[nodiscard]] IdentityCheck symmetric_step(const TypeIIModel& m, const State& s);

}  // namespace compproc
