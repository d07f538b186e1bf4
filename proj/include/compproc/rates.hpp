#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "compproc/state.hpp"

namespace compproc {

/// g(z) = c * z^rho * (ln(1+z))^eta, with g(0) = 0.
///
/// The log factor is the only slowly varying part supported, so the
/// regular-variation index of g is exactly rho.
class InteractionFunction {
public:
    InteractionFunction() = default;
    InteractionFunction(double scale, double index, double log_exponent = 0.0)
        : scale_(scale), index_(index), log_exponent_(log_exponent)
    {
    }

    static InteractionFunction identity() { return {1.0, 1.0, 0.0}; }

    [[nodiscard]] double operator()(double z) const;

    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double index() const noexcept { return index_; }
    [[nodiscard]] double log_exponent() const noexcept { return log_exponent_; }

private:
    double scale_ = 1.0;
    double index_ = 1.0;
    double log_exponent_ = 0.0;
};

/// Competition process with non-linear interaction:
///   right  lambda1 + alpha1*x1,    up    lambda2 + alpha2*x2,
///   left   x1*g1(x2) if x1 > 0,    down  x2*g2(x1) if x2 > 0.
struct TypeIModel {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    InteractionFunction g1 = InteractionFunction::identity();
    InteractionFunction g2 = InteractionFunction::identity();
};

/// Competition process with linear interaction:
///   right  lambda1 + alpha1*x1,    up    lambda2 + alpha2*x2,
///   left   beta1*x2 if x1 > 0,     down  beta2*x1 if x2 > 0.
///
/// strict_theorem2 additionally demands lambda1, lambda2 > 0.
struct TypeIIModel {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 1.0;
    double beta2 = 1.0;
    bool strict_theorem2 = true;
};

/// General nearest-neighbour competition process with six rate callbacks:
///   a: (x1+1, x2)   b: (x1, x2+1)   c: (x1-1, x2)    d: (x1, x2-1)
///   e: (x1-1, x2+1) f: (x1+1, x2-1)
/// c and e are inactive at x1 = 0; d and f are inactive at x2 = 0.
struct ReuterModel {
    using RateFn = std::function<double(const State&)>;
    RateFn a, b, c, d, e, f;
    std::string name = "reuter";
};

/// Auxiliary urn chain (discrete time). From (x, y) it steps to (x+1, y) with
/// probability (alpha*x + beta*y) / ((alpha+beta)(x+y)), otherwise to (x, y+1).
struct AuxUrnModel {
    double alpha = 1.0;
    double beta = 1.0;

    /// (alpha - beta) / (alpha + beta)
    [[nodiscard]] double rho() const noexcept { return (alpha - beta) / (alpha + beta); }
};

using Model = std::variant<TypeIModel, TypeIIModel, ReuterModel, AuxUrnModel>;

/// Fixed enumeration order; sampling walks transitions in this order.
enum class Move : std::uint8_t { Right, Up, Left, Down, LeftUp, RightDown };

struct Transition {
    State target;
    double rate = 0.0;
    Move move = Move::Right;
};

/// Positive-rate transitions out of one state, in Move order.
class TransitionList {
public:
    void push(const State& target, double rate, Move move);

    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
    /// True when no move has positive rate; simulation cannot leave the state.
    [[nodiscard]] bool absorbing() const noexcept { return count_ == 0; }
    [[nodiscard]] double total() const noexcept { return total_; }

    [[nodiscard]] const Transition& operator[](std::size_t i) const { return items_[i]; }
    [[nodiscard]] const Transition* begin() const noexcept { return items_.data(); }
    [[nodiscard]] const Transition* end() const noexcept { return items_.data() + count_; }

private:
    std::array<Transition, 6> items_{};
    std::size_t count_ = 0;
    double total_ = 0.0;
};

/// Positive-rate transitions out of s. Zero-rate moves are omitted; an empty
/// list signals an absorbing state. Throws OverflowError when a rate is not
/// finite and std::invalid_argument when a Reuter callback returns a negative
/// rate.
[[nodiscard]] TransitionList enumerate_transitions(const Model& model, const State& s);

/// Rate-weighted mean jump of each coordinate at s.
[[nodiscard]] std::array<double, 2> mean_drift(const Model& model, const State& s);

struct Violation {
    std::string field;
    std::string message;
};

/// Every violated model hypothesis; empty means valid.
[[nodiscard]] std::vector<Violation> validate(const Model& model);

/// Throws ConfigError listing the violations, if any.
void require_valid(const Model& model);

[[nodiscard]] std::string model_name(const Model& model);

/// Type I/II models written in the six-callback form (e = f = 0).
[[nodiscard]] ReuterModel as_reuter(const TypeIModel& m);
[[nodiscard]] ReuterModel as_reuter(const TypeIIModel& m);

/// Reuter's Example 2: a, b constant births, deaths gamma*x1 and delta*x2,
/// transfer epsilon*x1*x2 from x1 to x2.
[[nodiscard]] ReuterModel reuter_example2(double a, double b, double gamma, double delta,
                                          double epsilon);

}  // namespace compproc
