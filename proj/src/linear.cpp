#include "compproc/linear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace compproc {

const char* to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
    }
    return "unknown";
}

LinearDiagnostics linear_diagnostics(const TypeIIModel& user)
{
    require_valid(user);
    LinearDiagnostics g;
    g.model = user;
    if (user.alpha1 < user.alpha2) {
        g.swapped = true;
        std::swap(g.model.lambda1, g.model.lambda2);
        std::swap(g.model.alpha1, g.model.alpha2);
        std::swap(g.model.beta1, g.model.beta2);
    }
    const auto& m = g.model;
    const double a1 = m.alpha1, a2 = m.alpha2, b1 = m.beta1, b2 = m.beta2;
    const double l1 = m.lambda1, l2 = m.lambda2;

    g.D = std::sqrt((a1 - a2) * (a1 - a2) + 4.0 * b1 * b2);
    // Rationalized root: (a1 - a2) >= 0 here, so the denominator never cancels.
    g.r = 2.0 * b1 / ((a1 - a2) + g.D);
    const double r = g.r;
    const double slope = a1 + b2 * r;

    g.d = -(2.0 * (l1 - l2 * r) + a1 + b2 * r * r) / (2.0 * slope);
    g.rho_tilde = a1 * a2 - b1 * b2;
    const double scale = std::max(a1 * a2, b1 * b2);
    if (std::abs(g.rho_tilde) <= kCriticalTolerance * scale) {
        g.regime = Regime::Critical;
    } else {
        g.regime = g.rho_tilde > 0 ? Regime::Supercritical : Regime::Subcritical;
        g.k = slope / g.rho_tilde;
        g.l = -((a1 * a2 + 2.0 * a2 * b2 + b1 * b2) * r + a1 * a2 + 2.0 * a1 * b1 + b1 * b2) /
              g.rho_tilde;
    }

    g.Q1 = g.d * slope + l1 - r * l2;
    g.Q3 = l1 + l2 * r * r - 2.0 * g.d * (l1 - l2 * r) - 2.0 * g.d * g.d * slope;
    g.cubic_coeff = b1 + a1 * r + a2 * r * r + b2 * r * r * r;
    if (g.Q3 > 0.0) {
        g.y0 = 0;
    } else {
        g.y0 = static_cast<std::int64_t>(std::floor(-g.Q3 / g.cubic_coeff)) + 1;
        // Guard against rounding at an exact integer boundary.
        while (g.y0 > 0 && g.cubic_coeff * static_cast<double>(g.y0 - 1) + g.Q3 > 0.0) {
            --g.y0;
        }
        while (!(g.cubic_coeff * static_cast<double>(g.y0) + g.Q3 > 0.0)) {
            ++g.y0;
        }
    }
    return g;
}

Functionals functionals(const LinearDiagnostics& diag, const State& user_state)
{
    const auto& m = diag.model;
    const State s = diag.internal(user_state);
    const double x = static_cast<double>(s.x1);
    const double y = static_cast<double>(s.x2);
    const double a1 = m.alpha1, a2 = m.alpha2, b1 = m.beta1, b2 = m.beta2;
    Functionals f;
    f.R = (a1 + b2) * x + (a2 + b1) * y + m.lambda1 + m.lambda2;
    f.S = (a1 * a2 + b1 * b2 + 2.0 * a2 * b2) * x + (a1 * a2 + b1 * b2 + 2.0 * a1 * b1) * y;
    f.T = b2 * x + (diag.r * b2 + a1 - a2) * y;
    f.U = x - diag.r * y - diag.d;
    return f;
}

namespace {

void require_interior(const State& s)
{
    if (!s.interior()) {
        throw DomainError("interior state required, got " + to_string(s));
    }
}

/// E[h(next)] under the jump chain of the relabeled model at internal state s.
template <class H>
double expect_next(const TypeIIModel& m, const State& s, H&& h)
{
    const auto list = enumerate_transitions(m, s);
    double acc = 0.0;
    for (const auto& t : list) {
        acc += t.rate * h(t.target);
    }
    return acc / list.total();
}

}  // namespace

UnSquaredStep un_squared_one_step(const LinearDiagnostics& diag, const State& user_state)
{
    require_interior(user_state);
    const auto& m = diag.model;
    const State s = diag.internal(user_state);
    const double r = diag.r;
    const double x = static_cast<double>(s.x1);
    const double y = static_cast<double>(s.x2);
    auto U = [&](const State& t) {
        return static_cast<double>(t.x1) - r * static_cast<double>(t.x2) - diag.d;
    };
    const double u = U(s);
    const double R = (m.alpha1 + m.beta2) * x + (m.alpha2 + m.beta1) * y + m.lambda1 + m.lambda2;

    UnSquaredStep out;
    out.lhs = expect_next(m, s, [&](const State& t) { return U(t) * U(t); });
    out.rhs_main = u * u * (1.0 + 2.0 * (m.alpha1 + r * m.beta2) / R);
    // The constant lambda1 + r^2 lambda2 comes from the unit jumps of the
    // birth moves and completes the remainder.
    out.Q2 = (r * r * m.beta2 + m.alpha1) * x + (m.beta1 + r * r * m.alpha2) * y + m.lambda1 +
             r * r * m.lambda2;
    out.rhs_remainder = (2.0 * u * diag.Q1 + out.Q2) / R;
    out.reduced = diag.cubic_coeff * y + diag.Q3;
    out.remainder_positive = out.rhs_remainder > 0.0;
    return out;
}

double IdentityCheck::relative_error() const noexcept
{
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

IdentityCheck s_drift_one_step(const LinearDiagnostics& diag, const State& user_state)
{
    require_interior(user_state);
    const auto& m = diag.model;
    const State s = diag.internal(user_state);
    const double a1 = m.alpha1, a2 = m.alpha2, b1 = m.beta1, b2 = m.beta2;
    const double cx = a1 * a2 + b1 * b2 + 2.0 * a2 * b2;
    const double cy = a1 * a2 + b1 * b2 + 2.0 * a1 * b1;
    // Increments are formed from the coordinate steps; differencing two
    // large S values would cancel most significant digits.
    auto dS = [&](const State& t) {
        return cx * static_cast<double>(t.x1 - s.x1) + cy * static_cast<double>(t.x2 - s.x2);
    };
    const double R = (a1 + b2) * static_cast<double>(s.x1) + (a2 + b1) * static_cast<double>(s.x2) +
                     m.lambda1 + m.lambda2;
    IdentityCheck c;
    c.lhs = expect_next(m, s, dS);
    c.rhs = diag.rho_tilde +
            (2.0 * m.lambda1 * b2 * (a2 + b1) + 2.0 * m.lambda2 * b1 * (a1 + b2)) / R;
    return c;
}

IdentityCheck symmetric_step(const TypeIIModel& m, const State& s)
{
    if (m.alpha1 != m.alpha2 || m.beta1 != m.beta2 || m.lambda1 != m.lambda2) {
        throw std::invalid_argument("symmetric_step needs equal alpha, beta and lambda pairs");
    }
    require_interior(s);
    auto U = [](const State& t) { return static_cast<double>(t.x1 - t.x2); };
    const double u = U(s);
    const double alpha = m.alpha1, beta = m.beta1, lambda = m.lambda1;
    const double S = static_cast<double>(s.x1 + s.x2);
    IdentityCheck c;
    c.lhs = expect_next(m, s, [&](const State& t) { return U(t) * U(t); });
    c.rhs = u * u * (1.0 + 2.0 * (alpha + beta) / (2.0 * lambda + (alpha + beta) * S)) + 1.0;
    return c;
}

}  // namespace compproc
