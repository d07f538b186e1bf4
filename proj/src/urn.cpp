#include "compproc/urn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "compproc/sim.hpp"

namespace compproc {

double urn_multiplier(const AuxUrnModel& u, std::int64_t S0, std::uint64_t n, int j)
{
    const double ab = u.alpha + u.beta;
    const double s = ab * static_cast<double>(S0);
    return 1.0 + (u.alpha - u.beta) * j / (s + ab * static_cast<double>(n));
}

namespace {

UrnSample make_sample(std::uint64_t n, const State& s, double log_prod, double rho)
{
    UrnSample out;
    out.n = n;
    out.state = s;
    out.S = s.x1 + s.x2;
    out.U = s.x1 - s.x2;
    out.Z = static_cast<double>(out.U) * std::exp(-log_prod);
    out.scaled_diff =
        n == 0 ? 0.0 : static_cast<double>(out.U) * std::pow(static_cast<double>(n), -rho);
    return out;
}

}  // namespace

UrnDiagnostics urn_simulate(const AuxUrnModel& u, const State& initial, std::uint64_t n_steps,
                            std::uint64_t seed, std::uint64_t record_stride,
                            bool check_martingale)
{
    require_valid(u);
    if (initial.x1 == 0 && initial.x2 == 0) {
        throw std::invalid_argument("urn needs a nonempty initial state");
    }
    if (record_stride == 0) {
        throw std::invalid_argument("record_stride must be positive");
    }
    const Model model = u;
    const std::int64_t S0 = initial.x1 + initial.x2;
    UrnDiagnostics out;
    out.rho = u.rho();

    RandomStream rng(seed);
    State s = initial;
    double log_prod = 0.0;  // sum_{k<n} ln a_k(1)
    out.path.push_back(make_sample(0, s, log_prod, out.rho));
    for (std::uint64_t n = 0; n < n_steps; ++n) {
        const double a = urn_multiplier(u, S0, n, 1);
        if (check_martingale) {
            const double z = static_cast<double>(s.x1 - s.x2) * std::exp(-log_prod);
            double expected_u = 0.0;
            for (const auto& t : enumerate_transitions(model, s)) {
                expected_u += t.rate * static_cast<double>(t.target.x1 - t.target.x2);
            }
            const double expected_z = expected_u * std::exp(-log_prod) / a;
            const double residual = std::abs(expected_z - z) / std::max(std::abs(z), 1.0);
            out.max_martingale_residual = std::max(out.max_martingale_residual, residual);
        }
        s = step(model, s, rng).next;
        log_prod += std::log(a);
        if ((n + 1) % record_stride == 0 || n + 1 == n_steps) {
            out.path.push_back(make_sample(n + 1, s, log_prod, out.rho));
        }
    }
    out.last = out.path.back();
    return out;
}

UrnMoments urn_moment_recursion(const AuxUrnModel& u, const State& initial, std::uint64_t n_max,
                                std::uint64_t record_stride,
                                const std::vector<std::uint64_t>& checkpoints)
{
    require_valid(u);
    if (n_max > kMaxMomentSteps) {
        throw std::invalid_argument("n_max above the recursion limit");
    }
    if (initial.x1 == 0 && initial.x2 == 0) {
        throw std::invalid_argument("urn needs a nonempty initial state");
    }
    UrnMoments out;
    out.rho = u.rho();
    out.n_max = n_max;
    const std::int64_t S0 = initial.x1 + initial.x2;
    const auto u0 = static_cast<double>(initial.x1 - initial.x2);
    double m1 = u0;
    double m2 = u0 * u0;
    double running = 0.0;
    const std::uint64_t late = n_max / 10;
    double running_at_late = 0.0;

    auto wanted = [&](std::uint64_t n) {
        return (record_stride > 0 && n % record_stride == 0) || n == n_max ||
               std::find(checkpoints.begin(), checkpoints.end(), n) != checkpoints.end();
    };
    for (std::uint64_t n = 0;; ++n) {
        MomentPoint p;
        p.n = n;
        p.mean_U = m1;
        p.mean_U2 = m2;
        if (n > 0) {
            p.scaled_U2 = m2 * std::pow(static_cast<double>(n), -2.0 * out.rho);
            running = std::max(running, p.scaled_U2);
        }
        p.running_max = running;
        if (n == late) {
            running_at_late = running;
        }
        if (wanted(n)) {
            out.points.push_back(p);
        }
        if (n == n_max) {
            out.last = p;
            break;
        }
        m1 *= urn_multiplier(u, S0, n, 1);
        m2 = m2 * urn_multiplier(u, S0, n, 2) + 1.0;
    }
    out.late_relative_change =
        running_at_late > 0.0 ? (out.last.running_max - running_at_late) / running_at_late : 0.0;
    out.bounded = out.rho > 0.5 && late > 0 && out.late_relative_change < 1e-3;
    return out;
}

FriedmanImage friedman_image(const AuxUrnModel& u, const State& s)
{
    const Model model = u;
    auto image = [&](const State& t) {
        return std::pair{u.alpha * static_cast<double>(t.x1) + u.beta * static_cast<double>(t.x2),
                         u.beta * static_cast<double>(t.x1) + u.alpha * static_cast<double>(t.x2)};
    };
    FriedmanImage out;
    std::tie(out.W, out.B) = image(s);
    out.p_white = out.W / (out.W + out.B);
    out.moves_consistent = true;
    for (const auto& t : enumerate_transitions(model, s)) {
        const auto [w, b] = image(t.target);
        if (t.move == Move::Right) {
            out.p_right = t.rate;
            // White drawn: alpha white and beta black balls added.
            out.moves_consistent = out.moves_consistent && w == out.W + u.alpha && b == out.B + u.beta;
        } else {
            out.moves_consistent = out.moves_consistent && w == out.W + u.beta && b == out.B + u.alpha;
        }
    }
    return out;
}

}  // namespace compproc
