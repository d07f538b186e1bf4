#include "compproc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace compproc {

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v)
{
    MeanSe out;
    if (v.empty()) {
        return out;
    }
    double sum = 0.0;
    for (const double x : v) {
        sum += x;
    }
    out.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (const double x : v) {
            ss += (x - out.mean) * (x - out.mean);
        }
        const double var = ss / static_cast<double>(v.size() - 1);
        out.se = std::sqrt(var / static_cast<double>(v.size()));
    }
    return out;
}

}  // namespace

std::vector<HittingStats> hitting_stats(const Model& model, std::span<const State> starts,
                                        std::span<const std::uint64_t> seeds, const StopRule& caps,
                                        unsigned workers)
{
    StopRule stop = caps;
    stop.stop_on_boundary = true;
    if (!stop.bounded()) {
        throw std::invalid_argument("hitting_stats needs a finite cap");
    }
    std::vector<HittingStats> out;
    out.reserve(starts.size());
    for (const auto& start : starts) {
        HittingStats h;
        h.start = start;
        const auto runs = batch(model, start, stop, seeds, BatchOptions{workers, false});
        std::vector<double> jumps;
        std::vector<double> times;
        for (const auto& r : runs) {
            ++h.runs;
            if (r.error) {
                ++h.failed;
            } else if (r.tau_jumps) {
                ++h.hits;
                jumps.push_back(static_cast<double>(*r.tau_jumps));
                times.push_back(*r.tau_time);
            } else {
                ++h.censored;
            }
        }
        h.hit_fraction =
            h.runs > 0 ? static_cast<double>(h.hits) / static_cast<double>(h.runs) : 0.0;
        const auto mj = mean_se(jumps);
        const auto mt = mean_se(times);
        h.mean_tau_jumps = mj.mean;
        h.se_tau_jumps = mj.se;
        h.mean_tau_time = mt.mean;
        h.se_tau_time = mt.se;
        out.push_back(h);
    }
    return out;
}

LlnResult lln_check(const Trajectory& traj, const LinearDiagnostics& diag,
                    std::uint64_t min_segment)
{
    if (!traj.jump_chain) {
        throw std::invalid_argument("lln_check needs a jump-chain trajectory");
    }
    LlnResult out;
    out.rho_tilde = diag.rho_tilde;
    out.hit = traj.hit();
    // When the run was stopped, the stopping state itself is excluded.
    out.segment_length = out.hit ? (traj.jumps > 0 ? traj.jumps - 1 : 0) : traj.jumps;
    out.inconclusive = out.segment_length < min_segment;

    const std::uint64_t half = out.segment_length / 2;
    std::vector<double> ns;
    std::vector<double> ss;
    double liminf = std::numeric_limits<double>::infinity();
    for (const auto& e : traj.events) {
        if (e.n == 0 || e.n < half || e.n > out.segment_length) {
            continue;
        }
        const auto f = functionals(diag, e.state);
        const double n = static_cast<double>(e.n);
        ns.push_back(n);
        ss.push_back(f.S);
        liminf = std::min(liminf, f.T / n);
    }
    out.points = ns.size();
    if (out.points >= 2) {
        const auto size = static_cast<double>(ns.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            mx += ns[i];
            my += ss[i];
        }
        mx /= size;
        my /= size;
        double cov = 0.0, var = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            cov += (ns[i] - mx) * (ss[i] - my);
            var += (ns[i] - mx) * (ns[i] - mx);
        }
        out.slope = var > 0.0 ? cov / var : 0.0;
        out.liminf_T_proxy = liminf;
    } else {
        out.inconclusive = true;
    }
    out.relative_gap = diag.rho_tilde != 0.0
                           ? std::abs(out.slope - diag.rho_tilde) / std::abs(diag.rho_tilde)
                           : std::abs(out.slope);
    return out;
}

GrowthExponent stopped_growth_exponent(const Trajectory& traj, const LinearDiagnostics& diag,
                                       std::uint64_t n)
{
    if (n < 2) {
        throw std::invalid_argument("growth exponent needs n >= 2");
    }
    if (traj.jumps > n) {
        throw std::invalid_argument("trajectory runs past the horizon");
    }
    GrowthExponent g;
    g.n = n;
    g.S = functionals(diag, traj.final_state).S;
    g.exponent = std::log(std::max(g.S, 1.0)) / std::log(static_cast<double>(n));
    return g;
}

}  // namespace compproc
