#include <doctest.h>

#include <cmath>

#include "compproc/sim.hpp"
#include "compproc/urn.hpp"

using namespace compproc;

TEST_CASE("multiplier")
{
    const AuxUrnModel u{5, 1};
    // s = 6 * 2 = 12; a_3(1) = 1 + 4 / (12 + 18).
    CHECK(urn_multiplier(u, 2, 3, 1) == doctest::Approx(1.0 + 4.0 / 30.0));
    CHECK(urn_multiplier(u, 2, 3, 2) == doctest::Approx(1.0 + 8.0 / 30.0));
}

TEST_CASE("symmetric urn: Z equals U and the second moment grows by one")
{
    const AuxUrnModel u{1, 1};
    const auto d = urn_simulate(u, {3, 1}, 500, 4);
    for (const auto& s : d.path) {
        CHECK(s.Z == doctest::Approx(static_cast<double>(s.U)));
        CHECK(s.S == 4 + static_cast<std::int64_t>(s.n));
    }
    const auto mom = urn_moment_recursion(u, {3, 1}, 1000, 100);
    CHECK(mom.last.mean_U == doctest::Approx(2.0));
    CHECK(mom.last.mean_U2 == doctest::Approx(4.0 + 1000.0));
}

TEST_CASE("martingale residual vanishes")
{
    const auto d = urn_simulate(AuxUrnModel{5, 1}, {1, 1}, 5000, 11);
    CHECK(d.max_martingale_residual < 1e-12);
    CHECK(d.rho == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("state path matches the jump-chain simulator")
{
    const AuxUrnModel u{3, 1};
    StopRule stop;
    stop.max_jumps = 1000;
    const auto t = simulate_jump_chain(u, {2, 1}, stop, 12, Recording{true, 1, 0});
    const auto d = urn_simulate(u, {2, 1}, 1000, 12, 1, false);
    REQUIRE(d.path.size() == 1001);
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        CHECK(d.path[i + 1].state == t.events[i].state);
    }
}

TEST_CASE("Monte Carlo moments agree with the recursion at n = 1000")
{
    const AuxUrnModel u{5, 1};
    const State init{1, 1};
    constexpr int runs = 10000;
    constexpr std::uint64_t n = 1000;
    const auto seeds = derive_seeds(7, runs);
    const auto finals = parallel_map(runs, 2, [&](std::size_t i) {
        return urn_simulate(u, init, n, seeds[i], n, false).last.U;
    });
    double m1 = 0, m2 = 0, m4 = 0;
    for (const auto U : finals) {
        const double v = static_cast<double>(U);
        m1 += v;
        m2 += v * v;
        m4 += v * v * v * v;
    }
    m1 /= runs;
    m2 /= runs;
    m4 /= runs;
    const auto rec = urn_moment_recursion(u, init, n, 0, {n});
    CHECK(rec.last.n == n);
    const double se2 = std::sqrt((m4 - m2 * m2) / runs);
    CHECK(std::abs(m2 - rec.last.mean_U2) < 3.0 * se2);
    CHECK(rec.last.mean_U == 0.0);
    const double se1 = std::sqrt(m2 / runs);
    CHECK(std::abs(m1) < 3.0 * se1);
}

TEST_CASE("recursion bounds")
{
    CHECK_THROWS_AS((void)urn_moment_recursion(AuxUrnModel{}, {1, 1}, kMaxMomentSteps + 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)urn_simulate(AuxUrnModel{}, {0, 0}, 10, 1), std::invalid_argument);
    const auto r = urn_moment_recursion(AuxUrnModel{5, 1}, {1, 1}, 10000, 1000);
    double prev = 0.0;
    for (const auto& p : r.points) {
        CHECK(p.running_max >= prev);
        prev = p.running_max;
    }
}

TEST_CASE("Friedman image")
{
    const auto f = friedman_image(AuxUrnModel{5, 1}, {2, 1});
    CHECK(f.W == 11.0);
    CHECK(f.B == 7.0);
    CHECK(f.p_white == doctest::Approx(11.0 / 18.0));
    CHECK(f.p_right == doctest::Approx(f.p_white));
    CHECK(f.moves_consistent);
}
