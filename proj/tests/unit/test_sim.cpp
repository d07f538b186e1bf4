#include <doctest.h>

#include <array>
#include <cmath>

#include "compproc/sim.hpp"

using namespace compproc;

TEST_CASE("derived seeds follow the documented splitting rule")
{
    // SplitMix64 reference: first output from state 0 is 0xE220A8397B1DCDAF.
    CHECK(derive_seed(0, 0) == 0xE220A8397B1DCDAFULL);
    const auto seeds = derive_seeds(42, 3);
    RandomStream s(42);
    CHECK(seeds[0] == s.next_u64());
    CHECK(seeds[1] == s.next_u64());
    CHECK(seeds[2] == s.next_u64());
}

TEST_CASE("uniforms lie strictly inside (0,1)")
{
    RandomStream s(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("one-step law at (1,1) passes a chi-square test")
{
    const TypeIIModel m{1, 1, 1, 1, 1, 1, true};
    RandomStream rng(2024);
    std::array<double, 4> counts{};
    double holding = 0.0;
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const auto r = step(m, {1, 1}, rng);
        holding += r.holding_time;
        if (r.next == State{2, 1}) {
            counts[0] += 1;
        } else if (r.next == State{1, 2}) {
            counts[1] += 1;
        } else if (r.next == State{0, 1}) {
            counts[2] += 1;
        } else {
            REQUIRE(r.next == State{1, 0});
            counts[3] += 1;
        }
    }
    const std::array<double, 4> p{2.0 / 6, 2.0 / 6, 1.0 / 6, 1.0 / 6};
    double chi2 = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double e = p[k] * n;
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    CHECK(chi2 < 16.27);  // 0.999 quantile, 3 degrees of freedom
    CHECK(holding / n == doctest::Approx(1.0 / 6.0).epsilon(0.01));
    CHECK(rng.draws() == 2ULL * n);
}

TEST_CASE("single move is taken with probability one")
{
    const TypeIIModel m{1, 0, 0, 0, 1, 1, false};
    RandomStream rng(3);
    for (int i = 0; i < 100; ++i) {
        CHECK(step(m, {4, 0}, rng).next == State{5, 0});
    }
}

TEST_CASE("absorbing state raises")
{
    const TypeIIModel m{0, 0, 1, 1, 1, 1, false};
    RandomStream rng(3);
    CHECK_THROWS_AS((void)step(m, {0, 0}, rng), AbsorbingStateError);
    StopRule stop;
    stop.max_jumps = 10;
    CHECK_THROWS_AS((void)simulate(m, {0, 0}, stop, 1), AbsorbingStateError);
}

TEST_CASE("start on the boundary stops immediately")
{
    const TypeIModel m;
    StopRule stop;
    stop.max_jumps = 100;
    stop.stop_on_boundary = true;
    const auto t = simulate(m, {0, 5}, stop, 9);
    CHECK(t.jumps == 0);
    CHECK(t.events.empty());
    CHECK(t.stopped_by == StopReason::Boundary);
    CHECK(summarize(t).tau_jumps == 0ULL);
}

TEST_CASE("unbounded stop rules are rejected")
{
    CHECK_THROWS_AS((void)simulate(TypeIModel{}, {1, 1}, StopRule{}, 1), std::invalid_argument);
}

TEST_CASE("replay is bit-exact and the jump chain shares the state path")
{
    const TypeIIModel m{1, 1, 2, 1, 1, 1, true};
    StopRule stop;
    stop.max_jumps = 5000;
    const Recording full{true, 1, 0};
    const auto a = simulate(m, {3, 3}, stop, 77, full);
    const auto b = simulate(m, {3, 3}, stop, 77, full);
    const auto c = simulate_jump_chain(m, {3, 3}, stop, 77, full);
    REQUIRE(a.events.size() == 5000);
    REQUIRE(c.events.size() == 5000);
    double prev = 0.0;
    State s = a.initial;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].state == b.events[i].state);
        CHECK(a.events[i].state == c.events[i].state);
        CHECK(c.events[i].time == static_cast<double>(i + 1));
        CHECK(a.events[i].time > prev);
        const auto& n = a.events[i].state;
        CHECK(std::abs(n.x1 - s.x1) + std::abs(n.x2 - s.x2) == 1);
        prev = a.events[i].time;
        s = n;
    }
}

TEST_CASE("urn jump chain grows by one ball per step")
{
    StopRule stop;
    stop.max_jumps = 2000;
    const auto t = simulate_jump_chain(AuxUrnModel{5, 1}, {1, 1}, stop, 5, Recording{true, 1, 0});
    for (const auto& e : t.events) {
        CHECK(e.state.x1 + e.state.x2 == 2 + static_cast<std::int64_t>(e.n));
    }
}

TEST_CASE("OK Corral total changes by one per step")
{
    StopRule stop;
    stop.max_jumps = 2000;
    const auto t = simulate_jump_chain(TypeIIModel{1, 1, 0, 0, 1, 1, true}, {3, 3}, stop, 5,
                                       Recording{true, 1, 0});
    std::int64_t prev = 6;
    for (const auto& e : t.events) {
        CHECK(std::abs(e.state.x1 + e.state.x2 - prev) == 1);
        prev = e.state.x1 + e.state.x2;
    }
}

TEST_CASE("max_time stops before the first event past the cap")
{
    StopRule stop;
    stop.max_time = 2.5;
    const auto t = simulate(TypeIIModel{1, 1, 0, 0, 1, 1, true}, {3, 3}, stop, 8, Recording{true, 1, 0});
    CHECK(t.stopped_by == StopReason::MaxTime);
    CHECK(t.final_time <= 2.5);
}

TEST_CASE("decimated recording keeps strip events and multiples")
{
    const TypeIIModel m{1, 1, 2, 2, 1, 1, true};
    StopRule stop;
    stop.max_jumps = 20000;
    const auto full = simulate(m, {1, 1}, stop, 4, Recording{true, 1, 0});
    const Recording dec{false, 1000, 2};
    const auto part = simulate(m, {1, 1}, stop, 4, dec);
    std::size_t j = 0;
    State prev = full.initial;
    for (const auto& e : full.events) {
        const bool keep = e.n % 1000 == 0 ||
                          std::min({prev.x1, prev.x2, e.state.x1, e.state.x2}) <= 2 ||
                          e.n == full.jumps;
        if (keep) {
            REQUIRE(j < part.events.size());
            CHECK(part.events[j].n == e.n);
            CHECK(part.events[j].state == e.state);
            ++j;
        }
        prev = e.state;
    }
    CHECK(j == part.events.size());
}

TEST_CASE("batch keeps seed order and matches single runs")
{
    const TypeIModel m;
    StopRule stop;
    stop.max_jumps = 1'000'000;
    stop.stop_on_boundary = true;
    const auto seeds = derive_seeds(3, 16);
    const auto one = batch(m, {20, 20}, stop, seeds, {1, false});
    const auto four = batch(m, {20, 20}, stop, seeds, {4, false});
    REQUIRE(one.size() == 16);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto single = summarize(simulate(m, {20, 20}, stop, seeds[i]));
        CHECK(one[i].seed == seeds[i]);
        CHECK(one[i].jumps == single.jumps);
        CHECK(one[i].final_time == single.final_time);
        CHECK(one[i].final_state == single.final_state);
        CHECK(four[i].final_time == one[i].final_time);
    }
    CHECK(batch(m, {20, 20}, stop, std::vector<std::uint64_t>{}).empty());
    const std::vector<std::uint64_t> dup{1, 2, 1};
    CHECK_THROWS_AS((void)batch(m, {20, 20}, stop, dup), std::invalid_argument);
}

TEST_CASE("batch records per-run errors without failing")
{
    const TypeIIModel m{0, 0, 1, 1, 1, 1, false};
    StopRule stop;
    stop.max_jumps = 10;
    const std::vector<std::uint64_t> seeds{1, 2};
    const auto out = batch(m, {0, 0}, stop, seeds);
    REQUIRE(out.size() == 2);
    CHECK(out[0].error.has_value());
    CHECK(out[1].error.has_value());
}

TEST_CASE("parallel_map keeps index order")
{
    const auto v = parallel_map(100, 4, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v[i] == i * i);
    }
}
