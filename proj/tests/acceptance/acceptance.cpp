// Acceptance suite: one PASS/FAIL line per criterion.
//
// Every criterion renders its evidence into text files. The whole suite runs
// once with a single worker and again with --workers threads; criterion 10
// compares the two sets of files byte for byte.
//
// Exit status is 0 when every criterion could be evaluated. With --strict it
// is 1 as soon as one criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "compproc/classify.hpp"
#include "compproc/experiments.hpp"
#include "compproc/linear.hpp"
#include "compproc/lyapunov.hpp"
#include "compproc/report.hpp"
#include "compproc/series.hpp"
#include "compproc/sim.hpp"
#include "compproc/urn.hpp"

using namespace compproc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    std::map<std::string, std::string> files;
};

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome(std::uint64_t master, unsigned workers)> run;
};

double rel(double a, double b)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// ---------------------------------------------------------------------------
// 1. Exact identities at random interior states.

Outcome identities(std::uint64_t master, unsigned)
{
    constexpr int kStates = 1000;
    constexpr double kTol = 1e-9;
    std::mt19937_64 gen(master);
    std::uniform_real_distribution<double> par(0.05, 5.0);
    std::uniform_int_distribution<std::int64_t> coord(1, 100000);

    std::map<std::string, double> worst;
    auto track = [&](const std::string& key, double err) { worst[key] = std::max(worst[key], err); };

    for (int i = 0; i < kStates; ++i) {
        const TypeIIModel m{par(gen), par(gen), par(gen), par(gen), par(gen), par(gen), true};
        const auto d = linear_diagnostics(m);
        const State s{coord(gen), coord(gen)};
        const auto in = d.internal(s);
        const double x = static_cast<double>(in.x1), y = static_cast<double>(in.x2);
        const auto& p = d.model;

        // (a) total rate
        const double R = (p.alpha1 + p.beta2) * x + (p.alpha2 + p.beta1) * y + p.lambda1 + p.lambda2;
        track("a_total_rate", rel(enumerate_transitions(m, s).total(), R));

        // (b) drift of S
        track("b_s_drift", s_drift_one_step(d, s).relative_error());

        // (c) U squared expansion and the reduction of its remainder
        const auto st = un_squared_one_step(d, s);
        track("c_un_expansion", rel(st.lhs, st.rhs_main + st.rhs_remainder));
        const double u = x - d.r * y - d.d;
        const double scale = std::max({std::abs(2 * u * d.Q1), std::abs(st.Q2), std::abs(st.reduced)});
        track("c_remainder_reduction", std::abs(2 * u * d.Q1 + st.Q2 - st.reduced) / scale);
        track("c_cubic_form", rel(st.reduced, d.cubic_coeff * y + d.Q3));

        // (d) symmetric reduction, on the symmetrized parameters
        const TypeIIModel sym{p.lambda1, p.lambda1, p.alpha1, p.alpha1, p.beta1, p.beta1, true};
        track("d_symmetric", symmetric_step(sym, s).relative_error());

        // (e) one-step martingale identity of Z
        const AuxUrnModel urn{p.alpha1, p.beta1};
        const auto moves = enumerate_transitions(urn, s);
        const double U = static_cast<double>(s.x1 - s.x2);
        double next = 0.0;
        for (const auto& t : moves) {
            next += t.rate * static_cast<double>(t.target.x1 - t.target.x2);
        }
        const auto S = s.x1 + s.x2;
        const double a1 = urn_multiplier(urn, 2, static_cast<std::uint64_t>(S - 2), 1);
        track("e_z_martingale", std::abs(next - U * a1) / std::max(std::abs(U * a1), 1.0));

        // (f) decomposition of R
        if (d.k) {
            const auto f = functionals(d, s);
            track("f_decomposition", rel(f.R, p.lambda1 + p.lambda2 + *d.k * f.S + *d.l * f.T));
        }

        // (g) root residual
        const double res = p.beta2 * d.r * d.r + (p.alpha1 - p.alpha2) * d.r - p.beta1;
        track("g_root_residual", std::abs(res) / std::max(p.beta1, p.beta2 * d.r * d.r));
        track("g_fixed_point", rel(d.r, (p.beta1 + d.r * p.alpha2) / (p.alpha1 + d.r * p.beta2)));
    }

    Outcome o;
    o.pass = true;
    Record r("identities");
    r.add("states", kStates).add("tolerance", kTol);
    std::string worst_key;
    double worst_val = 0.0;
    for (const auto& [k, v] : worst) {
        r.add(k, v);
        o.pass = o.pass && v <= kTol;
        if (v >= worst_val) {
            worst_val = v;
            worst_key = k;
        }
    }
    o.detail = fmt::format("{} states, worst relative error {:.3g} ({})", kStates, worst_val, worst_key);
    o.files["criterion_01.txt"] = r.render();
    return o;
}

// ---------------------------------------------------------------------------
// 2. Lyapunov certificates up to x = 10^6, doubled to 2*10^6.

Outcome certificates(std::uint64_t, unsigned workers)
{
    struct Case {
        std::string label;
        Model model;
        LyapunovFunction f;
        std::vector<std::int64_t> strip;
    };
    const std::vector<Case> cases{
        {"lotka_volterra_power", TypeIModel{}, PowerLyapunov{0.3, 0.6}, {0, 1}},
        {"type2_power", TypeIIModel{1, 1, 1, 1, 1, 1, true}, PowerLyapunov{0.3, 0.6}, {0, 1}},
        {"type2_alpha1_zero_log", TypeIIModel{1, 1, 0, 1, 1, 1, true}, LogLyapunov{1, 1}, {0, 1, 2}},
    };
    constexpr std::int64_t kXHi = 1'000'000;
    Outcome o;
    o.pass = true;
    std::string text;
    std::vector<std::string> notes;
    for (const auto& c : cases) {
        CertifyOptions opt;
        opt.workers = workers;
        const auto rep = certify(c.model, c.f, c.strip, kXHi, opt);
        bool signs = true;
        Record r(c.label);
        r.add("function", rep.function_id)
            .add("x_hi", rep.x_hi)
            .add("minimal_N", rep.minimal_N)
            .add("minimal_N_doubled", rep.minimal_N_doubled)
            .add("violations", static_cast<std::uint64_t>(rep.violations.size()))
            .add("stable", rep.stable)
            .add("certified", rep.certified)
            .add("scanned", rep.scanned);
        for (const auto y : c.strip) {
            const auto t = leading_order(c.model, c.f, y);
            r.add(fmt::format("leading_y{}", y), t.form).add(fmt::format("leading_y{}_sign", y), t.sign());
            signs = signs && t.sign() < 0;
        }
        const bool ok = rep.certified && rep.stable && rep.violations.empty() && signs;
        r.add("pass", ok);
        text += r.render();
        o.pass = o.pass && ok;
        notes.push_back(fmt::format("{} N={}", c.label, rep.minimal_N));
    }
    o.detail = fmt::format("{}", fmt::join(notes, ", "));
    o.files["criterion_02.txt"] = text;
    return o;
}

// ---------------------------------------------------------------------------
// 3-5. Boundary confinement.

struct ConfinementSetup {
    int id;
    Model model;
    std::uint64_t runs = 200;
    std::uint64_t jumps = 100'000;
    std::function<bool(const ClassificationResult&)> accept;
    double threshold;
    std::string requirement;
};

Outcome confinement(const ConfinementSetup& setup, std::uint64_t master, unsigned workers)
{
    StopRule stop;
    stop.max_jumps = setup.jumps;
    const auto seeds = derive_seeds(master, setup.runs);
    const auto results = parallel_map(seeds.size(), workers, [&](std::size_t i) {
        const auto t = simulate_jump_chain(setup.model, {1, 1}, stop, seeds[i]);
        return classify(setup.model, t, 0.5);
    });
    CsvTable table({"seed", "major_axis", "kappa_observed", "oscillations", "visits_0", "visits_1",
                    "visits_2", "accepted"});
    std::uint64_t accepted = 0;
    std::map<std::int64_t, std::uint64_t> kappa_hist;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& c = results[i];
        const bool ok = setup.accept(c);
        accepted += ok;
        ++kappa_hist[c.kappa_observed];
        auto visits = [&](std::int64_t level) {
            const auto it = c.level_visit_counts.find(level);
            return std::to_string(it == c.level_visit_counts.end() ? 0 : it->second);
        };
        table.add_row({std::to_string(seeds[i]), std::to_string(c.major_axis),
                       std::to_string(c.kappa_observed), std::to_string(c.oscillations), visits(0),
                       visits(1), visits(2), ok ? "1" : "0"});
    }
    const double frac = static_cast<double>(accepted) / static_cast<double>(setup.runs);
    Outcome o;
    o.pass = frac >= setup.threshold;
    Record r("confinement");
    r.add("model", model_name(setup.model))
        .add("runs", setup.runs)
        .add("jumps", setup.jumps)
        .add("requirement", setup.requirement)
        .add("accepted_fraction", frac)
        .add("threshold", setup.threshold);
    for (const auto& [k, n] : kappa_hist) {
        r.add(fmt::format("kappa_{}", k), n);
    }
    o.detail = fmt::format("{:.1f}% of runs with {} (need {:.0f}%)", 100 * frac, setup.requirement,
                           100 * setup.threshold);
    o.files[fmt::format("criterion_{:02}.txt", setup.id)] = r.render();
    o.files[fmt::format("criterion_{:02}.csv", setup.id)] = table.render();
    return o;
}

std::uint64_t visits(const ClassificationResult& c, std::int64_t level)
{
    const auto it = c.level_visit_counts.find(level);
    return it == c.level_visit_counts.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// 6. Hitting the boundary.

Outcome hitting(std::uint64_t master, unsigned workers)
{
    struct Case {
        std::string label;
        Model model;
        State start;
        std::uint64_t runs;
        double threshold;
    };
    const std::vector<Case> cases{
        {"lotka_volterra", TypeIModel{}, {50, 50}, 500, 1.0},
        {"supercritical", TypeIIModel{1, 1, 2, 2, 1, 1, true}, {100, 100}, 200, 0.95},
        {"subcritical", TypeIIModel{1, 1, 1, 1, 2, 2, true}, {100, 100}, 200, 1.0},
    };
    StopRule caps;
    caps.max_jumps = 10'000'000;
    Outcome o;
    o.pass = true;
    std::string text;
    std::vector<std::string> notes;
    for (const auto& c : cases) {
        const auto seeds = derive_seeds(master, c.runs);
        const std::vector<State> starts{c.start};
        const auto h = hitting_stats(c.model, starts, seeds, caps, workers).front();
        const bool ok = h.hit_fraction >= c.threshold && h.failed == 0;
        o.pass = o.pass && ok;
        text += Record(c.label)
                    .add("start", c.start)
                    .add("runs", h.runs)
                    .add("hits", h.hits)
                    .add("censored", h.censored)
                    .add("failed", h.failed)
                    .add("hit_fraction", h.hit_fraction)
                    .add("mean_tau_jumps", h.mean_tau_jumps)
                    .add("mean_tau_time", h.mean_tau_time)
                    .add("pass", ok)
                    .render();
        notes.push_back(fmt::format("{} {}/{}", c.label, h.hits, h.runs));
    }
    o.detail = fmt::format("{}", fmt::join(notes, ", "));
    o.files["criterion_06.txt"] = text;
    return o;
}

// ---------------------------------------------------------------------------
// 7. Law of large numbers and the critical growth bound.

Outcome lln(std::uint64_t master, unsigned workers)
{
    // Supercritical part: qualifying runs (>= 10^4 jumps before the boundary)
    // are rare from (500,500), so many seeds are needed for a usable sample.
    constexpr std::uint64_t kRuns = 20000;
    constexpr std::uint64_t kMinQualifying = 10;
    const TypeIIModel sup{1, 1, 3, 2, 1, 1, true};
    const auto dsup = linear_diagnostics(sup);
    StopRule stop;
    stop.max_jumps = 1'000'000;
    stop.stop_on_boundary = true;
    const auto seeds = derive_seeds(master, kRuns);
    const auto fits = parallel_map(seeds.size(), workers, [&](std::size_t i) {
        const auto t = simulate_jump_chain(sup, {500, 500}, stop, seeds[i], Recording{true, 1, 0});
        return lln_check(t, dsup);
    });
    CsvTable table({"seed", "segment_length", "slope", "relative_gap"});
    std::uint64_t qualifying = 0, within = 0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i].inconclusive) {
            continue;
        }
        ++qualifying;
        within += fits[i].relative_gap <= 0.1;
        table.add_row({std::to_string(seeds[i]), std::to_string(fits[i].segment_length),
                       format_number(fits[i].slope), format_number(fits[i].relative_gap)});
    }
    const double sup_frac = qualifying ? static_cast<double>(within) / static_cast<double>(qualifying) : 0.0;
    const bool sup_ok = qualifying >= kMinQualifying && sup_frac >= 0.9;

    // Critical part: exponent of the stopped S at n = 10^5.
    constexpr std::uint64_t kCritRuns = 200;
    constexpr std::uint64_t kHorizon = 100'000;
    const TypeIIModel crit{1, 1, 2, 2, 1, 4, true};
    const auto dcrit = linear_diagnostics(crit);
    StopRule cstop;
    cstop.max_jumps = kHorizon;
    cstop.stop_on_boundary = true;
    const auto cseeds = derive_seeds(master, kCritRuns);
    const auto growth = parallel_map(cseeds.size(), workers, [&](std::size_t i) {
        const auto t = simulate_jump_chain(crit, {10, 10}, cstop, cseeds[i]);
        return stopped_growth_exponent(t, dcrit, kHorizon);
    });
    std::uint64_t small = 0;
    double max_exp = 0.0;
    for (const auto& g : growth) {
        small += g.exponent <= 0.6;
        max_exp = std::max(max_exp, g.exponent);
    }
    const double crit_frac = static_cast<double>(small) / static_cast<double>(kCritRuns);
    const bool crit_ok = crit_frac >= 0.9;

    Outcome o;
    o.pass = sup_ok && crit_ok;
    o.files["criterion_07.txt"] = Record("supercritical")
                                      .add("rho_tilde", dsup.rho_tilde)
                                      .add("runs", kRuns)
                                      .add("qualifying_runs", qualifying)
                                      .add("slope_within_10pct_fraction", sup_frac)
                                      .add("pass", sup_ok)
                                      .render() +
                                  Record("critical")
                                      .add("rho_tilde", dcrit.rho_tilde)
                                      .add("runs", kCritRuns)
                                      .add("horizon", kHorizon)
                                      .add("exponent_le_0.6_fraction", crit_frac)
                                      .add("max_exponent", max_exp)
                                      .add("pass", crit_ok)
                                      .render();
    o.files["criterion_07.csv"] = table.render();
    o.detail = fmt::format("supercritical {}/{} qualifying runs within 10%; critical {:.1f}% with exponent <= 0.6",
                           within, qualifying, 100 * crit_frac);
    return o;
}

// ---------------------------------------------------------------------------
// 8. Urn moments.

Outcome urn(std::uint64_t master, unsigned workers)
{
    const AuxUrnModel u{5, 1};
    const State init{1, 1};
    const auto rec = urn_moment_recursion(u, init, 1'000'000, 0, {100'000, 1'000'000});
    const bool rec_ok = rec.late_relative_change < 1e-3;

    constexpr std::size_t kRuns = 1000;
    const auto seeds = derive_seeds(master, kRuns);
    const auto samples = parallel_map(kRuns, workers, [&](std::size_t i) {
        const auto d = urn_simulate(u, init, 100'000, seeds[i], 50'000, false);
        return std::pair{d.path[1].scaled_diff, d.path[2].scaled_diff};
    });
    auto variance = [&](auto pick) {
        double mean = 0.0;
        for (const auto& s : samples) {
            mean += pick(s);
        }
        mean /= kRuns;
        double v = 0.0;
        for (const auto& s : samples) {
            v += (pick(s) - mean) * (pick(s) - mean);
        }
        return v / (kRuns - 1);
    };
    const double v_half = variance([](const auto& s) { return s.first; });
    const double v_full = variance([](const auto& s) { return s.second; });
    const double mc_change = std::abs(v_full - v_half) / v_half;
    const bool mc_ok = mc_change <= 0.1;

    Outcome o;
    o.pass = rec_ok && mc_ok;
    o.files["criterion_08.txt"] = Record("recursion")
                                      .add("rho", rec.rho)
                                      .add("scaled_second_moment_n1e6", rec.last.scaled_U2)
                                      .add("running_max_n1e6", rec.last.running_max)
                                      .add("late_relative_change", rec.late_relative_change)
                                      .add("pass", rec_ok)
                                      .render() +
                                  Record("monte_carlo")
                                      .add("runs", static_cast<std::uint64_t>(kRuns))
                                      .add("variance_n5e4", v_half)
                                      .add("variance_n1e5", v_full)
                                      .add("relative_change", mc_change)
                                      .add("pass", mc_ok)
                                      .render();
    o.detail = fmt::format("running max change {:.3g}% (need < 0.1%), MC variance change {:.3g}% (need <= 10%)",
                           100 * rec.late_relative_change, 100 * mc_change);
    return o;
}

// ---------------------------------------------------------------------------
// 9. Reuter series.

Outcome series(std::uint64_t, unsigned)
{
    const auto K = kDefaultSeriesTerms;
    const auto div = reuter_series(symmetric_linear_sequences(1, 1, 2, K), K);
    const auto conv = reuter_series(symmetric_linear_sequences(1, 2, 1, K), K);
    const auto ex2 = reuter_series(reuter_sequences(reuter_example2(1, 1, 1, 1, 1), K), K);
    const auto corral = reuter_series(reuter_sequences(as_reuter(TypeIIModel{1, 1, 0, 0, 1, 1, true}), K), K);

    Outcome o;
    o.pass = div.A.verdict == Verdict::Diverges && conv.A.verdict == Verdict::Converges &&
             ex2.A_tilde.verdict == Verdict::Converges && corral.A_tilde.verdict == Verdict::Undefined;
    o.files["criterion_09.txt"] = Record("series")
                                      .add("terms", static_cast<std::uint64_t>(K))
                                      .add("symmetric_alpha1_beta2_A", to_string(div.A.verdict))
                                      .add("symmetric_alpha2_beta1_A", to_string(conv.A.verdict))
                                      .add("example2_A_tilde", to_string(ex2.A_tilde.verdict))
                                      .add("ok_corral_A_tilde", to_string(corral.A_tilde.verdict))
                                      .add("ok_corral_note", corral.A_tilde.note)
                                      .render();
    o.detail = fmt::format("A {} / {}, A~ {} / {}", to_string(div.A.verdict), to_string(conv.A.verdict),
                           to_string(ex2.A_tilde.verdict), to_string(corral.A_tilde.verdict));
    return o;
}

std::vector<Criterion> criteria()
{
    std::vector<Criterion> out;
    out.push_back({1, "exact identities", identities});
    out.push_back({2, "Lyapunov certificates", certificates});
    out.push_back({3, "confinement at level 1 (alpha > 0)", [](std::uint64_t m, unsigned w) {
                       return confinement({3, TypeIIModel{1, 1, 2, 2, 1, 1, true}, 200, 100'000,
                                           [](const ClassificationResult& c) {
                                               return c.kappa_observed == 1 && c.oscillations >= 10;
                                           },
                                           0.95, "kappa=1 and >= 10 oscillations"},
                                          m, w);
                   }});
    out.push_back({4, "confinement at level 2 (alpha = 0)", [](std::uint64_t m, unsigned w) {
                       return confinement({4, TypeIIModel{1, 1, 0, 0, 1, 1, true}, 200, 100'000,
                                           [](const ClassificationResult& c) { return c.kappa_observed == 2; },
                                           0.90, "kappa=2"},
                                          m, w);
                   }});
    out.push_back({5, "Lotka-Volterra boundary effect", [](std::uint64_t m, unsigned w) {
                       return confinement({5, TypeIModel{}, 200, 100'000,
                                           [](const ClassificationResult& c) {
                                               return c.kappa_observed == 1 && visits(c, 0) >= 10 &&
                                                      visits(c, 1) >= 10;
                                           },
                                           0.95, "kappa=1 and >= 10 visits to 0 and 1"},
                                          m, w);
                   }});
    out.push_back({6, "hitting the boundary", hitting});
    out.push_back({7, "law of large numbers", lln});
    out.push_back({8, "urn moments", urn});
    out.push_back({9, "Reuter series", series});
    return out;
}

using FileSet = std::map<std::string, std::string>;

void write_all(const std::filesystem::path& dir, const FileSet& files)
{
    for (const auto& [name, content] : files) {
        write_atomic(dir / name, content);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite"};
    std::uint64_t master = 20240611;
    unsigned workers = 4;
    std::string out_dir = "acceptance_output";
    bool strict = false;
    std::vector<int> only;
    app.add_option("--seed", master, "master seed");
    app.add_option("--workers", workers, "worker threads for the second pass")->check(CLI::Range(1u, 256u));
    app.add_option("--out", out_dir, "directory for the evidence files");
    app.add_option("--only", only, "run only these criteria (10 is skipped)");
    app.add_flag("--strict", strict, "exit 1 when any criterion fails");
    CLI11_PARSE(app, argc, argv);

    const std::filesystem::path root(out_dir);
    const auto list = criteria();
    std::map<int, Outcome> first;
    FileSet files1, files2;
    bool all_pass = true;
    bool errors = false;

    for (const auto& c : list) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(master, 1);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
            errors = true;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << fmt::format("{} criterion {}: {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                                 o.detail, secs)
                  << std::flush;
        all_pass = all_pass && o.pass;
        files1.insert(o.files.begin(), o.files.end());
    }

    if (only.empty()) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::string> differing;
        bool ok = true;
        try {
            for (const auto& c : list) {
                auto o = c.run(master, workers);
                files2.insert(o.files.begin(), o.files.end());
            }
            write_all(root / "workers_1", files1);
            write_all(root / fmt::format("workers_{}", workers), files2);
            for (const auto& [name, content] : files1) {
                const auto a = read_file(root / "workers_1" / name);
                const auto b = read_file(root / fmt::format("workers_{}", workers) / name);
                if (a != b || a != content) {
                    differing.push_back(name);
                }
            }
            ok = differing.empty() && files1.size() == files2.size();
        } catch (const std::exception& e) {
            ok = false;
            errors = true;
            differing.push_back(std::string("error: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto detail = differing.empty()
                                ? fmt::format("{} files byte-identical with 1 and {} workers", files1.size(), workers)
                                : fmt::format("differences in {}", fmt::join(differing, ", "));
        std::cout << fmt::format("{} criterion 10: determinism: {} [{:.1f}s]\n", ok ? "PASS" : "FAIL", detail, secs);
        all_pass = all_pass && ok;
    }

    if (errors) {
        return 2;
    }
    return strict && !all_pass ? 1 : 0;
}
