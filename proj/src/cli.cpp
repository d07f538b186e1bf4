#include "compproc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

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

namespace compproc::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240611;
constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

std::string num(double v) { return format_number(v); }

State initial_state(const Config& c, std::int64_t x1, std::int64_t x2)
{
    const State s{c.get_int("x1", x1), c.get_int("x2", x2)};
    if (s.x1 < 0 || s.x2 < 0) {
        throw ConfigError("initial state must be nonnegative");
    }
    return s;
}

const TypeIIModel& require_type2(const Model& m, const char* command)
{
    const auto* p = std::get_if<TypeIIModel>(&m);
    if (!p) {
        throw ConfigError(std::string(command) + " needs type=II");
    }
    return *p;
}

StopRule stop_rule(const Config& c, const Model& model, std::uint64_t max_jumps, bool boundary)
{
    StopRule stop;
    stop.max_jumps = c.get_uint("max_jumps", max_jumps);
    stop.max_time = c.get_double("max_time", std::numeric_limits<double>::infinity());
    stop.stop_on_boundary = c.get_bool("stop_on_boundary", boundary);
    const auto y0 = c.get_string("stop_below_y0", "none");
    if (y0 == "auto") {
        const auto diag = linear_diagnostics(require_type2(model, "stop_below_y0=auto"));
        if (diag.swapped) {
            throw ConfigError("stop_below_y0=auto needs alpha1 >= alpha2");
        }
        stop.stop_below_y0 = diag.y0;
    } else if (y0 != "none") {
        std::int64_t level = 0;
        const auto [ptr, ec] = std::from_chars(y0.data(), y0.data() + y0.size(), level);
        if (ec != std::errc{} || ptr != y0.data() + y0.size() || level < 0) {
            throw ConfigError("key 'stop_below_y0': expected none, auto or a level >= 0");
        }
        stop.stop_below_y0 = level;
    }
    if (!stop.bounded()) {
        throw ConfigError("max_jumps or max_time must be finite");
    }
    return stop;
}

Recording recording(const Config& c, bool full_default)
{
    Recording r;
    r.full_log = c.get_bool("full_log", full_default);
    r.decimation = c.get_uint("decimation", 1000);
    r.strip_level = c.get_int("strip_level", 8);
    if (r.decimation == 0) {
        throw ConfigError("decimation must be positive");
    }
    return r;
}

std::vector<std::uint64_t> seed_list(const Config& c, std::uint64_t runs_default)
{
    const auto master = c.get_uint("seed", kDefaultSeed);
    const auto runs = c.get_uint("runs", runs_default);
    return derive_seeds(master, runs);
}

template <class R>
struct Attempt {
    std::optional<R> value;
    std::string error;
};

/// Runs fn(seed) for every seed on the worker pool, collecting errors per run.
template <class Fn>
auto attempt_all(const std::vector<std::uint64_t>& seeds, unsigned workers, Fn fn)
{
    using R = decltype(fn(std::uint64_t{}));
    return parallel_map(seeds.size(), workers, [&](std::size_t i) {
        Attempt<R> a;
        try {
            a.value = fn(seeds[i]);
        } catch (const std::exception& e) {
            a.error = e.what();
        }
        return a;
    });
}

// ---------------------------------------------------------------------------

Outputs cmd_simulate(const Config& c, unsigned workers)
{
    const auto model = build_model(c);
    const auto init = initial_state(c, 1, 1);
    const auto stop = stop_rule(c, model, 100000, false);
    const bool jump_chain = c.get_bool("jump_chain", false);
    const auto rec = recording(c, true);
    const bool csv = c.get_bool("csv", true);
    const auto seeds = seed_list(c, 1);

    const auto runs = attempt_all(seeds, workers, [&](std::uint64_t seed) {
        return jump_chain ? simulate_jump_chain(model, init, stop, seed, rec)
                          : simulate(model, init, stop, seed, rec);
    });

    Outputs out;
    std::string body = Record("simulate")
                           .add("model", model_name(model))
                           .add("initial", init)
                           .add("runs", static_cast<std::uint64_t>(seeds.size()))
                           .add("jump_chain", jump_chain)
                           .render();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        Record r("run");
        r.add("index", static_cast<std::uint64_t>(i)).add("seed", seeds[i]);
        if (!runs[i].value) {
            r.add("error", runs[i].error);
            out.ok = false;
        } else {
            const auto& t = *runs[i].value;
            const auto s = summarize(t);
            r.add("stopped_by", to_string(s.stopped_by))
                .add("jumps", s.jumps)
                .add("final_state", s.final_state)
                .add("final_time", s.final_time)
                .add("tau_jumps", s.tau_jumps)
                .add("tau_time", s.tau_time);
            if (csv) {
                CsvTable table({"n", "time", "x1", "x2"});
                table.add_row({"0", "0", std::to_string(t.initial.x1), std::to_string(t.initial.x2)});
                for (const auto& e : t.events) {
                    table.add_row({std::to_string(e.n), num(e.time), std::to_string(e.state.x1),
                                   std::to_string(e.state.x2)});
                }
                out.files[fmt::format("trajectory_{}.csv", i)] = table.render();
            }
        }
        body += r.render();
    }
    out.files["simulate.txt"] = body;
    out.summary = body;
    return out;
}

Outputs cmd_classify(const Config& c, unsigned workers)
{
    const auto model = build_model(c);
    const auto init = initial_state(c, 1, 1);
    const auto stop = stop_rule(c, model, 100000, false);
    const bool jump_chain = c.get_bool("jump_chain", true);
    auto rec = recording(c, false);
    const double burn_in = c.get_double("burn_in", 0.5);
    const double target = c.get_double("confined_target", 0.95);
    const bool csv = c.get_bool("csv", true);
    const auto seeds = seed_list(c, 200);

    const auto results = attempt_all(seeds, workers, [&](std::uint64_t seed) {
        const auto t = jump_chain ? simulate_jump_chain(model, init, stop, seed, rec)
                                  : simulate(model, init, stop, seed, rec);
        return classify(model, t, burn_in);
    });

    Outputs out;
    std::string runs_text;
    CsvTable table({"seed", "kappa_observed", "kappa_expected", "confined", "oscillations",
                    "visits_0", "visits_1", "visits_2", "escape_slope"});
    std::uint64_t ok = 0, confined = 0, at_expected = 0, osc10 = 0;
    std::map<std::int64_t, std::uint64_t> kappa_hist;
    for (std::size_t i = 0; i < results.size(); ++i) {
        Record r("run");
        r.add("seed", seeds[i]);
        if (!results[i].value) {
            r.add("error", results[i].error);
            out.ok = false;
            runs_text += r.render();
            continue;
        }
        const auto& v = *results[i].value;
        ++ok;
        confined += v.confined;
        at_expected += v.kappa_observed == v.kappa_expected;
        osc10 += v.oscillations >= 10;
        ++kappa_hist[v.kappa_observed];
        auto visits = [&](std::int64_t level) {
            const auto it = v.level_visit_counts.find(level);
            return it == v.level_visit_counts.end() ? std::uint64_t{0} : it->second;
        };
        r.add("major_axis", v.major_axis)
            .add("kappa_observed", v.kappa_observed)
            .add("kappa_expected", v.kappa_expected)
            .add("confined", v.confined)
            .add("oscillations", v.oscillations)
            .add("visits_0", visits(0))
            .add("visits_1", visits(1))
            .add("visits_2", visits(2))
            .add("escape_slope", v.escape_slope);
        runs_text += r.render();
        table.add_row({std::to_string(seeds[i]), std::to_string(v.kappa_observed),
                       std::to_string(v.kappa_expected), v.confined ? "1" : "0",
                       std::to_string(v.oscillations), std::to_string(visits(0)),
                       std::to_string(visits(1)), std::to_string(visits(2)), num(v.escape_slope)});
    }
    auto frac = [&](std::uint64_t k) {
        return ok ? static_cast<double>(k) / static_cast<double>(ok) : 0.0;
    };
    Record agg("aggregate");
    agg.add("model", model_name(model))
        .add("initial", init)
        .add("runs", static_cast<std::uint64_t>(seeds.size()))
        .add("completed", ok)
        .add("confined_fraction", frac(confined))
        .add("kappa_expected_fraction", frac(at_expected))
        .add("oscillations_ge_10_fraction", frac(osc10))
        .add("confined_target", target)
        .add("meets_target", frac(confined) >= target);
    for (const auto& [k, n] : kappa_hist) {
        agg.add(fmt::format("kappa_{}_runs", k), n);
    }
    out.summary = agg.render();
    out.files["classify.txt"] = out.summary + runs_text;
    if (csv) {
        out.files["classify.csv"] = table.render();
    }
    return out;
}

Outputs cmd_hitting(const Config& c, unsigned workers)
{
    const auto model = build_model(c);
    const auto starts = c.get_states("starts", {State{50, 50}});
    StopRule caps;
    caps.max_jumps = c.get_uint("max_jumps", 10'000'000);
    caps.max_time = c.get_double("max_time", std::numeric_limits<double>::infinity());
    const auto seeds = seed_list(c, 200);
    const bool csv = c.get_bool("csv", true);
    const auto stats = hitting_stats(model, starts, seeds, caps, workers);

    Outputs out;
    CsvTable table({"x1", "x2", "runs", "hits", "censored", "failed", "hit_fraction",
                    "mean_tau_jumps", "se_tau_jumps", "mean_tau_time", "se_tau_time"});
    std::string body;
    for (const auto& h : stats) {
        body += Record("start")
                    .add("model", model_name(model))
                    .add("start", h.start)
                    .add("runs", h.runs)
                    .add("hits", h.hits)
                    .add("censored", h.censored)
                    .add("failed", h.failed)
                    .add("hit_fraction", h.hit_fraction)
                    .add("mean_tau_jumps", h.mean_tau_jumps)
                    .add("se_tau_jumps", h.se_tau_jumps)
                    .add("mean_tau_time", h.mean_tau_time)
                    .add("se_tau_time", h.se_tau_time)
                    .render();
        table.add_row({std::to_string(h.start.x1), std::to_string(h.start.x2),
                       std::to_string(h.runs), std::to_string(h.hits), std::to_string(h.censored),
                       std::to_string(h.failed), num(h.hit_fraction), num(h.mean_tau_jumps),
                       num(h.se_tau_jumps), num(h.mean_tau_time), num(h.se_tau_time)});
        out.ok = out.ok && h.failed == 0;
    }
    out.summary = body;
    out.files["hitting.txt"] = body;
    if (csv) {
        out.files["hitting.csv"] = table.render();
    }
    return out;
}

Outputs cmd_lln(const Config& c, unsigned workers)
{
    const auto model = build_model(c);
    const auto& m2 = require_type2(model, "lln");
    const auto diag = linear_diagnostics(m2);
    const auto init = initial_state(c, 500, 500);
    const auto stop = stop_rule(c, model, 1'000'000, true);
    const auto min_segment = c.get_uint("min_segment", kMinLlnSegment);
    const bool csv = c.get_bool("csv", true);
    const auto seeds = seed_list(c, 200);
    const Recording full{true, 1, 0};

    struct RunResult {
        LlnResult lln;
        GrowthExponent growth;
        bool censored_at_cap;
    };
    const auto results = attempt_all(seeds, workers, [&](std::uint64_t seed) {
        const auto t = simulate_jump_chain(model, init, stop, seed, full);
        RunResult r{lln_check(t, diag, min_segment), {}, !t.hit()};
        const auto horizon = stop.max_jumps == kNoCap ? std::max<std::uint64_t>(t.jumps, 2)
                                                      : stop.max_jumps;
        r.growth = stopped_growth_exponent(t, diag, std::max<std::uint64_t>(horizon, 2));
        return r;
    });

    Outputs out;
    CsvTable table({"seed", "segment_length", "hit", "inconclusive", "slope", "relative_gap",
                    "liminf_T_proxy", "S_final", "growth_exponent"});
    std::string runs_text;
    std::uint64_t qualifying = 0, within = 0, completed = 0, growth_ok = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        Record r("run");
        r.add("seed", seeds[i]);
        if (!results[i].value) {
            r.add("error", results[i].error);
            out.ok = false;
            runs_text += r.render();
            continue;
        }
        const auto& v = *results[i].value;
        ++completed;
        if (!v.lln.inconclusive) {
            ++qualifying;
            within += v.lln.relative_gap <= 0.1;
        }
        growth_ok += v.growth.exponent <= 0.6;
        r.add("segment_length", v.lln.segment_length)
            .add("hit", v.lln.hit)
            .add("inconclusive", v.lln.inconclusive)
            .add("slope", v.lln.slope)
            .add("relative_gap", v.lln.relative_gap)
            .add("liminf_T_proxy", v.lln.liminf_T_proxy)
            .add("growth_n", v.growth.n)
            .add("S_final", v.growth.S)
            .add("growth_exponent", v.growth.exponent);
        runs_text += r.render();
        table.add_row({std::to_string(seeds[i]), std::to_string(v.lln.segment_length),
                       v.lln.hit ? "1" : "0", v.lln.inconclusive ? "1" : "0", num(v.lln.slope),
                       num(v.lln.relative_gap), num(v.lln.liminf_T_proxy), num(v.growth.S),
                       num(v.growth.exponent)});
    }
    auto frac = [](std::uint64_t k, std::uint64_t n) {
        return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
    };
    out.summary = Record("aggregate")
                      .add("model", model_name(model))
                      .add("initial", init)
                      .add("regime", to_string(diag.regime))
                      .add("rho_tilde", diag.rho_tilde)
                      .add("runs", static_cast<std::uint64_t>(seeds.size()))
                      .add("completed", completed)
                      .add("qualifying_runs", qualifying)
                      .add("slope_within_10pct_fraction", frac(within, qualifying))
                      .add("growth_exponent_le_0.6_fraction", frac(growth_ok, completed))
                      .render();
    out.files["lln.txt"] = out.summary + runs_text;
    if (csv) {
        out.files["lln.csv"] = table.render();
    }
    return out;
}

Outputs cmd_urn(const Config& c, unsigned workers)
{
    const auto model = build_model(c);
    const auto* u = std::get_if<AuxUrnModel>(&model);
    if (!u) {
        throw ConfigError("urn needs type=urn");
    }
    const auto init = initial_state(c, 1, 1);
    if (init.x1 + init.x2 == 0) {
        throw ConfigError("urn needs a nonempty initial state");
    }
    const auto n_steps = c.get_uint("n_steps", 100000);
    const auto n_max = c.get_uint("n_max", 1'000'000);
    const auto stride = c.get_uint("record_stride", 1000);
    const bool csv = c.get_bool("csv", true);
    const auto seeds = seed_list(c, 1000);
    if (n_steps < 2 || stride == 0) {
        throw ConfigError("urn needs n_steps >= 2 and record_stride > 0");
    }
    if (n_max > kMaxMomentSteps) {
        throw ConfigError(fmt::format("n_max must be <= {}", kMaxMomentSteps));
    }

    const auto moments = urn_moment_recursion(*u, init, n_max, stride, {n_max / 10});
    const auto mid = n_steps / 2;
    const auto paths = attempt_all(seeds, workers, [&](std::uint64_t seed) {
        return urn_simulate(*u, init, n_steps, seed, mid, false);
    });
    const auto first = urn_simulate(*u, init, std::min<std::uint64_t>(n_steps, 1000), seeds.empty() ? 0 : seeds[0], 1, true);

    Outputs out;
    std::vector<double> at_mid, at_end;
    std::vector<double> u2_end;
    for (const auto& p : paths) {
        if (!p.value) {
            out.ok = false;
            continue;
        }
        for (const auto& s : p.value->path) {
            if (s.n == mid) {
                at_mid.push_back(s.scaled_diff);
            }
        }
        at_end.push_back(p.value->last.scaled_diff);
        u2_end.push_back(static_cast<double>(p.value->last.U) * static_cast<double>(p.value->last.U));
    }
    auto sample_var = [](const std::vector<double>& v) {
        if (v.size() < 2) {
            return 0.0;
        }
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (const double x : v) {
            ss += (x - mean) * (x - mean);
        }
        return ss / static_cast<double>(v.size() - 1);
    };
    const double var_mid = sample_var(at_mid);
    const double var_end = sample_var(at_end);
    double late_running_max = 0.0;
    for (const auto& p : moments.points) {
        if (p.n == n_max / 10) {
            late_running_max = p.running_max;
        }
    }

    out.summary = Record("urn")
                      .add("alpha", u->alpha)
                      .add("beta", u->beta)
                      .add("rho", u->rho())
                      .add("initial", init)
                      .render() +
                  Record("moments")
                      .add("n_max", n_max)
                      .add("running_max_at_n_max_over_10", late_running_max)
                      .add("running_max_at_n_max", moments.last.running_max)
                      .add("relative_change", moments.late_relative_change)
                      .add("bounded", moments.bounded)
                      .add("mean_U_at_n_max", moments.last.mean_U)
                      .add("mean_U2_at_n_max", moments.last.mean_U2)
                      .render() +
                  Record("monte_carlo")
                      .add("runs", static_cast<std::uint64_t>(seeds.size()))
                      .add("n_mid", mid)
                      .add("n_end", n_steps)
                      .add("scaled_variance_mid", var_mid)
                      .add("scaled_variance_end", var_end)
                      .add("relative_change",
                           var_mid > 0.0 ? std::abs(var_end - var_mid) / var_mid : 0.0)
                      .add("mean_U2_end", u2_end.empty() ? 0.0
                                                         : std::accumulate(u2_end.begin(),
                                                                           u2_end.end(), 0.0) /
                                                               static_cast<double>(u2_end.size()))
                      .render() +
                  Record("martingale")
                      .add("steps_checked", first.last.n)
                      .add("max_relative_residual", first.max_martingale_residual)
                      .render();
    out.files["urn.txt"] = out.summary;
    if (csv) {
        CsvTable path({"n", "S_n", "U_n", "Z_n"});
        for (const auto& s : first.path) {
            path.add_row({std::to_string(s.n), std::to_string(s.S), std::to_string(s.U), num(s.Z)});
        }
        out.files["urn_path.csv"] = path.render();
        CsvTable mt({"n", "mean_U", "mean_U2", "scaled_U2", "running_max"});
        for (const auto& p : moments.points) {
            mt.add_row({std::to_string(p.n), num(p.mean_U), num(p.mean_U2), num(p.scaled_U2),
                        num(p.running_max)});
        }
        out.files["urn_moments.csv"] = mt.render();
    }
    return out;
}

std::string summary_record(const std::string& name, const SeriesSummary& s)
{
    Record r(name);
    r.add("verdict", to_string(s.verdict));
    if (!s.partial_sums.empty()) {
        r.add("partial_sum", s.partial_sums.back())
            .add("last_term", s.last_term)
            .add("term_ratio_tail", s.term_ratio_tail)
            .add("relative_tail", s.relative_tail);
    }
    if (!s.note.empty()) {
        r.add("note", s.note);
    }
    return r.render();
}

Outputs cmd_series(const Config& c, unsigned /*workers*/)
{
    const auto model = build_model(c);
    const auto K = static_cast<std::size_t>(c.get_uint("terms", kDefaultSeriesTerms));
    SeriesOptions opt;
    opt.margin = c.get_double("margin", opt.margin);
    opt.tol = c.get_double("tol", opt.tol);
    const bool csv = c.get_bool("csv", true);
    if (K < 10) {
        throw ConfigError("terms must be >= 10");
    }

    ReuterModel reuter;
    if (const auto* m1 = std::get_if<TypeIModel>(&model)) {
        reuter = as_reuter(*m1);
    } else if (const auto* m2 = std::get_if<TypeIIModel>(&model)) {
        reuter = as_reuter(*m2);
    } else if (const auto* r = std::get_if<ReuterModel>(&model)) {
        reuter = *r;
    } else {
        throw ConfigError("series needs type I, II or example2");
    }
    const auto seq = reuter_sequences(reuter, K);
    const auto rep = reuter_series(seq, K, opt);

    Outputs out;
    out.summary = Record("series").add("model", model_name(model)).add("terms", static_cast<std::uint64_t>(K)).render() +
                  summary_record("A", rep.A) + summary_record("A_tilde", rep.A_tilde);
    out.files["series.txt"] = out.summary;
    if (csv) {
        CsvTable t({"k", "r_k", "s_k", "r_tilde_k", "s_tilde_k", "A_partial", "A_tilde_partial"});
        for (std::size_t k = 1; k <= K; ++k) {
            const std::string a = k >= 2 && k - 2 < rep.A.partial_sums.size()
                                      ? num(rep.A.partial_sums[k - 2])
                                      : "";
            const std::string at = k - 1 < rep.A_tilde.partial_sums.size()
                                       ? num(rep.A_tilde.partial_sums[k - 1])
                                       : "";
            t.add_row({std::to_string(k), num(seq.r[k]), num(seq.s[k]), num(seq.r_tilde[k]),
                       num(seq.s_tilde[k]), a, at});
        }
        out.files["series.csv"] = t.render();
    }
    return out;
}

Outputs cmd_lyapunov(const Config& c, unsigned workers)
{
    const auto model = build_model(c);
    bool log_default = false;
    if (const auto* m2 = std::get_if<TypeIIModel>(&model)) {
        log_default = m2->alpha1 == 0.0;
    } else if (!std::holds_alternative<TypeIModel>(model)) {
        throw ConfigError("lyapunov needs type I or II");
    }
    const auto kind = c.get_string("function", log_default ? "log" : "power");
    LyapunovFunction f;
    std::vector<std::string> window_violations;
    if (kind == "power") {
        PowerLyapunov p{c.get_double("nu", 0.3), c.get_double("mu", 0.6)};
        window_violations = check_parameter_window(p, model);
        f = p;
    } else if (kind == "log") {
        const auto& m2 = require_type2(model, "function=log");
        f = LogLyapunov{m2.lambda1, m2.lambda2};
    } else {
        throw ConfigError("key 'function': expected power or log, got '" + kind + "'");
    }
    const auto strip = c.get_int_list("strip", kind == "log" ? std::vector<std::int64_t>{0, 1, 2}
                                                             : std::vector<std::int64_t>{0, 1});
    for (const auto y : strip) {
        if (y < 0) {
            throw ConfigError("strip levels must be nonnegative");
        }
    }
    const auto x_hi = c.get_int("x_hi", 1'000'000);
    CertifyOptions opt;
    opt.workers = workers;
    opt.record_samples = c.get_bool("csv", true);
    opt.sample_stride = c.get_int("sample_stride", 1000);
    if (x_hi < 2 || opt.sample_stride <= 0) {
        throw ConfigError("x_hi must be >= 2 and sample_stride > 0");
    }

    const auto rep = certify(model, f, strip, x_hi, opt);
    Outputs out;
    Record cert("certificate");
    cert.add("model", model_name(model))
        .add("function", rep.function_id)
        .add("x_lo", rep.x_lo)
        .add("x_hi", rep.x_hi);
    std::string strip_text;
    for (std::size_t i = 0; i < rep.strip.size(); ++i) {
        strip_text += (i ? "," : "") + std::to_string(rep.strip[i]);
    }
    cert.add("strip", strip_text)
        .add("minimal_N", rep.minimal_N)
        .add("minimal_N_doubled", rep.minimal_N_doubled)
        .add("violations_above_N", static_cast<std::uint64_t>(rep.violations.size()))
        .add("stable", rep.stable)
        .add("certified", rep.certified)
        .add("scanned", rep.scanned)
        .add("skipped", static_cast<std::uint64_t>(rep.skipped.size()));
    for (const auto& s : rep.skipped) {
        cert.add("skipped_state", s);
    }
    for (const auto& w : window_violations) {
        cert.add("parameter_window", w);
    }
    std::string body = cert.render();
    bool leading_ok = true;
    for (const auto y : strip) {
        Record lr(fmt::format("leading_order y={}", y));
        try {
            const auto t = leading_order(model, f, y);
            lr.add("form", t.form)
                .add("coefficient", t.coefficient)
                .add("x_exponent", t.x_exponent)
                .add("log_exponent", t.log_exponent)
                .add("sign", t.sign())
                .add("dominant", t.dominant);
            if (!t.note.empty()) {
                lr.add("note", t.note);
            }
            leading_ok = leading_ok && t.sign() < 0 && t.dominant;
        } catch (const std::invalid_argument& e) {
            lr.add("error", e.what());
            leading_ok = false;
        }
        body += lr.render();
    }
    if (std::holds_alternative<TypeIModel>(model)) {
        const auto side = c.get_int("window", 200);
        const double eps = c.get_double("drift_epsilon", 1.0);
        const auto start = initial_state(c, 50, 50);
        const ScanWindow win{side, side};
        Record hb("corner_hitting_bound");
        hb.add("drift_epsilon", eps).add("window", side).add("start", start);
        if (const auto C = corner_drift_threshold(model, eps, win)) {
            const TestFunction sum = [](const State& s) {
                return static_cast<double>(s.x1 + s.x2);
            };
            const auto b = expected_hitting_bound(model, sum, corner_region(*C), eps, start, win);
            hb.add("C", *C).add("verified", b.verified).add("checked", b.checked).add("bound", b.bound);
            if (b.violation) {
                hb.add("violation_state", b.violation->state).add("violation_value", b.violation->value);
            }
        } else {
            hb.add("C", "none");
        }
        body += hb.render();
    }
    out.ok = rep.certified && rep.stable && leading_ok && window_violations.empty();
    body += Record("status").add("ok", out.ok).render();
    out.summary = body;
    out.files["lyapunov.txt"] = body;
    if (opt.record_samples) {
        CsvTable t({"x", "y", "Gf"});
        for (const auto& s : rep.samples) {
            t.add_row({std::to_string(s.state.x1), std::to_string(s.state.x2), num(s.value)});
        }
        out.files["lyapunov.csv"] = t.render();
    }
    return out;
}

Outputs cmd_diagnostics(const Config& c, unsigned /*workers*/)
{
    const auto model = build_model(c);
    const auto diag = linear_diagnostics(require_type2(model, "diagnostics"));
    const auto s = initial_state(c, 1, 1);
    Record d("diagnostics");
    d.add("model", model_name(model))
        .add("swapped", diag.swapped)
        .add("r", diag.r)
        .add("D", diag.D)
        .add("d", diag.d)
        .add("rho_tilde", diag.rho_tilde)
        .add("regime", to_string(diag.regime))
        .add("k", diag.k)
        .add("l", diag.l)
        .add("Q1", diag.Q1)
        .add("Q3", diag.Q3)
        .add("cubic_coeff", diag.cubic_coeff)
        .add("y0", diag.y0);
    const auto f = functionals(diag, s);
    Record at("functionals");
    at.add("state", s).add("R", f.R).add("S", f.S).add("T", f.T).add("U", f.U);
    if (s.interior()) {
        const auto u = un_squared_one_step(diag, s);
        at.add("E_U2_next", u.lhs)
            .add("rhs_main", u.rhs_main)
            .add("rhs_remainder", u.rhs_remainder)
            .add("remainder_positive", u.remainder_positive);
    }
    Outputs out;
    out.summary = d.render() + at.render();
    out.files["diagnostics.txt"] = out.summary;
    return out;
}

using Handler = Outputs (*)(const Config&, unsigned);

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> table{
        {"simulate", cmd_simulate},   {"classify", cmd_classify}, {"hitting", cmd_hitting},
        {"lln", cmd_lln},             {"urn", cmd_urn},           {"series", cmd_series},
        {"lyapunov", cmd_lyapunov},   {"diagnostics", cmd_diagnostics},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"simulate", "classify", "hitting", "lln",
                                                "urn",      "series",   "lyapunov", "diagnostics"};
    return names;
}

Outputs execute(const std::string& command, const Config& config, unsigned workers)
{
    const auto it = handlers().find(command);
    if (it == handlers().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    auto out = it->second(config, std::max(1u, workers));
    const auto header = file_header(config, command);
    for (auto& [name, content] : out.files) {
        content = header + content;
    }
    return out;
}

int run(const Options& options, std::ostream& out, std::ostream& err)
{
    Outputs result;
    try {
        Config config = options.config ? Config::load(*options.config) : Config{};
        for (const auto& o : options.overrides) {
            config.set(std::string_view(o));
        }
        if (options.seed) {
            config.set("seed", std::to_string(*options.seed));
        }
        result = execute(options.command, config, options.workers);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    try {
        for (const auto& [name, content] : result.files) {
            write_atomic(options.out_dir / name, content);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    out << result.summary;
    return result.ok ? kExitOk : kExitFailed;
}

int main(int argc, char** argv)
{
    CLI::App app{"Simulation and drift certification for two-dimensional competition processes"};
    app.require_subcommand(1);
    Options options;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "key=value configuration file");
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--workers", options.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", options.overrides, "key=value override, repeatable");

    const std::map<std::string, std::string> help{
        {"simulate", "simulate trajectories and export them as CSV"},
        {"classify", "boundary classification of long runs"},
        {"hitting", "Monte Carlo hitting statistics of the boundary"},
        {"lln", "growth of the drift functional S along the jump chain"},
        {"urn", "auxiliary urn: moment recursion, martingale and Monte Carlo"},
        {"series", "partial sums and verdicts of the Reuter series"},
        {"lyapunov", "drift certificate of a strip Lyapunov function"},
        {"diagnostics", "derived constants of a type II model"},
    };
    for (const auto& name : commands()) {
        app.add_subcommand(name, help.at(name))->fallthrough();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    }
    options.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
        options.config = config_path;
    }
    if (seed_opt->count() > 0) {
        options.seed = seed;
    }
    options.out_dir = out_dir;
    return run(options, std::cout, std::cerr);
}

}  // namespace compproc::cli
