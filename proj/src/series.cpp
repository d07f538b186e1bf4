#include "compproc/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace compproc {

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Diverges: return "diverges";
    case Verdict::Converges: return "converges";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Undefined: return "undefined";
    }
    return "unknown";
}

ReuterSequences reuter_sequences(const ReuterModel& m, std::size_t K)
{
    require_valid(m);
    ReuterSequences seq;
    seq.r.assign(K + 1, 0.0);
    seq.s.assign(K + 1, 0.0);
    seq.r_tilde.assign(K + 1, 0.0);
    seq.s_tilde.assign(K + 1, 0.0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= K; ++k) {
        double r_in = 0.0, s_in = inf, r_all = 0.0, s_all = inf;
        const auto kk = static_cast<std::int64_t>(k);
        for (std::int64_t x1 = 0; x1 <= kk; ++x1) {
            const State s{x1, kk - x1};
            const double birth = m.a(s) + m.b(s);
            // Death moves only act away from their axis.
            const double death = (s.x1 > 0 ? m.c(s) : 0.0) + (s.x2 > 0 ? m.d(s) : 0.0);
            r_all = std::max(r_all, birth);
            s_all = std::min(s_all, death);
            if (s.interior()) {
                r_in = std::max(r_in, birth);
                s_in = std::min(s_in, death);
            }
        }
        seq.r_tilde[k] = r_all;
        seq.s_tilde[k] = k >= 1 ? s_all : 0.0;
        if (k >= 2) {
            seq.r[k] = r_in;
            seq.s[k] = s_in;
        }
    }
    return seq;
}

ReuterSequences symmetric_linear_sequences(double lambda, double alpha, double beta, std::size_t K)
{
    ReuterSequences seq;
    seq.r.assign(K + 1, 0.0);
    seq.s.assign(K + 1, 0.0);
    seq.r_tilde.assign(K + 1, 0.0);
    seq.s_tilde.assign(K + 1, 0.0);
    // On the axes the only active death rate is beta times the other
    // coordinate, which is 0, so s_tilde stays 0.
    for (std::size_t k = 0; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        seq.r_tilde[k] = 2.0 * lambda + alpha * kd;
        if (k >= 2) {
            seq.r[k] = 2.0 * lambda + alpha * kd;
            seq.s[k] = beta * kd;
        }
    }
    return seq;
}

namespace {

/// Sums exp(log_terms) and classifies by the trailing term ratios.
SeriesSummary summarize_terms(const std::vector<double>& log_terms, const SeriesOptions& opt)
{
    SeriesSummary out;
    double sum = 0.0;
    for (const double lt : log_terms) {
        sum += std::exp(lt);
        out.partial_sums.push_back(sum);
    }
    out.last_term = std::exp(log_terms.back());
    if (std::isinf(log_terms.back())) {
        // A zero factor in the products: every later term vanishes.
        out.verdict = Verdict::Converges;
        out.note = "terms vanish after a zero rate";
        return out;
    }

    const std::size_t n = log_terms.size();
    const std::size_t w = std::min(opt.tail_window, n - 1);
    const double mean_log_ratio = (log_terms[n - 1] - log_terms[n - 1 - w]) / static_cast<double>(w);
    out.term_ratio_tail = std::exp(mean_log_ratio);

    if (out.term_ratio_tail > 1.0 + opt.margin) {
        out.verdict = Verdict::Diverges;
        out.relative_tail = std::numeric_limits<double>::infinity();
        return out;
    }
    if (out.term_ratio_tail < 1.0 - opt.margin) {
        const double q = out.term_ratio_tail;
        out.relative_tail = out.last_term * q / (1.0 - q) / sum;
        out.verdict = out.relative_tail < opt.tol ? Verdict::Converges : Verdict::Inconclusive;
        if (out.verdict == Verdict::Inconclusive) {
            out.note = "ratio below 1 but tail not yet below tolerance";
        }
        return out;
    }
    out.verdict = Verdict::Inconclusive;
    out.note = "term ratio within the margin of 1";
    return out;
}

}  // namespace

SeriesReport reuter_series(const ReuterSequences& seq, std::size_t K, const SeriesOptions& options)
{
    if (K < 10) {
        throw std::invalid_argument("series needs K >= 10");
    }
    if (seq.r.size() <= K || seq.s.size() <= K || seq.r_tilde.size() <= K ||
        seq.s_tilde.size() <= K) {
        throw std::invalid_argument("sequences shorter than K");
    }
    SeriesReport report;
    report.K = K;

    std::vector<double> log_a;
    double acc = 0.0;
    for (std::size_t k = 2; k <= K; ++k) {
        if (!(seq.r[k] > 0.0)) {
            throw std::invalid_argument("r_k must be positive for k >= 2");
        }
        acc += std::log(seq.s[k]) - std::log(seq.r[k]);
        log_a.push_back(acc);
    }
    report.A = summarize_terms(log_a, options);

    std::vector<double> log_at;
    double num = 0.0;  // ln(r~_1 ... r~_{k-1})
    double den = 0.0;  // ln(s~_1 ... s~_k)
    for (std::size_t k = 1; k <= K; ++k) {
        if (!(seq.s_tilde[k] > 0.0)) {
            report.A_tilde.verdict = Verdict::Undefined;
            report.A_tilde.note = "s_tilde_" + std::to_string(k) + " = 0";
            break;
        }
        if (k >= 2) {
            num += std::log(seq.r_tilde[k - 1]);
        }
        den += std::log(seq.s_tilde[k]);
        log_at.push_back(num - den);
    }
    if (report.A_tilde.verdict != Verdict::Undefined) {
        report.A_tilde = summarize_terms(log_at, options);
    }
    return report;
}

}  // namespace compproc
