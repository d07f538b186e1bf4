#include "compproc/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include <fmt/format.h>

#include "compproc/sim.hpp"

namespace compproc {

double PowerLyapunov::operator()(const State& s) const
{
    if (s.x2 >= 2) {
        return 1.0;
    }
    if (s.x1 < 1) {
        throw DomainError("power Lyapunov function undefined at " + to_string(s));
    }
    const double x = static_cast<double>(s.x1);
    if (s.x2 == 1) {
        return std::pow(x, -nu);
    }
    return std::pow(x, -nu) - std::pow(x, -mu);
}

double LogLyapunov::operator()(const State& s) const
{
    if (s.x2 >= 3) {
        return 1.0;
    }
    if (s.x1 < 2) {
        throw DomainError("log Lyapunov function undefined at " + to_string(s));
    }
    const double x = static_cast<double>(s.x1);
    const double l = std::log(x);
    const double l2 = l * l;
    const double l3 = l2 * l;
    switch (s.x2) {
    case 2: return 1.0 / l;
    case 1: return 1.0 / l - 1.0 / l3;
    default: return 1.0 / l - 1.0 / l3 - (lambda1 / lambda2) / (x * l2) + 1.0 / (x * l3);
    }
}

std::string function_id(const LyapunovFunction& f)
{
    return std::visit(
        [](const auto& g) -> std::string {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, PowerLyapunov>) {
                return fmt::format("power(nu={},mu={})", g.nu, g.mu);
            } else {
                return fmt::format("log(lambda1={},lambda2={})", g.lambda1, g.lambda2);
            }
        },
        f);
}

std::int64_t scan_start(const LyapunovFunction& f)
{
    return std::holds_alternative<PowerLyapunov>(f) ? 1 : 2;
}

TestFunction as_test_function(const LyapunovFunction& f)
{
    return std::visit([](const auto& g) -> TestFunction { return g; }, f);
}

std::vector<std::string> check_parameter_window(const PowerLyapunov& f, const Model& model)
{
    std::vector<std::string> out;
    if (!(f.nu > 0.0 && f.nu < f.mu)) {
        out.emplace_back("0 < nu < mu required");
    }
    if (const auto* m = std::get_if<TypeIModel>(&model)) {
        const double bound = std::min(m->g1.index(), m->g2.index());
        if (!(f.mu < bound)) {
            out.push_back(fmt::format("mu < min(rho1, rho2) = {} required", bound));
        }
    } else if (const auto* m2 = std::get_if<TypeIIModel>(&model)) {
        if (!(f.mu < 1.0)) {
            out.emplace_back("mu < 1 required");
        }
        if (!(m2->alpha1 > 0.0)) {
            out.emplace_back("power function needs alpha1 > 0 (use the log function)");
        }
    } else {
        out.emplace_back("power function applies to type I and type II models only");
    }
    return out;
}

double apply_generator(const Model& model, const TestFunction& f, const State& s)
{
    auto eval = [&f](const State& at) {
        double v = 0.0;
        try {
            v = f(at);
        } catch (const DomainError&) {
            throw DomainError("test function undefined at " + to_string(at));
        }
        if (!std::isfinite(v)) {
            throw DomainError("test function not finite at " + to_string(at));
        }
        return v;
    };
    const auto list = enumerate_transitions(model, s);
    const double here = eval(s);
    double sum = 0.0;
    for (const auto& t : list) {
        sum += t.rate * (eval(t.target) - here);
    }
    return sum;
}

namespace {

constexpr std::size_t kMaxListedViolations = 1000;

struct ScanPart {
    std::optional<std::int64_t> last_violation;
    std::vector<GeneratorSample> violations;
    std::vector<State> skipped;
    std::vector<GeneratorSample> samples;
    std::uint64_t scanned = 0;
};

ScanPart scan_range(const Model& model, const TestFunction& f, std::span<const std::int64_t> strip,
                    std::int64_t lo, std::int64_t hi, const CertifyOptions& options)
{
    ScanPart part;
    for (std::int64_t x = lo; x <= hi; ++x) {
        for (const auto y : strip) {
            const State s{x, y};
            double g = 0.0;
            try {
                g = apply_generator(model, f, s);
            } catch (const DomainError&) {
                part.skipped.push_back(s);
                continue;
            }
            ++part.scanned;
            if (g > 0.0) {
                part.last_violation = x;
                if (part.violations.size() < kMaxListedViolations) {
                    part.violations.push_back({s, g});
                }
            }
            if (options.record_samples && (x <= 100 || x % options.sample_stride == 0)) {
                part.samples.push_back({s, g});
            }
        }
    }
    return part;
}

/// Splits [lo, hi] into fixed chunks so the merged result does not depend on
/// the worker count.
ScanPart scan(const Model& model, const TestFunction& f, std::span<const std::int64_t> strip,
              std::int64_t lo, std::int64_t hi, const CertifyOptions& options)
{
    ScanPart merged;
    if (hi < lo) {
        return merged;
    }
    constexpr std::int64_t kChunks = 64;
    const std::int64_t width = std::max<std::int64_t>(1, (hi - lo + kChunks) / kChunks);
    const auto n_chunks = static_cast<std::size_t>((hi - lo) / width + 1);
    auto parts = parallel_map(n_chunks, options.workers, [&](std::size_t i) {
        const std::int64_t a = lo + static_cast<std::int64_t>(i) * width;
        const std::int64_t b = std::min(hi, a + width - 1);
        return scan_range(model, f, strip, a, b, options);
    });
    for (auto& p : parts) {
        if (p.last_violation) {
            merged.last_violation = p.last_violation;
        }
        for (auto& v : p.violations) {
            if (merged.violations.size() < kMaxListedViolations) {
                merged.violations.push_back(v);
            }
        }
        merged.skipped.insert(merged.skipped.end(), p.skipped.begin(), p.skipped.end());
        merged.samples.insert(merged.samples.end(), p.samples.begin(), p.samples.end());
        merged.scanned += p.scanned;
    }
    return merged;
}

}  // namespace

CertificateReport certify(const Model& model, const TestFunction& f, const std::string& id,
                          std::span<const std::int64_t> strip, std::int64_t x_hi,
                          const CertifyOptions& options)
{
    if (strip.empty()) {
        throw std::invalid_argument("certify needs at least one strip level");
    }
    if (options.sample_stride <= 0) {
        throw std::invalid_argument("sample_stride must be positive");
    }
    CertificateReport report;
    report.function_id = id;
    report.x_lo = std::max<std::int64_t>(1, options.x_lo);
    report.x_hi = x_hi;
    report.strip.assign(strip.begin(), strip.end());
    if (x_hi < report.x_lo) {
        throw std::invalid_argument("x_hi below the scan start");
    }

    const auto first = scan(model, f, strip, report.x_lo, x_hi, options);
    report.minimal_N = first.last_violation.value_or(report.x_lo - 1);

    CertifyOptions ext_options = options;
    const auto ext = scan(model, f, strip, x_hi + 1, 2 * x_hi, ext_options);
    report.minimal_N_doubled = ext.last_violation.value_or(report.minimal_N);
    report.violations = ext.violations;
    report.stable = report.minimal_N_doubled == report.minimal_N;
    report.certified = report.minimal_N < x_hi && report.violations.empty();

    report.scanned = first.scanned + ext.scanned;
    report.skipped = first.skipped;
    report.skipped.insert(report.skipped.end(), ext.skipped.begin(), ext.skipped.end());
    report.samples = first.samples;
    report.samples.insert(report.samples.end(), ext.samples.begin(), ext.samples.end());
    return report;
}

CertificateReport certify(const Model& model, const LyapunovFunction& f,
                          std::span<const std::int64_t> strip, std::int64_t x_hi,
                          const CertifyOptions& options)
{
    CertifyOptions opts = options;
    if (opts.x_lo == 0) {
        opts.x_lo = scan_start(f);
    }
    return certify(model, as_test_function(f), function_id(f), strip, x_hi, opts);
}

double LeadingTerm::evaluate(double x) const
{
    double v = coefficient * std::pow(x, x_exponent);
    if (log_exponent != 0.0) {
        v *= std::pow(log_of_one_plus_x ? std::log1p(x) : std::log(x), log_exponent);
    }
    return v;
}

namespace {

LeadingTerm power_row0(double alpha1, const PowerLyapunov& f)
{
    LeadingTerm t;
    t.coefficient = -alpha1 * f.nu;
    t.x_exponent = -f.nu;
    t.form = "-alpha1*nu*x^-nu";
    t.dominant = alpha1 > 0.0 && f.nu > 0.0 && f.nu < f.mu;
    if (!t.dominant) {
        t.note = "needs alpha1 > 0 and 0 < nu < mu";
    }
    return t;
}

LeadingTerm leading_power(const TypeIModel& m, const PowerLyapunov& f, std::int64_t y)
{
    if (y == 0) {
        return power_row0(m.alpha1, f);
    }
    if (y == 1) {
        LeadingTerm t;
        t.coefficient = -m.g2.scale();
        t.x_exponent = m.g2.index() - f.mu;
        t.log_exponent = m.g2.log_exponent();
        t.log_of_one_plus_x = true;
        t.form = "-g2(x)*x^-mu";
        t.dominant = t.x_exponent > 0.0 || (t.x_exponent == 0.0 && t.log_exponent > 0.0);
        if (!t.dominant) {
            t.note = "g2(x)*x^-mu must diverge (mu < rho2)";
        }
        return t;
    }
    throw std::invalid_argument("power function rows are y = 0 and y = 1");
}

LeadingTerm leading_power(const TypeIIModel& m, const PowerLyapunov& f, std::int64_t y)
{
    if (!(m.alpha1 > 0.0)) {
        throw std::invalid_argument("power function needs alpha1 > 0; use the log function");
    }
    if (y == 0) {
        return power_row0(m.alpha1, f);
    }
    if (y == 1) {
        LeadingTerm t;
        t.coefficient = -m.beta2;
        t.x_exponent = 1.0 - f.mu;
        t.form = "-beta2*x^(1-mu)";
        t.dominant = f.mu < 1.0;
        if (!t.dominant) {
            t.note = "needs mu < 1";
        }
        return t;
    }
    throw std::invalid_argument("power function rows are y = 0 and y = 1");
}

LeadingTerm leading_log(const TypeIIModel& m, const LogLyapunov& f, std::int64_t y)
{
    if (m.alpha1 != 0.0) {
        throw std::invalid_argument("log function applies to alpha1 = 0 only");
    }
    LeadingTerm t;
    const bool matched = f.lambda1 == m.lambda1 && f.lambda2 == m.lambda2 && m.lambda2 > 0.0;
    switch (y) {
    case 0:
        t.coefficient = -m.lambda2;
        t.x_exponent = -1.0;
        t.log_exponent = -3.0;
        t.form = "-lambda2/(x*ln^3 x)";
        t.dominant = matched;
        if (!matched) {
            t.note = "function lambdas must equal the model's for the 1/(x ln^2 x) terms to cancel";
        }
        return t;
    case 1:
        t.coefficient = -m.beta2 * m.lambda1 / m.lambda2;
        t.log_exponent = -2.0;
        t.form = "-(beta2*lambda1/lambda2)/ln^2 x";
        t.dominant = matched && m.lambda1 > 0.0;
        if (!t.dominant) {
            t.note = "needs lambda1 > 0 and matching lambdas";
        }
        return t;
    case 2:
        t.coefficient = -m.beta2;
        t.x_exponent = 1.0;
        t.log_exponent = -3.0;
        t.form = "-beta2*x/ln^3 x";
        t.dominant = true;
        return t;
    default: throw std::invalid_argument("log function rows are y = 0, 1, 2");
    }
}

}  // namespace

LeadingTerm leading_order(const Model& model, const LyapunovFunction& f, std::int64_t y_level)
{
    if (const auto* p = std::get_if<PowerLyapunov>(&f)) {
        if (const auto* m1 = std::get_if<TypeIModel>(&model)) {
            return leading_power(*m1, *p, y_level);
        }
        if (const auto* m2 = std::get_if<TypeIIModel>(&model)) {
            return leading_power(*m2, *p, y_level);
        }
    } else if (const auto* g = std::get_if<LogLyapunov>(&f)) {
        if (const auto* m2 = std::get_if<TypeIIModel>(&model)) {
            return leading_log(*m2, *g, y_level);
        }
    }
    throw std::invalid_argument("no leading-order table for " + model_name(model) + " with " +
                                function_id(f));
}

HittingBound expected_hitting_bound(const Model& model, const TestFunction& f, const Region& region,
                                    double epsilon, const State& start, const ScanWindow& window)
{
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    HittingBound out;
    out.epsilon = epsilon;
    for (std::int64_t x = 0; x <= window.x_max; ++x) {
        for (std::int64_t y = 0; y <= window.y_max; ++y) {
            const State s{x, y};
            if (!region(s)) {
                continue;
            }
            ++out.checked;
            const double g = apply_generator(model, f, s);
            if (g > -epsilon) {
                out.violation = GeneratorSample{s, g};
                return out;
            }
        }
    }
    out.verified = true;
    out.bound = (out.checked > 0 && region(start)) ? f(start) / epsilon : 0.0;
    return out;
}

Region corner_region(std::int64_t c)
{
    return [c](const State& s) { return (s.x1 >= 1 && s.x2 >= c) || (s.x2 >= 1 && s.x1 >= c); };
}

std::optional<std::int64_t> corner_drift_threshold(const Model& model, double epsilon,
                                                   const ScanWindow& window)
{
    std::int64_t worst = 0;
    for (std::int64_t x = 1; x <= window.x_max; ++x) {
        for (std::int64_t y = 1; y <= window.y_max; ++y) {
            const auto drift = mean_drift(model, State{x, y});
            if (drift[0] + drift[1] > -epsilon) {
                worst = std::max(worst, std::max(x, y));
            }
        }
    }
    const std::int64_t c = worst + 1;
    if (c > std::min(window.x_max, window.y_max)) {
        return std::nullopt;
    }
    return c;
}

}  // namespace compproc
