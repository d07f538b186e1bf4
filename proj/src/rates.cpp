#include "compproc/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace compproc {

double InteractionFunction::operator()(double z) const
{
    if (z <= 0.0) {
        return 0.0;
    }
    double value = scale_ * std::pow(z, index_);
    if (log_exponent_ != 0.0) {
        value *= std::pow(std::log1p(z), log_exponent_);
    }
    return value;
}

void TransitionList::push(const State& target, double rate, Move move)
{
    items_[count_++] = Transition{target, rate, move};
    total_ += rate;
}

namespace {

void add_move(TransitionList& out, const State& s, double rate, int dx1, int dx2, Move move)
{
    if (!std::isfinite(rate)) {
        throw OverflowError("rate overflow at state " + to_string(s));
    }
    if (rate < 0.0) {
        throw std::invalid_argument("negative rate at state " + to_string(s));
    }
    if (rate == 0.0) {
        return;
    }
    out.push(shifted(s, dx1, dx2), rate, move);
}

TransitionList transitions_of(const TypeIModel& m, const State& s)
{
    const double x1 = static_cast<double>(s.x1);
    const double x2 = static_cast<double>(s.x2);
    TransitionList out;
    add_move(out, s, m.lambda1 + m.alpha1 * x1, 1, 0, Move::Right);
    add_move(out, s, m.lambda2 + m.alpha2 * x2, 0, 1, Move::Up);
    if (s.x1 > 0) {
        add_move(out, s, x1 * m.g1(x2), -1, 0, Move::Left);
    }
    if (s.x2 > 0) {
        add_move(out, s, x2 * m.g2(x1), 0, -1, Move::Down);
    }
    return out;
}

TransitionList transitions_of(const TypeIIModel& m, const State& s)
{
    const double x1 = static_cast<double>(s.x1);
    const double x2 = static_cast<double>(s.x2);
    TransitionList out;
    add_move(out, s, m.lambda1 + m.alpha1 * x1, 1, 0, Move::Right);
    add_move(out, s, m.lambda2 + m.alpha2 * x2, 0, 1, Move::Up);
    if (s.x1 > 0) {
        add_move(out, s, m.beta1 * x2, -1, 0, Move::Left);
    }
    if (s.x2 > 0) {
        add_move(out, s, m.beta2 * x1, 0, -1, Move::Down);
    }
    return out;
}

TransitionList transitions_of(const ReuterModel& m, const State& s)
{
    TransitionList out;
    add_move(out, s, m.a(s), 1, 0, Move::Right);
    add_move(out, s, m.b(s), 0, 1, Move::Up);
    if (s.x1 > 0) {
        add_move(out, s, m.c(s), -1, 0, Move::Left);
    }
    if (s.x2 > 0) {
        add_move(out, s, m.d(s), 0, -1, Move::Down);
    }
    if (s.x1 > 0) {
        add_move(out, s, m.e(s), -1, 1, Move::LeftUp);
    }
    if (s.x2 > 0) {
        add_move(out, s, m.f(s), 1, -1, Move::RightDown);
    }
    return out;
}

TransitionList transitions_of(const AuxUrnModel& m, const State& s)
{
    TransitionList out;
    const double x = static_cast<double>(s.x1);
    const double y = static_cast<double>(s.x2);
    const double norm = (m.alpha + m.beta) * (x + y);
    if (norm == 0.0) {
        return out;
    }
    add_move(out, s, (m.alpha * x + m.beta * y) / norm, 1, 0, Move::Right);
    add_move(out, s, (m.alpha * y + m.beta * x) / norm, 0, 1, Move::Up);
    return out;
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }
bool nonnegative_finite(double v) { return std::isfinite(v) && v >= 0.0; }

void check_interaction(std::vector<Violation>& out, const std::string& name,
                       const InteractionFunction& g)
{
    if (!positive_finite(g.scale())) {
        out.push_back({name + ".c", "scale must be positive"});
    }
    if (!positive_finite(g.index())) {
        out.push_back({name + ".rho", "index must be positive"});
    }
    if (!std::isfinite(g.log_exponent())) {
        out.push_back({name + ".eta", "log exponent must be finite"});
    }
}

std::vector<Violation> violations_of(const TypeIModel& m)
{
    std::vector<Violation> out;
    if (!positive_finite(m.lambda1)) out.push_back({"lambda1", "lambda1>0 required"});
    if (!positive_finite(m.lambda2)) out.push_back({"lambda2", "lambda2>0 required"});
    if (!positive_finite(m.alpha1)) out.push_back({"alpha1", "alpha1>0 required"});
    if (!positive_finite(m.alpha2)) out.push_back({"alpha2", "alpha2>0 required"});
    check_interaction(out, "g1", m.g1);
    check_interaction(out, "g2", m.g2);
    return out;
}

std::vector<Violation> violations_of(const TypeIIModel& m)
{
    std::vector<Violation> out;
    if (!positive_finite(m.beta1)) out.push_back({"beta1", "beta1>0 required"});
    if (!positive_finite(m.beta2)) out.push_back({"beta2", "beta2>0 required"});
    if (!nonnegative_finite(m.alpha1)) out.push_back({"alpha1", "alpha1>=0 required"});
    if (!nonnegative_finite(m.alpha2)) out.push_back({"alpha2", "alpha2>=0 required"});
    if (m.strict_theorem2) {
        if (!positive_finite(m.lambda1)) out.push_back({"lambda1", "lambda1>0 required"});
        if (!positive_finite(m.lambda2)) out.push_back({"lambda2", "lambda2>0 required"});
    } else {
        if (!nonnegative_finite(m.lambda1)) out.push_back({"lambda1", "lambda1>=0 required"});
        if (!nonnegative_finite(m.lambda2)) out.push_back({"lambda2", "lambda2>=0 required"});
    }
    return out;
}

std::vector<Violation> violations_of(const ReuterModel& m)
{
    std::vector<Violation> out;
    const std::pair<const char*, const ReuterModel::RateFn*> fns[] = {
        {"a", &m.a}, {"b", &m.b}, {"c", &m.c}, {"d", &m.d}, {"e", &m.e}, {"f", &m.f}};
    for (const auto& [name, fn] : fns) {
        if (!*fn) {
            out.push_back({name, std::string("rate callback ") + name + " missing"});
        }
    }
    return out;
}

std::vector<Violation> violations_of(const AuxUrnModel& m)
{
    std::vector<Violation> out;
    if (!nonnegative_finite(m.alpha)) out.push_back({"alpha", "alpha>=0 required"});
    if (!nonnegative_finite(m.beta)) out.push_back({"beta", "beta>=0 required"});
    if (!(m.alpha + m.beta > 0.0)) out.push_back({"alpha", "alpha+beta>0 required"});
    return out;
}

}  // namespace

TransitionList enumerate_transitions(const Model& model, const State& s)
{
    return std::visit([&](const auto& m) { return transitions_of(m, s); }, model);
}

std::array<double, 2> mean_drift(const Model& model, const State& s)
{
    std::array<double, 2> drift{0.0, 0.0};
    for (const auto& t : enumerate_transitions(model, s)) {
        drift[0] += t.rate * static_cast<double>(t.target.x1 - s.x1);
        drift[1] += t.rate * static_cast<double>(t.target.x2 - s.x2);
    }
    return drift;
}

std::vector<Violation> validate(const Model& model)
{
    return std::visit([](const auto& m) { return violations_of(m); }, model);
}

void require_valid(const Model& model)
{
    const auto violations = validate(model);
    if (violations.empty()) {
        return;
    }
    std::string msg = "invalid " + model_name(model) + " model:";
    for (const auto& v : violations) {
        msg += " " + v.message + ";";
    }
    throw ConfigError(msg);
}

std::string model_name(const Model& model)
{
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TypeIModel>) {
                return "type-I";
            } else if constexpr (std::is_same_v<T, TypeIIModel>) {
                return "type-II";
            } else if constexpr (std::is_same_v<T, ReuterModel>) {
                return m.name;
            } else {
                return "aux-urn";
            }
        },
        model);
}

ReuterModel as_reuter(const TypeIModel& m)
{
    ReuterModel r;
    r.name = "type-I";
    r.a = [m](const State& s) { return m.lambda1 + m.alpha1 * static_cast<double>(s.x1); };
    r.b = [m](const State& s) { return m.lambda2 + m.alpha2 * static_cast<double>(s.x2); };
    r.c = [m](const State& s) {
        return static_cast<double>(s.x1) * m.g1(static_cast<double>(s.x2));
    };
    r.d = [m](const State& s) {
        return static_cast<double>(s.x2) * m.g2(static_cast<double>(s.x1));
    };
    r.e = [](const State&) { return 0.0; };
    r.f = [](const State&) { return 0.0; };
    return r;
}

ReuterModel as_reuter(const TypeIIModel& m)
{
    ReuterModel r;
    r.name = "type-II";
    r.a = [m](const State& s) { return m.lambda1 + m.alpha1 * static_cast<double>(s.x1); };
    r.b = [m](const State& s) { return m.lambda2 + m.alpha2 * static_cast<double>(s.x2); };
    r.c = [m](const State& s) { return m.beta1 * static_cast<double>(s.x2); };
    r.d = [m](const State& s) { return m.beta2 * static_cast<double>(s.x1); };
    r.e = [](const State&) { return 0.0; };
    r.f = [](const State&) { return 0.0; };
    return r;
}

ReuterModel reuter_example2(double a, double b, double gamma, double delta, double epsilon)
{
    ReuterModel r;
    r.name = "reuter-example2";
    r.a = [a](const State&) { return a; };
    r.b = [b](const State&) { return b; };
    r.c = [gamma](const State& s) { return gamma * static_cast<double>(s.x1); };
    r.d = [delta](const State& s) { return delta * static_cast<double>(s.x2); };
    r.e = [epsilon](const State& s) {
        return epsilon * static_cast<double>(s.x1) * static_cast<double>(s.x2);
    };
    r.f = [](const State&) { return 0.0; };
    return r;
}

}  // namespace compproc
