#include "orderest/loss.hpp"

#include "orderest/error.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace orderest {

std::string_view to_string(LossKind kind)
{
    return kind == LossKind::location ? "location" : "scale";
}

std::string_view to_string(LossName name)
{
    switch (name) {
    case LossName::squared_error: return "squared_error";
    case LossName::linex: return "linex";
    case LossName::custom: return "custom";
    }
    return "custom";
}

Loss::Loss(LossKind kind, LossName name, std::string label, Fn w, Fn w_prime, double argmin)
    : kind_(kind), name_(name), label_(std::move(label)), w_(std::move(w)),
      w_prime_(std::move(w_prime)), argmin_(argmin)
{
    if (!w_)
        throw ConfigError("loss '" + label_ + "' has no value function");
}

Loss Loss::squared_error(LossKind kind)
{
    if (kind == LossKind::location)
        return Loss(kind, LossName::squared_error, "squared_error",
                    [](double t) { return t * t; }, [](double t) { return 2.0 * t; }, 0.0);
    return Loss(kind, LossName::squared_error, "squared_error",
                [](double t) { return (t - 1.0) * (t - 1.0); },
                [](double t) { return 2.0 * (t - 1.0); }, 1.0);
}

Loss Loss::linex()
{
    // expm1 keeps W accurate near the minimum, where e^t − 1 − t cancels.
    return Loss(LossKind::location, LossName::linex, "linex",
                [](double t) { return std::expm1(t) - t; },
                [](double t) { return std::expm1(t); }, 0.0);
}

Loss Loss::custom(LossKind kind, std::string label, Fn w, Fn w_prime, double argmin)
{
    return Loss(kind, LossName::custom, std::move(label), std::move(w), std::move(w_prime), argmin);
}

void Loss::check_domain(double t) const
{
    if (std::isnan(t))
        throw DomainError("loss '" + label_ + "' evaluated at NaN");
    if (kind_ == LossKind::scale && !(t > 0.0)) {
        std::ostringstream msg;
        msg << "scale loss '" << label_ << "' requires t > 0, got " << t;
        throw DomainError(msg.str());
    }
}

double Loss::value(double t) const
{
    check_domain(t);
    return w_(t);
}

double Loss::deriv(double t) const
{
    if (!w_prime_)
        throw ConfigError("custom loss '" + label_ + "' has no derivative W'");
    check_domain(t);
    return w_prime_(t);
}

Loss loss_from_name(std::string_view name, LossKind kind)
{
    if (name == "squared_error")
        return Loss::squared_error(kind);
    if (name == "linex") {
        if (kind != LossKind::location)
            throw ConfigError("linex loss is only defined for location problems");
        return Loss::linex();
    }
    throw ConfigError("unknown loss '" + std::string(name) + "'");
}

ConditionReport check_bowl_conditions(const Loss& loss, std::span<const double> grid)
{
    std::vector<double> pts;
    for (double t : grid)
        if (loss.kind() == LossKind::location || t > 0.0)
            pts.push_back(t);
    if (pts.size() < 3)
        throw ConfigError("bowl check needs at least 3 grid points inside the loss domain");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i] > pts[i - 1]))
            throw ConfigError("bowl check grid must be strictly increasing");

    ConditionReport report;
    const double m = loss.argmin();
    // Relative slack absorbs rounding in otherwise flat stretches.
    auto slack = [](double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };

    const double at_min = loss.value(m);
    if (std::abs(at_min) > 1e-12)
        report.violations.push_back({"C1", m, m, "W(argmin) != 0"});

    std::vector<double> w(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        w[i] = loss.value(pts[i]);
        if (w[i] < -slack(w[i], 0.0))
            report.violations.push_back({"C1", pts[i], pts[i], "W negative"});
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double a = pts[i - 1], b = pts[i];
        if (b <= m && w[i] > w[i - 1] + slack(w[i], w[i - 1]))
            report.violations.push_back({"C1", a, b, "W increases left of argmin"});
        if (a >= m && w[i] < w[i - 1] - slack(w[i], w[i - 1]))
            report.violations.push_back({"C1", a, b, "W decreases right of argmin"});
    }

    if (!loss.has_derivative()) {
        report.derivative_checked = false;
        return report;
    }
    std::vector<double> d(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        d[i] = loss.deriv(pts[i]);
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (d[i] < d[i - 1] - slack(d[i], d[i - 1]))
            report.violations.push_back({"C2", pts[i - 1], pts[i], "W' decreases"});
    return report;
}

}  // namespace orderest
