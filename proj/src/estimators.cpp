#include "orderest/estimators.hpp"

#include "orderest/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace orderest {

double EquivariantEstimator::ancillary(double x1, double x2) const
{
    if (mode == Mode::location)
        return x2 - x1;
    if (!(x1 > 0.0) || !(x2 > 0.0)) {
        std::ostringstream msg;
        msg << "scale estimator '" << label << "' needs positive data, got (" << x1 << ", " << x2 << ")";
        throw DomainError(msg.str());
    }
    return x2 / x1;
}

double EquivariantEstimator::evaluate(double x1, double x2) const
{
    const double t = ancillary(x1, x2);
    const double xi = target == Target::smaller ? x1 : x2;
    const double p = psi(t);
    if (mode == Mode::location)
        return xi - p;
    if (!(p > 0.0)) {
        std::ostringstream msg;
        msg << "scale estimator '" << label << "' has nonpositive multiplier " << p << " at t=" << t;
        throw DomainError(msg.str());
    }
    return p * xi;
}

namespace {

std::pair<double, double> checked_bounds(const PsiBounds& bounds, double t)
{
    const double lo = bounds.lower(t);
    const double hi = bounds.upper(t);
    if (lo > hi) {
        std::ostringstream msg;
        msg << "invalid envelope at t=" << t << ": lower " << lo << " > upper " << hi;
        throw InvalidBounds(msg.str());
    }
    return {lo, hi};
}

}  // namespace

EquivariantEstimator clip_improve(const EquivariantEstimator& est, const PsiBounds& bounds)
{
    EquivariantEstimator out = est;
    out.label = "improved_" + est.label;
    out.psi = [psi = est.psi, bounds](double t) {
        const auto [lo, hi] = checked_bounds(bounds, t);
        return std::min(std::max(lo, psi(t)), hi);
    };
    return out;
}

EquivariantEstimator clip_improve_partial(const EquivariantEstimator& est, const PsiBounds& bounds,
                                          double fraction)
{
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ConfigError("partial-move fraction must lie in [0, 1]");
    EquivariantEstimator out = est;
    std::ostringstream label;
    label << "improved_" << est.label << "@" << fraction;
    out.label = label.str();
    out.psi = [psi = est.psi, bounds, fraction](double t) {
        const auto [lo, hi] = checked_bounds(bounds, t);
        const double p = psi(t);
        if (p < lo)
            return p + fraction * (lo - p);
        if (p > hi)
            return p + fraction * (hi - p);
        return p;
    };
    return out;
}

std::string_view to_string(EstimatorKind kind)
{
    switch (kind) {
    case EstimatorKind::blee: return "blee";
    case EstimatorKind::bsee: return "bsee";
    case EstimatorKind::rmle: return "rmle";
    case EstimatorKind::improved_blee: return "improved_blee";
    case EstimatorKind::improved_bsee: return "improved_bsee";
    case EstimatorKind::improved_rmle: return "improved_rmle";
    case EstimatorKind::custom: return "custom";
    }
    return "custom";
}

EstimatorKind estimator_kind_from_name(std::string_view name)
{
    for (auto k : {EstimatorKind::blee, EstimatorKind::bsee, EstimatorKind::rmle, EstimatorKind::improved_blee,
                   EstimatorKind::improved_bsee, EstimatorKind::improved_rmle, EstimatorKind::custom})
        if (to_string(k) == name)
            return k;
    throw LookupError("unknown estimator kind '" + std::string(name) + "'");
}

EstimatorKind base_kind(EstimatorKind kind)
{
    switch (kind) {
    case EstimatorKind::improved_blee: return EstimatorKind::blee;
    case EstimatorKind::improved_bsee: return EstimatorKind::bsee;
    case EstimatorKind::improved_rmle: return EstimatorKind::rmle;
    default: return kind;
    }
}

bool is_improved(EstimatorKind kind)
{
    return base_kind(kind) != kind;
}

std::string CatalogKey::str() const
{
    return std::string(to_string(model)) + ":" + std::string(to_string(target)) + ":" +
           std::string(to_string(kind));
}

CatalogKey parse_catalog_key(std::string_view text, std::optional<ModelName> default_model)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    try {
        if (parts.size() == 3)
            return {model_name_from_string(parts[0]), target_from_name(parts[1]),
                    estimator_kind_from_name(parts[2])};
        if (parts.size() == 2 && default_model)
            return {*default_model, target_from_name(parts[0]), estimator_kind_from_name(parts[1])};
    }
    catch (const ConfigError& ex) {
        throw LookupError("bad catalog key '" + std::string(text) + "': " + ex.what());
    }
    throw LookupError("catalog key '" + std::string(text) + "' is not of the form <model>:<target>:<kind>");
}

namespace {

using Psi = std::function<double(double)>;

Psi constant(double c)
{
    return [c](double) { return c; };
}

// std::nullopt: no entry. Throws NonexistenceError for entries known not to exist.
std::optional<Psi> catalog_psi(const BivariateModel& m, Target target, EstimatorKind kind)
{
    using K = EstimatorKind;
    const bool smaller = target == Target::smaller;
    switch (m.name()) {
    case ModelName::bvn: {
        const double s1 = m.hyper("s1"), s2 = m.hyper("s2"), rho = m.hyper("rho");
        const double v = s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2;
        if (kind == K::blee)
            return constant(0.0);
        if (kind != K::rmle && kind != K::improved_blee)
            return std::nullopt;
        // Restricted MLE; it coincides with the clipped BLEE.
        if (smaller) {
            const double gap = rho * s2 - s1;
            const double a = s1 * gap / v;
            if (std::abs(gap) <= 1e-12 * std::max(s1, s2))
                return constant(0.0);
            if (gap < 0.0)
                return Psi([a](double t) { return std::max(0.0, a * t); });
            return Psi([a](double t) { return std::min(0.0, a * t); });
        }
        const double gap = s2 - rho * s1;
        const double b = s2 * gap / v;
        if (std::abs(gap) <= 1e-12 * std::max(s1, s2))
            return constant(0.0);
        if (gap > 0.0)
            return Psi([b](double t) { return std::min(0.0, b * t); });
        return Psi([b](double t) { return std::max(0.0, b * t); });
    }
    case ModelName::dep_exp_gamma: {
        if (kind != K::blee && kind != K::improved_blee)
            return std::nullopt;
        if (!smaller)
            throw NonexistenceError(
                "the unrestricted LINEX equivariant estimator of the larger parameter does not exist for "
                "dep_exp_gamma: E[exp(Z2)] is infinite");
        const double ln6 = std::log(6.0);
        if (kind == K::blee)
            return constant(ln6);
        return Psi([ln6](double t) { return std::max(std::log(4.0 * (2.0 + t) / (1.0 + t)), ln6); });
    }
    case ModelName::indep_exp: {
        const double s1 = m.hyper("s1"), s2 = m.hyper("s2");
        const double k = s1 * s2 / (s1 + s2);
        if (smaller) {
            switch (kind) {
            case K::blee: return constant(s1);
            case K::rmle: return Psi([](double t) { return std::max(0.0, -t); });
            case K::improved_rmle: return Psi([k](double t) { return std::max(0.0, -t) + k; });
            case K::improved_blee: return Psi([k, s1](double t) { return std::max(k - t, s1); });
            default: return std::nullopt;
            }
        }
        switch (kind) {
        case K::blee: return constant(s2);
        case K::rmle: return constant(0.0);
        case K::improved_blee:
            return Psi([k, s1, s2](double t) {
                if (t < 0.0)
                    return k;
                if (t < s2 * s2 / (s1 + s2))
                    return t + k;
                return s2;
            });
        default: return std::nullopt;
        }
    }
    case ModelName::cheriyan_gamma: {
        const Loss loss = Loss::squared_error(Mode::scale);
        auto psi1 = [m, loss](double t) { return *closed_form_psi(m, loss, Target::smaller, 1.0, t); };
        auto psi1_larger = [m, loss](double t) { return *closed_form_psi(m, loss, Target::larger, 1.0, t); };
        if (kind == K::bsee)
            return constant(1.0 / 3.0);
        if (kind != K::improved_bsee)
            return std::nullopt;
        if (smaller)
            return Psi([psi1](double t) { return std::min(1.0 / 3.0, psi1(t)); });
        return Psi([psi1_larger](double t) { return std::max(psi1_larger(t), 1.0 / 3.0); });
    }
    case ModelName::power_uniform: {
        const double a1 = m.hyper("a1"), a2 = m.hyper("a2");
        const double c = (a1 + a2 + 2.0) / (a1 + a2 + 1.0);
        if (smaller) {
            const double b1 = (a1 + 2.0) / (a1 + 1.0);
            switch (kind) {
            case K::bsee: return constant(b1);
            case K::improved_bsee:
                return Psi([b1, c](double t) {
                    if (t < 1.0)
                        return c;
                    if (t <= b1 / c)
                        return c * t;
                    return b1;
                });
            default: return std::nullopt;
            }
        }
        const double b2 = (a2 + 2.0) / (a2 + 1.0);
        switch (kind) {
        case K::bsee: return constant(b2);
        case K::rmle: return Psi([](double t) { return std::max(1.0, 1.0 / t); });
        case K::improved_rmle: return Psi([c](double t) { return c * std::max(1.0, 1.0 / t); });
        case K::improved_bsee: return Psi([b2, c](double t) { return std::max(b2, c / t); });
        default: return std::nullopt;
        }
    }
    case ModelName::indep_gamma: {
        const double a1 = m.hyper("a1"), a2 = m.hyper("a2");
        const double a = a1 + a2;
        if (smaller) {
            switch (kind) {
            case K::bsee: return constant(1.0 / (a1 + 1.0));
            case K::rmle: return Psi([a1, a](double t) { return std::min(1.0 / a1, (1.0 + t) / a); });
            case K::improved_rmle:
                return Psi([a1, a](double t) { return std::min(1.0 / a1, (1.0 + t) / (a + 1.0)); });
            case K::improved_bsee:
                return Psi([a1, a](double t) { return std::min(1.0 / (a1 + 1.0), (1.0 + t) / (a + 1.0)); });
            default: return std::nullopt;
            }
        }
        switch (kind) {
        case K::bsee: return constant(1.0 / (a2 + 1.0));
        case K::improved_bsee:
            return Psi([a2, a](double t) { return std::max(1.0 / (a2 + 1.0), (1.0 + 1.0 / t) / (a + 1.0)); });
        default: return std::nullopt;
        }
    }
    case ModelName::custom: break;
    }
    return std::nullopt;
}

}  // namespace

EquivariantEstimator catalog_estimator(const CatalogKey& key, const BivariateModel& model)
{
    if (key.model != model.name())
        throw LookupError("catalog key " + key.str() + " does not match model " + model.id());
    const auto psi = catalog_psi(model, key.target, key.kind);
    if (!psi)
        throw LookupError("no catalog entry for " + key.str());
    return EquivariantEstimator{model.mode(), key.target, *psi, std::string(to_string(key.kind))};
}

std::vector<EstimatorKind> catalog_kinds(const BivariateModel& model, Target target)
{
    std::vector<EstimatorKind> kinds;
    for (auto k : {EstimatorKind::blee, EstimatorKind::bsee, EstimatorKind::rmle, EstimatorKind::improved_blee,
                   EstimatorKind::improved_bsee, EstimatorKind::improved_rmle}) {
        try {
            if (catalog_psi(model, target, k))
                kinds.push_back(k);
        }
        catch (const NonexistenceError&) {
        }
    }
    return kinds;
}

DifferenceProbability estimate_difference_probability(const EquivariantEstimator& base,
                                                      const EquivariantEstimator& improved,
                                                      const BivariateModel& model, const Theta& theta,
                                                      std::size_t n, std::uint64_t seed)
{
    if (base.mode != improved.mode || base.target != improved.target)
        throw IncompatibleError("estimators '" + base.label + "' and '" + improved.label +
                                "' differ in mode or target");
    if (base.mode != model.mode())
        throw IncompatibleError("estimator mode does not match model " + model.id());
    if (n == 0)
        throw ConfigError("sample size must be at least 1");
    if (model.mode() == Mode::scale && !(theta.theta1() > 0.0))
        throw DomainError("scale models need theta > 0");

    std::mt19937_64 rng(seed);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [x1, x2] = draw_at(model, theta, rng);
        if (std::abs(base.evaluate(x1, x2) - improved.evaluate(x1, x2)) > 1e-12)
            ++differ;
    }
    const double p = static_cast<double>(differ) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace orderest
