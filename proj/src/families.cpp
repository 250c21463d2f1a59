#include "orderest/families.hpp"

#include "orderest/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

namespace orderest {

std::string_view to_string(Target target)
{
    return target == Target::smaller ? "smaller" : "larger";
}

std::string_view to_string(ModelName name)
{
    switch (name) {
    case ModelName::bvn: return "bvn";
    case ModelName::dep_exp_gamma: return "dep_exp_gamma";
    case ModelName::indep_exp: return "indep_exp";
    case ModelName::cheriyan_gamma: return "cheriyan_gamma";
    case ModelName::power_uniform: return "power_uniform";
    case ModelName::indep_gamma: return "indep_gamma";
    case ModelName::custom: return "custom";
    }
    return "custom";
}

Target target_from_name(std::string_view name)
{
    if (name == "smaller")
        return Target::smaller;
    if (name == "larger")
        return Target::larger;
    throw ConfigError("unknown target '" + std::string(name) + "' (expected smaller or larger)");
}

ModelName model_name_from_string(std::string_view name)
{
    for (auto m : {ModelName::bvn, ModelName::dep_exp_gamma, ModelName::indep_exp,
                   ModelName::cheriyan_gamma, ModelName::power_uniform, ModelName::indep_gamma})
        if (to_string(m) == name)
            return m;
    throw ConfigError("unknown model '" + std::string(name) + "'");
}

Mode model_mode(ModelName name)
{
    switch (name) {
    case ModelName::cheriyan_gamma:
    case ModelName::power_uniform:
    case ModelName::indep_gamma: return Mode::scale;
    default: return Mode::location;
    }
}

Theta::Theta(double theta1, double theta2) : t1_(theta1), t2_(theta2)
{
    if (!std::isfinite(theta1) || !std::isfinite(theta2))
        throw DomainError("theta components must be finite");
    if (theta1 > theta2) {
        std::ostringstream msg;
        msg << "theta violates the order restriction: theta1=" << theta1 << " > theta2=" << theta2;
        throw DomainError(msg.str());
    }
}

Theta anchored_theta(Mode mode, double lambda)
{
    if (!std::isfinite(lambda) || lambda < identity_lambda(mode)) {
        std::ostringstream msg;
        msg << "lambda=" << lambda << " is below the identity value " << identity_lambda(mode);
        throw DomainError(msg.str());
    }
    return mode == Mode::location ? Theta(0.0, lambda) : Theta(1.0, lambda);
}

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string(what) + " must be finite and > 0");
}

double kernel_from_density(const std::function<double(double, double)>& f, Mode mode, Target target,
                           double u, double s)
{
    if (mode == Mode::location)
        return target == Target::smaller ? f(s, s + u) : f(s - u, s);
    if (!(s > 0.0) || !(u > 0.0))
        return 0.0;
    // The Jacobian factor 1/u² of the larger-target change of variables depends on u only.
    return target == Target::smaller ? s * f(s, s * u) : s * f(s / u, s);
}

double gamma_pdf(double z, double shape)
{
    if (!(z > 0.0))
        return 0.0;
    return std::exp((shape - 1.0) * std::log(z) - z - std::lgamma(shape));
}

// Gamma(A, rate r) kernel rescaled by r^(A−1) so its peak stays O(1).
double gamma_kernel(double s, double shape, double rate)
{
    if (!(s > 0.0))
        return 0.0;
    const double rs = rate * s;
    return std::exp((shape - 1.0) * std::log(rs) - rs);
}

constexpr double kPi = std::numbers::pi;

}  // namespace

BivariateModel BivariateModel::bvn(double s1, double s2, double rho)
{
    require_positive(s1, "s1");
    require_positive(s2, "s2");
    if (!(rho > -1.0 && rho < 1.0))
        throw ConfigError("rho must lie in (-1, 1)");

    BivariateModel m;
    m.name_ = ModelName::bvn;
    m.mode_ = Mode::location;
    m.hyper_ = {{"s1", s1}, {"s2", s2}, {"rho", rho}};
    m.support_ = "full plane";

    const double q = 1.0 - rho * rho;
    m.density_ = [=](double z1, double z2) {
        const double a = z1 / s1, b = z2 / s2;
        const double quad = (a * a - 2.0 * rho * a * b + b * b) / q;
        return std::exp(-0.5 * quad) / (2.0 * kPi * s1 * s2 * std::sqrt(q));
    };

    // Gaussian conditioning of Z1 or Z2 on Z2 − Z1 = u.
    const double var_d = s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2;
    const double slope1 = (rho * s1 * s2 - s1 * s1) / var_d;
    const double slope2 = (s2 * s2 - rho * s1 * s2) / var_d;
    const double cond_var = s1 * s1 * s2 * s2 * q / var_d;
    const double cond_sd = std::sqrt(cond_var);
    m.kernel_ = [=](Target target, double u, double s) {
        const double mean = (target == Target::smaller ? slope1 : slope2) * u;
        const double d = s - mean;
        return std::exp(-0.5 * d * d / cond_var);
    };
    m.window_ = [=](Target target, double u) {
        const double mean = (target == Target::smaller ? slope1 : slope2) * u;
        return Window{-kInf, kInf, mean, cond_sd};
    };
    m.sampler_ = [=](std::mt19937_64& rng) {
        std::normal_distribution<double> normal;
        const double n1 = normal(rng);
        const double n2 = normal(rng);
        return std::pair{s1 * n1, s2 * (rho * n1 + std::sqrt(q) * n2)};
    };
    m.marginal_ = [=](int i, double z) {
        const double sd = i == 0 ? s1 : s2;
        return std::exp(-0.5 * z * z / (sd * sd)) / (sd * std::sqrt(2.0 * kPi));
    };
    m.marginal_window_ = [=](int i) { return Window{-kInf, kInf, 0.0, i == 0 ? s1 : s2}; };
    return m;
}

BivariateModel BivariateModel::dep_exp_gamma()
{
    BivariateModel m;
    m.name_ = ModelName::dep_exp_gamma;
    m.mode_ = Mode::location;
    m.support_ = "wedge 0 < z1 < z2";
    m.density_ = [](double z1, double z2) {
        if (!(z1 > 0.0) || !(z2 > z1))
            return 0.0;
        return 2.0 * z1 * z2 * std::exp(-z1 - z2);
    };
    // f(s, s+u) and f(s−u, s) without the factor 2e^{−u}; u = 0 is the proper λ → t limit.
    m.kernel_ = [](Target target, double u, double s) {
        if (!(u >= 0.0))
            return 0.0;
        const double z1 = target == Target::smaller ? s : s - u;
        if (!(z1 > 0.0))
            return 0.0;
        return z1 * (z1 + u) * std::exp(-2.0 * z1);
    };
    m.window_ = [](Target target, double u) {
        if (!(u >= 0.0))
            return Window{0.0, 0.0, 0.0, 1.0};
        const double lo = target == Target::smaller ? 0.0 : u;
        return Window{lo, kInf, lo + 1.5, 1.0};
    };
    m.sampler_ = [](std::mt19937_64& rng) {
        std::gamma_distribution<double> gamma(2.0, 1.0);
        const double g1 = gamma(rng);
        const double g2 = gamma(rng);
        return std::pair{std::min(g1, g2), std::max(g1, g2)};
    };
    // Order statistics of two Gamma(2,1) draws: 2p(1−F) and 2pF with F(z) = 1 − (1+z)e^{−z}.
    m.marginal_ = [](int i, double z) {
        if (!(z > 0.0))
            return 0.0;
        const double p = z * std::exp(-z);
        const double survival = (1.0 + z) * std::exp(-z);
        return i == 0 ? 2.0 * p * survival : 2.0 * p * (1.0 - survival);
    };
    m.marginal_window_ = [](int i) { return Window{0.0, kInf, i == 0 ? 1.0 : 2.5, 1.0}; };
    return m;
}

BivariateModel BivariateModel::indep_exp(double s1, double s2)
{
    require_positive(s1, "s1");
    require_positive(s2, "s2");

    BivariateModel m;
    m.name_ = ModelName::indep_exp;
    m.mode_ = Mode::location;
    m.hyper_ = {{"s1", s1}, {"s2", s2}};
    m.support_ = "positive quadrant";
    m.density_ = [=](double z1, double z2) {
        if (!(z1 > 0.0) || !(z2 > 0.0))
            return 0.0;
        return std::exp(-z1 / s1 - z2 / s2) / (s1 * s2);
    };
    const double k = s1 * s2 / (s1 + s2);
    // Both conditionals are exponential with mean k above the support edge; scaling
    // by the value at the edge keeps the kernel O(1) for any |u|.
    m.kernel_ = [=](Target target, double u, double s) {
        const double lo = target == Target::smaller ? std::max(0.0, -u) : std::max(0.0, u);
        return s > lo ? std::exp(-(s - lo) / k) : 0.0;
    };
    m.window_ = [=](Target target, double u) {
        const double lo = target == Target::smaller ? std::max(0.0, -u) : std::max(0.0, u);
        return Window{lo, kInf, lo + k, k};
    };
    m.sampler_ = [=](std::mt19937_64& rng) {
        std::exponential_distribution<double> e1(1.0 / s1);
        std::exponential_distribution<double> e2(1.0 / s2);
        const double z1 = e1(rng);
        const double z2 = e2(rng);
        return std::pair{z1, z2};
    };
    m.marginal_ = [=](int i, double z) {
        const double sd = i == 0 ? s1 : s2;
        return z > 0.0 ? std::exp(-z / sd) / sd : 0.0;
    };
    m.marginal_window_ = [=](int i) {
        const double sd = i == 0 ? s1 : s2;
        return Window{0.0, kInf, sd, sd};
    };
    return m;
}

BivariateModel BivariateModel::cheriyan_gamma()
{
    BivariateModel m;
    m.name_ = ModelName::cheriyan_gamma;
    m.mode_ = Mode::scale;
    m.support_ = "positive quadrant";
    m.density_ = [](double z1, double z2) {
        if (!(z1 > 0.0) || !(z2 > 0.0))
            return 0.0;
        return std::exp(-std::max(z1, z2)) * -std::expm1(-std::min(z1, z2));
    };
    m.kernel_ = [f = m.density_](Target target, double u, double s) {
        return kernel_from_density(f, Mode::scale, target, u, s);
    };
    m.window_ = [](Target target, double u) {
        if (!(u > 0.0))
            return Window{0.0, 0.0, 0.0, 1.0};
        const double spread = target == Target::smaller ? 1.0 / std::max(1.0, u) : std::min(1.0, u);
        return Window{0.0, kInf, 2.0 * spread, spread};
    };
    m.sampler_ = [](std::mt19937_64& rng) {
        std::exponential_distribution<double> e(1.0);
        const double u0 = e(rng);
        const double u1 = e(rng);
        const double u2 = e(rng);
        return std::pair{u0 + u1, u0 + u2};
    };
    m.marginal_ = [](int, double z) { return gamma_pdf(z, 2.0); };
    m.marginal_window_ = [](int) { return Window{0.0, kInf, 2.0, 1.5}; };
    return m;
}

BivariateModel BivariateModel::power_uniform(double a1, double a2)
{
    require_positive(a1, "a1");
    require_positive(a2, "a2");

    BivariateModel m;
    m.name_ = ModelName::power_uniform;
    m.mode_ = Mode::scale;
    m.hyper_ = {{"a1", a1}, {"a2", a2}};
    m.support_ = "unit square";
    m.density_ = [=](double z1, double z2) {
        if (!(z1 > 0.0 && z1 <= 1.0 && z2 > 0.0 && z2 <= 1.0))
            return 0.0;
        return a1 * std::pow(z1, a1 - 1.0) * a2 * std::pow(z2, a2 - 1.0);
    };
    m.kernel_ = [f = m.density_](Target target, double u, double s) {
        return kernel_from_density(f, Mode::scale, target, u, s);
    };
    m.window_ = [](Target target, double u) {
        if (!(u > 0.0))
            return Window{0.0, 0.0, 0.0, 1.0};
        const double hi = target == Target::smaller ? std::min(1.0, 1.0 / u) : std::min(1.0, u);
        return Window{0.0, hi, 0.5 * hi, hi};
    };
    m.sampler_ = [=](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        // 1 − U lies in (0, 1], so draws are never exactly zero.
        const double v1 = 1.0 - unif(rng);
        const double v2 = 1.0 - unif(rng);
        return std::pair{std::pow(v1, 1.0 / a1), std::pow(v2, 1.0 / a2)};
    };
    m.marginal_ = [=](int i, double z) {
        const double a = i == 0 ? a1 : a2;
        return (z > 0.0 && z <= 1.0) ? a * std::pow(z, a - 1.0) : 0.0;
    };
    m.marginal_window_ = [](int) { return Window{0.0, 1.0, 0.5, 1.0}; };
    return m;
}

BivariateModel BivariateModel::indep_gamma(double a1, double a2)
{
    require_positive(a1, "a1");
    require_positive(a2, "a2");

    BivariateModel m;
    m.name_ = ModelName::indep_gamma;
    m.mode_ = Mode::scale;
    m.hyper_ = {{"a1", a1}, {"a2", a2}};
    m.support_ = "positive quadrant";
    m.density_ = [=](double z1, double z2) { return gamma_pdf(z1, a1) * gamma_pdf(z2, a2); };
    // Given the ratio, the targeted coordinate is Gamma(a1 + a2) with rate 1 + u or 1 + 1/u.
    const double shape = a1 + a2;
    m.kernel_ = [=](Target target, double u, double s) {
        if (!(u > 0.0))
            return 0.0;
        const double rate = target == Target::smaller ? 1.0 + u : 1.0 + 1.0 / u;
        return gamma_kernel(s, shape, rate);
    };
    m.window_ = [=](Target target, double u) {
        if (!(u > 0.0))
            return Window{0.0, 0.0, 0.0, 1.0};
        const double rate = target == Target::smaller ? 1.0 + u : 1.0 + 1.0 / u;
        return Window{0.0, kInf, shape / rate, (std::sqrt(shape) + 1.0) / rate};
    };
    m.sampler_ = [=](std::mt19937_64& rng) {
        std::gamma_distribution<double> g1(a1, 1.0);
        std::gamma_distribution<double> g2(a2, 1.0);
        const double z1 = g1(rng);
        const double z2 = g2(rng);
        return std::pair{z1, z2};
    };
    m.marginal_ = [=](int i, double z) { return gamma_pdf(z, i == 0 ? a1 : a2); };
    m.marginal_window_ = [=](int i) {
        const double a = i == 0 ? a1 : a2;
        return Window{0.0, kInf, a, std::sqrt(a) + 1.0};
    };
    return m;
}

BivariateModel BivariateModel::custom(CustomModelSpec spec)
{
    if (!spec.density || !spec.window)
        throw ConfigError("custom model '" + spec.label + "' needs a density and a window");
    BivariateModel m;
    m.name_ = ModelName::custom;
    m.mode_ = spec.mode;
    m.label_ = spec.label;
    m.support_ = "user supplied";
    m.density_ = spec.density;
    m.kernel_ = [f = spec.density, mode = spec.mode](Target target, double u, double s) {
        return kernel_from_density(f, mode, target, u, s);
    };
    m.window_ = std::move(spec.window);
    m.sampler_ = std::move(spec.sampler);
    if (spec.marginal_density && spec.marginal_window) {
        m.marginal_ = std::move(spec.marginal_density);
        m.marginal_window_ = std::move(spec.marginal_window);
    }
    return m;
}

double BivariateModel::hyper(const std::string& key) const
{
    const auto it = hyper_.find(key);
    if (it == hyper_.end())
        throw LookupError("model " + id() + " has no hyperparameter '" + key + "'");
    return it->second;
}

std::string BivariateModel::id() const
{
    std::ostringstream out;
    out << (name_ == ModelName::custom ? label_ : std::string(to_string(name_)));
    if (!hyper_.empty()) {
        out << '[' << std::setprecision(12);
        bool first = true;
        for (const auto& [key, value] : hyper_) {
            out << (first ? "" : ";") << key << '=' << value;
            first = false;
        }
        out << ']';
    }
    return out.str();
}

double BivariateModel::joint_density(double z1, double z2) const
{
    return density_(z1, z2);
}

double BivariateModel::conditional_kernel(Target target, double u, double s) const
{
    return kernel_(target, u, s);
}

Window BivariateModel::window(Target target, double u) const
{
    return window_(target, u);
}

double BivariateModel::marginal_density(int index, double z) const
{
    if (!marginal_)
        throw ConfigError("model " + id() + " has no marginal densities");
    return marginal_(index, z);
}

Window BivariateModel::marginal_window(int index) const
{
    if (!marginal_window_)
        throw ConfigError("model " + id() + " has no marginal densities");
    return marginal_window_(index);
}

std::pair<double, double> BivariateModel::draw(std::mt19937_64& rng) const
{
    if (!sampler_)
        throw ConfigError("model " + id() + " has no sampler");
    return sampler_(rng);
}

BivariateModel model_from_config(std::string_view name, const Hyper& hyper)
{
    const ModelName which = model_name_from_string(name);
    std::set<std::string> used;
    auto get = [&](const std::string& key) {
        const auto it = hyper.find(key);
        if (it == hyper.end())
            throw ConfigError("model " + std::string(name) + " requires hyperparameter '" + key + "'");
        used.insert(key);
        return it->second;
    };

    auto build = [&]() {
        switch (which) {
        case ModelName::bvn: return BivariateModel::bvn(get("s1"), get("s2"), get("rho"));
        case ModelName::dep_exp_gamma: return BivariateModel::dep_exp_gamma();
        case ModelName::indep_exp: return BivariateModel::indep_exp(get("s1"), get("s2"));
        case ModelName::cheriyan_gamma: return BivariateModel::cheriyan_gamma();
        case ModelName::power_uniform: return BivariateModel::power_uniform(get("a1"), get("a2"));
        case ModelName::indep_gamma: return BivariateModel::indep_gamma(get("a1"), get("a2"));
        case ModelName::custom: break;
        }
        throw ConfigError("custom models cannot be built from a name");
    };
    BivariateModel model = build();
    for (const auto& [key, value] : hyper)
        if (!used.count(key))
            throw ConfigError("model " + std::string(name) + " does not take hyperparameter '" + key + "'");
    return model;
}

double conditional_density(const BivariateModel& model, Target target, double s, double u,
                           const QuadratureOptions& opts)
{
    const Window w = model.window(target, u);
    double norm = 0.0;
    try {
        norm = integrate([&](double x) { return model.conditional_kernel(target, u, x); }, w, opts).value;
    }
    catch (const DivergenceError& ex) {
        throw DegenerateConditional(u, std::string("conditional normalizer diverges: ") + ex.what());
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        std::ostringstream msg;
        msg << "conditional density of model " << model.id() << " is improper at ancillary value " << u;
        throw DegenerateConditional(u, msg.str());
    }
    return model.conditional_kernel(target, u, s) / norm;
}

std::pair<double, double> draw_at(const BivariateModel& model, const Theta& theta,
                                  std::mt19937_64& rng)
{
    const auto [z1, z2] = model.draw(rng);
    if (model.mode() == Mode::location)
        return {z1 + theta.theta1(), z2 + theta.theta2()};
    return {z1 * theta.theta1(), z2 * theta.theta2()};
}

std::vector<std::pair<double, double>> sample(const BivariateModel& model, const Theta& theta,
                                              std::size_t n, std::uint64_t seed)
{
    if (n == 0)
        throw ConfigError("sample size must be at least 1");
    if (model.mode() == Mode::scale && !(theta.theta1() > 0.0))
        throw DomainError("scale models need theta > 0");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(draw_at(model, theta, rng));
    return out;
}

Loss catalog_loss(const BivariateModel& model)
{
    if (model.name() == ModelName::dep_exp_gamma)
        return Loss::linex();
    return Loss::squared_error(model.mode());
}

bool has_closed_form(const BivariateModel& model, const Loss& loss)
{
    if (model.name() == ModelName::custom || loss.kind() != model.mode())
        return false;
    return loss.name() == catalog_loss(model).name();
}

namespace {

// Coefficient of (t − λ) in the Gaussian closed form; zero in the degenerate case.
double bvn_slope(const BivariateModel& m, Target target)
{
    const double s1 = m.hyper("s1"), s2 = m.hyper("s2"), rho = m.hyper("rho");
    const double v = s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2;
    const double gap = target == Target::smaller ? rho * s2 - s1 : s2 - rho * s1;
    const double own = target == Target::smaller ? s1 : s2;
    if (std::abs(gap) <= 1e-12 * std::max(s1, s2))
        return 0.0;
    return own * gap / v;
}

double dep_exp_h(double u)
{
    return std::log(4.0 * (2.0 + u) / (1.0 + u));
}

double harmonic_k(const BivariateModel& m)
{
    const double s1 = m.hyper("s1"), s2 = m.hyper("s2");
    return s1 * s2 / (s1 + s2);
}

// (1/3)(1 − (1+x)^−3)/(1 − (1+x)^−4), continuous at 0 with value 1/4.
double cheriyan_g(double x)
{
    if (x == 0.0)
        return 0.25;
    const double l = std::log1p(x);
    return std::expm1(-3.0 * l) / (3.0 * std::expm1(-4.0 * l));
}

double cheriyan_smaller(double u)
{
    return u < 1.0 ? cheriyan_g(u) : u * cheriyan_g(1.0 / u);
}

double cheriyan_larger(double u)
{
    return u > 1.0 ? cheriyan_g(1.0 / u) : cheriyan_g(u) / u;
}

double shape_sum(const BivariateModel& m)
{
    return m.hyper("a1") + m.hyper("a2");
}

void check_closed_form_args(const BivariateModel& model, const Loss& loss, double t)
{
    if (loss.kind() != model.mode())
        throw ConfigError("loss kind " + std::string(to_string(loss.kind())) + " does not match model " +
                          model.id());
    if (!std::isfinite(t))
        throw DomainError("ancillary value must be finite");
    if (model.mode() == Mode::scale && !(t > 0.0)) {
        std::ostringstream msg;
        msg << "ancillary ratio must be > 0, got " << t;
        throw DomainError(msg.str());
    }
}

}  // namespace

std::optional<double> closed_form_psi(const BivariateModel& model, const Loss& loss, Target target,
                                      double lambda, double t)
{
    check_closed_form_args(model, loss, t);
    if (!std::isfinite(lambda) || lambda < identity_lambda(model.mode())) {
        std::ostringstream msg;
        msg << "lambda=" << lambda << " is below the identity value " << identity_lambda(model.mode());
        throw DomainError(msg.str());
    }
    if (!has_closed_form(model, loss))
        return std::nullopt;

    const bool smaller = target == Target::smaller;
    switch (model.name()) {
    case ModelName::bvn:
        return bvn_slope(model, target) * (t - lambda);
    case ModelName::dep_exp_gamma: {
        const double u = t - lambda;
        if (u < 0.0) {
            std::ostringstream msg;
            msg << "closed form needs t >= lambda (support of the difference), got t=" << t
                << ", lambda=" << lambda;
            throw DomainError(msg.str());
        }
        return smaller ? dep_exp_h(u) : u + dep_exp_h(u);
    }
    case ModelName::indep_exp: {
        const double k = harmonic_k(model);
        return (smaller ? std::max(0.0, lambda - t) : std::max(0.0, t - lambda)) + k;
    }
    case ModelName::cheriyan_gamma:
        return smaller ? cheriyan_smaller(t / lambda) : cheriyan_larger(t / lambda);
    case ModelName::power_uniform: {
        const double a = shape_sum(model);
        const double c = (a + 2.0) / (a + 1.0);
        return c * std::max(1.0, smaller ? t / lambda : lambda / t);
    }
    case ModelName::indep_gamma: {
        const double a = shape_sum(model);
        return (1.0 + (smaller ? t / lambda : lambda / t)) / (a + 1.0);
    }
    case ModelName::custom: break;
    }
    return std::nullopt;
}

std::optional<BoundsPoint> closed_form_bounds(const BivariateModel& model, const Loss& loss,
                                              Target target, double t)
{
    check_closed_form_args(model, loss, t);
    if (!has_closed_form(model, loss))
        return std::nullopt;

    const bool smaller = target == Target::smaller;
    switch (model.name()) {
    case ModelName::bvn: {
        // ψ_λ = c(t − λ) is monotone in λ, so one end is ct and the other ±∞.
        const double c = bvn_slope(model, target);
        if (c == 0.0)
            return BoundsPoint{0.0, 0.0};
        return c < 0.0 ? BoundsPoint{c * t, kInf} : BoundsPoint{-kInf, c * t};
    }
    case ModelName::dep_exp_gamma: {
        if (t < 0.0) {
            std::ostringstream msg;
            msg << "difference of this model is nonnegative, got t=" << t;
            throw DomainError(msg.str());
        }
        const double ln8 = std::log(8.0);
        return smaller ? BoundsPoint{dep_exp_h(t), ln8} : BoundsPoint{ln8, t + dep_exp_h(t)};
    }
    case ModelName::indep_exp: {
        const double k = harmonic_k(model);
        return smaller ? BoundsPoint{std::max(0.0, -t) + k, kInf} : BoundsPoint{k, std::max(0.0, t) + k};
    }
    case ModelName::cheriyan_gamma:
        return smaller ? BoundsPoint{0.25, cheriyan_smaller(t)} : BoundsPoint{cheriyan_larger(t), kInf};
    case ModelName::power_uniform: {
        const double a = shape_sum(model);
        const double c = (a + 2.0) / (a + 1.0);
        return smaller ? BoundsPoint{c, c * std::max(1.0, t)} : BoundsPoint{c * std::max(1.0, 1.0 / t), kInf};
    }
    case ModelName::indep_gamma: {
        const double a = shape_sum(model);
        return smaller ? BoundsPoint{1.0 / (a + 1.0), (1.0 + t) / (a + 1.0)}
                       : BoundsPoint{(1.0 + 1.0 / t) / (a + 1.0), kInf};
    }
    case ModelName::custom: break;
    }
    return std::nullopt;
}

}  // namespace orderest
