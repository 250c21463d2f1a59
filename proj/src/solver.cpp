#include "orderest/solver.hpp"

#include "orderest/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace orderest {

std::string_view to_string(Provenance p)
{
    return p == Provenance::closed_form ? "closed_form" : "grid_approximate";
}

std::string_view to_string(Monotonicity m)
{
    switch (m) {
    case Monotonicity::nondecreasing: return "nondecreasing";
    case Monotonicity::nonincreasing: return "nonincreasing";
    case Monotonicity::none: return "none";
    }
    return "none";
}

std::vector<double> default_lambda_grid(Mode mode, double max, int points)
{
    if (points < 3)
        throw ConfigError("lambda grid needs at least 3 points");
    const double first = mode == Mode::location ? 1e-3 : 1.0;
    if (!(max > first) || !std::isfinite(max)) {
        std::ostringstream msg;
        msg << "lambda grid maximum must exceed " << first;
        throw ConfigError(msg.str());
    }
    std::vector<double> grid;
    grid.reserve(points);
    const int logs = mode == Mode::location ? points - 1 : points;
    if (mode == Mode::location)
        grid.push_back(0.0);
    const double a = std::log10(first), b = std::log10(max);
    for (int i = 0; i < logs; ++i)
        grid.push_back(std::pow(10.0, a + (b - a) * i / (logs - 1)));
    grid.back() = max;
    return grid;
}

void SolverOptions::validate(Mode mode) const
{
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(what) + " must be finite and > 0");
    };
    positive(abs_tol, "abs_tol");
    positive(quad_rel_tol, "quad_rel_tol");
    positive(bracket_init, "bracket_init");
    positive(tail_cutoff, "tail_cutoff");
    positive(divergence_threshold, "divergence_threshold");
    if (bracket_max_expansions < 1)
        throw ConfigError("bracket_max_expansions must be >= 1");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!std::isfinite(lambda_grid[i]) || lambda_grid[i] < identity_lambda(mode))
            throw ConfigError("lambda grid values must be finite and at least the identity value");
        if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
            throw ConfigError("lambda grid must be strictly increasing");
    }
}

QuadratureOptions SolverOptions::quadrature() const
{
    QuadratureOptions q;
    q.rel_tol = quad_rel_tol;
    q.tail_cutoff = tail_cutoff;
    return q;
}

std::vector<double> SolverOptions::grid_for(Mode mode) const
{
    return lambda_grid.empty() ? default_lambda_grid(mode) : lambda_grid;
}

double shifted_ancillary(Mode mode, double lambda, double t)
{
    return mode == Mode::location ? t - lambda : t / lambda;
}

namespace {

void check_inputs(const BivariateModel& model, const Loss& loss, double lambda, double t)
{
    if (loss.kind() != model.mode())
        throw ConfigError("loss kind " + std::string(to_string(loss.kind())) + " does not match model " +
                          model.id());
    if (!std::isfinite(lambda) || lambda < identity_lambda(model.mode())) {
        std::ostringstream msg;
        msg << "lambda=" << lambda << " is below the identity value " << identity_lambda(model.mode());
        throw DomainError(msg.str());
    }
    if (!std::isfinite(t))
        throw DomainError("ancillary value must be finite");
}

/// First-order function of one conditional (or marginal) law, normalized by its mass.
class FirstOrder {
public:
    FirstOrder(std::function<double(double)> kernel, Window window, const Loss& loss,
               const SolverOptions& opts, double ancillary)
        : kernel_(std::move(kernel)), window_(window), loss_(loss), q_(opts.quadrature())
    {
        double norm = 0.0;
        try {
            norm = integrate(kernel_, window_, q_).value;
        }
        catch (const DivergenceError& ex) {
            throw DegenerateConditional(ancillary, std::string("normalizer diverges: ") + ex.what());
        }
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            std::ostringstream msg;
            msg << "conditional law is improper at ancillary value " << ancillary;
            throw DegenerateConditional(ancillary, msg.str());
        }
        norm_ = norm;
    }

    double operator()(double c) const
    {
        const double m = loss_.argmin();
        if (loss_.kind() == LossKind::location) {
            const double kink[] = {c + m};
            auto f = [&](double s) {
                const double k = kernel_(s);
                return k == 0.0 ? 0.0 : loss_.deriv(s - c) * k;
            };
            return integrate(f, window_, kink, q_).value / norm_;
        }
        const double kink[] = {m / c};
        auto f = [&](double s) {
            const double k = kernel_(s);
            return k == 0.0 ? 0.0 : s * loss_.deriv(c * s) * k;
        };
        return integrate(f, window_, kink, q_).value / norm_;
    }

    // Where the bracket search starts: the mass center mapped to the loss minimum.
    double start() const
    {
        const double center = window_.center;
        if (loss_.kind() == LossKind::location)
            return center + loss_.argmin();
        return center > 0.0 ? loss_.argmin() / center : 1.0;
    }

private:
    std::function<double(double)> kernel_;
    Window window_;
    const Loss& loss_;
    QuadratureOptions q_;
    double norm_ = 1.0;
};

/// Root of a monotone G by geometric bracket expansion and bisection.
/// `increasing` says which way G moves with c; scale roots are bracketed in log c.
double find_root(const std::function<double(double)>& g, bool increasing, bool positive_axis,
                 double start, const SolverOptions& opts)
{
    auto h = [&](double c) { return increasing ? g(c) : -g(c); };
    auto to_c = [&](double x) { return positive_axis ? std::exp(x) : x; };

    const double x0 = positive_axis ? std::log(start) : start;
    double lo = x0 - opts.bracket_init, hi = x0 + opts.bracket_init;
    double step = opts.bracket_init;
    double h_lo = h(to_c(lo));
    int expansions = 0;
    while (h_lo > 0.0) {
        if (++expansions > opts.bracket_max_expansions)
            throw NoSignChange("first-order function has no root below the bracket; uniqueness/existence assumption violated");
        hi = lo;
        step *= 2.0;
        lo -= step;
        h_lo = h(to_c(lo));
    }
    step = opts.bracket_init;
    double h_hi = h(to_c(hi));
    expansions = 0;
    while (h_hi < 0.0) {
        if (++expansions > opts.bracket_max_expansions)
            throw NoSignChange("first-order function has no root above the bracket; uniqueness/existence assumption violated");
        lo = hi;
        step *= 2.0;
        hi += step;
        h_hi = h(to_c(hi));
    }

    double a = to_c(lo), b = to_c(hi);
    if (!std::isfinite(a) || !std::isfinite(b) || (positive_axis && !(a > 0.0)))
        throw NoSignChange("root bracket left the representable range");

    // Narrow to a zero set boundary: returns the point where h changes from `below` to not.
    auto boundary = [&](double l, double r, auto&& left_side) {
        while (r - l > opts.abs_tol) {
            const double m = 0.5 * (l + r);
            if (m <= l || m >= r)
                break;
            if (left_side(h(m)))
                l = m;
            else
                r = m;
        }
        return std::pair{l, r};
    };

    while (b - a > opts.abs_tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b)
            break;
        const double v = h(m);
        if (v < 0.0) {
            a = m;
        }
        else if (v > 0.0) {
            b = m;
        }
        else {
            // G vanishes on an interval: return the midpoint of the zero set.
            const double left = boundary(a, m, [](double x) { return x < 0.0; }).second;
            const double right = boundary(m, b, [](double x) { return x <= 0.0; }).first;
            return 0.5 * (left + right);
        }
    }
    return 0.5 * (a + b);
}

FirstOrder conditional_first_order(const BivariateModel& model, const Loss& loss, Target target,
                                   double lambda, double t, const SolverOptions& opts)
{
    check_inputs(model, loss, lambda, t);
    const double u = shifted_ancillary(model.mode(), lambda, t);
    auto kernel = [&model, target, u](double s) { return model.conditional_kernel(target, u, s); };
    return FirstOrder(kernel, model.window(target, u), loss, opts, u);
}

}  // namespace

double first_order_residual(const BivariateModel& model, const Loss& loss, Target target,
                            double lambda, double t, double c, const SolverOptions& opts)
{
    return conditional_first_order(model, loss, target, lambda, t, opts)(c);
}

double solve_psi_lambda(const BivariateModel& model, const Loss& loss, Target target, double lambda,
                        double t, const SolverOptions& opts)
{
    opts.validate(model.mode());
    const FirstOrder g = conditional_first_order(model, loss, target, lambda, t, opts);
    const bool scale = model.mode() == Mode::scale;
    // (C2) makes G nonincreasing in c for location and nondecreasing for scale.
    return find_root(std::cref(g), scale, scale, g.start(), opts);
}

double solve_unrestricted_constant(const BivariateModel& model, const Loss& loss, Target target,
                                   const SolverOptions& opts)
{
    opts.validate(model.mode());
    if (loss.kind() != model.mode())
        throw ConfigError("loss kind does not match model " + model.id());
    const int i = target_index(target);
    auto density = [&model, i](double z) { return model.marginal_density(i, z); };
    const FirstOrder g(density, model.marginal_window(i), loss, opts, 0.0);
    const bool scale = model.mode() == Mode::scale;
    return find_root(std::cref(g), scale, scale, g.start(), opts);
}

std::vector<double> default_s_grid(const BivariateModel& model, Target target, double lambda,
                                   double t, int points)
{
    if (points < 2)
        throw ConfigError("s grid needs at least 2 points");
    const Mode mode = model.mode();
    const Window windows[] = {model.window(target, shifted_ancillary(mode, lambda, t)),
                              model.window(target, shifted_ancillary(mode, identity_lambda(mode), t))};
    double lo = kInf, hi = -kInf;
    for (const Window& w : windows) {
        if (w.empty())
            continue;
        const double reach = 10.0 * w.spread;
        lo = std::min(lo, std::max(w.lo, w.center - reach));
        hi = std::max(hi, std::min(w.hi, w.center + reach));
    }
    if (!(hi > lo))
        throw InsufficientSupport("both conditional laws are improper; no s grid");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * (i + 0.5) / points;
    return grid;
}

namespace {

struct LrShape {
    bool up;
    bool down;
};

LrShape lr_shape(const BivariateModel& model, Target target, double lambda, double t,
                 const std::vector<double>& s_grid)
{
    const Mode mode = model.mode();
    const double u_lambda = shifted_ancillary(mode, lambda, t);
    const double u_id = shifted_ancillary(mode, identity_lambda(mode), t);

    std::vector<double> ratio;
    int positive_den = 0;
    for (double s : s_grid) {
        // Subnormal kernel values carry too few bits for a meaningful ratio; count them as zero.
        auto normal = [](double v) { return v < std::numeric_limits<double>::min() ? 0.0 : v; };
        const double num = normal(model.conditional_kernel(target, u_lambda, s));
        const double den = normal(model.conditional_kernel(target, u_id, s));
        if (den > 0.0) {
            ++positive_den;
            ratio.push_back(num / den);
        }
        else if (num > 0.0) {
            ratio.push_back(kInf);
        }
    }
    if (positive_den < 2)
        throw InsufficientSupport("likelihood-ratio check needs two grid points with positive denominator");

    auto le = [](double a, double b) {
        if (a == b)
            return true;
        if (std::isinf(a) || std::isinf(b))
            return a < b;
        return a <= b + 1e-12 * std::max(std::abs(a), std::abs(b));
    };
    bool up = true, down = true;
    for (std::size_t i = 1; i < ratio.size(); ++i) {
        up = up && le(ratio[i - 1], ratio[i]);
        down = down && le(ratio[i], ratio[i - 1]);
    }
    return {up, down};
}

}  // namespace

Monotonicity check_lr_monotonicity(const BivariateModel& model, Target target, double lambda,
                                   double t, const std::vector<double>& s_grid)
{
    const LrShape shape = lr_shape(model, target, lambda, t, s_grid);
    if (shape.up)
        return Monotonicity::nondecreasing;
    return shape.down ? Monotonicity::nonincreasing : Monotonicity::none;
}

Monotonicity predicted_psi_direction(const BivariateModel& model, Target target, double t,
                                     const std::vector<double>& lambda_grid)
{
    const Mode mode = model.mode();
    std::optional<Monotonicity> agreed;
    bool tied = false;
    for (double lambda : lambda_grid) {
        if (lambda == identity_lambda(mode))
            continue;
        if (model.window(target, shifted_ancillary(mode, lambda, t)).empty())
            continue;
        LrShape shape;
        try {
            shape = lr_shape(model, target, lambda, t, default_s_grid(model, target, lambda, t));
        }
        catch (const InsufficientSupport&) {
            continue;
        }
        // A ratio constant on the grid fits either direction and decides nothing.
        if (shape.up && shape.down) {
            tied = true;
            continue;
        }
        if (!shape.up && !shape.down)
            return Monotonicity::none;
        Monotonicity m = shape.up ? Monotonicity::nondecreasing : Monotonicity::nonincreasing;
        // Scale ancillaries shrink as λ grows (t/λ), which reverses the direction.
        if (mode == Mode::scale)
            m = m == Monotonicity::nondecreasing ? Monotonicity::nonincreasing : Monotonicity::nondecreasing;
        if (agreed && *agreed != m)
            return Monotonicity::none;
        agreed = m;
    }
    if (!agreed && tied)
        return Monotonicity::nondecreasing;  // ψ_λ(t) constant in λ; tie rule
    return agreed.value_or(Monotonicity::none);
}

namespace {

// Limit of a monotone sequence from its last three samples. Ratios of successive
// differences near 1 (linear or logarithmic growth) mean the limit is infinite.
double extrapolate(const std::vector<double>& v, double sign, double threshold)
{
    const double last = v.back();
    if (std::abs(last) > threshold)
        return sign * kInf;
    if (v.size() < 3)
        return last;
    const double d1 = v[v.size() - 2] - v[v.size() - 3];
    const double d2 = last - v[v.size() - 2];
    if (std::abs(d2) <= 1e-9 * std::max(1.0, std::abs(last)) || d1 == 0.0)
        return last;
    const double r = d2 / d1;
    if (r >= 0.95)
        return sign * kInf;
    if (r <= 0.0)
        return last;
    return last + d2 * r / (1.0 - r);
}

}  // namespace

BoundsValue compute_bounds_numeric(const BivariateModel& model, const Loss& loss, Target target,
                                   double t, const SolverOptions& opts)
{
    opts.validate(model.mode());
    const Mode mode = model.mode();
    std::vector<double> grid = opts.grid_for(mode);
    if (grid.front() > identity_lambda(mode))
        grid.insert(grid.begin(), identity_lambda(mode));

    std::vector<double> lambdas, psi;
    bool truncated = false, unbounded = false;
    for (double lambda : grid) {
        double value = 0.0;
        try {
            value = solve_psi_lambda(model, loss, target, lambda, t, opts);
        }
        catch (const DegenerateConditional&) {
            if (lambdas.empty())
                throw;
            // The conditional support ends between the last good λ and this one:
            // bisect toward the edge so the envelope reaches the limiting value.
            double good = lambdas.back(), bad = lambda, edge_psi = psi.back();
            for (int i = 0; i < 80 && bad - good > 1e-12 * std::max(1.0, bad); ++i) {
                const double mid = 0.5 * (good + bad);
                try {
                    edge_psi = solve_psi_lambda(model, loss, target, mid, t, opts);
                    good = mid;
                }
                catch (const DegenerateConditional&) {
                    bad = mid;
                }
            }
            if (good > lambdas.back()) {
                lambdas.push_back(good);
                psi.push_back(edge_psi);
            }
            truncated = true;
            break;
        }
        if (std::abs(value) > opts.divergence_threshold) {
            unbounded = true;
            lambdas.push_back(lambda);
            psi.push_back(value);
            break;
        }
        lambdas.push_back(lambda);
        psi.push_back(value);
    }

    const Monotonicity dir = predicted_psi_direction(model, target, t, lambdas);
    if (dir == Monotonicity::none) {
        const auto [lo, hi] = std::minmax_element(psi.begin(), psi.end());
        return {*lo, *hi, Provenance::grid_approximate};
    }

    const double sign = dir == Monotonicity::nondecreasing ? 1.0 : -1.0;
    for (std::size_t i = 1; i < psi.size(); ++i) {
        const double slack = 1e-9 * std::max(1.0, std::abs(psi[i]));
        if (sign * (psi[i] - psi[i - 1]) < -slack) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "psi_lambda(" << t << ") is not " << to_string(dir) << " in lambda as the likelihood ratio predicts: "
                << psi[i - 1] << " at lambda=" << lambdas[i - 1] << ", " << psi[i] << " at lambda=" << lambdas[i];
            throw InconsistencyError(msg.str());
        }
    }

    double far;
    if (unbounded)
        far = sign * kInf;
    else if (truncated)
        far = psi.back();
    else
        far = extrapolate(psi, sign, opts.divergence_threshold);
    const double near = psi.front();
    return sign > 0 ? BoundsValue{near, far, Provenance::grid_approximate}
                    : BoundsValue{far, near, Provenance::grid_approximate};
}

BoundsValue compute_bounds(const BivariateModel& model, const Loss& loss, Target target, double t,
                           const SolverOptions& opts)
{
    if (const auto b = closed_form_bounds(model, loss, target, t))
        return {b->lower, b->upper, Provenance::closed_form};
    return compute_bounds_numeric(model, loss, target, t, opts);
}

PsiBounds make_bounds(const BivariateModel& model, const Loss& loss, Target target,
                      const SolverOptions& opts)
{
    PsiBounds b;
    const bool closed = has_closed_form(model, loss);
    b.provenance = closed ? Provenance::closed_form : Provenance::grid_approximate;
    if (!closed)
        b.lambda_grid = opts.grid_for(model.mode());
    b.lower = [=](double t) { return compute_bounds(model, loss, target, t, opts).lower; };
    b.upper = [=](double t) { return compute_bounds(model, loss, target, t, opts).upper; };
    return b;
}

}  // namespace orderest
