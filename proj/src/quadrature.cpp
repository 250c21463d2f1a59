#include "orderest/quadrature.hpp"

#include "orderest/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace orderest {

namespace {

boost::math::quadrature::tanh_sinh<double>& integrator()
{
    // Abscissa tables are expensive to build; one per thread.
    thread_local boost::math::quadrature::tanh_sinh<double> instance(15);
    return instance;
}

[[noreturn]] void throw_divergence(double a, double b, const char* why)
{
    std::ostringstream msg;
    msg << "integral diverges on [" << a << ", " << b << "]: " << why;
    throw DivergenceError(msg.str());
}

QuadratureResult integrate_split(const std::function<double(double)>& f, double a, double b,
                                 std::span<const double> breakpoints, double rel_tol)
{
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b)
            cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    QuadratureResult total;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (!(cuts[i] > cuts[i - 1]))
            continue;
        const auto piece = integrate_finite(f, cuts[i - 1], cuts[i], rel_tol);
        total.value += piece.value;
        total.l1 += piece.l1;
    }
    return total;
}

}  // namespace

QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol)
{
    if (!(b > a))
        return {};
    if (!std::isfinite(a) || !std::isfinite(b))
        throw ConfigError("integrate_finite needs finite limits");
    double error = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    bool negative = false, positive = false;
    auto watched = [&](double x) {
        const double y = f(x);
        negative = negative || y < 0.0;
        positive = positive || y > 0.0;
        return y;
    };
    try {
        value = integrator().integrate(watched, a, b, rel_tol, &error, &l1);
        // The library's L1 estimate sums reflected pairs before taking |.|, which
        // cancels for sign-changing integrands, so integrate |f| instead.
        if (negative && positive)
            l1 = integrator().integrate([&](double x) { return std::abs(f(x)); }, a, b,
                                        std::max(rel_tol, 1e-6));
        else
            l1 = std::abs(value);
    }
    catch (const std::exception& ex) {
        throw_divergence(a, b, ex.what());
    }
    if (!std::isfinite(value) || !std::isfinite(l1))
        throw_divergence(a, b, "non-finite partial integral");
    return {value, l1};
}

QuadratureResult integrate(const std::function<double(double)>& f, const Window& window,
                           std::span<const double> breakpoints, const QuadratureOptions& opts)
{
    if (window.empty())
        return {};
    if (!(window.spread > 0.0) || !std::isfinite(window.spread) || !std::isfinite(window.center))
        throw ConfigError("integration window needs a finite positive spread and finite center");

    const double reach = opts.core_halfwidth * window.spread;
    double core_lo = std::max(window.lo, window.center - reach);
    double core_hi = std::min(window.hi, window.center + reach);
    if (!(core_hi > core_lo)) {
        // Hint fell outside the support; anchor the core on the finite edge.
        if (std::isfinite(window.lo)) {
            core_lo = window.lo;
            core_hi = std::min(window.hi, window.lo + 2.0 * reach);
        }
        else {
            core_hi = window.hi;
            core_lo = window.hi - 2.0 * reach;
        }
    }

    QuadratureResult total = integrate_split(f, core_lo, core_hi, breakpoints, opts.rel_tol);

    auto expand = [&](double edge, double limit, double direction) {
        double width = reach;
        bool done = !(direction > 0 ? edge < limit : edge > limit);
        int step = 0;
        while (!done) {
            if (step++ >= opts.max_tail_steps)
                throw_divergence(edge, limit, "tail mass never became negligible");
            double next = edge + direction * width;
            if (direction > 0 ? next >= limit : next <= limit) {
                next = limit;
                done = true;
            }
            if (!std::isfinite(next))
                throw_divergence(edge, next, "tail ran past the floating-point range");
            const double a = std::min(edge, next), b = std::max(edge, next);
            const auto chunk = integrate_split(f, a, b, breakpoints, opts.rel_tol);
            total.value += chunk.value;
            total.l1 += chunk.l1;
            if (!std::isfinite(total.value) || !std::isfinite(total.l1))
                throw_divergence(a, b, "non-finite running total");
            if (total.l1 > 0.0 && chunk.l1 <= opts.tail_cutoff * total.l1)
                done = true;
            edge = next;
            width *= 2.0;
        }
    };
    expand(core_hi, window.hi, +1.0);
    expand(core_lo, window.lo, -1.0);
    return total;
}

}  // namespace orderest
