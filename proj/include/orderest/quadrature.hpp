#pragma once

#include <functional>
#include <limits>
#include <span>

namespace orderest {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Support of an integrand plus a hint of where its mass sits.
///
/// The integrand is assumed to vanish outside [lo, hi]; either end may be
/// infinite. `center` and `spread` only steer truncation: the core interval
/// is center ± core_halfwidth·spread and unbounded sides are covered by
/// geometrically growing chunks until they become negligible.
struct Window {
    double lo = -kInf;
    double hi = kInf;
    double center = 0.0;
    double spread = 1.0;

    bool empty() const noexcept { return !(hi > lo); }
};

struct QuadratureOptions {
    double rel_tol = 1e-9;
    /// A tail chunk is negligible once its L1 mass is below this fraction of the running L1 total.
    double tail_cutoff = 1e-12;
    int max_tail_steps = 60;
    double core_halfwidth = 10.0;
};

struct QuadratureResult {
    double value = 0.0;
    double l1 = 0.0;  // integral of |f|
};

/// Integral of f over a finite interval (tanh-sinh; tolerates endpoint singularities).
QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol);

/// Integral of f over `window`, splitting at `breakpoints` (kinks or jumps of f).
///
/// Throws DivergenceError when a tail never becomes negligible or any partial
/// result is not finite.
QuadratureResult integrate(const std::function<double(double)>& f, const Window& window,
                           std::span<const double> breakpoints, const QuadratureOptions& opts);

inline QuadratureResult integrate(const std::function<double(double)>& f, const Window& window,
                                  const QuadratureOptions& opts)
{
    return integrate(f, window, {}, opts);
}

}  // namespace orderest
