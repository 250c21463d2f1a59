#pragma once

// Independent oracles for the tests. Nothing here goes through the library's
// quadrature, windows or conditional kernels: conditional moments come from
// composite Simpson sums over the joint density, cell probabilities from
// midpoint sums.

#include "orderest/families.hpp"
#include "orderest/loss.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testsupport {

using namespace orderest;

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000)
{
    if (n % 2)
        ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Unnormalized conditional weight of the targeted coordinate s, straight from the joint density.
inline double conditional_weight(const BivariateModel& m, Target target, double u, double s)
{
    if (m.mode() == Mode::location)
        return target == Target::smaller ? m.joint_density(s, s + u) : m.joint_density(s - u, s);
    if (!(s > 0.0))
        return 0.0;
    return target == Target::smaller ? s * m.joint_density(s, s * u) : s * m.joint_density(s / u, s);
}

/// ψ_λ(t) for the built-in losses from conditional moments:
/// squared-error location E[S], squared-error scale E[S]/E[S²], LINEX ln E[e^S].
/// [a, b] must hold the conditional mass.
inline double moment_psi(const BivariateModel& m, const Loss& loss, Target target, double lambda, double t,
                         double a, double b, int n = 40000)
{
    const double u = m.mode() == Mode::location ? t - lambda : t / lambda;
    auto w = [&](double s) { return conditional_weight(m, target, u, s); };
    const double mass = simpson(w, a, b, n);
    if (loss.name() == LossName::linex)
        return std::log(simpson([&](double s) { return std::exp(s) * w(s); }, a, b, n) / mass);
    const double m1 = simpson([&](double s) { return s * w(s); }, a, b, n) / mass;
    if (m.mode() == Mode::location)
        return m1;
    const double m2 = simpson([&](double s) { return s * s * w(s); }, a, b, n) / mass;
    return m1 / m2;
}

struct HistogramResult {
    double max_z = 0.0;   // largest |count − expected| / SE over cells with positive probability
    int stray = 0;        // draws in cells of zero probability
    double covered = 0.0; // total probability of the box
};

/// 8×8 histogram of n standardized draws on [x0,x1]×[y0,y1] against midpoint
/// cell probabilities of joint_density (sub-cell counts differ per axis so that
/// no midpoint sits on the diagonal of the wedge models).
inline HistogramResult histogram_check(const BivariateModel& m, double x0, double x1, double y0, double y1,
                                       std::size_t n, std::uint64_t seed, int cells = 8)
{
    const double hx = (x1 - x0) / cells, hy = (y1 - y0) / cells;
    std::vector<double> count(cells * cells, 0.0);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [z1, z2] = m.draw(rng);
        const int i = static_cast<int>(std::floor((z1 - x0) / hx));
        const int j = static_cast<int>(std::floor((z2 - y0) / hy));
        if (i >= 0 && i < cells && j >= 0 && j < cells)
            count[i * cells + j] += 1.0;
    }
    const int sx = 160, sy = 161;
    HistogramResult res;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            double p = 0.0;
            const double dx = hx / sx, dy = hy / sy;
            for (int a = 0; a < sx; ++a)
                for (int b = 0; b < sy; ++b)
                    p += m.joint_density(x0 + i * hx + (a + 0.5) * dx, y0 + j * hy + (b + 0.5) * dy);
            p *= dx * dy;
            res.covered += p;
            const double c = count[i * cells + j];
            if (p <= 0.0) {
                res.stray += static_cast<int>(c);
                continue;
            }
            const double se = std::sqrt(n * p * (1.0 - p));
            res.max_z = std::max(res.max_z, std::abs(c - n * p) / se);
        }
    return res;
}

}  // namespace testsupport
