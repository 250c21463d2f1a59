#include "orderest/error.hpp"
#include "orderest/estimators.hpp"
#include "orderest/families.hpp"
#include "orderest/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace orderest;

namespace {

EquivariantEstimator cat(const BivariateModel& m, Target target, EstimatorKind kind)
{
    return catalog_estimator(CatalogKey{m.name(), target, kind}, m);
}

PsiBounds constant_bounds(double lo, double hi)
{
    return PsiBounds{[lo](double) { return lo; }, [hi](double) { return hi; }};
}

// Random data on the support of each model: location pairs in [-5,5]², dep_exp with
// x2 > x1, scale pairs in (0.05, 20)².
std::pair<double, double> random_point(const BivariateModel& m, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> loc(-5.0, 5.0), gap(1e-3, 10.0), pos(0.05, 20.0);
    if (m.name() == ModelName::dep_exp_gamma) {
        const double x1 = loc(rng);
        return {x1, x1 + gap(rng)};
    }
    if (m.mode() == Mode::location)
        return {loc(rng), loc(rng)};
    return {pos(rng), pos(rng)};
}

/// Largest |est(x) − oracle(x)| over n random support points.
double max_gap(const EquivariantEstimator& est, const BivariateModel& m,
               const std::function<double(double, double)>& oracle, int n = 1000, std::uint64_t seed = 11)
{
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto [x1, x2] = random_point(m, rng);
        worst = std::max(worst, std::abs(est.evaluate(x1, x2) - oracle(x1, x2)));
    }
    return worst;
}

}  // namespace

TEST_SUITE("estimators")
{
    TEST_CASE("evaluate examples")
    {
        const auto bvn = BivariateModel::bvn(1, 1, 0);
        CHECK(cat(bvn, Target::smaller, EstimatorKind::blee).evaluate(3.2, 5.0) == 3.2);
        // min{2, (2 + 1)/2}
        CHECK(cat(bvn, Target::smaller, EstimatorKind::rmle).evaluate(2, 1) == doctest::Approx(1.5).epsilon(1e-14));
        // min{3/2, 12/3}
        const auto g = BivariateModel::indep_gamma(1, 1);
        CHECK(cat(g, Target::smaller, EstimatorKind::improved_bsee).evaluate(3, 9) ==
              doctest::Approx(1.5).epsilon(1e-14));
        CHECK(cat(BivariateModel::indep_gamma(2, 1), Target::smaller, EstimatorKind::bsee).evaluate(6, 1) ==
              doctest::Approx(2.0).epsilon(1e-14));
    }

    TEST_CASE("scale evaluation rejects nonpositive data")
    {
        const auto est = cat(BivariateModel::indep_gamma(1, 1), Target::smaller, EstimatorKind::bsee);
        CHECK_THROWS_AS(est.evaluate(0.0, 1.0), DomainError);
        CHECK_THROWS_AS(est.evaluate(1.0, -2.0), DomainError);
        EquivariantEstimator neg{Mode::scale, Target::smaller, [](double) { return -1.0; }, "neg"};
        CHECK_THROWS_AS(neg.evaluate(1.0, 2.0), DomainError);
    }

    TEST_CASE("clip examples")
    {
        EquivariantEstimator zero{Mode::location, Target::smaller, [](double) { return 0.0; }, "blee"};
        const auto c = clip_improve(zero, constant_bounds(2, 5));
        CHECK(c.label == "improved_blee");
        for (double t : {-3.0, 0.0, 4.0})
            CHECK(c.psi(t) == 2.0);

        EquivariantEstimator inside{Mode::location, Target::smaller, [](double t) { return std::sin(t); }, "s"};
        const auto same = clip_improve(inside, constant_bounds(-1, 1));
        for (double t = -6; t < 6; t += 0.37)
            CHECK(same.psi(t) == std::sin(t));

        // one-sided: infinite upper end
        const auto one = clip_improve(inside, constant_bounds(0.5, kInf));
        CHECK(one.psi(0.0) == 0.5);
        CHECK(one.psi(std::numbers::pi / 2) == 1.0);
    }

    TEST_CASE("invalid bounds are reported when evaluated")
    {
        EquivariantEstimator zero{Mode::location, Target::smaller, [](double) { return 0.0; }, "blee"};
        PsiBounds crossed{[](double t) { return t; }, [](double) { return 1.0; }};
        const auto c = clip_improve(zero, crossed);
        CHECK_NOTHROW(c.psi(0.5));
        CHECK_THROWS_AS(c.psi(2.0), InvalidBounds);
        CHECK_THROWS_AS(clip_improve_partial(zero, crossed, 0.5).psi(2.0), InvalidBounds);
    }

    TEST_CASE("partial move")
    {
        EquivariantEstimator zero{Mode::location, Target::smaller, [](double t) { return t; }, "id"};
        const PsiBounds b = constant_bounds(-1, 1);
        CHECK_THROWS_AS(clip_improve_partial(zero, b, -0.1), ConfigError);
        CHECK_THROWS_AS(clip_improve_partial(zero, b, 1.5), ConfigError);
        const auto half = clip_improve_partial(zero, b, 0.5);
        CHECK(half.psi(3.0) == doctest::Approx(2.0));
        CHECK(half.psi(-5.0) == doctest::Approx(-3.0));
        CHECK(half.psi(0.25) == 0.25);
        const auto full = clip_improve_partial(zero, b, 1.0);
        const auto clip = clip_improve(zero, b);
        CHECK(clip_improve_partial(zero, b, 0.0).psi(7.0) == 7.0);
        for (double t = -4; t <= 4; t += 0.5)
            CHECK(full.psi(t) == clip.psi(t));
    }

    TEST_CASE("property: equivariance of every catalog estimator")
    {
        const BivariateModel models[] = {BivariateModel::bvn(1, 2, 0.3), BivariateModel::dep_exp_gamma(),
                                         BivariateModel::indep_exp(1, 2), BivariateModel::cheriyan_gamma(),
                                         BivariateModel::power_uniform(2, 3), BivariateModel::indep_gamma(2, 3)};
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> shift(-10, 10), factor(0.1, 10);
        for (const auto& m : models)
            for (Target target : {Target::smaller, Target::larger})
                for (EstimatorKind kind : catalog_kinds(m, target)) {
                    const auto est = cat(m, target, kind);
                    double worst = 0.0;
                    for (int i = 0; i < 1000; ++i) {
                        const auto [x1, x2] = random_point(m, rng);
                        const double base = est.evaluate(x1, x2);
                        if (m.mode() == Mode::location) {
                            const double c = shift(rng);
                            worst = std::max(worst, std::abs(est.evaluate(x1 + c, x2 + c) - base - c));
                        }
                        else {
                            const double b = factor(rng);
                            worst = std::max(worst, std::abs(est.evaluate(b * x1, b * x2) / base - b) / b);
                        }
                    }
                    INFO(m.id(), " ", to_string(target), " ", to_string(kind));
                    CHECK(worst < (m.mode() == Mode::location ? 1e-12 : 1e-10));
                }
    }

    TEST_CASE("property: clip is idempotent and stays inside the envelope")
    {
        const auto m = BivariateModel::indep_exp(1, 2);
        const PsiBounds b = make_bounds(m, catalog_loss(m), Target::larger);
        EquivariantEstimator wild{Mode::location, Target::larger, [](double t) { return 3 * std::sin(t) + t; }, "w"};
        const auto once = clip_improve(wild, b);
        const auto twice = clip_improve(once, b);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-8, 8);
        for (int i = 0; i < 1000; ++i) {
            const double t = u(rng);
            CHECK(twice.psi(t) == once.psi(t));
            CHECK(once.psi(t) >= b.lower(t));
            CHECK(once.psi(t) <= b.upper(t));
        }
    }

    TEST_CASE("catalog lookups")
    {
        const auto g = BivariateModel::indep_gamma(2, 3);
        const auto e = cat(g, Target::smaller, EstimatorKind::bsee);
        CHECK(e.evaluate(3.0, 1.0) == doctest::Approx(1.0));
        CHECK(e.mode == Mode::scale);

        CHECK_THROWS_AS(cat(BivariateModel::dep_exp_gamma(), Target::larger, EstimatorKind::blee), NonexistenceError);
        CHECK_THROWS_AS(cat(g, Target::smaller, EstimatorKind::blee), LookupError);
        CHECK_THROWS_AS(cat(g, Target::smaller, EstimatorKind::custom), LookupError);
        CHECK_THROWS_AS(catalog_estimator(CatalogKey{ModelName::bvn, Target::smaller, EstimatorKind::blee}, g),
                        LookupError);

        const auto kinds = catalog_kinds(BivariateModel::dep_exp_gamma(), Target::larger);
        CHECK(kinds.empty());
        CHECK(catalog_kinds(BivariateModel::indep_exp(1, 2), Target::smaller).size() == 4);
    }

    TEST_CASE("catalog key parsing")
    {
        const CatalogKey k = parse_catalog_key("indep_gamma:smaller:improved_bsee");
        CHECK(k.model == ModelName::indep_gamma);
        CHECK(k.target == Target::smaller);
        CHECK(k.kind == EstimatorKind::improved_bsee);
        CHECK(k.str() == "indep_gamma:smaller:improved_bsee");
        const CatalogKey k2 = parse_catalog_key("larger:rmle", ModelName::bvn);
        CHECK(k2.model == ModelName::bvn);
        CHECK(k2.kind == EstimatorKind::rmle);
        CHECK_THROWS(parse_catalog_key("larger:rmle"));
        CHECK_THROWS(parse_catalog_key("bvn:middle:rmle"));
        CHECK_THROWS(parse_catalog_key("bvn:smaller:best"));
        CHECK(base_kind(EstimatorKind::improved_rmle) == EstimatorKind::rmle);
        CHECK(is_improved(EstimatorKind::improved_bsee));
        CHECK_FALSE(is_improved(EstimatorKind::bsee));
    }

    TEST_CASE("property: improved catalog entries equal the clip of their base")
    {
        const BivariateModel models[] = {
            BivariateModel::bvn(1, 2, 0.3),   BivariateModel::bvn(1, 2, 0.9),   BivariateModel::bvn(2, 1, 0.9),
            BivariateModel::dep_exp_gamma(),  BivariateModel::indep_exp(1, 2), BivariateModel::indep_exp(3, 0.5),
            BivariateModel::cheriyan_gamma(), BivariateModel::power_uniform(2, 3),
            BivariateModel::power_uniform(0.5, 4), BivariateModel::indep_gamma(2, 3),
            BivariateModel::indep_gamma(15, 15)};
        int checked = 0;
        for (const auto& m : models)
            for (Target target : {Target::smaller, Target::larger}) {
                const auto kinds = catalog_kinds(m, target);
                for (EstimatorKind kind : kinds) {
                    if (!is_improved(kind))
                        continue;
                    const auto improved = cat(m, target, kind);
                    const auto clipped =
                        clip_improve(cat(m, target, base_kind(kind)), make_bounds(m, catalog_loss(m), target));
                    INFO(m.id(), " ", to_string(target), " ", to_string(kind));
                    CHECK(max_gap(improved, m, [&](double a, double b) { return clipped.evaluate(a, b); }) < 1e-10);
                    ++checked;
                }
            }
        CHECK(checked >= 16);
    }

    TEST_CASE("identity: bvn restricted estimators of both means")
    {
        // (σ1, σ2, ρ) covering both regimes for each target
        const double cases[][3] = {{1, 2, 0.3}, {1, 2, 0.9}, {2, 1, 0.9}, {1, 1, 0}, {0.2, 0.4, -0.9}};
        for (const auto& c : cases) {
            const double s1 = c[0], s2 = c[1], rho = c[2];
            const auto m = BivariateModel::bvn(s1, s2, rho);
            const double v = s1 * s1 + s2 * s2 - 2 * rho * s1 * s2;
            auto comb = [=](double x1, double x2) {
                return (s2 * (s2 - rho * s1) * x1 + s1 * (s1 - rho * s2) * x2) / v;
            };
            auto smaller = [=](double x1, double x2) {
                return rho * s2 < s1 ? std::min(x1, comb(x1, x2)) : std::max(x1, comb(x1, x2));
            };
            auto larger = [=](double x1, double x2) {
                return rho * s1 < s2 ? std::max(x2, comb(x1, x2)) : std::min(x2, comb(x1, x2));
            };
            INFO("bvn ", s1, " ", s2, " ", rho);
            CHECK(max_gap(cat(m, Target::smaller, EstimatorKind::improved_blee), m, smaller) < 1e-10);
            CHECK(max_gap(cat(m, Target::smaller, EstimatorKind::rmle), m, smaller) < 1e-10);
            CHECK(max_gap(cat(m, Target::larger, EstimatorKind::improved_blee), m, larger) < 1e-10);
            CHECK(max_gap(cat(m, Target::larger, EstimatorKind::rmle), m, larger) < 1e-10);
        }
    }

    TEST_CASE("identity: dependent exponential and independent exponential")
    {
        const auto d = BivariateModel::dep_exp_gamma();
        CHECK(max_gap(cat(d, Target::smaller, EstimatorKind::blee), d,
                      [](double x1, double) { return x1 - std::log(6.0); }) < 1e-10);
        CHECK(max_gap(cat(d, Target::smaller, EstimatorKind::improved_blee), d, [](double x1, double x2) {
                  const double dd = x2 - x1;
                  return x1 - std::max(std::log(4 * (2 + dd) / (1 + dd)), std::log(6.0));
              }) < 1e-10);

        for (auto [s1, s2] : {std::pair{1.0, 2.0}, std::pair{3.0, 0.5}}) {
            const auto m = BivariateModel::indep_exp(s1, s2);
            const double k = s1 * s2 / (s1 + s2);
            INFO("indep_exp ", s1, " ", s2);
            CHECK(max_gap(cat(m, Target::smaller, EstimatorKind::rmle), m,
                          [](double x1, double x2) { return std::min(x1, x2); }) < 1e-10);
            CHECK(max_gap(cat(m, Target::smaller, EstimatorKind::improved_rmle), m,
                          [=](double x1, double x2) { return std::min(x1, x2) - k; }) < 1e-10);
            CHECK(max_gap(cat(m, Target::smaller, EstimatorKind::improved_blee), m,
                          [=](double x1, double x2) { return std::min(x2 - k, x1 - s1); }) < 1e-10);
            CHECK(max_gap(cat(m, Target::larger, EstimatorKind::improved_blee), m, [=](double x1, double x2) {
                      if (x2 < x1)
                          return x2 - k;
                      if (x2 < x1 + s2 * s2 / (s1 + s2))
                          return x1 - k;
                      return x2 - s2;
                  }) < 1e-10);
        }
    }

    TEST_CASE("identity: scale examples")
    {
        for (auto [a1, a2] : {std::pair{2.0, 3.0}, std::pair{0.5, 4.0}, std::pair{15.0, 15.0}}) {
            const double a = a1 + a2;
            INFO("alphas ", a1, " ", a2);

            const auto p = BivariateModel::power_uniform(a1, a2);
            const double c = (a + 2) / (a + 1), b1 = (a1 + 2) / (a1 + 1), b2 = (a2 + 2) / (a2 + 1);
            CHECK(max_gap(cat(p, Target::smaller, EstimatorKind::improved_bsee), p, [=](double x1, double x2) {
                      return x1 * std::max(c, std::min(b1, c * std::max(1.0, x2 / x1)));
                  }) < 1e-10);
            CHECK(max_gap(cat(p, Target::larger, EstimatorKind::rmle), p,
                          [](double x1, double x2) { return std::max(x1, x2); }) < 1e-10);
            CHECK(max_gap(cat(p, Target::larger, EstimatorKind::improved_rmle), p,
                          [=](double x1, double x2) { return c * std::max(x1, x2); }) < 1e-10);
            CHECK(max_gap(cat(p, Target::larger, EstimatorKind::improved_bsee), p,
                          [=](double x1, double x2) { return std::max(b2 * x2, c * x1); }) < 1e-10);

            const auto g = BivariateModel::indep_gamma(a1, a2);
            CHECK(max_gap(cat(g, Target::smaller, EstimatorKind::rmle), g,
                          [=](double x1, double x2) { return std::min(x1 / a1, (x1 + x2) / a); }) < 1e-10);
            CHECK(max_gap(cat(g, Target::smaller, EstimatorKind::improved_rmle), g,
                          [=](double x1, double x2) { return std::min(x1 / a1, (x1 + x2) / (a + 1)); }) < 1e-10);
            CHECK(max_gap(cat(g, Target::smaller, EstimatorKind::improved_bsee), g, [=](double x1, double x2) {
                      return std::min(x1 / (a1 + 1), (x1 + x2) / (a + 1));
                  }) < 1e-10);
            CHECK(max_gap(cat(g, Target::larger, EstimatorKind::improved_bsee), g, [=](double x1, double x2) {
                      return std::max(x2 / (a2 + 1), (x1 + x2) / (a + 1));
                  }) < 1e-10);
        }
        const auto ch = BivariateModel::cheriyan_gamma();
        CHECK(max_gap(cat(ch, Target::smaller, EstimatorKind::bsee), ch,
                      [](double x1, double) { return x1 / 3; }) < 1e-10);
        CHECK(max_gap(cat(ch, Target::larger, EstimatorKind::bsee), ch,
                      [](double, double x2) { return x2 / 3; }) < 1e-10);
    }

    TEST_CASE("difference probability")
    {
        const auto m = BivariateModel::indep_exp(1, 1);
        const auto blee = cat(m, Target::smaller, EstimatorKind::blee);
        const auto imp = cat(m, Target::smaller, EstimatorKind::improved_blee);

        const auto same = estimate_difference_probability(blee, blee, m, Theta(0, 0), 5000, 1);
        CHECK(same.probability == 0.0);
        CHECK(same.std_error == 0.0);

        const auto dp = estimate_difference_probability(blee, imp, m, Theta(0, 0), 100000, 2);
        CHECK(dp.probability > 0.0);
        CHECK(dp.probability > 5 * dp.std_error);

        // ρσ2 = σ1: the envelope collapses onto ψ ≡ 0
        const auto deg = BivariateModel::bvn(1, 2, 0.5);
        const auto b0 = cat(deg, Target::smaller, EstimatorKind::blee);
        const auto clipped = clip_improve(b0, make_bounds(deg, catalog_loss(deg), Target::smaller));
        CHECK(estimate_difference_probability(b0, clipped, deg, Theta(0, 1), 5000, 3).probability == 0.0);

        const auto larger = cat(m, Target::larger, EstimatorKind::blee);
        CHECK_THROWS_AS(estimate_difference_probability(blee, larger, m, Theta(0, 0), 10, 1), IncompatibleError);
        const auto g = BivariateModel::indep_gamma(1, 1);
        CHECK_THROWS_AS(estimate_difference_probability(blee, imp, g, Theta(1, 1), 10, 1), IncompatibleError);
        CHECK_THROWS_AS(estimate_difference_probability(blee, imp, m, Theta(0, 0), 0, 1), ConfigError);
    }
}
