#include "orderest/error.hpp"
#include "orderest/families.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace orderest;
using testsupport::moment_psi;

namespace {

double mean_and_se(const std::vector<double>& v, double& se)
{
    double m = 0.0, q = 0.0;
    for (double x : v)
        m += x;
    m /= v.size();
    for (double x : v)
        q += (x - m) * (x - m);
    se = std::sqrt(q / (v.size() - 1) / v.size());
    return m;
}

}  // namespace

TEST_SUITE("families")
{
    TEST_CASE("joint density spot values")
    {
        CHECK(BivariateModel::dep_exp_gamma().joint_density(2, 1) == 0.0);
        CHECK(BivariateModel::bvn(1, 1, 0).joint_density(0, 0) == doctest::Approx(1.0 / (2 * std::numbers::pi)));
        const double e1 = std::exp(-1.0);
        CHECK(BivariateModel::cheriyan_gamma().joint_density(1, 1) == doctest::Approx(e1 * (1 - e1)));
        CHECK(BivariateModel::dep_exp_gamma().joint_density(1, 2) == doctest::Approx(4 * std::exp(-3.0)));
        CHECK(BivariateModel::power_uniform(2, 3).joint_density(0.5, 0.5) == doctest::Approx(6 * 0.5 * 0.25));
        CHECK(BivariateModel::power_uniform(2, 3).joint_density(1.5, 0.5) == 0.0);
        CHECK(BivariateModel::indep_exp(1, 2).joint_density(-0.1, 1) == 0.0);
        CHECK(BivariateModel::indep_exp(1, 2).joint_density(1, 1) == doctest::Approx(0.5 * std::exp(-1.5)));
    }

    TEST_CASE("joint densities integrate to one")
    {
        const BivariateModel models[] = {BivariateModel::bvn(1, 2, 0.3), BivariateModel::dep_exp_gamma(),
                                         BivariateModel::indep_exp(1, 2), BivariateModel::cheriyan_gamma(),
                                         BivariateModel::power_uniform(2, 3), BivariateModel::indep_gamma(2, 3)};
        for (const auto& m : models) {
            CAPTURE(m.id());
            const bool gauss = m.name() == ModelName::bvn;
            // start just inside open support edges; split the inner pass at the diagonal
            const double lo = gauss ? -12.0 : 1e-12;
            const double hi = m.name() == ModelName::power_uniform ? 1.0 : (gauss ? 12.0 : 60.0);
            const int n = m.name() == ModelName::power_uniform ? 400 : 1200;
            auto inner = [&](double z1) {
                auto f = [&](double z2) { return m.joint_density(z1, z2); };
                if (gauss)
                    return testsupport::simpson(f, 2 * lo, 2 * hi, n);
                return testsupport::simpson(f, lo, z1, n) + testsupport::simpson(f, z1 * (1 + 1e-12), hi, n);
            };
            const double mass = testsupport::simpson(inner, lo, hi, n);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
        }
    }

    TEST_CASE("hyperparameter validation and config construction")
    {
        CHECK_THROWS_AS(BivariateModel::bvn(0, 1, 0), ConfigError);
        CHECK_THROWS_AS(BivariateModel::bvn(1, 1, 1), ConfigError);
        CHECK_THROWS_AS(BivariateModel::indep_exp(1, -2), ConfigError);
        CHECK_THROWS_AS(BivariateModel::power_uniform(0, 1), ConfigError);
        CHECK_THROWS_AS(BivariateModel::indep_gamma(1, std::nan("")), ConfigError);

        const BivariateModel m = model_from_config("bvn", {{"s1", 1}, {"s2", 2}, {"rho", 0.3}});
        CHECK(m.hyper("rho") == 0.3);
        CHECK(m.id().find(',') == std::string::npos);
        CHECK_THROWS_AS(m.hyper("a1"), LookupError);
        CHECK_THROWS_AS(model_from_config("bvn", {{"s1", 1}, {"s2", 2}}), ConfigError);
        CHECK_THROWS_AS(model_from_config("indep_gamma", {{"a1", 1}, {"a2", 2}, {"s1", 1}}), ConfigError);
        CHECK_THROWS_AS(model_from_config("copula", {}), ConfigError);
        CHECK(model_from_config("cheriyan_gamma", {}).mode() == Mode::scale);
        CHECK(model_from_config("dep_exp_gamma", {}).mode() == Mode::location);
    }

    TEST_CASE("theta respects the order restriction")
    {
        CHECK_THROWS_AS(Theta(2, 1), DomainError);
        CHECK_NOTHROW(Theta(1, 1));
        CHECK(anchored_theta(Mode::scale, 3).theta2() == 3.0);
        CHECK(anchored_theta(Mode::location, 3).theta1() == 0.0);
        CHECK_THROWS_AS(anchored_theta(Mode::scale, 0.5), DomainError);
    }

    TEST_CASE("conditional density examples")
    {
        const BivariateModel ie = BivariateModel::indep_exp(1, 1);
        CHECK(conditional_density(ie, Target::smaller, 0.5, 1.0) == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-9));
        // α1=α2=1: s·f(s, 2s) = s·e^{−3s}, the Gamma(2, rate 3) density, 9·e^{−3} at s = 1
        const BivariateModel ig = BivariateModel::indep_gamma(1, 1);
        CHECK(conditional_density(ig, Target::smaller, 1.0, 2.0) == doctest::Approx(9 * std::exp(-3.0)).epsilon(1e-9));
        // larger target, Gaussian: Z2 | Z2 − Z1 = u is normal; compare against the Simpson weight
        const BivariateModel g = BivariateModel::bvn(1, 2, 0.3);
        const double u = 0.7;
        const double mass = testsupport::simpson(
            [&](double s) { return testsupport::conditional_weight(g, Target::larger, u, s); }, -30, 30, 60000);
        for (double s : {-1.0, 0.0, 0.4, 2.5})
            CHECK(conditional_density(g, Target::larger, s, u) ==
                  doctest::Approx(testsupport::conditional_weight(g, Target::larger, u, s) / mass).epsilon(1e-8));
    }

    TEST_CASE("conditional densities integrate to one")
    {
        const BivariateModel m = BivariateModel::cheriyan_gamma();
        for (Target tg : {Target::smaller, Target::larger})
            for (double u : {0.3, 1.0, 4.0}) {
                const double total = testsupport::simpson(
                    [&](double s) { return conditional_density(m, tg, s, u); }, 1e-12, 40.0, 2000);
                CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
            }
    }

    TEST_CASE("improper conditional is reported with its ancillary value")
    {
        const BivariateModel m = BivariateModel::dep_exp_gamma();
        try {
            conditional_density(m, Target::smaller, 1.0, -0.5);
            FAIL("expected DegenerateConditional");
        }
        catch (const DegenerateConditional& ex) {
            CHECK(ex.ancillary() == -0.5);
        }
    }

    TEST_CASE("sampling: deterministic, inside Theta, moments")
    {
        const BivariateModel g = BivariateModel::bvn(0.2, 0.4, -0.9);
        const auto a = sample(g, Theta(0, 0), 1000, 9);
        const auto b = sample(g, Theta(0, 0), 1000, 9);
        CHECK(a == b);
        CHECK(a != sample(g, Theta(0, 0), 1000, 10));

        const auto big = sample(g, Theta(0, 0), 100000, 1);
        std::vector<double> x1, x2;
        for (const auto& [u, v] : big) {
            x1.push_back(u);
            x2.push_back(v);
        }
        double se1 = 0.0, se2 = 0.0;
        const double m1 = mean_and_se(x1, se1), m2 = mean_and_se(x2, se2);
        CHECK(std::abs(m1) < 4 * se1);
        CHECK(std::abs(m2) < 4 * se2);

        const auto w = sample(BivariateModel::dep_exp_gamma(), Theta(0, 0), 100000, 2);
        std::size_t ordered = 0;
        for (const auto& [u, v] : w)
            ordered += u < v;
        CHECK(ordered == w.size());

        const auto c = sample(BivariateModel::cheriyan_gamma(), Theta(1, 1), 100000, 3);
        std::vector<double> c1;
        for (const auto& [u, v] : c)
            c1.push_back(u);
        double sc = 0.0;
        const double mc = mean_and_se(c1, sc);
        CHECK(std::abs(mc - 2.0) < 4 * sc);

        CHECK_THROWS_AS(sample(BivariateModel::cheriyan_gamma(), Theta(0, 1), 10, 1), DomainError);
    }

    TEST_CASE("samplers match densities on a coarse histogram")
    {
        struct Box {
            BivariateModel m;
            double x0, x1, y0, y1;
        };
        const Box boxes[] = {{BivariateModel::bvn(1, 2, 0.3), -3, 3, -6, 6},
                             {BivariateModel::dep_exp_gamma(), 0, 6, 0, 6},
                             {BivariateModel::indep_exp(1, 2), 0, 4, 0, 8},
                             {BivariateModel::cheriyan_gamma(), 0, 6, 0, 6},
                             {BivariateModel::power_uniform(2, 3), 0, 1, 0, 1},
                             {BivariateModel::indep_gamma(2, 3), 0, 6, 0, 8}};
        for (const auto& bx : boxes) {
            CAPTURE(bx.m.id());
            const auto r = testsupport::histogram_check(bx.m, bx.x0, bx.x1, bx.y0, bx.y1, 200000, 11);
            CHECK(r.max_z < 5.0);
            CHECK(r.stray == 0);
        }
    }

    TEST_CASE("closed-form psi examples")
    {
        const Loss sq_loc = Loss::squared_error(Mode::location);
        const Loss sq_sc = Loss::squared_error(Mode::scale);
        CHECK(*closed_form_psi(BivariateModel::bvn(1, 2, 0), sq_loc, Target::smaller, 0, 1) ==
              doctest::Approx(-0.2).epsilon(1e-14));
        CHECK(*closed_form_psi(BivariateModel::indep_gamma(1, 1), sq_sc, Target::smaller, 1, 2) ==
              doctest::Approx(1.0).epsilon(1e-14));
        CHECK(*closed_form_psi(BivariateModel::dep_exp_gamma(), Loss::linex(), Target::smaller, 2.5, 2.5) ==
              doctest::Approx(std::log(8.0)).epsilon(1e-14));
        CHECK(*closed_form_psi(BivariateModel::cheriyan_gamma(), sq_sc, Target::smaller, 1, 1) ==
              doctest::Approx(14.0 / 45.0).epsilon(1e-14));
        CHECK(*closed_form_psi(BivariateModel::power_uniform(1, 1), sq_sc, Target::smaller, 1, 2) ==
              doctest::Approx(8.0 / 3.0).epsilon(1e-14));
        CHECK(*closed_form_psi(BivariateModel::indep_exp(1, 1), sq_loc, Target::smaller, 0, -0.5) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("closed-form psi domain and catalog coverage")
    {
        const BivariateModel d = BivariateModel::dep_exp_gamma();
        CHECK_THROWS_AS(closed_form_psi(d, Loss::linex(), Target::smaller, 2, 1), DomainError);
        CHECK_THROWS_AS(closed_form_psi(d, Loss::linex(), Target::smaller, -1, 1), DomainError);
        CHECK_FALSE(closed_form_psi(d, Loss::squared_error(Mode::location), Target::smaller, 0, 1).has_value());
        const BivariateModel ig = BivariateModel::indep_gamma(1, 1);
        CHECK_THROWS_AS(closed_form_psi(ig, Loss::squared_error(Mode::location), Target::smaller, 1, 1), ConfigError);
        CHECK_THROWS_AS(closed_form_psi(ig, Loss::squared_error(Mode::scale), Target::smaller, 0.5, 1), DomainError);
        CHECK_THROWS_AS(closed_form_psi(ig, Loss::squared_error(Mode::scale), Target::smaller, 1, 0), DomainError);
    }

    TEST_CASE("closed forms agree with the Simpson moment oracle")
    {
        struct Case {
            BivariateModel m;
            Target tg;
            double lambda, t, a, b;
        };
        const Case cases[] = {
            {BivariateModel::bvn(1, 2, 0.3), Target::smaller, 1.5, -0.4, -20, 20},
            {BivariateModel::bvn(1, 2, 0.3), Target::larger, 0.5, 2.0, -20, 20},
            {BivariateModel::dep_exp_gamma(), Target::smaller, 1.0, 2.5, 0, 60},
            {BivariateModel::dep_exp_gamma(), Target::larger, 0.5, 3.0, 2.5, 60},
            // Simpson ranges start or stop just inside support edges where the weight jumps
            {BivariateModel::indep_exp(1, 2), Target::smaller, 2.0, 0.5, 1.5 * (1 + 1e-12), 60},
            {BivariateModel::indep_exp(1, 2), Target::larger, 0.3, 1.7, 1.4 * (1 + 1e-12), 60},
            {BivariateModel::cheriyan_gamma(), Target::smaller, 2.0, 0.7, 0, 60},
            {BivariateModel::cheriyan_gamma(), Target::smaller, 1.5, 6.0, 0, 60},
            {BivariateModel::cheriyan_gamma(), Target::larger, 3.0, 1.2, 0, 60},
            {BivariateModel::cheriyan_gamma(), Target::larger, 1.0, 5.0, 0, 60},
            {BivariateModel::power_uniform(2, 3), Target::smaller, 2.0, 3.0, 0, (1 - 1e-12) / 1.5},
            {BivariateModel::power_uniform(2, 3), Target::larger, 2.0, 0.5, 0, 0.25 * (1 - 1e-12)},
            {BivariateModel::indep_gamma(2, 3), Target::smaller, 1.5, 2.0, 0, 40},
            {BivariateModel::indep_gamma(2, 3), Target::larger, 4.0, 0.7, 0, 40},
        };
        for (const auto& c : cases) {
            CAPTURE(c.m.id());
            CAPTURE(to_string(c.tg));
            CAPTURE(c.lambda);
            CAPTURE(c.t);
            const Loss loss = catalog_loss(c.m);
            const double oracle = moment_psi(c.m, loss, c.tg, c.lambda, c.t, c.a, c.b);
            CHECK(*closed_form_psi(c.m, loss, c.tg, c.lambda, c.t) == doctest::Approx(oracle).epsilon(1e-7).scale(1));
        }
    }

    TEST_CASE("closed-form bounds examples")
    {
        const Loss sq_sc = Loss::squared_error(Mode::scale);
        for (double t : {0.2, 1.0, 3.5}) {
            const auto b = closed_form_bounds(BivariateModel::indep_gamma(2, 3), sq_sc, Target::smaller, t);
            CHECK(b->lower == doctest::Approx(1.0 / 6.0));
            CHECK(b->upper == doctest::Approx((1 + t) / 6.0));
            CHECK(closed_form_bounds(BivariateModel::cheriyan_gamma(), sq_sc, Target::smaller, t)->lower == 0.25);
        }
        const auto e = closed_form_bounds(BivariateModel::indep_exp(1, 1), Loss::squared_error(Mode::location),
                                          Target::larger, -2);
        CHECK(e->lower == doctest::Approx(0.5));
        CHECK(e->upper == doctest::Approx(0.5));
        const auto d = closed_form_bounds(BivariateModel::dep_exp_gamma(), Loss::linex(), Target::smaller, 3);
        CHECK(d->lower == doctest::Approx(std::log(5.0)));
        CHECK(d->upper == doctest::Approx(std::log(8.0)));
        const auto larger = closed_form_bounds(BivariateModel::dep_exp_gamma(), Loss::linex(), Target::larger, 3);
        CHECK(larger->lower == doctest::Approx(std::log(8.0)));
    }

    TEST_CASE("closed-form bounds match the extremes of closed-form psi over a lambda grid")
    {
        const BivariateModel models[] = {BivariateModel::cheriyan_gamma(), BivariateModel::power_uniform(2, 3),
                                         BivariateModel::indep_gamma(2, 3), BivariateModel::indep_exp(1, 2),
                                         BivariateModel::dep_exp_gamma()};
        for (const auto& m : models)
            for (Target tg : {Target::smaller, Target::larger})
                for (double t : {0.3, 1.0, 2.5}) {
                    CAPTURE(m.id());
                    CAPTURE(to_string(tg));
                    CAPTURE(t);
                    const Loss loss = catalog_loss(m);
                    const auto b = closed_form_bounds(m, loss, tg, t);
                    double lo = kInf, hi = -kInf;
                    const double id = identity_lambda(m.mode());
                    for (int i = 0; i <= 4000; ++i) {
                        double lambda = id + std::pow(10.0, -4 + 12.0 * i / 4000.0);
                        if (i == 0)
                            lambda = id;
                        if (m.name() == ModelName::dep_exp_gamma && lambda > t)
                            break;
                        const double v = *closed_form_psi(m, loss, tg, lambda, t);
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    if (m.name() == ModelName::dep_exp_gamma) {
                        const double v = *closed_form_psi(m, loss, tg, t, t);
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    // grid extremes sit inside the envelope and approach it
                    CHECK(lo >= b->lower - 1e-9);
                    CHECK(hi <= b->upper + 1e-9);
                    CHECK(lo == doctest::Approx(b->lower).epsilon(1e-3));
                    if (std::isfinite(b->upper))
                        CHECK(hi == doctest::Approx(b->upper).epsilon(1e-3));
                    else
                        CHECK(hi > 1e3);
                }
    }

    TEST_CASE("degenerate Gaussian envelope collapses")
    {
        // ρσ2 = σ1
        const BivariateModel m = BivariateModel::bvn(0.5, 1, 0.5);
        const auto b = closed_form_bounds(m, Loss::squared_error(Mode::location), Target::smaller, 1.3);
        CHECK(b->lower == 0.0);
        CHECK(b->upper == 0.0);
    }
}
