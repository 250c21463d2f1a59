#include "orderest/presets.hpp"

#include "orderest/error.hpp"

#include <cstdio>

namespace orderest {

namespace {

std::vector<double> step_grid(double from, double to, double step)
{
    std::vector<double> grid;
    const int count = static_cast<int>((to - from) / step + 0.5);
    for (int i = 0; i <= count; ++i)
        grid.push_back(from + step * i);
    return grid;
}

std::vector<Preset> build()
{
    using K = EstimatorKind;
    std::vector<Preset> out;

    struct Normal {
        char panel;
        double s1, s2, rho;
    };
    const Normal fig1[] = {{'a', 0.2, 0.4, -0.9}, {'b', 10, 0.4, -0.5}, {'c', 0.4, 10, -0.2}, {'d', 2, 5, 0},
                           {'e', 10, 0.4, 0},     {'f', 0.4, 10, 0.2},  {'g', 10, 0.4, 0.5},  {'h', 0.2, 0.4, 0.9}};
    for (const auto& p : fig1) {
        char title[128];
        std::snprintf(title, sizeof title, "smaller location, bivariate normal s1=%g s2=%g rho=%g", p.s1, p.s2, p.rho);
        out.push_back({std::string("fig1") + p.panel, title, ModelName::bvn,
                       {{"s1", p.s1}, {"s2", p.s2}, {"rho", p.rho}}, Target::smaller,
                       {K::blee, K::improved_blee}, step_grid(0.0, 10.0, 0.5), {{K::blee, K::improved_blee}}});
    }

    struct Gamma {
        char panel;
        double a1, a2;
    };
    const Gamma fig2[] = {{'a', 0.2, 0.2}, {'b', 0.2, 1}, {'c', 2, 1}, {'d', 5, 1}, {'e', 5, 10}, {'f', 15, 15}};
    for (const auto& p : fig2) {
        char title[128];
        std::snprintf(title, sizeof title, "smaller scale, independent gamma a1=%g a2=%g", p.a1, p.a2);
        out.push_back({std::string("fig2") + p.panel, title, ModelName::indep_gamma, {{"a1", p.a1}, {"a2", p.a2}},
                       Target::smaller, {K::bsee, K::rmle, K::improved_bsee, K::improved_rmle},
                       step_grid(1.0, 10.0, 0.5), {{K::bsee, K::improved_bsee}, {K::rmle, K::improved_rmle}}});
    }
    return out;
}

}  // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = build();
    return all;
}

const Preset& find_preset(const std::string& name)
{
    for (const auto& p : presets())
        if (p.name == name)
            return p;
    throw LookupError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& p : presets())
        names.push_back(p.name);
    return names;
}

}  // namespace orderest
