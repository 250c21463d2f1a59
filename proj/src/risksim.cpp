#include "orderest/risksim.hpp"

#include "orderest/error.hpp"

#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace orderest {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::pair<double, double>> draws(const BivariateModel& model, const Theta& theta,
                                             std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, double>> out(n);
    for (auto& d : out)
        d = draw_at(model, theta, rng);
    return out;
}

void check_compatible(const BivariateModel& model, const Loss& loss, const EquivariantEstimator& est,
                      const Theta& theta)
{
    if (est.mode != model.mode())
        throw IncompatibleError("estimator '" + est.label + "' does not match the mode of model " + model.id());
    if (loss.kind() != model.mode())
        throw ConfigError("loss '" + loss.label() + "' does not match the mode of model " + model.id());
    if (model.mode() == Mode::scale && !(theta.theta1() > 0.0))
        throw DomainError("scale models need theta > 0");
}

std::vector<double> losses(const Loss& loss, const EquivariantEstimator& est, const Theta& theta,
                           const std::vector<std::pair<double, double>>& data)
{
    const double target = theta[target_index(est.target)];
    std::vector<double> out(data.size());
    for (std::size_t r = 0; r < data.size(); ++r) {
        const double delta = est.evaluate(data[r].first, data[r].second);
        const double arg = est.mode == Mode::location ? delta - target : delta / target;
        const double w = loss.value(arg);
        if (!std::isfinite(w)) {
            std::ostringstream msg;
            msg << "loss of estimator '" << est.label << "' is not finite at replicate " << r << " (argument "
                << arg << ")";
            throw OverflowError(msg.str());
        }
        out[r] = w;
    }
    return out;
}

double mean_of(const std::vector<double>& v)
{
    double sum = 0.0;
    for (double x : v)
        sum += x;
    return sum / static_cast<double>(v.size());
}

// Covariance of the two sample means.
double mean_cov(const std::vector<double>& a, double ma, const std::vector<double>& b, double mb)
{
    const std::size_t n = a.size();
    if (n < 2)
        return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(n - 1) / static_cast<double>(n);
}

RiskEstimate summarize(const std::vector<double>& v, std::uint64_t seed)
{
    const double m = mean_of(v);
    return {m, std::sqrt(mean_cov(v, m, v, m)), v.size(), seed};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t grid_index, std::uint64_t stream)
{
    std::uint64_t state = seed;
    state = splitmix64(state) ^ grid_index;
    state = splitmix64(state) ^ stream;
    return splitmix64(state);
}

RiskEstimate simulate_risk(const BivariateModel& model, const Loss& loss, const EquivariantEstimator& est,
                           const Theta& theta, std::size_t n, std::uint64_t seed)
{
    if (n == 0)
        throw ConfigError("number of replicates must be at least 1");
    check_compatible(model, loss, est, theta);
    return summarize(losses(loss, est, theta, draws(model, theta, n, seed)), seed);
}

std::size_t RiskCurve::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label)
            return i;
    throw LookupError("risk curve has no estimator labelled '" + label + "'");
}

RiskCurve risk_curve(const BivariateModel& model, const Loss& loss,
                     const std::vector<EquivariantEstimator>& estimators,
                     const std::vector<double>& lambda_grid, std::size_t n, std::uint64_t seed,
                     bool common_random_numbers)
{
    if (estimators.empty())
        throw ConfigError("risk curve needs at least one estimator");
    if (lambda_grid.empty())
        throw ConfigError("risk curve needs a nonempty lambda grid");
    if (n == 0)
        throw ConfigError("number of replicates must be at least 1");
    for (const auto& e : estimators)
        if (e.mode != estimators.front().mode || e.target != estimators.front().target)
            throw IncompatibleError("estimators of one risk curve must share mode and target");

    const Mode mode = model.mode();
    const std::size_t ne = estimators.size(), ng = lambda_grid.size();
    std::vector<Theta> thetas;
    for (double lambda : lambda_grid) {
        thetas.push_back(anchored_theta(mode, lambda));
        for (const auto& e : estimators)
            check_compatible(model, loss, e, thetas.back());
    }

    struct Point {
        std::vector<RiskEstimate> risks;
        std::vector<std::vector<double>> cov;
    };
    auto run = [&](std::size_t g) {
        Point p;
        std::vector<std::vector<double>> all(ne);
        std::vector<std::uint64_t> seeds(ne);
        if (common_random_numbers) {
            const std::uint64_t s = derive_seed(seed, g, 0);
            const auto data = draws(model, thetas[g], n, s);
            for (std::size_t e = 0; e < ne; ++e) {
                all[e] = losses(loss, estimators[e], thetas[g], data);
                seeds[e] = s;
            }
        }
        else {
            for (std::size_t e = 0; e < ne; ++e) {
                seeds[e] = derive_seed(seed, g, e + 1);
                all[e] = losses(loss, estimators[e], thetas[g], draws(model, thetas[g], n, seeds[e]));
            }
        }
        std::vector<double> means(ne);
        for (std::size_t e = 0; e < ne; ++e) {
            p.risks.push_back(summarize(all[e], seeds[e]));
            means[e] = p.risks.back().mean_risk;
        }
        p.cov.assign(ne, std::vector<double>(ne, 0.0));
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t f = 0; f < ne; ++f)
                if (e == f || common_random_numbers)
                    p.cov[e][f] = mean_cov(all[e], means[e], all[f], means[f]);
        return p;
    };

    std::vector<std::future<Point>> jobs;
    for (std::size_t g = 0; g < ng; ++g)
        jobs.push_back(std::async(std::launch::async, run, g));

    RiskCurve curve;
    curve.model_id = model.id();
    curve.mode = mode;
    curve.target = estimators.front().target;
    curve.loss = loss.label();
    for (const auto& e : estimators)
        curve.labels.push_back(e.label);
    curve.lambda_grid = lambda_grid;
    curve.risks.assign(ne, std::vector<RiskEstimate>(ng));
    curve.base_theta1 = mode == Mode::location ? 0.0 : 1.0;
    curve.common_random_numbers = common_random_numbers;
    curve.seed = seed;
    curve.n = n;
    // Collected in grid order so the reduction never depends on scheduling.
    for (std::size_t g = 0; g < ng; ++g) {
        Point p = jobs[g].get();
        for (std::size_t e = 0; e < ne; ++e)
            curve.risks[e][g] = p.risks[e];
        curve.cov.push_back(std::move(p.cov));
    }
    return curve;
}

DominanceReport dominance_report(const RiskCurve& curve, const std::string& base_label,
                                 const std::string& improved_label)
{
    const std::size_t b = curve.index_of(base_label);
    const std::size_t i = curve.index_of(improved_label);
    DominanceReport rep;
    rep.base_label = base_label;
    rep.improved_label = improved_label;
    rep.lambda = curve.lambda_grid;
    bool improved_better = false, base_better = false;
    rep.best_gain = -kInf;
    for (std::size_t g = 0; g < curve.lambda_grid.size(); ++g) {
        const double d = curve.risks[i][g].mean_risk - curve.risks[b][g].mean_risk;
        double var = curve.risks[i][g].std_error * curve.risks[i][g].std_error +
                     curve.risks[b][g].std_error * curve.risks[b][g].std_error;
        if (g < curve.cov.size() && curve.common_random_numbers)
            var -= 2.0 * curve.cov[g][i][b];
        const double se = std::sqrt(std::max(0.0, var));
        rep.difference.push_back(d);
        rep.std_error.push_back(se);
        if (d > 2.0 * se)
            rep.violations.push_back(g);
        if (d > 2.0 * se)
            base_better = true;
        if (d < -2.0 * se)
            improved_better = true;
        if (-d > rep.best_gain) {
            rep.best_gain = -d;
            rep.best_lambda = curve.lambda_grid[g];
        }
    }
    rep.crossing = improved_better && base_better;
    return rep;
}

}  // namespace orderest
