#include "cli.hpp"

#include "orderest/analysis.hpp"
#include "orderest/curve_io.hpp"
#include "orderest/error.hpp"
#include "orderest/estimators.hpp"
#include "orderest/families.hpp"
#include "orderest/presets.hpp"
#include "orderest/risksim.hpp"
#include "orderest/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#ifndef ORDEREST_DEFAULT_DATA
#define ORDEREST_DEFAULT_DATA "data/uk_sprinters.csv"
#endif

namespace orderest::cli {

namespace {

/// Flags that are individually valid but do not form a usable command.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expands `--config <file>` into flags of the chosen subcommand; explicit flags win.
///
/// Keys mirror long flag names ('_' may stand for '-'). Arrays give repeated values,
/// booleans toggle flags and keys the subcommand does not know are ignored.
std::vector<std::string> expand_config(const CLI::App& app, const std::vector<std::string>& args)
{
    if (args.empty())
        return args;
    const CLI::App* sub = app.get_subcommand_no_throw(args.front());
    if (sub == nullptr)
        return args;

    std::vector<std::string> out;
    std::vector<std::string> files;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw CLI::ArgumentMismatch("--config needs a file name");
            files.push_back(args[++i]);
        }
        else if (args[i].rfind("--config=", 0) == 0)
            files.push_back(args[i].substr(9));
        else
            out.push_back(args[i]);
    }

    auto given = [&](const CLI::Option* opt) {
        for (const auto& a : out)
            for (const auto& name : opt->get_lnames())
                if (a == "--" + name || a.rfind("--" + name + "=", 0) == 0)
                    return true;
        return false;
    };
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in)
            throw CLI::FileError("cannot open config file " + file);
        nlohmann::json j;
        try {
            in >> j;
        }
        catch (const nlohmann::json::exception& ex) {
            throw CLI::ConversionError("config file " + file + " is not valid JSON: " + ex.what());
        }
        if (!j.is_object())
            throw CLI::ConversionError("config file " + file + " must hold a JSON object");
        for (const auto& [key, value] : j.items()) {
            std::string name = key;
            std::replace(name.begin(), name.end(), '_', '-');
            const CLI::Option* opt = sub->get_option_no_throw("--" + name);
            if (opt == nullptr || name == "config" || given(opt))
                continue;
            if (value.is_boolean()) {
                if (opt->get_expected_max() == 0) {
                    // flags such as --numeric or --crn,!--no-crn
                    if (value.get<bool>())
                        out.push_back("--" + name);
                    else if (name == "crn")
                        out.push_back("--no-crn");
                    continue;
                }
            }
            auto text = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
            out.push_back("--" + name);
            if (value.is_array())
                for (const auto& v : value)
                    out.push_back(text(v));
            else
                out.push_back(text(value));
        }
    }
    return out;
}

struct Common {
    std::uint64_t seed = 42;
    std::size_t n = 10000;
    std::string out_dir = ".";
    std::string format = "csv";
};

struct ModelFlags {
    std::string model;
    std::optional<double> s1, s2, rho, a1, a2;
    std::string loss;
    std::string target = "smaller";
};

struct SolverFlags {
    double abs_tol = 1e-10;
    double grid_max = 1e3;
    int grid_points = 64;
};

std::vector<std::string> model_names()
{
    return {"bvn", "dep_exp_gamma", "indep_exp", "cheriyan_gamma", "power_uniform", "indep_gamma"};
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "master random seed")->capture_default_str();
    sub->add_option("--n", c.n, "Monte Carlo replicates per grid point")->capture_default_str()->check(
        CLI::PositiveNumber);
    sub->add_option("--out-dir", c.out_dir, "directory for output files")->capture_default_str();
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "svg", "both"}))
        ->capture_default_str();
    // Consumed by expand_config before parsing; registered for --help.
    sub->add_option("--config", "JSON file whose keys mirror the flags");
}

void add_model(CLI::App* sub, ModelFlags& m, bool required)
{
    auto* opt = sub->add_option("--model", m.model, "model name")->check(CLI::IsMember(model_names()));
    if (required)
        opt->required();
    sub->add_option("--s1", m.s1, "first scale (bvn, indep_exp)");
    sub->add_option("--s2", m.s2, "second scale (bvn, indep_exp)");
    sub->add_option("--rho", m.rho, "correlation (bvn)");
    sub->add_option("--a1", m.a1, "first shape (power_uniform, indep_gamma)");
    sub->add_option("--a2", m.a2, "second shape (power_uniform, indep_gamma)");
    sub->add_option("--target", m.target, "smaller or larger parameter")
        ->check(CLI::IsMember({"smaller", "larger"}))
        ->capture_default_str();
}

void add_solver(CLI::App* sub, SolverFlags& s)
{
    sub->add_option("--abs-tol", s.abs_tol, "root tolerance")->capture_default_str();
    sub->add_option("--lambda-grid-max", s.grid_max, "largest lambda of the envelope grid")->capture_default_str();
    sub->add_option("--lambda-grid-points", s.grid_points, "points of the envelope grid")->capture_default_str();
}

BivariateModel build_model(const ModelFlags& m)
{
    Hyper hyper;
    const std::pair<const char*, const std::optional<double>*> flags[] = {
        {"s1", &m.s1}, {"s2", &m.s2}, {"rho", &m.rho}, {"a1", &m.a1}, {"a2", &m.a2}};
    for (const auto& [key, value] : flags)
        if (value->has_value())
            hyper[key] = **value;
    try {
        return model_from_config(m.model, hyper);
    }
    catch (const ConfigError& ex) {
        throw UsageError(ex.what());
    }
}

Loss build_loss(const ModelFlags& m, const BivariateModel& model)
{
    if (m.loss.empty())
        return catalog_loss(model);
    return loss_from_name(m.loss, model.mode());
}

SolverOptions build_solver(const SolverFlags& s, Mode mode)
{
    SolverOptions opts;
    opts.abs_tol = s.abs_tol;
    opts.lambda_grid = default_lambda_grid(mode, s.grid_max, s.grid_points);
    opts.validate(mode);
    return opts;
}

std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int cmd_psi(const ModelFlags& m, const SolverFlags& s, const std::vector<double>& lambdas,
            const std::vector<double>& ts, std::ostream& out)
{
    const BivariateModel model = build_model(m);
    const Loss loss = build_loss(m, model);
    const Target target = target_from_name(m.target);
    const SolverOptions opts = build_solver(s, model.mode());
    std::vector<double> grid = lambdas;
    if (grid.empty())
        grid.push_back(identity_lambda(model.mode()));

    out << "# model " << model.id() << ", loss " << loss.label() << ", target " << to_string(target) << '\n';
    out << "lambda\tt\tclosed_form\tsolver\tabs_diff\n";
    for (double lambda : grid)
        for (double t : ts) {
            const auto closed = closed_form_psi(model, loss, target, lambda, t);
            const double solved = solve_psi_lambda(model, loss, target, lambda, t, opts);
            out << num(lambda) << '\t' << num(t) << '\t' << (closed ? num(*closed) : "NA") << '\t' << num(solved)
                << '\t' << (closed ? num(std::abs(*closed - solved)) : "NA") << '\n';
        }
    return ok;
}

int cmd_bounds(const ModelFlags& m, const SolverFlags& s, const std::vector<double>& ts, bool numeric,
               std::ostream& out)
{
    const BivariateModel model = build_model(m);
    const Loss loss = build_loss(m, model);
    const Target target = target_from_name(m.target);
    const SolverOptions opts = build_solver(s, model.mode());
    out << "# model " << model.id() << ", loss " << loss.label() << ", target " << to_string(target) << '\n';
    out << "t\tlower\tupper\tprovenance\n";
    for (double t : ts) {
        const BoundsValue b = numeric ? compute_bounds_numeric(model, loss, target, t, opts)
                                      : compute_bounds(model, loss, target, t, opts);
        out << num(t) << '\t' << num(b.lower) << '\t' << num(b.upper) << '\t' << to_string(b.provenance) << '\n';
    }
    return ok;
}

int cmd_improve(const ModelFlags& m, const SolverFlags& s, const std::string& key_text, double x1, double x2,
                std::ostream& out)
{
    const BivariateModel model = build_model(m);
    CatalogKey key;
    try {
        key = parse_catalog_key(key_text, model.name());
    }
    catch (const LookupError& ex) {
        throw UsageError(ex.what());
    }
    const EquivariantEstimator base = catalog_estimator(key, model);
    const Loss loss = catalog_loss(model);
    const SolverOptions opts = build_solver(s, model.mode());
    const PsiBounds bounds = make_bounds(model, loss, key.target, opts);
    const EquivariantEstimator improved = clip_improve(base, bounds);

    const double base_value = base.evaluate(x1, x2);
    const double t = base.ancillary(x1, x2);
    out << "estimator " << key.str() << " (model " << model.id() << ")\n";
    out << "ancillary " << num(t) << '\n';
    out << "base      " << num(base_value) << "  (psi " << num(base.psi(t)) << ")\n";
    out << "lower     " << num(bounds.lower(t)) << '\n';
    out << "upper     " << num(bounds.upper(t)) << '\n';
    out << "improved  " << num(improved.evaluate(x1, x2)) << "  (psi " << num(improved.psi(t)) << ", "
        << to_string(bounds.provenance) << ")\n";
    return ok;
}

struct SimulateFlags {
    std::string preset;
    std::vector<std::string> estimators;
    std::vector<double> lambdas;
    bool crn = false;
};

int cmd_simulate(const Common& c, const ModelFlags& m, const SimulateFlags& f, bool crn_given, std::ostream& out)
{
    std::string name;
    std::optional<BivariateModel> model;
    Target target = Target::smaller;
    std::vector<EstimatorKind> kinds;
    std::vector<double> grid;
    std::vector<std::pair<EstimatorKind, EstimatorKind>> pairs;
    std::string title;
    bool crn = f.crn;

    if (!f.preset.empty()) {
        if (!m.model.empty())
            throw UsageError("--preset and --model are mutually exclusive");
        const Preset& p = find_preset(f.preset);
        name = p.name;
        title = p.name + ": " + p.title;
        model = model_from_config(to_string(p.model), p.hyper);
        target = p.target;
        kinds = p.estimators;
        grid = p.lambda_grid;
        pairs = p.dominance_pairs;
        if (!crn_given)
            crn = true;  // presets exist to compare estimators
    }
    else {
        if (m.model.empty())
            throw UsageError("simulate needs --preset or --model");
        if (f.estimators.empty() || f.lambdas.empty())
            throw UsageError("simulate with --model needs --estimators and --lambda");
        model = build_model(m);
        target = target_from_name(m.target);
        for (const auto& e : f.estimators) {
            try {
                kinds.push_back(estimator_kind_from_name(e));
            }
            catch (const LookupError& ex) {
                throw UsageError(ex.what());
            }
        }
        grid = f.lambdas;
        name = "simulate_" + m.model + "_" + m.target;
        title = name;
        for (auto k : kinds)
            if (is_improved(k) && std::find(kinds.begin(), kinds.end(), base_kind(k)) != kinds.end())
                pairs.emplace_back(base_kind(k), k);
    }

    std::vector<EquivariantEstimator> estimators;
    for (auto k : kinds)
        estimators.push_back(catalog_estimator({model->name(), target, k}, *model));
    const Loss loss = catalog_loss(*model);
    const RiskCurve curve = risk_curve(*model, loss, estimators, grid, c.n, c.seed, crn);

    std::filesystem::create_directories(c.out_dir);
    auto write = [&](const std::string& ext, auto&& writer) {
        const std::filesystem::path path = std::filesystem::path(c.out_dir) / (name + ext);
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot write " + path.string());
        writer(file);
        if (!file)
            throw std::runtime_error("write failed for " + path.string());
        out << "wrote " << path.string() << '\n';
    };
    if (c.format == "csv" || c.format == "both")
        write(".csv", [&](std::ostream& o) { write_curve_csv(curve, o); });
    if (c.format == "svg" || c.format == "both")
        write(".svg", [&](std::ostream& o) { write_curve_svg(curve, title, o); });

    for (const auto& [b, i] : pairs) {
        const DominanceReport rep = dominance_report(curve, std::string(to_string(b)), std::string(to_string(i)));
        out << "dominance " << rep.improved_label << " vs " << rep.base_label << ": " << rep.violations.size()
            << " violations, largest gain " << num(rep.best_gain) << " at lambda " << num(rep.best_lambda) << '\n';
    }
    return ok;
}

int cmd_analyze(const std::string& path, std::ostream& out)
{
    out << format_report(analyze_paired(load_paired_csv(path)));
    return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Improved equivariant estimators under order restrictions", "orderest"};
    app.require_subcommand(1);

    Common common;
    ModelFlags model;
    SolverFlags solver;
    std::vector<double> lambdas, ts;
    bool numeric = false;
    std::string key;
    double x1 = 0.0, x2 = 0.0;
    SimulateFlags sim;
    std::string data_path = ORDEREST_DEFAULT_DATA;

    auto* psi = app.add_subcommand("psi", "closed-form and solver values of psi_lambda(t)");
    add_common(psi, common);
    add_model(psi, model, true);
    add_solver(psi, solver);
    psi->add_option("--loss", model.loss, "squared_error or linex (default: the catalog loss)")
        ->check(CLI::IsMember({"squared_error", "linex"}));
    psi->add_option("--lambda", lambdas, "gap values (default: identity)")->delimiter(',');
    psi->add_option("--t", ts, "ancillary values")->delimiter(',')->required();

    auto* bounds = app.add_subcommand("bounds", "envelope of psi_lambda(t) over lambda");
    add_common(bounds, common);
    add_model(bounds, model, true);
    add_solver(bounds, solver);
    bounds->add_option("--loss", model.loss, "squared_error or linex (default: the catalog loss)")
        ->check(CLI::IsMember({"squared_error", "linex"}));
    bounds->add_option("--t", ts, "ancillary values")->delimiter(',')->required();
    bounds->add_flag("--numeric", numeric, "use the lambda-grid solver even when a closed form exists");

    auto* improve = app.add_subcommand("improve", "apply the clipping improvement to one observation");
    add_common(improve, common);
    add_model(improve, model, true);
    add_solver(improve, solver);
    improve->add_option("--key", key, "<target>:<kind> or <model>:<target>:<kind>")->required();
    improve->add_option("--x1", x1, "first observation")->required();
    improve->add_option("--x2", x2, "second observation")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo risk curves");
    add_common(simulate, common);
    add_model(simulate, model, false);
    simulate->add_option("--preset", sim.preset, "figure-panel configuration")->check(CLI::IsMember(preset_names()));
    simulate->add_option("--estimators", sim.estimators, "estimator kinds, e.g. blee improved_blee")->delimiter(',');
    simulate->add_option("--lambda", sim.lambdas, "gap values")->delimiter(',');
    auto* crn_flag = simulate->add_flag("--crn,!--no-crn", sim.crn, "common random numbers across estimators");

    auto* analyze = app.add_subcommand("analyze", "paired-data analysis with improved estimates");
    add_common(analyze, common);
    analyze->add_option("--data", data_path, "CSV with label,value_a,value_b")->capture_default_str();

    std::vector<std::string> expanded;
    std::vector<const char*> argv{"orderest"};
    try {
        expanded = expand_config(app, args);
        for (const auto& a : expanded)
            argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    }
    catch (const CLI::ParseError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return usage;
    }

    try {
        if (psi->parsed())
            return cmd_psi(model, solver, lambdas, ts, out);
        if (bounds->parsed())
            return cmd_bounds(model, solver, ts, numeric, out);
        if (improve->parsed())
            return cmd_improve(model, solver, key, x1, x2, out);
        if (simulate->parsed())
            return cmd_simulate(common, model, sim, crn_flag->count() > 0, out);
        if (analyze->parsed())
            return cmd_analyze(data_path, out);
    }
    catch (const UsageError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return usage;
    }
    catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return failure;
    }
    catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return failure;
    }
    return usage;
}

}  // namespace orderest::cli
