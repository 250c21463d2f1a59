#pragma once

#include "orderest/families.hpp"
#include "orderest/solver.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orderest {

/// δ = X_i − ψ(X2 − X1) for location, δ = ψ(X2/X1)·X_i for scale, with i set by the target.
struct EquivariantEstimator {
    Mode mode = Mode::location;
    Target target = Target::smaller;
    std::function<double(double)> psi;
    std::string label;

    double ancillary(double x1, double x2) const;
    /// Throws DomainError for nonpositive data or a nonpositive multiplier in scale mode.
    double evaluate(double x1, double x2) const;
};

/// ψ* = median(lower, ψ, upper); the label gains an "improved_" prefix.
/// The returned estimator throws InvalidBounds when evaluated at t with lower(t) > upper(t).
EquivariantEstimator clip_improve(const EquivariantEstimator& est, const PsiBounds& bounds);

/// Moves ψ toward a violated bound by `fraction` of the gap; fraction 1 is clip_improve.
EquivariantEstimator clip_improve_partial(const EquivariantEstimator& est, const PsiBounds& bounds,
                                          double fraction);

enum class EstimatorKind { blee, bsee, rmle, improved_blee, improved_bsee, improved_rmle, custom };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(std::string_view name);
/// blee, bsee or rmle behind an improved kind; other kinds map to themselves.
EstimatorKind base_kind(EstimatorKind kind);
bool is_improved(EstimatorKind kind);

struct CatalogKey {
    ModelName model;
    Target target;
    EstimatorKind kind;

    std::string str() const;
};

/// Parses "<model>:<target>:<kind>", or "<target>:<kind>" when `default_model` is given.
CatalogKey parse_catalog_key(std::string_view text, std::optional<ModelName> default_model = std::nullopt);

/// Named estimator of the catalog for the given model (which supplies the hyperparameters).
///
/// Throws LookupError for unknown keys and NonexistenceError for entries that do not exist.
EquivariantEstimator catalog_estimator(const CatalogKey& key, const BivariateModel& model);

/// Kinds with an existing catalog entry for the model and target.
std::vector<EstimatorKind> catalog_kinds(const BivariateModel& model, Target target);

struct DifferenceProbability {
    double probability;
    double std_error;
};

/// Monte Carlo estimate of P[δ_base ≠ δ_improved] with binomial standard error.
DifferenceProbability estimate_difference_probability(const EquivariantEstimator& base,
                                                      const EquivariantEstimator& improved,
                                                      const BivariateModel& model, const Theta& theta,
                                                      std::size_t n, std::uint64_t seed);

}  // namespace orderest
