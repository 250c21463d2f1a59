#pragma once

#include "orderest/estimators.hpp"
#include "orderest/families.hpp"
#include "orderest/loss.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace orderest {

struct RiskEstimate {
    double mean_risk = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;  // exact seed of the draws
};

/// Seed of the substream for (grid index, stream) under a master seed (SplitMix64 chain).
/// Stream 0 is shared by all estimators under common random numbers; estimator e
/// otherwise uses stream e + 1.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t grid_index, std::uint64_t stream);

/// Mean loss W(δ − θ_i) or W(δ/θ_i) over n draws from an engine seeded with `seed`.
/// Throws OverflowError naming the replicate whose loss is not finite.
RiskEstimate simulate_risk(const BivariateModel& model, const Loss& loss, const EquivariantEstimator& est,
                           const Theta& theta, std::size_t n, std::uint64_t seed);

struct RiskCurve {
    std::string model_id;
    Mode mode = Mode::location;
    Target target = Target::smaller;
    std::string loss;
    std::vector<std::string> labels;
    std::vector<double> lambda_grid;
    /// risks[estimator][grid index]
    std::vector<std::vector<RiskEstimate>> risks;
    /// cov[grid index][e][f]: covariance of the mean risks (zero off-diagonal without CRN).
    std::vector<std::vector<std::vector<double>>> cov;
    /// θ1 is fixed here and θ2 = θ1 + λ (location) or θ1·λ (scale).
    double base_theta1 = 0.0;
    bool common_random_numbers = false;
    std::uint64_t seed = 0;
    std::size_t n = 0;

    /// Throws LookupError for an unknown label.
    std::size_t index_of(const std::string& label) const;
};

/// Risks of each estimator over the λ grid; grid points run concurrently and
/// results do not depend on scheduling.
RiskCurve risk_curve(const BivariateModel& model, const Loss& loss,
                     const std::vector<EquivariantEstimator>& estimators,
                     const std::vector<double>& lambda_grid, std::size_t n, std::uint64_t seed,
                     bool common_random_numbers);

struct DominanceReport {
    std::string base_label;
    std::string improved_label;
    std::vector<double> lambda;
    std::vector<double> difference;  // improved − base
    std::vector<double> std_error;
    /// Grid indices where improved exceeds base by more than 2 standard errors.
    std::vector<std::size_t> violations;
    double best_lambda = 0.0;  // λ of the largest improvement base − improved
    double best_gain = 0.0;
    /// Each estimator is significantly (2 SE) better somewhere on the grid.
    bool crossing = false;
};

DominanceReport dominance_report(const RiskCurve& curve, const std::string& base_label,
                                 const std::string& improved_label);

}  // namespace orderest
