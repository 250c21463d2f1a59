#pragma once

#include "orderest/estimators.hpp"
#include "orderest/families.hpp"

#include <string>
#include <utility>
#include <vector>

namespace orderest {

/// A figure-panel simulation configuration.
struct Preset {
    std::string name;  // fig1a … fig2f
    std::string title;
    ModelName model;
    Hyper hyper;
    Target target;
    std::vector<EstimatorKind> estimators;
    std::vector<double> lambda_grid;
    /// (base, improved) pairs whose dominance the panel illustrates.
    std::vector<std::pair<EstimatorKind, EstimatorKind>> dominance_pairs;
};

const std::vector<Preset>& presets();
/// Throws LookupError for unknown names.
const Preset& find_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace orderest
