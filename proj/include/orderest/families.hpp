#pragma once

#include "orderest/loss.hpp"
#include "orderest/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orderest {

/// Location models shift, scale models rescale; the loss kind must match.
using Mode = LossKind;

enum class Target { smaller, larger };

enum class ModelName { bvn, dep_exp_gamma, indep_exp, cheriyan_gamma, power_uniform, indep_gamma, custom };

std::string_view to_string(Target target);
std::string_view to_string(ModelName name);
Target target_from_name(std::string_view name);
ModelName model_name_from_string(std::string_view name);

/// Mode of a named model; custom models report location.
Mode model_mode(ModelName name);

/// Identity value of the gap λ: 0 for location, 1 for scale.
inline double identity_lambda(Mode mode) { return mode == Mode::location ? 0.0 : 1.0; }

/// Index of the targeted coordinate: 0 for θ1, 1 for θ2.
inline int target_index(Target target) { return target == Target::smaller ? 0 : 1; }

/// A point of the restricted space θ1 ≤ θ2.
class Theta {
public:
    Theta(double theta1, double theta2);
    double theta1() const noexcept { return t1_; }
    double theta2() const noexcept { return t2_; }
    double operator[](int i) const noexcept { return i == 0 ? t1_ : t2_; }

private:
    double t1_;
    double t2_;
};

/// θ pair at gap λ with θ1 anchored at 0 (location) or 1 (scale).
Theta anchored_theta(Mode mode, double lambda);

using Hyper = std::map<std::string, double>;

/// Pieces of a user-defined model. Only `density` and `window` are required.
struct CustomModelSpec {
    Mode mode = Mode::location;
    std::string label = "custom";
    std::function<double(double, double)> density;
    /// Integration window of the conditional kernel in s for ancillary value u.
    std::function<Window(Target, double)> window;
    std::function<std::pair<double, double>(std::mt19937_64&)> sampler;
    std::function<double(int, double)> marginal_density;
    std::function<Window(int)> marginal_window;
};

/// A bivariate family of standardized pairs (Z1, Z2); data are X_i = Z_i + θ_i or θ_i·Z_i.
///
/// Immutable after construction and safe to share between threads.
class BivariateModel {
public:
    static BivariateModel bvn(double s1, double s2, double rho);
    static BivariateModel dep_exp_gamma();
    static BivariateModel indep_exp(double s1, double s2);
    static BivariateModel cheriyan_gamma();
    static BivariateModel power_uniform(double a1, double a2);
    static BivariateModel indep_gamma(double a1, double a2);
    static BivariateModel custom(CustomModelSpec spec);

    ModelName name() const noexcept { return name_; }
    Mode mode() const noexcept { return mode_; }
    const Hyper& hyper() const noexcept { return hyper_; }
    double hyper(const std::string& key) const;
    const std::string& support() const noexcept { return support_; }
    /// Stable text id such as "bvn[s1=1;s2=2;rho=0.3]"; contains no commas.
    std::string id() const;

    double joint_density(double z1, double z2) const;

    /// Function of s proportional to the conditional density of the targeted
    /// standardized coordinate given the ancillary value u (Z2−Z1 or Z2/Z1).
    /// Factors depending only on u may be dropped.
    double conditional_kernel(Target target, double u, double s) const;

    /// Support and mass hint of conditional_kernel in s; empty when u is off-support.
    Window window(Target target, double u) const;

    bool has_marginal() const noexcept { return static_cast<bool>(marginal_); }
    double marginal_density(int index, double z) const;
    Window marginal_window(int index) const;

    bool has_sampler() const noexcept { return static_cast<bool>(sampler_); }
    /// One standardized draw (Z1, Z2).
    std::pair<double, double> draw(std::mt19937_64& rng) const;

private:
    BivariateModel() = default;

    ModelName name_ = ModelName::custom;
    Mode mode_ = Mode::location;
    std::string label_;
    Hyper hyper_;
    std::string support_;
    std::function<double(double, double)> density_;
    std::function<double(Target, double, double)> kernel_;
    std::function<Window(Target, double)> window_;
    std::function<std::pair<double, double>(std::mt19937_64&)> sampler_;
    std::function<double(int, double)> marginal_;
    std::function<Window(int)> marginal_window_;
};

/// Builds a named model from hyperparameters: s1, s2, rho (bvn), s1, s2 (indep_exp),
/// a1, a2 (power_uniform, indep_gamma). Missing or unexpected keys raise ConfigError.
BivariateModel model_from_config(std::string_view name, const Hyper& hyper);

/// Normalized conditional density of the targeted coordinate at s given ancillary u.
/// Throws DegenerateConditional when the normalizer is zero, infinite or divergent.
double conditional_density(const BivariateModel& model, Target target, double s, double u,
                           const QuadratureOptions& opts = {});

/// n i.i.d. draws of (X1, X2) under θ; deterministic in seed.
std::vector<std::pair<double, double>> sample(const BivariateModel& model, const Theta& theta,
                                              std::size_t n, std::uint64_t seed);

/// Draw under θ from an existing engine.
std::pair<double, double> draw_at(const BivariateModel& model, const Theta& theta,
                                  std::mt19937_64& rng);

/// Loss for which the catalog has closed forms: LINEX for dep_exp_gamma, squared error otherwise.
Loss catalog_loss(const BivariateModel& model);

/// Closed-form ψ_λ(t), or nullopt when the (model, loss, target) triple has none.
///
/// Throws ConfigError when the loss kind differs from the model mode and
/// DomainError for λ below the identity value or t outside the ancillary support.
std::optional<double> closed_form_psi(const BivariateModel& model, const Loss& loss,
                                      Target target, double lambda, double t);

struct BoundsPoint {
    double lower;
    double upper;
};

/// Closed-form envelope (inf and sup over λ of ψ_λ(t)); either side may be infinite.
std::optional<BoundsPoint> closed_form_bounds(const BivariateModel& model, const Loss& loss,
                                              Target target, double t);

/// True when the catalog gives closed forms for this model, loss and target.
bool has_closed_form(const BivariateModel& model, const Loss& loss);

}  // namespace orderest
