#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orderest {

/// Location losses are evaluated at a−θ, scale losses at a/θ.
enum class LossKind { location, scale };
enum class LossName { squared_error, linex, custom };

std::string_view to_string(LossKind kind);
std::string_view to_string(LossName name);

/// A bowl-shaped loss W together with its derivative W'.
///
/// Values are immutable after construction. Scale losses reject t <= 0.
class Loss {
public:
    using Fn = std::function<double(double)>;

    /// W(t) = t² (location) or (t−1)² (scale).
    static Loss squared_error(LossKind kind);
    /// W(t) = e^t − t − 1; location only.
    static Loss linex();
    /// User loss. `w_prime` may be empty, in which case deriv() throws ConfigError.
    static Loss custom(LossKind kind, std::string label, Fn w, Fn w_prime, double argmin);

    LossKind kind() const noexcept { return kind_; }
    LossName name() const noexcept { return name_; }
    double argmin() const noexcept { return argmin_; }
    const std::string& label() const noexcept { return label_; }
    bool has_derivative() const noexcept { return static_cast<bool>(w_prime_); }

    double value(double t) const;
    double deriv(double t) const;

private:
    Loss(LossKind kind, LossName name, std::string label, Fn w, Fn w_prime, double argmin);
    void check_domain(double t) const;

    LossKind kind_;
    LossName name_;
    std::string label_;
    Fn w_;
    Fn w_prime_;
    double argmin_;
};

/// Built-in loss by name ("squared_error", "linex").
Loss loss_from_name(std::string_view name, LossKind kind);

struct BowlViolation {
    std::string condition;  // "C1" or "C2"
    double a;
    double b;
    std::string detail;
};

struct ConditionReport {
    std::vector<BowlViolation> violations;
    bool derivative_checked = true;
    bool ok() const noexcept { return violations.empty(); }
};

/// Grid check of the bowl conditions: W(argmin)=0, W nonincreasing left of the
/// argmin and nondecreasing right of it (C1), W' nondecreasing (C2).
///
/// A grid can only refute the conditions; the almost-everywhere form of C2
/// cannot be certified this way.
ConditionReport check_bowl_conditions(const Loss& loss, std::span<const double> grid);

}  // namespace orderest
