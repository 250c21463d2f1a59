#pragma once

#include "orderest/families.hpp"
#include "orderest/loss.hpp"
#include "orderest/quadrature.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace orderest {

struct SolverOptions {
    double abs_tol = 1e-10;
    double quad_rel_tol = 1e-9;
    double bracket_init = 1.0;
    int bracket_max_expansions = 60;
    /// λ values for envelopes; empty selects default_lambda_grid for the model's mode.
    std::vector<double> lambda_grid;
    double tail_cutoff = 1e-12;
    /// |ψ| beyond this on the grid counts as unbounded.
    double divergence_threshold = 1e6;

    /// Throws ConfigError on nonpositive tolerances or a grid that is unsorted or off-domain.
    void validate(Mode mode) const;
    QuadratureOptions quadrature() const;
    /// lambda_grid, or the default grid when it is empty.
    std::vector<double> grid_for(Mode mode) const;
};

/// Log-spaced grid: {0} ∪ [10⁻³, max] for location, [1, max] for scale; `points` values in total.
std::vector<double> default_lambda_grid(Mode mode, double max = 1e3, int points = 64);

enum class Provenance { closed_form, grid_approximate };
std::string_view to_string(Provenance p);

/// Envelope pair as functions of t. Upper may return +∞ and lower −∞.
struct PsiBounds {
    std::function<double(double)> lower;
    std::function<double(double)> upper;
    Provenance provenance = Provenance::closed_form;
    std::vector<double> lambda_grid;  // grid used when provenance is grid_approximate
};

struct BoundsValue {
    double lower;
    double upper;
    Provenance provenance;
};

enum class Monotonicity { nondecreasing, nonincreasing, none };
std::string_view to_string(Monotonicity m);

/// Ancillary value of the standardized pair: t − λ (location) or t/λ (scale).
double shifted_ancillary(Mode mode, double lambda, double t);

/// Normalized first-order function G(c); nonincreasing in c for location, nondecreasing for scale.
double first_order_residual(const BivariateModel& model, const Loss& loss, Target target,
                            double lambda, double t, double c, const SolverOptions& opts = {});

/// Root c = ψ_λ(t) of the conditional first-order equation by bracketing and bisection.
///
/// Throws DegenerateConditional for an improper conditional, DivergenceError for
/// divergent integrals and NoSignChange when no bracket is found.
double solve_psi_lambda(const BivariateModel& model, const Loss& loss, Target target, double lambda,
                        double t, const SolverOptions& opts = {});

/// Catalog envelope when available, otherwise compute_bounds_numeric.
BoundsValue compute_bounds(const BivariateModel& model, const Loss& loss, Target target, double t,
                           const SolverOptions& opts = {});

/// Envelope from ψ_λ(t) sampled on the λ grid with the far end extrapolated.
///
/// Throws InconsistencyError when the samples contradict the likelihood-ratio direction.
BoundsValue compute_bounds_numeric(const BivariateModel& model, const Loss& loss, Target target,
                                   double t, const SolverOptions& opts = {});

/// compute_bounds wrapped as functions of t.
PsiBounds make_bounds(const BivariateModel& model, const Loss& loss, Target target,
                      const SolverOptions& opts = {});

/// Direction in s of kernel(shifted ancillary)/kernel(t); ties count as nondecreasing.
///
/// Points where both kernels vanish are skipped and a zero denominator with a
/// positive numerator counts as +∞. Throws InsufficientSupport with fewer than
/// two points of positive denominator.
Monotonicity check_lr_monotonicity(const BivariateModel& model, Target target, double lambda,
                                   double t, const std::vector<double>& s_grid);

/// Interior grid covering the cores of both conditional windows.
std::vector<double> default_s_grid(const BivariateModel& model, Target target, double lambda,
                                   double t, int points = 201);

/// Direction of λ ↦ ψ_λ(t) implied by the likelihood ratio at every non-identity grid λ;
/// `none` when any λ disagrees or gives no direction. A λ whose ratio is constant on its
/// s grid fits both directions and is skipped.
Monotonicity predicted_psi_direction(const BivariateModel& model, Target target, double t,
                                     const std::vector<double>& lambda_grid);

/// Constant c of the unrestricted best equivariant estimator (X_i − c or c·X_i),
/// from the marginal of the targeted coordinate.
double solve_unrestricted_constant(const BivariateModel& model, const Loss& loss, Target target,
                                   const SolverOptions& opts = {});

}  // namespace orderest
