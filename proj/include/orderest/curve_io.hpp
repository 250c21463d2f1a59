#pragma once

#include "orderest/risksim.hpp"

#include <iosfwd>
#include <string>

namespace orderest {

inline constexpr const char* kCurveCsvHeader = "model,target,loss,estimator,lambda,risk,stderr,n,seed";

/// One row per (estimator, λ), numbers with 12 significant digits.
void write_curve_csv(const RiskCurve& curve, std::ostream& out);

/// Inverse of write_curve_csv for the fields the CSV carries. Throws DataError on malformed input.
RiskCurve read_curve_csv(std::istream& in);

/// Minimal line plot: one polyline per estimator, λ on the x axis.
void write_curve_svg(const RiskCurve& curve, const std::string& title, std::ostream& out);

/// printf-style %.12g.
std::string format_g12(double v);

}  // namespace orderest
