#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orderest {

struct PairedRow {
    std::string label;
    double value_a;
    double value_b;
};

/// Paired observations; value_a is the coordinate with the smaller location.
struct PairedDataset {
    std::vector<PairedRow> rows;
};

/// CSV with columns label,value_a,value_b; a first line whose values are not numbers is a header.
/// Throws DataError on malformed rows, non-finite values or fewer than two rows.
PairedDataset read_paired_csv(std::istream& in);
PairedDataset load_paired_csv(const std::string& path);

struct AnalysisReport {
    std::size_t rows = 0;
    double mean_a = 0.0, mean_b = 0.0;
    double var_a = 0.0, var_b = 0.0;  // divisor n − 1
    double correlation = 0.0;
    double plugin_divisor = 0.0;  // n + 1
    double plugin_var_a = 0.0, plugin_var_b = 0.0;
    /// sign of ρσ2 − σ1 and of σ2 − ρσ1 (−1, 0, +1)
    int regime_smaller = 0;
    int regime_larger = 0;
    double improved_a = 0.0, improved_b = 0.0;
};

/// Summary statistics, normal plug-in parameters and the restricted improved
/// estimates of both means. Throws DataError for constant or perfectly correlated columns.
AnalysisReport analyze_paired(const PairedDataset& data);

/// Human-readable report with the summary statistics at 3 decimals and estimates at 2.
std::string format_report(const AnalysisReport& report);

}  // namespace orderest
