#pragma once

#include <array>
#include <optional>
#include <string>

#include "fairrep/metrics/predictions.hpp"

namespace fairrep::metrics {

/// Nonnegative weights indexed [a][y][yhat]: sample counts in empirical mode,
/// probability masses in exact mode. All rates are ratios of sums of cells,
/// so the two scalings give identical rates.
struct CellTable {
  std::array<std::array<std::array<double, 2>, 2>, 2> w{};

  double operator()(int a, int y, int yhat) const { return w[a][y][yhat]; }
  double& operator()(int a, int y, int yhat) { return w[a][y][yhat]; }

  static CellTable from_counts(const ConfusionCounts& counts);
};

/// Group rates, gaps, and global error rates of one hard classifier.
/// A field is empty when the event it conditions on has zero weight.
struct FairnessReport {
  std::optional<double> err0, err1, joint_err, err_gap;
  std::optional<double> fpr, fnr, ber;
  std::optional<double> dp_gap;
  std::optional<double> eo_gap_y0, eo_gap_y1, eo_gap;
  std::optional<double> base_rate0, base_rate1, delta_br;
  /// Present for reports computed from samples.
  std::optional<ConfusionCounts> confusion;
};

FairnessReport report_from_cells(const CellTable& cells);
FairnessReport empirical_report(const PredictionSet& preds);

/// Conditional rates used by the theorem checks. Throws UndefinedMetricError
/// naming the empty event.
struct ConditionalRates {
  // P(yhat = 1 | A = a, Y = y)
  std::array<std::array<double, 2>, 2> positive_given_ay{};
  // P(yhat = 1 | Y = y)
  std::array<double, 2> positive_given_y{};
  // P(Y = 0 | A = a), called gamma_a below
  std::array<double, 2> negative_rate{};
  // P(A = a | Y = y), indexed [y][a]
  std::array<std::array<double, 2>, 2> group_given_y{};
};

ConditionalRates conditional_rates(const CellTable& cells);

/// Returns `value` or throws UndefinedMetricError("<name> is undefined ...").
double require_defined(const std::optional<double>& value, const std::string& name);

}  // namespace fairrep::metrics
