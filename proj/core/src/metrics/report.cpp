#include "fairrep/metrics/report.hpp"

#include <algorithm>
#include <cmath>

#include "fairrep/error.hpp"

namespace fairrep::metrics {

namespace {

std::optional<double> ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return std::nullopt;
}

std::optional<double> abs_diff(const std::optional<double>& x, const std::optional<double>& y) {
  if (x && y) return std::abs(*x - *y);
  return std::nullopt;
}

double cell(const CellTable& t, int a, int y) { return t(a, y, 0) + t(a, y, 1); }
double group(const CellTable& t, int a) { return cell(t, a, 0) + cell(t, a, 1); }

}  // namespace

CellTable CellTable::from_counts(const ConfusionCounts& counts) {
  CellTable t;
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 2; ++y)
      for (int k = 0; k < 2; ++k) t(a, y, k) = static_cast<double>(counts(a, y, k));
  return t;
}

FairnessReport report_from_cells(const CellTable& t) {
  for (const auto& a : t.w)
    for (const auto& y : a)
      for (double v : y)
        if (!(v >= 0.0) || !std::isfinite(v)) throw NumericError("cell weights must be finite and nonnegative");

  FairnessReport r;
  std::array<std::optional<double>, 2> err, base, positive;
  std::array<std::array<std::optional<double>, 2>, 2> positive_ay;  // [a][y]
  for (int a = 0; a < 2; ++a) {
    const double n = group(t, a);
    err[a] = ratio(t(a, 1, 0) + t(a, 0, 1), n);
    base[a] = ratio(t(a, 1, 0) + t(a, 1, 1), n);
    positive[a] = ratio(t(a, 0, 1) + t(a, 1, 1), n);
    for (int y = 0; y < 2; ++y) positive_ay[a][y] = ratio(t(a, y, 1), cell(t, a, y));
  }
  r.err0 = err[0];
  r.err1 = err[1];
  if (err[0] && err[1]) r.joint_err = *err[0] + *err[1];
  r.err_gap = abs_diff(err[0], err[1]);

  r.fpr = ratio(t(0, 0, 1) + t(1, 0, 1), cell(t, 0, 0) + cell(t, 1, 0));
  r.fnr = ratio(t(0, 1, 0) + t(1, 1, 0), cell(t, 0, 1) + cell(t, 1, 1));
  if (r.fpr && r.fnr) r.ber = *r.fnr + *r.fpr;

  r.dp_gap = abs_diff(positive[0], positive[1]);
  r.eo_gap_y0 = abs_diff(positive_ay[0][0], positive_ay[1][0]);
  r.eo_gap_y1 = abs_diff(positive_ay[0][1], positive_ay[1][1]);
  if (r.eo_gap_y0 && r.eo_gap_y1) r.eo_gap = std::max(*r.eo_gap_y0, *r.eo_gap_y1);

  r.base_rate0 = base[0];
  r.base_rate1 = base[1];
  r.delta_br = abs_diff(base[0], base[1]);
  return r;
}

FairnessReport empirical_report(const PredictionSet& preds) {
  const ConfusionCounts counts = confusion(preds);
  FairnessReport r = report_from_cells(CellTable::from_counts(counts));
  r.confusion = counts;
  return r;
}

ConditionalRates conditional_rates(const CellTable& t) {
  ConditionalRates c;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      const double n = cell(t, a, y);
      if (!(n > 0.0))
        throw UndefinedMetricError("conditional rate given A=" + std::to_string(a) + ", Y=" +
                                   std::to_string(y) + " is undefined: the cell is empty");
      c.positive_given_ay[a][y] = t(a, y, 1) / n;
    }
    c.negative_rate[a] = cell(t, a, 0) / group(t, a);
  }
  for (int y = 0; y < 2; ++y) {
    const double n = cell(t, 0, y) + cell(t, 1, y);
    c.positive_given_y[y] = (t(0, y, 1) + t(1, y, 1)) / n;
    for (int a = 0; a < 2; ++a) c.group_given_y[y][a] = cell(t, a, y) / n;
  }
  return c;
}

double require_defined(const std::optional<double>& value, const std::string& name) {
  if (!value) throw UndefinedMetricError(name + " is undefined: a conditioning cell is empty");
  return *value;
}

}  // namespace fairrep::metrics
