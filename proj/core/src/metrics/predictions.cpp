#include "fairrep/metrics/predictions.hpp"

#include <cmath>
#include <string>

#include "fairrep/error.hpp"
#include "fairrep/metrics/report.hpp"

namespace fairrep::metrics {

namespace {

void require_binary(std::span<const std::uint8_t> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 1)
      throw DimensionError(std::string(what) + "[" + std::to_string(i) + "] is not 0 or 1");
}

}  // namespace

PredictionSet::PredictionSet(std::vector<double> scores, std::vector<std::uint8_t> labels,
                             std::vector<std::uint8_t> groups)
    : scores_(std::move(scores)), labels_(std::move(labels)), groups_(std::move(groups)) {
  if (labels_.size() != scores_.size() || groups_.size() != scores_.size())
    throw DimensionError("prediction set: scores, labels and groups differ in length");
  require_binary(labels_, "labels");
  require_binary(groups_, "groups");
  hard_.resize(scores_.size());
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    const double s = scores_[i];
    if (!std::isfinite(s) || s < 0.0 || s > 1.0)
      throw NumericError("score[" + std::to_string(i) + "] outside [0,1]");
    hard_[i] = s >= kDecisionThreshold ? 1 : 0;
  }
}

PredictionSet PredictionSet::from_hard(std::span<const std::uint8_t> hard,
                                       std::vector<std::uint8_t> labels,
                                       std::vector<std::uint8_t> groups) {
  require_binary(hard, "predictions");
  std::vector<double> scores(hard.begin(), hard.end());
  return PredictionSet(std::move(scores), std::move(labels), std::move(groups));
}

void PredictionSet::append(const PredictionSet& other) {
  scores_.insert(scores_.end(), other.scores_.begin(), other.scores_.end());
  hard_.insert(hard_.end(), other.hard_.begin(), other.hard_.end());
  labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
  groups_.insert(groups_.end(), other.groups_.begin(), other.groups_.end());
}

std::int64_t ConfusionCounts::total() const {
  std::int64_t t = 0;
  for (const auto& a : n)
    for (const auto& y : a)
      for (std::int64_t c : y) t += c;
  return t;
}

ConfusionCounts confusion(const PredictionSet& preds) {
  if (preds.empty()) throw DimensionError("confusion counts of an empty prediction set");
  ConfusionCounts c;
  const auto& hard = preds.hard();
  const auto& y = preds.labels();
  const auto& a = preds.groups();
  for (std::size_t i = 0; i < preds.size(); ++i) ++c.n[a[i]][y[i]][hard[i]];
  return c;
}

double fnr(const PredictionSet& preds) { return require_defined(empirical_report(preds).fnr, "FNR"); }
double fpr(const PredictionSet& preds) { return require_defined(empirical_report(preds).fpr, "FPR"); }
double ber(const PredictionSet& preds) { return require_defined(empirical_report(preds).ber, "BER"); }

double dp_gap(const PredictionSet& preds) {
  return require_defined(empirical_report(preds).dp_gap, "DP gap");
}

EoGap eo_gap(const PredictionSet& preds) {
  const FairnessReport r = empirical_report(preds);
  return {require_defined(r.eo_gap_y0, "EO gap (y=0)"), require_defined(r.eo_gap_y1, "EO gap (y=1)"),
          require_defined(r.eo_gap, "EO gap")};
}

double err_gap(const PredictionSet& preds) {
  return require_defined(empirical_report(preds).err_gap, "error gap");
}

double joint_err(const PredictionSet& preds) {
  return require_defined(empirical_report(preds).joint_err, "joint error");
}

BaseRates base_rates(const PredictionSet& preds) {
  return base_rates(preds.labels(), preds.groups());
}

BaseRates base_rates(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> groups) {
  if (labels.size() != groups.size()) throw DimensionError("labels and groups differ in length");
  std::array<std::array<std::int64_t, 2>, 2> n{};  // [a][y]
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1 || groups[i] > 1) throw DimensionError("labels and groups must be 0 or 1");
    ++n[groups[i]][labels[i]];
  }
  BaseRates br;
  for (int a = 0; a < 2; ++a) {
    const std::int64_t total = n[a][0] + n[a][1];
    if (total == 0)
      throw UndefinedMetricError("base rate of group A=" + std::to_string(a) +
                                 " is undefined: the group has no samples");
    (a == 0 ? br.group0 : br.group1) =
        static_cast<double>(n[a][1]) / static_cast<double>(total);
  }
  br.delta = std::abs(br.group0 - br.group1);
  return br;
}

}  // namespace fairrep::metrics
