#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace fairrep::metrics {

/// Fixed decision threshold applied to scores.
inline constexpr double kDecisionThreshold = 0.5;

/// Classifier scores in [0,1] with the aligned labels Y and groups A.
/// `hard` is always score >= 0.5.
class PredictionSet {
 public:
  PredictionSet() = default;
  PredictionSet(std::vector<double> scores, std::vector<std::uint8_t> labels,
                std::vector<std::uint8_t> groups);

  /// Builds a set whose scores are the hard predictions themselves (0.0 or 1.0).
  static PredictionSet from_hard(std::span<const std::uint8_t> hard,
                                 std::vector<std::uint8_t> labels,
                                 std::vector<std::uint8_t> groups);

  std::size_t size() const { return scores_.size(); }
  bool empty() const { return scores_.empty(); }
  const std::vector<double>& scores() const { return scores_; }
  const std::vector<std::uint8_t>& hard() const { return hard_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  const std::vector<std::uint8_t>& groups() const { return groups_; }

  /// Appends another set (e.g. train followed by test).
  void append(const PredictionSet& other);

 private:
  std::vector<double> scores_;
  std::vector<std::uint8_t> hard_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::uint8_t> groups_;
};

/// Sample counts indexed [a][y][yhat].
struct ConfusionCounts {
  std::array<std::array<std::array<std::int64_t, 2>, 2>, 2> n{};

  std::int64_t operator()(int a, int y, int yhat) const { return n[a][y][yhat]; }
  std::int64_t total() const;
  std::int64_t cell(int a, int y) const { return n[a][y][0] + n[a][y][1]; }
  std::int64_t group(int a) const { return cell(a, 0) + cell(a, 1); }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const PredictionSet& preds);

struct EoGap {
  double y0 = 0.0;
  double y1 = 0.0;
  double max = 0.0;
};

struct BaseRates {
  double group0 = 0.0;
  double group1 = 0.0;
  double delta = 0.0;
};

// Each of these throws UndefinedMetricError when a conditioning cell it
// needs is empty.
double fnr(const PredictionSet& preds);
double fpr(const PredictionSet& preds);
double ber(const PredictionSet& preds);
double dp_gap(const PredictionSet& preds);
EoGap eo_gap(const PredictionSet& preds);
double err_gap(const PredictionSet& preds);
double joint_err(const PredictionSet& preds);
BaseRates base_rates(const PredictionSet& preds);
BaseRates base_rates(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> groups);

}  // namespace fairrep::metrics
