#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fairrep::data {

using Matrix = Eigen::MatrixXd;

enum class Split { train, test };

const char* to_string(Split split);
Split split_from_string(const std::string& name);

/// Per-column shift and scale fitted on a training split.
struct Standardization {
  std::vector<std::size_t> columns;
  std::vector<double> means;
  std::vector<double> scales;
};

/// Samples of (X, Y, A). The sensitive attribute is never a feature column.
struct Dataset {
  Matrix features;  // n x d
  std::vector<std::uint8_t> labels;
  std::vector<std::uint8_t> groups;
  std::vector<std::string> feature_names;
  Split split = Split::train;
  std::string provenance;
  /// Set once standardization has been applied.
  std::optional<Standardization> standardization;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  bool empty() const { return labels.empty(); }

  /// Throws DimensionError/NumericError on inconsistent shapes, non-binary
  /// labels or groups, or non-finite features.
  void validate() const;

  /// Rows in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;
};

struct DatasetPair {
  Dataset train;
  Dataset test;
};

/// Mean/std of `columns` on `train`. Constant columns get scale 1.
Standardization fit_standardization(const Dataset& train, const std::vector<std::size_t>& columns);

/// Throws ConfigError if `dataset` was already standardized.
void apply_standardization(Dataset& dataset, const Standardization& standardization);

}  // namespace fairrep::data
