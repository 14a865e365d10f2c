#include "fairrep/data/dataset.hpp"

#include <cmath>

#include "fairrep/error.hpp"

namespace fairrep::data {

const char* to_string(Split split) { return split == Split::train ? "train" : "test"; }

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  throw ConfigError("unknown split '" + name + "'");
}

void Dataset::validate() const {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (static_cast<std::size_t>(groups.size()) != labels.size() || features.rows() != n)
    throw DimensionError("dataset: features, labels and groups differ in row count");
  if (!feature_names.empty() && feature_names.size() != dim())
    throw DimensionError("dataset: feature name count does not match the feature width");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] > 1 || groups[i] > 1)
      throw DimensionError("dataset row " + std::to_string(i) + " has a non-binary label or group");
  if (!features.allFinite()) throw NumericError("dataset contains non-finite feature values");
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  out.groups.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= size()) throw DimensionError("subset row index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(r));
    out.labels.push_back(labels[r]);
    out.groups.push_back(groups[r]);
  }
  out.feature_names = feature_names;
  out.split = split;
  out.provenance = provenance;
  out.standardization = standardization;
  return out;
}

Standardization fit_standardization(const Dataset& train, const std::vector<std::size_t>& columns) {
  if (train.empty()) throw ConfigError("cannot fit standardization on an empty split");
  Standardization s;
  s.columns = columns;
  const double n = static_cast<double>(train.size());
  for (std::size_t c : columns) {
    if (c >= train.dim()) throw DimensionError("standardization column out of range");
    const auto col = train.features.col(static_cast<Eigen::Index>(c));
    const double mean = col.sum() / n;
    const double var = (col.array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    s.means.push_back(mean);
    s.scales.push_back(sd > 0.0 ? sd : 1.0);
  }
  return s;
}

void apply_standardization(Dataset& dataset, const Standardization& s) {
  if (dataset.standardization)
    throw ConfigError("dataset is already standardized; refusing to standardize twice");
  for (std::size_t k = 0; k < s.columns.size(); ++k) {
    if (s.columns[k] >= dataset.dim()) throw DimensionError("standardization column out of range");
    auto col = dataset.features.col(static_cast<Eigen::Index>(s.columns[k]));
    col = (col.array() - s.means[k]) / s.scales[k];
  }
  dataset.standardization = s;
}

}  // namespace fairrep::data
