#pragma once

#include <string>

#include "fairrep/data/dataset.hpp"

namespace fairrep::data {

struct SplitStats {
  std::size_t n = 0;
  double base_rate0 = 0.0;  // P(Y=1 | A=0)
  double base_rate1 = 0.0;  // P(Y=1 | A=1)
  double delta_br = 0.0;
  double positive_rate = 0.0;  // P(Y=1)
  double group1_rate = 0.0;    // P(A=1)
};

/// Row counts and base-rate statistics of a train/test pair.
struct DatasetStats {
  std::string name;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  SplitStats train;
  SplitStats test;
  SplitStats pooled;
};

/// Depends only on the label and group columns. Throws on an empty split or
/// a split missing one of the groups.
SplitStats split_stats(const Dataset& dataset);
DatasetStats stats(const DatasetPair& pair, std::string name);

}  // namespace fairrep::data
