#pragma once

#include <string>

#include "fairrep/data/dataset.hpp"

namespace fairrep::data {

struct AdultOptions {
  /// fnlwgt is a census sampling weight, not a personal attribute.
  bool include_fnlwgt = false;
  /// education-num duplicates the one-hot education field.
  bool include_education_num = true;
  bool standardize = true;
};

struct AdultLoad {
  DatasetPair data;
  std::size_t dropped_train = 0;  // rows with missing values
  std::size_t dropped_test = 0;
  std::size_t unseen_test_categories = 0;  // test cells mapped to all-zero one-hots
};

/// UCI Adult: rows with '?' dropped, categoricals one-hot with categories
/// fixed from the training split, sex mapped to A (Female = 1) and removed
/// from the features, income >50K mapped to Y = 1.
AdultLoad load_adult(const std::string& train_path, const std::string& test_path,
                     const AdultOptions& options = {});

}  // namespace fairrep::data
