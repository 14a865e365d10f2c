#pragma once

#include <cstdint>
#include <string>

#include "fairrep/data/dataset.hpp"

namespace fairrep::data {

enum class CompasRaces {
  /// Every race; A = 1 for African-American, A = 0 otherwise.
  all,
  /// Only African-American (A = 1) and Caucasian (A = 0) defendants.
  black_white,
};

struct CompasOptions {
  CompasRaces races = CompasRaces::all;
  std::uint64_t split_seed = 0;
  std::size_t test_size = 1852;
  bool standardize = true;
};

struct CompasLoad {
  DatasetPair data;
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
};

/// ProPublica two-year recidivism data with the usual screening filters
/// (|days_b_screening_arrest| <= 30, is_recid != -1, charge degree not 'O',
/// score_text present). Eleven features; race is mapped to A and dropped.
/// The split is stratified on (A, Y) and seeded.
CompasLoad load_compas(const std::string& path, const CompasOptions& options = {});

}  // namespace fairrep::data
