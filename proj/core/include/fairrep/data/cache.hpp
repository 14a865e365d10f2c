#pragma once

#include <string>

#include "fairrep/data/dataset.hpp"

namespace fairrep::data {

/// Writes `<csv_path>` (header y,a,f0,...,f{d-1}; values at full precision)
/// and `<csv_path>.json` (feature names, split, provenance, standardization).
void write_cache(const Dataset& dataset, const std::string& csv_path);

/// Reads a cache written by write_cache. The sidecar is optional; without it
/// features are named f0... and the split defaults to train.
Dataset read_cache(const std::string& csv_path);

}  // namespace fairrep::data
