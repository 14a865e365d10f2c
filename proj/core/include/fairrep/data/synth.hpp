#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fairrep/data/dataset.hpp"

namespace fairrep::data {

/// Gaussian cells indexed [a][y].
struct SynthSpec {
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::size_t dim = 2;
  std::array<std::array<std::vector<double>, 2>, 2> means;   // each of length dim
  std::array<std::array<double, 2>, 2> scales{{{1.0, 1.0}, {1.0, 1.0}}};
  std::uint64_t seed = 0;

  /// Feature 0 carries the label (+-label_signal), feature 1 the group
  /// (+-group_signal), the rest are noise.
  static SynthSpec planted(std::array<std::array<std::size_t, 2>, 2> counts, std::size_t dim,
                           double label_signal, double group_signal, std::uint64_t seed);
};

/// Rows are shuffled with its seed; cell counts are exact, so
/// empirical base rates are exact ratios of the requested counts.
Dataset synth(const SynthSpec& spec, Split split = Split::train);

}  // namespace fairrep::data
