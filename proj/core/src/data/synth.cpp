#include "fairrep/data/synth.hpp"

#include <numeric>

#include "fairrep/error.hpp"
#include "fairrep/random.hpp"

namespace fairrep::data {

SynthSpec SynthSpec::planted(std::array<std::array<std::size_t, 2>, 2> counts, std::size_t dim,
                             double label_signal, double group_signal, std::uint64_t seed) {
  if (dim < 2) throw ConfigError("planted synthetic data needs at least 2 features");
  SynthSpec spec;
  spec.counts = counts;
  spec.dim = dim;
  spec.seed = seed;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      auto& mean = spec.means[a][y];
      mean.assign(dim, 0.0);
      mean[0] = y == 1 ? label_signal : -label_signal;
      mean[1] = a == 1 ? group_signal : -group_signal;
    }
  }
  return spec;
}

Dataset synth(const SynthSpec& spec, Split split) {
  if (spec.dim == 0) throw ConfigError("synthetic data needs a positive dimension");
  std::size_t n = 0;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      if (spec.means[a][y].size() != spec.dim)
        throw DimensionError("synthetic cell mean has the wrong length");
      if (!(spec.scales[a][y] > 0.0)) throw ConfigError("synthetic cell scale must be positive");
      n += spec.counts[a][y];
    }
  }
  if (n == 0) throw ConfigError("synthetic data has no samples");

  std::vector<std::pair<std::uint8_t, std::uint8_t>> cells;  // (a, y) per row
  cells.reserve(n);
  for (std::uint8_t a = 0; a < 2; ++a)
    for (std::uint8_t y = 0; y < 2; ++y) cells.insert(cells.end(), spec.counts[a][y], {a, y});
  Rng rng(spec.seed);
  rng.shuffle(std::span(cells));

  Dataset d;
  d.split = split;
  d.provenance = "synthetic gaussian cells, seed " + std::to_string(spec.seed);
  d.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim));
  for (std::size_t j = 0; j < spec.dim; ++j) d.feature_names.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, y] = cells[i];
    for (std::size_t j = 0; j < spec.dim; ++j)
      d.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          spec.means[a][y][j] + spec.scales[a][y] * rng.normal();
    d.labels.push_back(y);
    d.groups.push_back(a);
  }
  d.validate();
  return d;
}

}  // namespace fairrep::data
