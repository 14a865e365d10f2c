#include "fairrep/data/stats.hpp"

#include <array>
#include <cmath>

#include "fairrep/error.hpp"

namespace fairrep::data {

namespace {

SplitStats from_counts(const std::array<std::array<std::size_t, 2>, 2>& n) {
  const std::size_t g0 = n[0][0] + n[0][1];
  const std::size_t g1 = n[1][0] + n[1][1];
  if (g0 == 0 || g1 == 0) throw UndefinedMetricError("base rates need samples from both groups");
  SplitStats s;
  s.n = g0 + g1;
  s.base_rate0 = static_cast<double>(n[0][1]) / static_cast<double>(g0);
  s.base_rate1 = static_cast<double>(n[1][1]) / static_cast<double>(g1);
  s.delta_br = std::abs(s.base_rate0 - s.base_rate1);
  s.positive_rate = static_cast<double>(n[0][1] + n[1][1]) / static_cast<double>(s.n);
  s.group1_rate = static_cast<double>(g1) / static_cast<double>(s.n);
  return s;
}

std::array<std::array<std::size_t, 2>, 2> count(const Dataset& d) {
  std::array<std::array<std::size_t, 2>, 2> n{};
  for (std::size_t i = 0; i < d.size(); ++i) ++n[d.groups[i]][d.labels[i]];
  return n;
}

}  // namespace

SplitStats split_stats(const Dataset& dataset) {
  if (dataset.empty()) throw UndefinedMetricError("statistics of an empty split");
  return from_counts(count(dataset));
}

DatasetStats stats(const DatasetPair& pair, std::string name) {
  DatasetStats s;
  s.name = std::move(name);
  s.n_train = pair.train.size();
  s.n_test = pair.test.size();
  s.train = split_stats(pair.train);
  s.test = split_stats(pair.test);
  auto pooled = count(pair.train);
  const auto test = count(pair.test);
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 2; ++y) pooled[a][y] += test[a][y];
  s.pooled = from_counts(pooled);
  return s;
}

}  // namespace fairrep::data
