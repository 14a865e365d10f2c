#include "fairrep/engine/loss.hpp"

#include <cmath>
#include <string>

#include "fairrep/error.hpp"

namespace fairrep::engine {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

LossResult weighted_bce(const Vector& logits, std::span<const std::uint8_t> labels,
                        ClassWeights weights) {
  if (static_cast<std::size_t>(logits.size()) != labels.size())
    throw DimensionError("weighted_bce: " + std::to_string(logits.size()) + " logits vs " +
                         std::to_string(labels.size()) + " labels");
  if (!(weights.negative > 0.0) || !(weights.positive > 0.0))
    throw ConfigError("class weights must be positive");
  if (labels.empty()) throw DimensionError("weighted_bce on an empty batch");

  const auto n = static_cast<double>(labels.size());
  LossResult out;
  out.grad.resize(logits.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const std::uint8_t y = labels[static_cast<std::size_t>(i)];
    if (y > 1) throw ConfigError("weighted_bce labels must be 0 or 1");
    const double z = logits[i];
    const double w = weights[y];
    // -log sigmoid(z) = softplus(-z); -log(1 - sigmoid(z)) = softplus(z)
    total += w * (y == 1 ? softplus(-z) : softplus(z));
    out.grad[i] = w * (sigmoid(z) - static_cast<double>(y)) / n;
  }
  out.loss = total / n;
  return out;
}

}  // namespace fairrep::engine
