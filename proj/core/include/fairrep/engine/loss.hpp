#pragma once

#include <cstdint>
#include <span>

#include "fairrep/engine/network.hpp"

namespace fairrep::engine {

/// Per-class multipliers on the cross-entropy of a binary target.
struct ClassWeights {
  double negative = 1.0;
  double positive = 1.0;

  double operator[](int label) const { return label == 0 ? negative : positive; }
  bool operator==(const ClassWeights&) const = default;
};

struct LossResult {
  double loss = 0.0;
  Vector grad;  // d(loss)/d(logit_i)
};

/// Mean over the batch of w[y_i] * CE(sigmoid(logit_i), y_i), natural log.
/// Evaluated through softplus so large |logit| never overflows.
LossResult weighted_bce(const Vector& logits, std::span<const std::uint8_t> labels,
                        ClassWeights weights = {});

double sigmoid(double x);
double softplus(double x);

}  // namespace fairrep::engine
