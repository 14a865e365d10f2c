#pragma once

#include <span>
#include <vector>

#include "fairrep/engine/network.hpp"

namespace fairrep::engine {

struct AdaDeltaSettings {
  double rho = 0.95;
  double epsilon = 1e-6;
  double learning_rate = 1.0;
};

/// Running averages E[g^2] and E[dx^2], shaped like the network they update.
struct AdaDeltaState {
  AdaDeltaSettings settings;
  std::vector<Layer> sq_grad;
  std::vector<Layer> sq_update;

  static AdaDeltaState zeros(const DenseNet& net, AdaDeltaSettings settings = {});
};

/// One AdaDelta update over flat arrays of equal length:
///   E[g^2] <- rho E[g^2] + (1 - rho) g^2
///   dx      = -lr * sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
///   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
///   x      <- x + dx
void adadelta_update(std::span<double> params, std::span<const double> grads,
                     std::span<double> sq_grad, std::span<double> sq_update,
                     const AdaDeltaSettings& settings);

/// Applies adadelta_update to every layer. Throws NumericError on a
/// non-finite gradient (before touching anything) or non-finite result.
void adadelta_step(DenseNet& net, const NetGradients& grads, AdaDeltaState& state);

}  // namespace fairrep::engine
