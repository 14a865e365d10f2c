#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairrep/data/dataset.hpp"
#include "fairrep/engine/adadelta.hpp"
#include "fairrep/engine/loss.hpp"
#include "fairrep/engine/network.hpp"
#include "fairrep/metrics/predictions.hpp"
#include "fairrep/models/config.hpp"

namespace fairrep::models {

using engine::ClassWeights;
using engine::DenseNet;
using engine::Matrix;
using engine::NetGradients;

/// Target weights w_c = 1 / (2 P(Y=c)). Throws ConfigError naming an empty class.
ClassWeights target_class_weights(std::span<const std::uint8_t> labels);

/// For each y, w_a^y = 1 / (2 P(A=a | Y=y)). Throws ConfigError naming an
/// empty (a, y) cell.
std::array<ClassWeights, 2> conditional_group_weights(std::span<const std::uint8_t> labels,
                                                      std::span<const std::uint8_t> groups);

/// Loss weights in use. Entries the variant does not weight stay (1, 1).
struct WeightTable {
  ClassWeights target;
  std::array<ClassWeights, 2> adversary;
};

/// Weights for `variant` computed once from the full training split.
WeightTable weight_table(Variant variant, const data::Dataset& train);

/// Encoder g, target head h and the variant's adversaries, with optimizer
/// state for every parameter group.
struct FairModel {
  VariantConfig config;
  DenseNet encoder;                   // input -> hidden, rectified output
  DenseNet head;                      // hidden -> 1 logit
  std::vector<DenseNet> adversaries;  // each hidden -> adversary_hidden -> 1 logit
  WeightTable weights;
  engine::AdaDeltaState encoder_state;
  engine::AdaDeltaState head_state;
  std::vector<engine::AdaDeltaState> adversary_states;
  std::size_t epoch = 0;  // completed epochs
};

/// Seeded initialization. Throws ConfigError if the dataset width differs
/// from config.arch.input or a weighted cell is empty.
FairModel build(const VariantConfig& config, const data::Dataset& train);

/// Same, with a weight table supplied directly.
FairModel build(const VariantConfig& config, const WeightTable& weights);

struct BatchLosses {
  double target = 0.0;
  /// One entry per adversary; empty when that adversary's sub-batch was empty.
  std::vector<std::optional<double>> adversary;
  std::size_t skipped_terms = 0;
};

struct ModelGradients {
  NetGradients encoder;
  NetGradients head;
  std::vector<NetGradients> adversaries;  // zero gradients for skipped terms

  bool all_finite() const;
};

struct BatchResult {
  BatchLosses losses;
  ModelGradients grads;
};

/// Losses on one minibatch and the gradients of one simultaneous
/// descent-ascent step. Head and adversary gradients descend their own
/// losses; the encoder receives the target gradient plus the adversary
/// gradient reversed and scaled by lambda.
BatchResult batch_loss(const FairModel& model, const Matrix& features,
                       std::span<const std::uint8_t> labels, std::span<const std::uint8_t> groups);

/// Scores sigmoid(h(g(x))) with labels and groups attached.
metrics::PredictionSet predict(const FairModel& model, const data::Dataset& dataset);

/// Representations g(x), n x hidden.
Matrix encode(const FairModel& model, const data::Dataset& dataset);

}  // namespace fairrep::models
