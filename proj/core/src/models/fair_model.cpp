#include "fairrep/models/fair_model.hpp"

#include <array>
#include <cmath>
#include <string>

#include "fairrep/error.hpp"

namespace fairrep::models {

using engine::Activation;
using engine::GradientReversal;
using engine::Vector;

ClassWeights target_class_weights(std::span<const std::uint8_t> labels) {
  std::array<std::size_t, 2> n{};
  for (std::uint8_t y : labels) {
    if (y > 1) throw ConfigError("labels must be 0 or 1");
    ++n[y];
  }
  for (int y = 0; y < 2; ++y)
    if (n[y] == 0)
      throw ConfigError("cannot weight the target: no training samples with Y=" +
                        std::to_string(y));
  const double total = static_cast<double>(labels.size());
  return {total / (2.0 * static_cast<double>(n[0])), total / (2.0 * static_cast<double>(n[1]))};
}

std::array<ClassWeights, 2> conditional_group_weights(std::span<const std::uint8_t> labels,
                                                      std::span<const std::uint8_t> groups) {
  if (labels.size() != groups.size()) throw DimensionError("labels and groups differ in length");
  std::array<std::array<std::size_t, 2>, 2> n{};  // [y][a]
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1 || groups[i] > 1) throw ConfigError("labels and groups must be 0 or 1");
    ++n[labels[i]][groups[i]];
  }
  std::array<ClassWeights, 2> out;
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a)
      if (n[y][a] == 0)
        throw ConfigError("cannot weight the adversary: no training samples with A=" +
                          std::to_string(a) + ", Y=" + std::to_string(y));
    const double total = static_cast<double>(n[y][0] + n[y][1]);
    out[y] = {total / (2.0 * static_cast<double>(n[y][0])),
              total / (2.0 * static_cast<double>(n[y][1]))};
  }
  return out;
}

WeightTable weight_table(Variant variant, const data::Dataset& train) {
  WeightTable w;
  if (variant == Variant::cfair) w.target = target_class_weights(train.labels);
  if (variant == Variant::cfair || variant == Variant::cfair_eo)
    w.adversary = conditional_group_weights(train.labels, train.groups);
  return w;
}

FairModel build(const VariantConfig& config, const data::Dataset& train) {
  config.validate();
  if (train.dim() != config.arch.input)
    throw ConfigError("dataset has " + std::to_string(train.dim()) +
                      " features but the architecture expects " +
                      std::to_string(config.arch.input));
  return build(config, weight_table(config.variant, train));
}

FairModel build(const VariantConfig& config, const WeightTable& weights) {
  config.validate();
  FairModel m;
  m.config = config;
  m.weights = weights;
  const auto& a = config.arch;
  // Each parameter group draws from its own stream so adding adversaries
  // never changes the encoder or head initialization.
  Rng encoder_rng(derive_seed(config.seed, 0));
  Rng head_rng(derive_seed(config.seed, 1));
  m.encoder = DenseNet::glorot({a.input, a.hidden}, Activation::relu, encoder_rng);
  m.head = DenseNet::glorot({a.hidden, 1}, Activation::identity, head_rng);
  for (std::size_t k = 0; k < adversary_count(config.variant); ++k) {
    Rng rng(derive_seed(config.seed, 2 + k));
    m.adversaries.push_back(
        DenseNet::glorot({a.hidden, a.adversary_hidden, 1}, Activation::identity, rng));
  }
  m.encoder_state = engine::AdaDeltaState::zeros(m.encoder, config.optimizer);
  m.head_state = engine::AdaDeltaState::zeros(m.head, config.optimizer);
  for (const DenseNet& adv : m.adversaries)
    m.adversary_states.push_back(engine::AdaDeltaState::zeros(adv, config.optimizer));
  return m;
}

bool ModelGradients::all_finite() const {
  if (!encoder.all_finite() || !head.all_finite()) return false;
  for (const auto& g : adversaries)
    if (!g.all_finite()) return false;
  return true;
}

namespace {

struct AdversaryTerm {
  double loss = 0.0;
  NetGradients grads;  // grads.input is d(-lambda * loss)/d(representation rows)
};

// Binary CE of adversary `net` predicting the group from `z`.
AdversaryTerm adversary_ce(const DenseNet& net, const Matrix& z,
                           std::span<const std::uint8_t> groups, ClassWeights weights,
                           double lambda) {
  auto fwd = engine::forward(net, z, GradientReversal{0, lambda});
  const Vector logits = fwd.output.col(0);
  auto loss = engine::weighted_bce(logits, groups, weights);
  return {loss.loss, engine::backward(fwd.tape, loss.grad)};
}

// Mean over present (a, y) cells of the cell-mean |sigmoid(logit) - a|.
AdversaryTerm adversary_l1(const DenseNet& net, const Matrix& z,
                           std::span<const std::uint8_t> labels,
                           std::span<const std::uint8_t> groups, double lambda) {
  auto fwd = engine::forward(net, z, GradientReversal{0, lambda});
  std::array<std::size_t, 4> count{};
  for (std::size_t i = 0; i < labels.size(); ++i) ++count[groups[i] * 2 + labels[i]];
  std::size_t cells = 0;
  for (std::size_t c : count) cells += c > 0;

  Vector grad(fwd.output.rows());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < fwd.output.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double s = engine::sigmoid(fwd.output(i, 0));
    const double a = groups[k];
    const double scale =
        1.0 / (static_cast<double>(cells) * static_cast<double>(count[groups[k] * 2 + labels[k]]));
    loss += scale * std::abs(s - a);
    const double sign = s > a ? 1.0 : (s < a ? -1.0 : 0.0);
    grad[i] = scale * sign * s * (1.0 - s);
  }
  return {loss, engine::backward(fwd.tape, grad)};
}

Matrix gather_rows(const Matrix& m, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace

BatchResult batch_loss(const FairModel& model, const Matrix& features,
                       std::span<const std::uint8_t> labels, std::span<const std::uint8_t> groups) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (labels.size() != n || groups.size() != n)
    throw DimensionError("minibatch features, labels and groups differ in length");
  const double lambda = model.config.lambda;

  auto enc = engine::forward(model.encoder, features);
  enc.tape.skip_input_gradient();
  const Matrix& z = enc.output;

  BatchResult out;
  auto head = engine::forward(model.head, z);
  const auto target = engine::weighted_bce(head.output.col(0), labels, model.weights.target);
  out.losses.target = target.loss;
  out.grads.head = engine::backward(head.tape, target.grad);
  Matrix dz = out.grads.head.input;

  switch (model.config.variant) {
    case Variant::no_debias:
      break;
    case Variant::fair: {
      auto term = adversary_ce(model.adversaries[0], z, groups, ClassWeights{}, lambda);
      out.losses.adversary.push_back(term.loss);
      dz += term.grads.input;
      out.grads.adversaries.push_back(std::move(term.grads));
      break;
    }
    case Variant::laftr: {
      auto term = adversary_l1(model.adversaries[0], z, labels, groups, lambda);
      out.losses.adversary.push_back(term.loss);
      dz += term.grads.input;
      out.grads.adversaries.push_back(std::move(term.grads));
      break;
    }
    case Variant::cfair_eo:
    case Variant::cfair: {
      for (std::uint8_t y = 0; y < 2; ++y) {
        std::vector<Eigen::Index> rows;
        std::vector<std::uint8_t> sub_groups;
        for (std::size_t i = 0; i < n; ++i) {
          if (labels[i] != y) continue;
          rows.push_back(static_cast<Eigen::Index>(i));
          sub_groups.push_back(groups[i]);
        }
        if (rows.empty()) {
          out.losses.adversary.push_back(std::nullopt);
          ++out.losses.skipped_terms;
          out.grads.adversaries.push_back(engine::zero_gradients(model.adversaries[y], 0));
          continue;
        }
        auto term = adversary_ce(model.adversaries[y], gather_rows(z, rows), sub_groups,
                                 model.weights.adversary[y], lambda);
        out.losses.adversary.push_back(term.loss);
        for (std::size_t i = 0; i < rows.size(); ++i)
          dz.row(rows[i]) += term.grads.input.row(static_cast<Eigen::Index>(i));
        out.grads.adversaries.push_back(std::move(term.grads));
      }
      break;
    }
  }

  out.grads.encoder = engine::backward(enc.tape, dz);
  return out;
}

metrics::PredictionSet predict(const FairModel& model, const data::Dataset& dataset) {
  const Matrix z = encode(model, dataset);
  const Matrix logits = engine::forward(model.head, z).output;
  std::vector<double> scores(dataset.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    scores[i] = engine::sigmoid(logits(static_cast<Eigen::Index>(i), 0));
  return metrics::PredictionSet(std::move(scores), dataset.labels, dataset.groups);
}

Matrix encode(const FairModel& model, const data::Dataset& dataset) {
  if (dataset.dim() != model.encoder.input_dim())
    throw DimensionError("dataset width " + std::to_string(dataset.dim()) +
                         " does not match the encoder input " +
                         std::to_string(model.encoder.input_dim()));
  return engine::forward(model.encoder, dataset.features).output;
}

}  // namespace fairrep::models
