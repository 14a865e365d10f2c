#include "fairrep/models/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairrep/error.hpp"
#include "fairrep/random.hpp"

namespace fairrep::models {

namespace {

constexpr std::uint64_t kShuffleStream = 1000;

bool losses_finite(const BatchLosses& l) {
  if (!std::isfinite(l.target)) return false;
  for (const auto& a : l.adversary)
    if (a && !std::isfinite(*a)) return false;
  return true;
}

}  // namespace

BatchLosses train_step(FairModel& model, const data::Dataset& train,
                       std::span<const std::size_t> rows, std::size_t step_index) {
  Matrix x(static_cast<Eigen::Index>(rows.size()), train.features.cols());
  std::vector<std::uint8_t> labels(rows.size()), groups(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = train.features.row(static_cast<Eigen::Index>(rows[i]));
    labels[i] = train.labels[rows[i]];
    groups[i] = train.groups[rows[i]];
  }
  BatchResult r;
  try {
    r = batch_loss(model, x, labels, groups);
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " at training step " + std::to_string(step_index));
  }
  if (!losses_finite(r.losses) || !r.grads.all_finite())
    throw NumericError("non-finite loss or gradient at training step " +
                       std::to_string(step_index));
  try {
    engine::adadelta_step(model.encoder, r.grads.encoder, model.encoder_state);
    engine::adadelta_step(model.head, r.grads.head, model.head_state);
    for (std::size_t k = 0; k < model.adversaries.size(); ++k)
      if (r.losses.adversary[k])
        engine::adadelta_step(model.adversaries[k], r.grads.adversaries[k],
                              model.adversary_states[k]);
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " at training step " + std::to_string(step_index));
  }
  return r.losses;
}

TrainResult train(const VariantConfig& config, const data::Dataset& train,
                  const TrainOptions& options) {
  if (train.empty()) throw ConfigError("cannot train on an empty dataset");
  train.validate();
  TrainResult out{build(config, train), {}, {}};
  FairModel& model = out.model;

  Rng shuffle_rng(derive_seed(config.seed, kShuffleStream));
  std::vector<std::size_t> order(train.size());
  const std::size_t n_adv = model.adversaries.size();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(std::span(order));

    EpochRecord rec;
    rec.epoch = epoch;
    std::vector<double> adv_sum(n_adv, 0.0), adv_weight(n_adv, 0.0);
    double target_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      const auto rows = std::span<const std::size_t>(order).subspan(start, len);
      const BatchLosses l = train_step(model, train, rows, out.history.steps);
      ++out.history.steps;
      target_sum += l.target * static_cast<double>(len);
      rec.skipped_terms += l.skipped_terms;
      for (std::size_t k = 0; k < n_adv; ++k) {
        if (!l.adversary[k]) continue;
        adv_sum[k] += *l.adversary[k] * static_cast<double>(len);
        adv_weight[k] += static_cast<double>(len);
      }
    }
    rec.target_loss = target_sum / static_cast<double>(train.size());
    for (std::size_t k = 0; k < n_adv; ++k)
      rec.adversary_loss.push_back(adv_weight[k] > 0.0
                                       ? std::optional<double>(adv_sum[k] / adv_weight[k])
                                       : std::nullopt);
    model.epoch = epoch;

    const bool last = epoch == config.epochs;
    const bool snapshot =
        last || (options.snapshot_every > 0 && epoch % options.snapshot_every == 0);
    if (snapshot) {
      rec.train_report = metrics::empirical_report(predict(model, train));
      if (options.test) rec.test_report = metrics::empirical_report(predict(model, *options.test));
    }
    if (options.on_epoch) options.on_epoch(rec);
    out.history.epochs.push_back(std::move(rec));
  }

  const auto& final_rec = out.history.epochs.back();
  const metrics::FairnessReport& final_report =
      options.test ? *final_rec.test_report : *final_rec.train_report;
  out.final_check = metrics::check_thm4(final_report);
  if (out.final_check.defined && !out.final_check.pass)
    throw Error("error-gap bound violated on the final predictions: lhs " +
                std::to_string(out.final_check.lhs) + " > rhs " +
                std::to_string(out.final_check.rhs));
  return out;
}

}  // namespace fairrep::models
