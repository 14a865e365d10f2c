#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fairrep/data/dataset.hpp"
#include "fairrep/metrics/report.hpp"
#include "fairrep/metrics/theorems.hpp"
#include "fairrep/models/fair_model.hpp"

namespace fairrep::models {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  /// Sample-weighted means over the epoch's minibatches.
  double target_loss = 0.0;
  /// Per adversary; nullopt if its term was skipped in every batch.
  std::vector<std::optional<double>> adversary_loss;
  std::size_t skipped_terms = 0;
  std::optional<metrics::FairnessReport> train_report;
  std::optional<metrics::FairnessReport> test_report;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t steps = 0;
};

struct TrainOptions {
  /// Evaluated for snapshots and for the final error-gap check.
  const data::Dataset* test = nullptr;
  /// Report snapshots every k epochs; the final epoch always gets one.
  /// 0 means final epoch only.
  std::size_t snapshot_every = 0;
  /// Called after every epoch, e.g. for progress output.
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  FairModel model;
  TrainHistory history;
  /// The error-gap bound on the final test predictions (train predictions
  /// when no test split is given). Training throws if it fails.
  metrics::TheoremCheck final_check;
};

/// Minibatch descent-ascent with one simultaneous AdaDelta step per batch.
/// Rows are reshuffled every epoch from a seeded stream; the last short
/// batch is kept. Throws NumericError naming the step on a non-finite loss.
TrainResult train(const VariantConfig& config, const data::Dataset& train,
                  const TrainOptions& options = {});

/// One step on explicit rows; returns the losses. Exposed for tests.
BatchLosses train_step(FairModel& model, const data::Dataset& train,
                       std::span<const std::size_t> rows, std::size_t step_index);

}  // namespace fairrep::models
